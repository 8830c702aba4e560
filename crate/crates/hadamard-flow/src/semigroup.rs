//! Evolution of coefficient series under a symbol: `t -> (e^{t m_n} c_n)`,
//! with diagnostics for the semigroup law, the generator, and strong
//! continuity on compact sets.
//!
//! For real linear polynomial symbols the evolution has the dilation closed
//! form `T_t f(x) = e^{t b} f(e^{t a} x)`, which the evaluator tracks as an
//! independent second route for cross-checking the diagonal one.

use std::cmp::Ordering;

use crate::series::{Radius, SeriesError, TruncatedTaylorSeries};
use crate::symbols::{exp_factor, symbol_eval, MultiplierSymbol, SymbolError, EXP_ARG_LIMIT};
use num_complex::Complex64;
use thiserror::Error;

/// Number of halvings in the strong-continuity probe.
pub const CONTINUITY_LEVELS: usize = 10;

/// Minimum spatial grid for the continuity probe.
pub const MIN_PROBE_GRID: usize = 16;

#[derive(Debug, Error, PartialEq)]
pub enum SemigroupError {
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("evaluation radius {radius} reaches past the reliable domain {limit:.6e}")]
    DomainExceeded { radius: f64, limit: f64 },
    #[error("finite difference step must be positive, got {h}")]
    InvalidStep { h: f64 },
    #[error("continuity horizon must be positive, got {t0}")]
    InvalidHorizon { t0: f64 },
    #[error("continuity probe needs at least {min} grid points, got {points}")]
    GridTooSmall { points: usize, min: usize },
}

/// Dilation parameters for the closed-form route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DilationClosedForm {
    pub a: f64,
    pub b: Complex64,
}

/// Evolves series under one symbol, remembering the closed form when the
/// symbol is a real linear polynomial.
#[derive(Debug, Clone)]
pub struct SemigroupEvaluator {
    symbol: MultiplierSymbol,
    closed_form: Option<DilationClosedForm>,
}

impl SemigroupEvaluator {
    pub fn new(symbol: MultiplierSymbol) -> Self {
        let closed_form = match &symbol {
            MultiplierSymbol::EulerPoly(p) if p.degree() <= 1 && p.coeff(1).is_real() => {
                Some(DilationClosedForm {
                    a: p.coeff(1).re_as_f64(),
                    b: p.coeff(0).to_complex(),
                })
            }
            _ => None,
        };
        SemigroupEvaluator {
            symbol,
            closed_form,
        }
    }

    pub fn symbol(&self) -> &MultiplierSymbol {
        &self.symbol
    }

    pub fn closed_form(&self) -> Option<DilationClosedForm> {
        self.closed_form
    }

    /// Diagonal route: `c_n -> e^{t m_n} c_n`.
    pub fn evolve(
        &self,
        t: f64,
        f: &TruncatedTaylorSeries,
    ) -> Result<TruncatedTaylorSeries, SymbolError> {
        let mut coeffs = Vec::with_capacity(f.truncation_order() + 1);
        for (n, c) in f.coeffs().iter().enumerate() {
            let m = symbol_eval(&self.symbol, n)?;
            coeffs.push(exp_factor(n, m, t)? * c);
        }
        Ok(TruncatedTaylorSeries::from_coeffs(coeffs)?)
    }

    /// Deviation from `T_t T_s = T_{t+s}`: `max_n |d_n| / (1 + |r_n|)`
    /// against the one-step reference `r = T_{t+s} f`.
    pub fn check_semigroup_law(
        &self,
        t: f64,
        s: f64,
        f: &TruncatedTaylorSeries,
    ) -> Result<f64, SymbolError> {
        let two_step = self.evolve(t, &self.evolve(s, f)?)?;
        let one_step = self.evolve(t + s, f)?;
        Ok(two_step
            .coeffs()
            .iter()
            .zip(one_step.coeffs())
            .map(|(x, y)| (x - y).norm() / (1.0 + y.norm()))
            .fold(0.0, f64::max))
    }

    /// Forward difference `(T_h f - f) / h` against the exact generator
    /// application `c_n -> m_n c_n`. The error metric is relative where the
    /// reference coefficient is a normal float and absolute where it is
    /// subnormal or zero: below the normal range the difference quotient is
    /// quantization noise, and a relative reading of it is meaningless.
    pub fn generator_finite_difference(
        &self,
        f: &TruncatedTaylorSeries,
        h: f64,
    ) -> Result<FiniteDifferenceProbe, SemigroupError> {
        // partial_cmp so NaN lands on the error path too
        if h.partial_cmp(&0.0) != Some(Ordering::Greater) {
            return Err(SemigroupError::InvalidStep { h });
        }
        let evolved = self.evolve(h, f)?;
        let quotient: Vec<Complex64> = evolved
            .coeffs()
            .iter()
            .zip(f.coeffs())
            .map(|(e, c)| (e - c) / h)
            .collect();
        let exact = crate::symbols::apply_multiplier(&self.symbol, f)?;
        let max_relative_error = quotient
            .iter()
            .zip(exact.coeffs())
            .map(|(q, e)| {
                let diff = (q - e).norm();
                if e.norm() >= f64::MIN_POSITIVE {
                    diff / e.norm()
                } else {
                    diff
                }
            })
            .fold(0.0, f64::max);
        Ok(FiniteDifferenceProbe {
            quotient: TruncatedTaylorSeries::from_coeffs(quotient)?,
            max_relative_error,
        })
    }

    /// Sup-norm trace of `T_{t_k} f - f` on `[-radius, radius]` for the
    /// halving sequence `t_k = t0 / 2^k`, plus a boundedness surrogate.
    ///
    /// Refuses radii at or past `rho / e^{|a| t0}` (estimated convergence
    /// radius shrunk by the largest dilation the probe applies), where series
    /// truncation error is no longer under control.
    pub fn strong_continuity_probe(
        &self,
        f: &TruncatedTaylorSeries,
        t0: f64,
        radius: f64,
        grid_points: usize,
    ) -> Result<ContinuityProbe, SemigroupError> {
        // partial_cmp so NaN lands on the error path too
        if t0.partial_cmp(&0.0) != Some(Ordering::Greater) {
            return Err(SemigroupError::InvalidHorizon { t0 });
        }
        if grid_points < MIN_PROBE_GRID {
            return Err(SemigroupError::GridTooSmall {
                points: grid_points,
                min: MIN_PROBE_GRID,
            });
        }
        let estimate = f.radius_of_convergence_estimate()?;
        let dilation = match self.closed_form {
            Some(form) => (form.a.abs() * t0).min(EXP_ARG_LIMIT).exp(),
            None => 1.0,
        };
        let limit = match estimate.radius {
            Radius::Zero => 0.0,
            Radius::Finite(r) => r / dilation,
            Radius::Infinite => f64::INFINITY,
        };
        if radius >= limit {
            return Err(SemigroupError::DomainExceeded { radius, limit });
        }

        let xs: Vec<Complex64> = (0..grid_points)
            .map(|i| {
                let x = -radius + 2.0 * radius * i as f64 / (grid_points - 1) as f64;
                Complex64::new(x, 0.0)
            })
            .collect();
        let base: Vec<Complex64> = xs.iter().map(|&x| f.evaluate(x)).collect();
        let mut boundedness_sup = base.iter().map(|v| v.norm()).fold(0.0, f64::max);

        let mut times = Vec::with_capacity(CONTINUITY_LEVELS);
        let mut sup_differences = Vec::with_capacity(CONTINUITY_LEVELS);
        let mut t = t0;
        for _ in 0..CONTINUITY_LEVELS {
            let evolved = self.evolve(t, f)?;
            let mut sup = 0.0f64;
            for (x, b) in xs.iter().zip(&base) {
                let v = evolved.evaluate(*x);
                boundedness_sup = boundedness_sup.max(v.norm());
                sup = sup.max((v - b).norm());
            }
            times.push(t);
            sup_differences.push(sup);
            t /= 2.0;
        }
        Ok(ContinuityProbe {
            times,
            sup_differences,
            boundedness_sup,
        })
    }
}

/// Result of the forward-difference generator probe.
#[derive(Debug, Clone)]
pub struct FiniteDifferenceProbe {
    pub quotient: TruncatedTaylorSeries,
    pub max_relative_error: f64,
}

/// Result of the strong-continuity probe.
#[derive(Debug, Clone)]
pub struct ContinuityProbe {
    pub times: Vec<f64>,
    pub sup_differences: Vec<f64>,
    pub boundedness_sup: f64,
}

/// Dilation closed form `T_t f(x) = e^{t b} f(e^{t a} x)` applied to a
/// truncated section, coefficientwise `c_n -> e^{t b} e^{t a n} c_n`.
pub fn euler_closed_form_evolve(
    a: f64,
    b: Complex64,
    t: f64,
    f: &TruncatedTaylorSeries,
) -> Result<TruncatedTaylorSeries, SymbolError> {
    let scale = exp_factor(0, b, t)?;
    let mut coeffs = Vec::with_capacity(f.truncation_order() + 1);
    for (n, c) in f.coeffs().iter().enumerate() {
        let arg = t * a * n as f64;
        if arg.abs() > EXP_ARG_LIMIT {
            return Err(SymbolError::Overflow {
                index: n,
                magnitude: arg.abs(),
                limit: EXP_ARG_LIMIT,
            });
        }
        coeffs.push(scale * arg.exp() * c);
    }
    Ok(TruncatedTaylorSeries::from_coeffs(coeffs)?)
}

/// Least-squares slope of `log err` against `log h`.
pub fn log_log_slope(hs: &[f64], errors: &[f64]) -> f64 {
    assert_eq!(hs.len(), errors.len(), "paired samples required");
    assert!(hs.len() >= 2, "need at least two samples for a slope");
    let n = hs.len() as f64;
    let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let cov: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    let var: f64 = xs.iter().map(|x| (x - mean_x).powi(2)).sum();
    cov / var
}
