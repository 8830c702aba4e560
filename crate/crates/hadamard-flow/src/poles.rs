//! Rational structure of coefficient sequences: period detection, linear
//! recurrence fitting, and pole location with a numerator-vanishing filter.
//!
//! A sequence `c_n` summing to a rational function `N(z)/D(z)` satisfies the
//! recurrence `sum_k b_k c_{n-k} = 0` (denominator coefficients `b_k`,
//! `b_0 = 1`) for all `n` past the numerator degree. Periodic sequences are
//! the exact special case `D = 1 - z^p`. Roots of `D` are only poles when the
//! numerator does not also vanish there, so every candidate is filtered
//! against `|N|` relative to its size on the unit circle.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Entrywise tolerance for period detection and reconstruction checks.
pub const PERIOD_TOLERANCE: f64 = 1e-10;

/// Relative least-squares residual below which a recurrence fit is accepted.
pub const FIT_RESIDUAL_TOLERANCE: f64 = 1e-6;

/// A denominator root counts as a pole when `|N(root)|` exceeds this times
/// the maximum of `|N|` on the unit circle.
pub const NUMERATOR_VANISH_FACTOR: f64 = 1e-6;

/// Default tolerance for calling a pole real: `|Im z| <= tol * (1 + |z|)`.
pub const DEFAULT_REAL_AXIS_TOLERANCE: f64 = 1e-8;

/// Largest denominator degree the fitter scans.
pub const MAX_FIT_DEGREE: usize = 16;

const CIRCLE_SAMPLES: usize = 512;

#[derive(Debug, Error, PartialEq)]
pub enum PolesError {
    #[error("insufficient data: {len} coefficients, need at least {needed}")]
    InsufficientData { len: usize, needed: usize },
    #[error("invalid period {period} for {len} coefficients")]
    InvalidPeriod { period: usize, len: usize },
    #[error("sequence breaks the claimed period at index {index}")]
    PeriodMismatch { index: usize },
    #[error("fit degree {degree} exceeds the maximum {max}")]
    DegreeTooLarge { degree: usize, max: usize },
    #[error("no recurrence of the allowed degrees fits: best residual {best_residual:.3e}")]
    IllConditioned { best_residual: f64 },
    #[error("denominator must have nonzero constant and leading coefficients")]
    InvalidDenominator,
    #[error("eigenvalue iteration failed on the companion matrix")]
    EigenvalueFailure,
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= PERIOD_TOLERANCE * (1.0 + b.norm())
}

/// True when `p` is a period of the sequence within [`PERIOD_TOLERANCE`].
pub fn sequence_has_period(c: &[Complex64], p: usize) -> bool {
    p >= 1 && (0..c.len().saturating_sub(p)).all(|n| close(c[n + p], c[n]))
}

/// Smallest period `p <= max_period`, or `None`.
///
/// Requires `len >= 3 * max_period` so every candidate is checked against at
/// least two full repetitions.
pub fn detect_period(c: &[Complex64], max_period: usize) -> Result<Option<usize>, PolesError> {
    if max_period == 0 {
        return Err(PolesError::InvalidPeriod {
            period: 0,
            len: c.len(),
        });
    }
    if c.len() < 3 * max_period {
        return Err(PolesError::InsufficientData {
            len: c.len(),
            needed: 3 * max_period,
        });
    }
    Ok((1..=max_period).find(|&p| sequence_has_period(c, p)))
}

/// Rational function `numerator / denominator`, coefficients low to high.
///
/// Invariant: the denominator has a nonzero constant coefficient (so the
/// power series expansion exists) and a nonzero leading coefficient (so the
/// degree is honest). `exact` marks the reconstructed `1 - z^p` form whose
/// roots are known in closed form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RationalFormRepr", into = "RationalFormRepr")]
pub struct RationalForm {
    numerator: Vec<Complex64>,
    denominator: Vec<Complex64>,
    exact: bool,
}

#[derive(Serialize, Deserialize)]
struct RationalFormRepr {
    numerator: Vec<[f64; 2]>,
    denominator: Vec<[f64; 2]>,
    exact: bool,
}

impl TryFrom<RationalFormRepr> for RationalForm {
    type Error = PolesError;
    fn try_from(repr: RationalFormRepr) -> Result<Self, PolesError> {
        let conv = |v: &[[f64; 2]]| -> Vec<Complex64> {
            v.iter().map(|c| Complex64::new(c[0], c[1])).collect()
        };
        RationalForm::new(conv(&repr.numerator), conv(&repr.denominator), repr.exact)
    }
}

impl From<RationalForm> for RationalFormRepr {
    fn from(f: RationalForm) -> RationalFormRepr {
        let conv = |v: &[Complex64]| -> Vec<[f64; 2]> { v.iter().map(|c| [c.re, c.im]).collect() };
        RationalFormRepr {
            numerator: conv(&f.numerator),
            denominator: conv(&f.denominator),
            exact: f.exact,
        }
    }
}

impl RationalForm {
    pub fn new(
        numerator: Vec<Complex64>,
        denominator: Vec<Complex64>,
        exact: bool,
    ) -> Result<Self, PolesError> {
        if numerator.is_empty() || denominator.is_empty() {
            return Err(PolesError::InvalidDenominator);
        }
        let zero = Complex64::new(0.0, 0.0);
        if denominator[0] == zero || *denominator.last().unwrap() == zero {
            return Err(PolesError::InvalidDenominator);
        }
        Ok(RationalForm {
            numerator,
            denominator,
            exact,
        })
    }

    pub fn numerator(&self) -> &[Complex64] {
        &self.numerator
    }

    pub fn denominator(&self) -> &[Complex64] {
        &self.denominator
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn denominator_degree(&self) -> usize {
        self.denominator.len() - 1
    }

    pub fn evaluate_numerator(&self, z: Complex64) -> Complex64 {
        horner(&self.numerator, z)
    }

    pub fn evaluate_denominator(&self, z: Complex64) -> Complex64 {
        horner(&self.denominator, z)
    }

    /// First `count` power series coefficients of `N/D` via the recurrence
    /// `c_n = (a_n - sum_{k>=1} b_k c_{n-k}) / b_0`.
    pub fn expand(&self, count: usize) -> Vec<Complex64> {
        let zero = Complex64::new(0.0, 0.0);
        let mut c = Vec::with_capacity(count);
        for n in 0..count {
            let mut acc = self.numerator.get(n).copied().unwrap_or(zero);
            for k in 1..self.denominator.len().min(n + 1) {
                acc -= self.denominator[k] * c[n - k];
            }
            c.push(acc / self.denominator[0]);
        }
        c
    }
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// Rebuilds the exact rational form of a `p`-periodic sequence:
/// numerator = first `p` coefficients, denominator = `1 - z^p`, and verifies
/// the whole input against the claimed period.
pub fn reconstruct_periodic_rational(
    c: &[Complex64],
    p: usize,
) -> Result<RationalForm, PolesError> {
    if p == 0 || p > c.len() {
        return Err(PolesError::InvalidPeriod {
            period: p,
            len: c.len(),
        });
    }
    for n in 0..c.len() {
        if !close(c[n], c[n % p]) {
            return Err(PolesError::PeriodMismatch { index: n });
        }
    }
    let numerator = c[..p].to_vec();
    let mut denominator = vec![Complex64::new(0.0, 0.0); p + 1];
    denominator[0] = Complex64::new(1.0, 0.0);
    denominator[p] = Complex64::new(-1.0, 0.0);
    RationalForm::new(numerator, denominator, true)
}

/// A recurrence fit accepted by the parsimony scan.
#[derive(Debug, Clone)]
pub struct FittedRational {
    pub form: RationalForm,
    pub degree: usize,
    /// Relative least-squares residual of the accepted recurrence.
    pub residual: f64,
}

/// Fits the lowest-degree linear recurrence (denominator degree `d' = 1..=max_degree`,
/// constant term pinned to 1) whose relative residual drops below
/// [`FIT_RESIDUAL_TOLERANCE`]. Scanning upward keeps the result parsimonious:
/// clean data is matched at its true degree before an overfit can occur.
pub fn fit_rational(c: &[Complex64], max_degree: usize) -> Result<FittedRational, PolesError> {
    if max_degree == 0 || max_degree > MAX_FIT_DEGREE {
        return Err(PolesError::DegreeTooLarge {
            degree: max_degree,
            max: MAX_FIT_DEGREE,
        });
    }
    if c.len() < 4 * max_degree {
        return Err(PolesError::InsufficientData {
            len: c.len(),
            needed: 4 * max_degree,
        });
    }

    let mut best_residual = f64::INFINITY;
    for degree in 1..=max_degree {
        let rows = c.len() - degree;
        let mut a = DMatrix::<Complex64>::zeros(rows, degree);
        let mut rhs = DVector::<Complex64>::zeros(rows);
        for r in 0..rows {
            let n = degree + r;
            for k in 1..=degree {
                a[(r, k - 1)] = c[n - k];
            }
            rhs[r] = -c[n];
        }
        let rhs_norm = rhs.norm();
        let svd = a.clone().svd(true, true);
        let cutoff = svd.singular_values.max() * 1e-14;
        let Ok(x) = svd.solve(&rhs, cutoff) else {
            continue;
        };
        let abs_residual = (&a * &x - &rhs).norm();
        let residual = if rhs_norm > 0.0 {
            abs_residual / rhs_norm
        } else {
            abs_residual
        };
        best_residual = best_residual.min(residual);
        if residual <= FIT_RESIDUAL_TOLERANCE {
            let mut denominator = Vec::with_capacity(degree + 1);
            denominator.push(Complex64::new(1.0, 0.0));
            denominator.extend(x.iter().copied());
            // drop a numerically vanishing leading coefficient; it would put
            // a spurious root near infinity
            let max_abs = denominator.iter().map(|b| b.norm()).fold(0.0, f64::max);
            while denominator.len() > 1 && denominator.last().unwrap().norm() <= 1e-12 * max_abs {
                denominator.pop();
            }
            let numerator: Vec<Complex64> = (0..degree)
                .map(|j| {
                    (0..=j.min(denominator.len() - 1))
                        .map(|k| denominator[k] * c[j - k])
                        .sum()
                })
                .collect();
            let form = RationalForm::new(numerator, denominator, false)?;
            return Ok(FittedRational {
                form,
                degree,
                residual,
            });
        }
    }
    Err(PolesError::IllConditioned { best_residual })
}

/// A located pole with the modulus of the denominator there (a quality
/// measure: zero for true roots).
#[derive(Debug, Clone, PartialEq)]
pub struct PoleLocation {
    pub location: Complex64,
    pub residual: f64,
}

/// Poles of a rational form, sorted by modulus then argument.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "PoleReportRepr", into = "PoleReportRepr")]
pub struct PoleReport {
    pub poles: Vec<PoleLocation>,
    pub all_real: bool,
    pub tolerance: f64,
}

#[derive(Serialize, Deserialize)]
struct PoleReportRepr {
    poles: Vec<PoleRepr>,
    all_real: bool,
    tolerance: f64,
}

#[derive(Serialize, Deserialize)]
struct PoleRepr {
    re: f64,
    im: f64,
    residual: f64,
}

impl From<PoleReportRepr> for PoleReport {
    fn from(repr: PoleReportRepr) -> Self {
        PoleReport {
            poles: repr
                .poles
                .iter()
                .map(|p| PoleLocation {
                    location: Complex64::new(p.re, p.im),
                    residual: p.residual,
                })
                .collect(),
            all_real: repr.all_real,
            tolerance: repr.tolerance,
        }
    }
}

impl From<PoleReport> for PoleReportRepr {
    fn from(r: PoleReport) -> PoleReportRepr {
        PoleReportRepr {
            poles: r
                .poles
                .iter()
                .map(|p| PoleRepr {
                    re: p.location.re,
                    im: p.location.im,
                    residual: p.residual,
                })
                .collect(),
            all_real: r.all_real,
            tolerance: r.tolerance,
        }
    }
}

fn is_real_within(z: Complex64, tolerance: f64) -> bool {
    z.im.abs() <= tolerance * (1.0 + z.norm())
}

fn denominator_roots(form: &RationalForm) -> Result<Vec<Complex64>, PolesError> {
    let den = form.denominator();
    let degree = den.len() - 1;
    if degree == 0 {
        return Ok(Vec::new());
    }

    // reconstructed 1 - z^p: p-th roots of unity in closed form
    let unit_shape = form.is_exact()
        && den[0] == Complex64::new(1.0, 0.0)
        && den[degree] == Complex64::new(-1.0, 0.0)
        && den[1..degree]
            .iter()
            .all(|b| *b == Complex64::new(0.0, 0.0));
    if unit_shape {
        return Ok((0..degree)
            .map(|j| Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / degree as f64))
            .collect());
    }

    let lead = den[degree];
    let mut companion = DMatrix::<Complex64>::zeros(degree, degree);
    for r in 1..degree {
        companion[(r, r - 1)] = Complex64::new(1.0, 0.0);
    }
    for r in 0..degree {
        companion[(r, degree - 1)] = -den[r] / lead;
    }
    let schur = companion
        .try_schur(1e-13, 100_000)
        .ok_or(PolesError::EigenvalueFailure)?;
    let eigen = schur.eigenvalues().ok_or(PolesError::EigenvalueFailure)?;
    Ok(eigen.iter().copied().collect())
}

/// Locates the poles of `form`: denominator roots where the numerator does
/// not also vanish (relative to its unit-circle maximum).
pub fn pole_locations(form: &RationalForm, tolerance: f64) -> Result<PoleReport, PolesError> {
    let roots = denominator_roots(form)?;

    let mut circle_max = 0.0f64;
    for m in 0..CIRCLE_SAMPLES {
        let z = Complex64::from_polar(
            1.0,
            std::f64::consts::TAU * m as f64 / CIRCLE_SAMPLES as f64,
        );
        circle_max = circle_max.max(form.evaluate_numerator(z).norm());
    }

    let mut poles: Vec<PoleLocation> = Vec::new();
    if circle_max > 0.0 {
        for root in roots {
            if form.evaluate_numerator(root).norm() > NUMERATOR_VANISH_FACTOR * circle_max {
                poles.push(PoleLocation {
                    location: root,
                    residual: form.evaluate_denominator(root).norm(),
                });
            }
        }
    }
    poles.sort_by(|a, b| {
        (a.location.norm(), a.location.arg())
            .partial_cmp(&(b.location.norm(), b.location.arg()))
            .expect("pole coordinates are finite")
    });

    let all_real = poles.iter().all(|p| is_real_within(p.location, tolerance));
    Ok(PoleReport {
        poles,
        all_real,
        tolerance,
    })
}

/// Re-evaluates the realness flag of an existing report under a different
/// tolerance.
pub fn classify_real_axis(report: &PoleReport, tolerance: f64) -> bool {
    report
        .poles
        .iter()
        .all(|p| is_real_within(p.location, tolerance))
}

/// Options for the end-to-end sequence analysis.
#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    /// Cap for the period scan; defaults to `len / 3`.
    pub max_period: Option<usize>,
    pub max_degree: usize,
    pub real_axis_tolerance: f64,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            max_period: None,
            max_degree: MAX_FIT_DEGREE,
            real_axis_tolerance: DEFAULT_REAL_AXIS_TOLERANCE,
        }
    }
}

/// Outcome of [`analyze_sequence`].
#[derive(Debug, Clone)]
pub enum SequenceAnalysis {
    Periodic {
        period: usize,
        form: RationalForm,
        report: PoleReport,
    },
    Fitted {
        fit: FittedRational,
        report: PoleReport,
    },
    NoRationalStructure {
        best_residual: f64,
    },
}

impl SequenceAnalysis {
    pub fn report(&self) -> Option<&PoleReport> {
        match self {
            SequenceAnalysis::Periodic { report, .. } => Some(report),
            SequenceAnalysis::Fitted { report, .. } => Some(report),
            SequenceAnalysis::NoRationalStructure { .. } => None,
        }
    }
}

/// Period scan first (it is exact), recurrence fit second, otherwise reports
/// the absence of low-order rational structure.
pub fn analyze_sequence(
    c: &[Complex64],
    opts: &AnalyzeOptions,
) -> Result<SequenceAnalysis, PolesError> {
    if c.len() < 4 {
        return Err(PolesError::InsufficientData {
            len: c.len(),
            needed: 4,
        });
    }
    let max_period = opts.max_period.unwrap_or(c.len() / 3).min(c.len() / 3);
    if max_period >= 1 {
        if let Some(period) = detect_period(c, max_period)? {
            let form = reconstruct_periodic_rational(c, period)?;
            let report = pole_locations(&form, opts.real_axis_tolerance)?;
            return Ok(SequenceAnalysis::Periodic {
                period,
                form,
                report,
            });
        }
    }
    let max_degree = opts.max_degree.min(c.len() / 4).max(1);
    match fit_rational(c, max_degree) {
        Ok(fit) => {
            let report = pole_locations(&fit.form, opts.real_axis_tolerance)?;
            Ok(SequenceAnalysis::Fitted { fit, report })
        }
        Err(PolesError::IllConditioned { best_residual }) => {
            Ok(SequenceAnalysis::NoRationalStructure { best_residual })
        }
        Err(e) => Err(e),
    }
}
