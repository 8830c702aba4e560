//! Multiplier symbols: exact rules `n -> m_n` driving a diagonal operator.
//!
//! Three shapes are supported. A polynomial symbol `P(n)` comes from the
//! Euler-type differential expression whose monomial eigenvalues are
//! polynomial in the degree. A Hardy-type symbol `sum a_k / (n+1)^k` comes
//! from iterated averaging operators. An explicit symbol is a finite table.
//! Polynomial and Hardy coefficients are [`ExactScalar`]s sharing one surd
//! base per symbol, so classification can ask exact questions; conversion to
//! `f64` happens only when coefficients are materialized.

mod exact;

pub use exact::{ExactError, ExactScalar, MAX_SURD_BASE};

use crate::series::{SeriesError, TruncatedTaylorSeries};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use thiserror::Error;

/// Exponent guard: `|t * Re m_n|` beyond this would leave the `f64` range
/// (`exp(709.8)` overflows), so materialization refuses rather than emits
/// infinities.
pub const EXP_ARG_LIMIT: f64 = 700.0;

#[derive(Debug, Error, PartialEq)]
pub enum SymbolError {
    #[error("index {index} is outside the explicit sequence of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("variant mismatch: cannot combine a {left} symbol with a {right} symbol")]
    VariantMismatch {
        left: &'static str,
        right: &'static str,
    },
    #[error("exp overflow at n = {index}: |t * Re m_n| = {magnitude:.6e} exceeds {limit}")]
    Overflow {
        index: usize,
        magnitude: f64,
        limit: f64,
    },
    #[error("explicit symbols need at least one entry")]
    EmptySequence,
    #[error("explicit symbol entry {index} is not finite")]
    NonFiniteEntry { index: usize },
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Common surd base of a coefficient list, or an error when two coefficients
/// carry different irrational parts.
fn common_base(coeffs: &[ExactScalar]) -> Result<u64, ExactError> {
    let mut base = 0u64;
    for c in coeffs {
        let b = c.surd_base();
        if b == 0 {
            continue;
        }
        if base == 0 {
            base = b;
        } else if base != b {
            return Err(ExactError::IncompatibleSurds(base, b));
        }
    }
    Ok(base)
}

fn trimmed(mut coeffs: Vec<ExactScalar>) -> Vec<ExactScalar> {
    while coeffs.len() > 1 && coeffs.last().is_some_and(ExactScalar::is_zero) {
        coeffs.pop();
    }
    if coeffs.is_empty() {
        coeffs.push(ExactScalar::zero());
    }
    coeffs
}

/// Polynomial symbol `m_n = sum_k a_k n^k`.
///
/// Invariant: trailing zero coefficients trimmed (the zero polynomial keeps
/// one entry), all coefficients over one surd base.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerPoly {
    coeffs: Vec<ExactScalar>,
}

impl EulerPoly {
    pub fn new(coeffs: Vec<ExactScalar>) -> Result<Self, SymbolError> {
        let coeffs = trimmed(coeffs);
        common_base(&coeffs)?;
        Ok(EulerPoly { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[ExactScalar] {
        &self.coeffs
    }

    /// Coefficient of `n^k`; zero above the degree.
    pub fn coeff(&self, k: usize) -> ExactScalar {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(ExactScalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    /// Exact Horner evaluation at integer `n`.
    pub fn eval_exact(&self, n: u64) -> ExactScalar {
        let x = BigRational::from_integer(BigInt::from(n));
        let mut acc = self
            .coeffs
            .last()
            .cloned()
            .unwrap_or_else(ExactScalar::zero);
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc
                .scale(&x)
                .add(c)
                .expect("surd bases unified at construction");
        }
        acc
    }
}

/// Hardy-type symbol `m_n = sum_k a_k / (n+1)^k` (k = 0..K).
#[derive(Debug, Clone, PartialEq)]
pub struct HardyRational {
    coeffs: Vec<ExactScalar>,
}

impl HardyRational {
    pub fn new(coeffs: Vec<ExactScalar>) -> Result<Self, SymbolError> {
        let coeffs = trimmed(coeffs);
        common_base(&coeffs)?;
        Ok(HardyRational { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[ExactScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> ExactScalar {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(ExactScalar::zero)
    }

    /// Exact Horner evaluation in `x = 1/(n+1)`.
    pub fn eval_exact(&self, n: u64) -> ExactScalar {
        let x = BigRational::new(BigInt::from(1), BigInt::from(n + 1));
        let mut acc = self
            .coeffs
            .last()
            .cloned()
            .unwrap_or_else(ExactScalar::zero);
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc
                .scale(&x)
                .add(c)
                .expect("surd bases unified at construction");
        }
        acc
    }
}

/// Finite table of multiplier values.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplicitSequence {
    values: Vec<Complex64>,
}

impl ExplicitSequence {
    pub fn new(values: Vec<Complex64>) -> Result<Self, SymbolError> {
        if values.is_empty() {
            return Err(SymbolError::EmptySequence);
        }
        for (index, v) in values.iter().enumerate() {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(SymbolError::NonFiniteEntry { index });
            }
        }
        Ok(ExplicitSequence { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}

/// A multiplier symbol in one of the three supported shapes.
#[derive(Debug, Clone, PartialEq)]
pub enum MultiplierSymbol {
    EulerPoly(EulerPoly),
    HardyRational(HardyRational),
    Explicit(ExplicitSequence),
}

impl MultiplierSymbol {
    pub fn euler(coeffs: Vec<ExactScalar>) -> Result<Self, SymbolError> {
        Ok(MultiplierSymbol::EulerPoly(EulerPoly::new(coeffs)?))
    }

    pub fn hardy(coeffs: Vec<ExactScalar>) -> Result<Self, SymbolError> {
        Ok(MultiplierSymbol::HardyRational(HardyRational::new(coeffs)?))
    }

    pub fn explicit(values: Vec<Complex64>) -> Result<Self, SymbolError> {
        Ok(MultiplierSymbol::Explicit(ExplicitSequence::new(values)?))
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            MultiplierSymbol::EulerPoly(_) => "euler",
            MultiplierSymbol::HardyRational(_) => "hardy",
            MultiplierSymbol::Explicit(_) => "seq",
        }
    }
}

/// The multiplier value `m_n`.
pub fn symbol_eval(symbol: &MultiplierSymbol, n: usize) -> Result<Complex64, SymbolError> {
    match symbol {
        MultiplierSymbol::EulerPoly(p) => Ok(p.eval_exact(n as u64).to_complex()),
        MultiplierSymbol::HardyRational(h) => Ok(h.eval_exact(n as u64).to_complex()),
        MultiplierSymbol::Explicit(seq) => {
            seq.values()
                .get(n)
                .copied()
                .ok_or(SymbolError::IndexOutOfRange {
                    index: n,
                    len: seq.len(),
                })
        }
    }
}

/// Coefficientwise sum of two symbols of the same shape.
///
/// Exact addition may cancel: `(i theta^2) + (-i theta^2)` collapses to the
/// zero polynomial of degree 0.
pub fn symbol_add(
    left: &MultiplierSymbol,
    right: &MultiplierSymbol,
) -> Result<MultiplierSymbol, SymbolError> {
    fn add_lists(a: &[ExactScalar], b: &[ExactScalar]) -> Result<Vec<ExactScalar>, SymbolError> {
        let len = a.len().max(b.len());
        let zero = ExactScalar::zero();
        (0..len)
            .map(|k| {
                let x = a.get(k).unwrap_or(&zero);
                let y = b.get(k).unwrap_or(&zero);
                Ok(x.add(y)?)
            })
            .collect()
    }

    match (left, right) {
        (MultiplierSymbol::EulerPoly(p), MultiplierSymbol::EulerPoly(q)) => {
            MultiplierSymbol::euler(add_lists(p.coeffs(), q.coeffs())?)
        }
        (MultiplierSymbol::HardyRational(p), MultiplierSymbol::HardyRational(q)) => {
            MultiplierSymbol::hardy(add_lists(p.coeffs(), q.coeffs())?)
        }
        (MultiplierSymbol::Explicit(p), MultiplierSymbol::Explicit(q)) => {
            let len = p.len().min(q.len());
            let values = (0..len).map(|k| p.values()[k] + q.values()[k]).collect();
            MultiplierSymbol::explicit(values)
        }
        (a, b) => Err(SymbolError::VariantMismatch {
            left: a.variant_name(),
            right: b.variant_name(),
        }),
    }
}

/// `e^{t m_n}` with the overflow guard applied to the real part.
pub(crate) fn exp_factor(index: usize, m: Complex64, t: f64) -> Result<Complex64, SymbolError> {
    let re = t * m.re;
    if re.abs() > EXP_ARG_LIMIT {
        return Err(SymbolError::Overflow {
            index,
            magnitude: re.abs(),
            limit: EXP_ARG_LIMIT,
        });
    }
    Ok(Complex64::new(re, t * m.im).exp())
}

/// The coefficient string `c_n = e^{t m_n}` of the evolved unit, `n <= order`.
pub fn exp_scaled_coefficients(
    symbol: &MultiplierSymbol,
    t: f64,
    order: usize,
) -> Result<TruncatedTaylorSeries, SymbolError> {
    let mut coeffs = Vec::with_capacity(order + 1);
    for n in 0..=order {
        let m = symbol_eval(symbol, n)?;
        coeffs.push(exp_factor(n, m, t)?);
    }
    Ok(TruncatedTaylorSeries::from_coeffs(coeffs)?)
}

/// Log-moduli `log|e^{t m_n}| = t * Re m_n`, usable by the radius estimator
/// even when the coefficients themselves would overflow.
pub fn exp_scaled_log_moduli(
    symbol: &MultiplierSymbol,
    t: f64,
    order: usize,
) -> Result<Vec<f64>, SymbolError> {
    (0..=order)
        .map(|n| Ok(t * symbol_eval(symbol, n)?.re))
        .collect()
}

/// Applies the multiplier once: `c_n -> m_n c_n`.
pub fn apply_multiplier(
    symbol: &MultiplierSymbol,
    f: &TruncatedTaylorSeries,
) -> Result<TruncatedTaylorSeries, SymbolError> {
    let mut coeffs = Vec::with_capacity(f.truncation_order() + 1);
    for (n, c) in f.coeffs().iter().enumerate() {
        coeffs.push(symbol_eval(symbol, n)? * c);
    }
    Ok(TruncatedTaylorSeries::from_coeffs(coeffs)?)
}
