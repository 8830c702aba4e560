//! Truncated Taylor sections, Laurent tails, and the Hadamard product.
//!
//! Both series types store one coefficient vector `c_0..c_N`. A Taylor section
//! reads `sum c_n z^n`, a Laurent tail reads `sum c_n / z^{n+1}`, and the
//! substitution `phi(f)(z) = (1/z) f(1/z)` converts one reading into the other
//! without touching the vector. The Hadamard product multiplies entries
//! pointwise and so looks the same from either side.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default truncation order for series built from multiplier symbols.
///
/// Overridable per run; high enough that the root-test window `[N/2, N]`
/// sits well inside the asymptotic regime for the symbols handled here.
pub const DEFAULT_TRUNCATION_ORDER: usize = 256;

/// Smallest truncation order the radius estimator accepts.
pub const MIN_RADIUS_ORDER: usize = 16;

/// Root-test estimates below this collapse to an explicit zero radius.
pub const ZERO_RADIUS_THRESHOLD: f64 = 1e-12;

/// Exponents beyond this over- or underflow `f64`, so the estimate saturates.
const LOG_F64_SATURATION: f64 = 709.0;

/// Errors from series construction and the radius estimator.
#[derive(Debug, Error, PartialEq)]
pub enum SeriesError {
    #[error("degenerate input: order {order} is below {min}, too short for a radius estimate")]
    DegenerateInput { order: usize, min: usize },
    #[error("coefficient {index} is not finite")]
    NonFinite { index: usize },
    #[error("a series needs at least the constant coefficient")]
    Empty,
    #[error("declared order {order} does not match {len} coefficients")]
    OrderMismatch { order: usize, len: usize },
}

fn validated(coeffs: Vec<Complex64>) -> Result<Vec<Complex64>, SeriesError> {
    if coeffs.is_empty() {
        return Err(SeriesError::Empty);
    }
    for (index, c) in coeffs.iter().enumerate() {
        if !c.re.is_finite() || !c.im.is_finite() {
            return Err(SeriesError::NonFinite { index });
        }
    }
    Ok(coeffs)
}

/// Wire format shared by both series types: `{"order": N, "coeffs": [[re, im], ...]}`.
#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    order: usize,
    coeffs: Vec<[f64; 2]>,
}

impl SeriesRepr {
    fn into_coeffs(self) -> Result<Vec<Complex64>, SeriesError> {
        if self.coeffs.len() != self.order + 1 {
            return Err(SeriesError::OrderMismatch {
                order: self.order,
                len: self.coeffs.len(),
            });
        }
        validated(
            self.coeffs
                .iter()
                .map(|c| Complex64::new(c[0], c[1]))
                .collect(),
        )
    }

    fn from_coeffs(coeffs: &[Complex64]) -> Self {
        SeriesRepr {
            order: coeffs.len() - 1,
            coeffs: coeffs.iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

/// Finite Taylor section `sum_{n=0}^{N} c_n z^n` with truncation order `N`.
///
/// Invariant: the vector is non-empty and every entry is finite, so the
/// truncation order is always `coeffs.len() - 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeriesRepr", into = "SeriesRepr")]
pub struct TruncatedTaylorSeries {
    coeffs: Vec<Complex64>,
}

/// Finite Laurent tail `sum_{n=0}^{N} c_n / z^{n+1}`, vanishing at infinity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeriesRepr", into = "SeriesRepr")]
pub struct LaurentTailSeries {
    coeffs: Vec<Complex64>,
}

impl TryFrom<SeriesRepr> for TruncatedTaylorSeries {
    type Error = SeriesError;
    fn try_from(repr: SeriesRepr) -> Result<Self, SeriesError> {
        Ok(TruncatedTaylorSeries {
            coeffs: repr.into_coeffs()?,
        })
    }
}

impl From<TruncatedTaylorSeries> for SeriesRepr {
    fn from(f: TruncatedTaylorSeries) -> SeriesRepr {
        SeriesRepr::from_coeffs(&f.coeffs)
    }
}

impl TryFrom<SeriesRepr> for LaurentTailSeries {
    type Error = SeriesError;
    fn try_from(repr: SeriesRepr) -> Result<Self, SeriesError> {
        Ok(LaurentTailSeries {
            coeffs: repr.into_coeffs()?,
        })
    }
}

impl From<LaurentTailSeries> for SeriesRepr {
    fn from(f: LaurentTailSeries) -> SeriesRepr {
        SeriesRepr::from_coeffs(&f.coeffs)
    }
}

impl TruncatedTaylorSeries {
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Result<Self, SeriesError> {
        Ok(TruncatedTaylorSeries {
            coeffs: validated(coeffs)?,
        })
    }

    /// The all-ones section: unit of the Hadamard product, section of `1/(1-z)`.
    pub fn all_ones(order: usize) -> Self {
        TruncatedTaylorSeries {
            coeffs: vec![Complex64::new(1.0, 0.0); order + 1],
        }
    }

    /// `z^degree` padded with zeros up to `order`.
    pub fn monomial(degree: usize, order: usize) -> Self {
        assert!(degree <= order, "monomial degree must not exceed the order");
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
        coeffs[degree] = Complex64::new(1.0, 0.0);
        TruncatedTaylorSeries { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient `c_n`, zero beyond the truncation order.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs
            .get(n)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn truncation_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Entrywise product, truncated to the shorter order.
    pub fn hadamard_product(&self, other: &Self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(a, b)| a * b)
            .collect();
        TruncatedTaylorSeries { coeffs }
    }

    /// Horner evaluation of the section at `z`.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Windowed Cauchy root test on `|c_n|`; see [`radius_from_log_moduli`].
    pub fn radius_of_convergence_estimate(&self) -> Result<RadiusEstimate, SeriesError> {
        let log_abs: Vec<f64> = self.coeffs.iter().map(|c| c.norm().ln()).collect();
        radius_from_log_moduli(&log_abs)
    }
}

impl LaurentTailSeries {
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Result<Self, SeriesError> {
        Ok(LaurentTailSeries {
            coeffs: validated(coeffs)?,
        })
    }

    /// The all-ones tail: unit of the Hadamard product, tail of `1/(z-1)`.
    pub fn all_ones(order: usize) -> Self {
        LaurentTailSeries {
            coeffs: vec![Complex64::new(1.0, 0.0); order + 1],
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs
            .get(n)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn truncation_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn hadamard_product(&self, other: &Self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(a, b)| a * b)
            .collect();
        LaurentTailSeries { coeffs }
    }

    /// Horner evaluation in `w = 1/z`; only meaningful for `z != 0`.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        let w = Complex64::new(1.0, 0.0) / z;
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * w + c;
        }
        acc * w
    }
}

/// `phi(f)(z) = (1/z) f(1/z)` sends a Laurent tail to a Taylor section.
/// The coefficient vector is copied unchanged.
pub fn phi_map(f: &LaurentTailSeries) -> TruncatedTaylorSeries {
    TruncatedTaylorSeries {
        coeffs: f.coeffs.clone(),
    }
}

/// Inverse of [`phi_map`]; again a pure relabeling of the same vector.
pub fn phi_inverse(f: &TruncatedTaylorSeries) -> LaurentTailSeries {
    LaurentTailSeries {
        coeffs: f.coeffs.clone(),
    }
}

/// Radius classification from the windowed root test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum Radius {
    /// Estimate fell below [`ZERO_RADIUS_THRESHOLD`]: the coefficients blow up.
    Zero,
    Finite(f64),
    /// Window was identically zero, or the estimate exceeds the `f64` range.
    Infinite,
}

impl Radius {
    pub fn to_f64(self) -> f64 {
        match self {
            Radius::Zero => 0.0,
            Radius::Finite(r) => r,
            Radius::Infinite => f64::INFINITY,
        }
    }

    pub fn is_zero(self) -> bool {
        matches!(self, Radius::Zero)
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Radius::Infinite)
    }
}

/// Result of the windowed root test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusEstimate {
    pub radius: Radius,
    /// Inclusive index window `[N/2, N]` the test ran over.
    pub window: (usize, usize),
    /// Relative spread `1 - min/max` of the root values across the window;
    /// near zero when the window has settled into its asymptotic regime.
    pub uncertainty: f64,
}

/// Windowed Cauchy root test on log-moduli `log|c_n|`.
///
/// Working from logs keeps the estimator usable when the coefficients
/// themselves would overflow `f64`: a symbol evaluation supplies
/// `t * Re m_n` directly. Entries of `-inf` mark zero coefficients and are
/// skipped; `+inf` forces radius zero; `NaN` is rejected.
pub fn radius_from_log_moduli(log_abs: &[f64]) -> Result<RadiusEstimate, SeriesError> {
    if log_abs.is_empty() {
        return Err(SeriesError::Empty);
    }
    let order = log_abs.len() - 1;
    if order < MIN_RADIUS_ORDER {
        return Err(SeriesError::DegenerateInput {
            order,
            min: MIN_RADIUS_ORDER,
        });
    }
    if let Some(index) = log_abs.iter().position(|v| v.is_nan()) {
        return Err(SeriesError::NonFinite { index });
    }

    let lo = order / 2;
    let window = (lo, order);
    let mut max_log = f64::NEG_INFINITY;
    let mut min_log = f64::INFINITY;
    for (n, &l) in log_abs.iter().enumerate().take(order + 1).skip(lo.max(1)) {
        if l == f64::NEG_INFINITY {
            continue; // zero coefficient contributes nothing to the root test
        }
        let root = l / n as f64;
        max_log = max_log.max(root);
        min_log = min_log.min(root);
    }

    if max_log == f64::NEG_INFINITY {
        // every coefficient in the window vanished
        return Ok(RadiusEstimate {
            radius: Radius::Infinite,
            window,
            uncertainty: 0.0,
        });
    }
    if max_log == f64::INFINITY {
        return Ok(RadiusEstimate {
            radius: Radius::Zero,
            window,
            uncertainty: 0.0,
        });
    }

    let uncertainty = 1.0 - (min_log - max_log).exp();
    if -max_log > LOG_F64_SATURATION {
        return Ok(RadiusEstimate {
            radius: Radius::Infinite,
            window,
            uncertainty,
        });
    }
    let estimate = (-max_log).exp();
    let radius = if estimate < ZERO_RADIUS_THRESHOLD {
        Radius::Zero
    } else {
        Radius::Finite(estimate)
    };
    Ok(RadiusEstimate {
        radius,
        window,
        uncertainty,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn geometric(rho: f64, order: usize) -> TruncatedTaylorSeries {
        // c_n = rho^{-n}, radius of the full series = rho
        let coeffs = (0..=order).map(|n| c(rho.powi(-(n as i32)), 0.0)).collect();
        TruncatedTaylorSeries::from_coeffs(coeffs).unwrap()
    }

    #[test]
    fn all_ones_is_hadamard_unit_bitwise() {
        let coeffs: Vec<Complex64> = (0..=40)
            .map(|n| c(0.3 * n as f64 - 1.7, (n as f64).sin()))
            .collect();
        let f = TruncatedTaylorSeries::from_coeffs(coeffs).unwrap();
        let unit = TruncatedTaylorSeries::all_ones(40);
        let prod = f.hadamard_product(&unit);
        for n in 0..=40 {
            assert!(prod.coeff(n) == f.coeff(n), "unit law broke at n = {n}");
        }
    }

    #[test]
    fn hadamard_truncates_to_shorter_factor() {
        let f = TruncatedTaylorSeries::all_ones(10);
        let g = TruncatedTaylorSeries::all_ones(4);
        assert_eq!(f.hadamard_product(&g).truncation_order(), 4);
        assert_eq!(g.hadamard_product(&f).truncation_order(), 4);
    }

    #[test]
    fn evaluate_matches_geometric_closed_form() {
        let f = TruncatedTaylorSeries::all_ones(64);
        let z = c(0.5, 0.0);
        // sum_{n<=64} z^n = (1 - z^65)/(1 - z)
        let expected = (c(1.0, 0.0) - z.powu(65)) / (c(1.0, 0.0) - z);
        assert!((f.evaluate(z) - expected).norm() < 1e-14);
        assert!((f.evaluate(z) - c(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn laurent_evaluate_matches_closed_form() {
        let f = LaurentTailSeries::all_ones(50);
        let z = c(3.0, 1.0);
        // sum_{n<=50} z^{-(n+1)} = (1/(z-1)) (1 - z^{-51})
        let expected = (c(1.0, 0.0) - z.powi(-51)) / (z - c(1.0, 0.0));
        assert!((f.evaluate(z) - expected).norm() < 1e-14);
    }

    #[test]
    fn phi_copies_coefficients_and_satisfies_substitution_rule() {
        let coeffs: Vec<Complex64> = (0..=30).map(|n| c(1.0 / (n + 1) as f64, 0.25)).collect();
        let tail = LaurentTailSeries::from_coeffs(coeffs).unwrap();
        let section = phi_map(&tail);
        assert_eq!(section.coeffs(), tail.coeffs());
        assert_eq!(phi_inverse(&section), tail);

        for z in [c(0.4, 0.1), c(-0.3, 0.6), c(0.9, 0.0)] {
            let lhs = section.evaluate(z);
            let rhs = tail.evaluate(z.inv()) / z;
            assert!(
                (lhs - rhs).norm() < 1e-12,
                "phi substitution failed at z = {z}"
            );
        }
    }

    #[test]
    fn radius_recovers_geometric_rate() {
        for rho in [0.25, 0.5, 2.0, 7.5] {
            let est = geometric(rho, 128)
                .radius_of_convergence_estimate()
                .unwrap();
            match est.radius {
                Radius::Finite(r) => {
                    assert!((r - rho).abs() / rho < 1e-2, "rho = {rho}, estimate = {r}");
                }
                other => panic!("expected finite radius for rho = {rho}, got {other:?}"),
            }
            assert_eq!(est.window, (64, 128));
            assert!(est.uncertainty < 1e-6, "geometric roots should be flat");
        }
    }

    #[test]
    fn radius_zero_for_superexponential_growth() {
        // c_n = e^{1.5 n^2} stays inside f64 up to n = 20 and the window
        // root e^{1.5 n} already pushes the estimate below the threshold.
        let coeffs: Vec<Complex64> = (0..=20)
            .map(|n| c((1.5 * (n * n) as f64).exp(), 0.0))
            .collect();
        let f = TruncatedTaylorSeries::from_coeffs(coeffs).unwrap();
        let est = f.radius_of_convergence_estimate().unwrap();
        assert_eq!(est.radius, Radius::Zero);
    }

    #[test]
    fn radius_zero_from_log_moduli_without_materializing() {
        let logs: Vec<f64> = (0..=128).map(|n| (n * n) as f64).collect();
        let est = radius_from_log_moduli(&logs).unwrap();
        assert_eq!(est.radius, Radius::Zero);
    }

    #[test]
    fn radius_infinite_when_window_vanishes() {
        let mut coeffs = vec![c(0.0, 0.0); 33];
        coeffs[0] = c(5.0, 0.0);
        coeffs[1] = c(-2.0, 0.0);
        let f = TruncatedTaylorSeries::from_coeffs(coeffs).unwrap();
        let est = f.radius_of_convergence_estimate().unwrap();
        assert_eq!(est.radius, Radius::Infinite);
        assert_eq!(est.window, (16, 32));
    }

    #[test]
    fn entire_decay_pushes_the_estimate_with_the_order() {
        // c_n = 1/n!: any finite window sees a finite root value growing
        // like n/e, so the estimate must track the truncation order and the
        // uncertainty must stay visibly away from zero
        let logs = |top: usize| -> Vec<f64> {
            let mut log_fact = 0.0;
            (0..=top)
                .map(|n| {
                    if n > 0 {
                        log_fact += (n as f64).ln();
                    }
                    -log_fact
                })
                .collect()
        };
        let small = radius_from_log_moduli(&logs(100)).unwrap();
        let large = radius_from_log_moduli(&logs(400)).unwrap();
        let (Radius::Finite(r_small), Radius::Finite(r_large)) = (small.radius, large.radius)
        else {
            panic!("finite estimates expected, got {small:?} and {large:?}");
        };
        assert!(
            r_large > 2.0 * r_small,
            "estimate must grow with the window"
        );
        assert!(large.uncertainty > 0.3, "window must not look settled");
    }

    #[test]
    fn radius_saturates_to_infinite_past_f64_range() {
        // log|c_n| = -20 n^2: the window roots sit below -709, so the
        // would-be estimate exceeds what f64 represents
        let logs: Vec<f64> = (0..=128).map(|n| -20.0 * (n as f64) * (n as f64)).collect();
        let est = radius_from_log_moduli(&logs).unwrap();
        assert_eq!(est.radius, Radius::Infinite);
    }

    #[test]
    fn radius_rejects_short_input() {
        let f = TruncatedTaylorSeries::all_ones(15);
        assert_eq!(
            f.radius_of_convergence_estimate(),
            Err(SeriesError::DegenerateInput {
                order: 15,
                min: MIN_RADIUS_ORDER
            })
        );
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert_eq!(
            TruncatedTaylorSeries::from_coeffs(vec![]),
            Err(SeriesError::Empty)
        );
        let bad = vec![c(1.0, 0.0), c(f64::NAN, 0.0)];
        assert_eq!(
            TruncatedTaylorSeries::from_coeffs(bad),
            Err(SeriesError::NonFinite { index: 1 })
        );
    }

    #[test]
    fn json_round_trip_and_shape() {
        let f = TruncatedTaylorSeries::from_coeffs(vec![c(1.0, 0.0), c(0.5, -0.25)]).unwrap();
        let json = serde_json::to_value(&f).unwrap();
        assert_eq!(json["order"], 1);
        assert_eq!(json["coeffs"][1][0], 0.5);
        assert_eq!(json["coeffs"][1][1], -0.25);
        let back: TruncatedTaylorSeries = serde_json::from_value(json).unwrap();
        assert_eq!(back, f);

        let err = serde_json::from_str::<TruncatedTaylorSeries>(
            r#"{"order": 3, "coeffs": [[1.0, 0.0]]}"#,
        );
        assert!(err.is_err());
    }
}
