//! Mellin-side witness functions and the angular domains they live on.
//!
//! The domain is an asymptotic half-plane: a finite union of open sectors
//! `|Im z| < K_n (Re z - kappa_n)` with apexes `kappa_n` on the real axis and
//! strictly increasing slopes `K_n`. It is exhausted by the closed regions
//! `Gamma_j`, the same sectors with every apex pushed right by `1/j`. Listing
//! order fixes the grid order, so sector 1 (the only one allowed to poke left
//! of the imaginary axis) always contributes the leftmost points.
//!
//! A witness `mu(z) = exp(t sum_k a_k (z+1)^{-k})` interpolates the evolved
//! unit coefficients `e^{t m_n}` of a Hardy-rational symbol at the nonnegative
//! integers. Its pole sits at `z = -1`, which apex validation keeps outside
//! the closure of the domain. Growth is measured by the weighted sup
//! `p_j(mu) = sup_{Gamma_j} |mu(z)| e^{-(a + 1/j) Re z}`.

use std::cmp::Ordering;

use crate::symbols::HardyRational;
use num_complex::Complex64;
use thiserror::Error;

/// Points closer to the witness pole than this are refused outright.
pub const POLE_GUARD: f64 = 1e-9;

/// Slack allowed when a sampled seminorm is compared to its a-priori bound.
pub const BOUND_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum MellinError {
    #[error("domain needs at least one sector")]
    EmptyDomain,
    #[error("domain lists {kappas} apexes but {ks} slopes")]
    DomainLengthMismatch { kappas: usize, ks: usize },
    #[error("first apex must be negative, got {kappa}")]
    FirstApexNotNegative { kappa: f64 },
    #[error("apex {index} at {kappa} does not keep the pole at -1 outside the domain")]
    ApexReachesPole { index: usize, kappa: f64 },
    #[error("slope {index} must be positive, got {slope}")]
    SlopeNotPositive { index: usize, slope: f64 },
    #[error("slopes must increase strictly, violated at index {index}")]
    SlopesNotIncreasing { index: usize },
    #[error("domain parameter {index} is not finite")]
    NonFiniteDomain { index: usize },
    #[error("witness coefficient {index} is not finite")]
    NonFiniteCoefficient { index: usize },
    #[error("region index {j} outside 1..={len}")]
    RegionIndexOutOfRange { j: usize, len: usize },
    #[error("grid needs axial >= 2 and transverse >= 2, got {axial} x {transverse}")]
    GridTooCoarse { axial: usize, transverse: usize },
    #[error("grid horizon {rmax} must lie right of every apex, needed > {needed}")]
    HorizonTooSmall { rmax: f64, needed: f64 },
    #[error("evaluation point ({re}, {im}) is within {POLE_GUARD} of the pole at -1")]
    PoleAtMinusOne { re: f64, im: f64 },
}

/// Union of rightward sectors `|Im z| < K_n (Re z - kappa_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticHalfplane {
    kappas: Vec<f64>,
    ks: Vec<f64>,
}

impl AsymptoticHalfplane {
    pub fn new(kappas: Vec<f64>, ks: Vec<f64>) -> Result<Self, MellinError> {
        if kappas.is_empty() {
            return Err(MellinError::EmptyDomain);
        }
        if kappas.len() != ks.len() {
            return Err(MellinError::DomainLengthMismatch {
                kappas: kappas.len(),
                ks: ks.len(),
            });
        }
        for (i, (&kappa, &k)) in kappas.iter().zip(&ks).enumerate() {
            if !kappa.is_finite() || !k.is_finite() {
                return Err(MellinError::NonFiniteDomain { index: i });
            }
            if kappa <= -1.0 {
                return Err(MellinError::ApexReachesPole { index: i, kappa });
            }
            if k <= 0.0 {
                return Err(MellinError::SlopeNotPositive { index: i, slope: k });
            }
            if i > 0 && ks[i - 1] >= k {
                return Err(MellinError::SlopesNotIncreasing { index: i });
            }
        }
        if kappas[0] >= 0.0 {
            return Err(MellinError::FirstApexNotNegative { kappa: kappas[0] });
        }
        Ok(AsymptoticHalfplane { kappas, ks })
    }

    /// Eight sectors: apex -1/2 with slope 1, then apex 0 with slopes 2..=8.
    pub fn default_domain() -> Self {
        let mut kappas = vec![0.0; 8];
        kappas[0] = -0.5;
        let ks = (1..=8).map(|k| k as f64).collect();
        AsymptoticHalfplane::new(kappas, ks).expect("default domain parameters are valid")
    }

    pub fn kappas(&self) -> &[f64] {
        &self.kappas
    }

    pub fn ks(&self) -> &[f64] {
        &self.ks
    }

    pub fn sectors(&self) -> usize {
        self.kappas.len()
    }

    /// Leftmost real point of the closure, `min_n kappa_n`.
    pub fn leftmost(&self) -> f64 {
        self.kappas.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Strict membership in the open union.
    pub fn contains(&self, z: Complex64) -> bool {
        self.kappas
            .iter()
            .zip(&self.ks)
            .any(|(&kappa, &k)| z.im.abs() < k * (z.re - kappa))
    }

    /// The `j`-th closed exhaustion region; `j` ranges over `1..=sectors()`.
    pub fn gamma_region(&self, j: usize) -> Result<GammaRegion<'_>, MellinError> {
        if j == 0 || j > self.sectors() {
            return Err(MellinError::RegionIndexOutOfRange {
                j,
                len: self.sectors(),
            });
        }
        Ok(GammaRegion { parent: self, j })
    }
}

/// Closed region `Gamma_j`: every sector apex shifted right by `1/j`.
#[derive(Debug, Clone, Copy)]
pub struct GammaRegion<'a> {
    parent: &'a AsymptoticHalfplane,
    j: usize,
}

impl GammaRegion<'_> {
    pub fn index(&self) -> usize {
        self.j
    }

    fn shift(&self) -> f64 {
        1.0 / self.j as f64
    }

    /// Leftmost real point, `min_n kappa_n + 1/j`.
    pub fn leftmost(&self) -> f64 {
        self.parent.leftmost() + self.shift()
    }

    /// Non-strict membership in the closed union.
    ///
    /// The apex is grouped as `kappa + shift` to match the grid generator
    /// bit for bit on boundary rays.
    pub fn contains(&self, z: Complex64) -> bool {
        let shift = self.shift();
        self.parent
            .kappas
            .iter()
            .zip(&self.parent.ks)
            .any(|(&kappa, &k)| z.im.abs() <= k * (z.re - (kappa + shift)))
    }
}

/// Sampling resolution for the region grids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Right edge of the sampled window on the real axis.
    pub rmax: f64,
    /// Points along each sector axis.
    pub axial: usize,
    /// Rays across each sector.
    pub transverse: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            rmax: 20.0,
            axial: 64,
            transverse: 32,
        }
    }
}

impl GridSpec {
    fn validate(&self, needed: f64) -> Result<(), MellinError> {
        if self.axial < 2 || self.transverse < 2 {
            return Err(MellinError::GridTooCoarse {
                axial: self.axial,
                transverse: self.transverse,
            });
        }
        // partial_cmp so NaN lands on the error path too
        if self.rmax.partial_cmp(&needed) != Some(Ordering::Greater) {
            return Err(MellinError::HorizonTooSmall {
                rmax: self.rmax,
                needed,
            });
        }
        Ok(())
    }
}

/// Grid on the closed region `Gamma_j`, apexes and boundary rays included.
///
/// Sector by sector in listing order: axial position i sweeps the apex to
/// `rmax`, transverse position m sweeps the rays `s = -1..1` inclusive, and
/// the point is `x + i K_n (x - apex_n) s`. The apex itself appears first for
/// each sector, so the leftmost grid point of the whole grid is the apex of
/// sector 1.
pub fn gamma_grid(
    hp: &AsymptoticHalfplane,
    j: usize,
    spec: &GridSpec,
) -> Result<Vec<Complex64>, MellinError> {
    let region = hp.gamma_region(j)?;
    let shift = 1.0 / j as f64;
    let max_apex = hp.kappas.iter().copied().fold(f64::NEG_INFINITY, f64::max) + shift;
    spec.validate(max_apex)?;
    let mut points = Vec::with_capacity(hp.sectors() * spec.axial * spec.transverse);
    for (&kappa, &k) in hp.kappas.iter().zip(&hp.ks) {
        let apex = kappa + shift;
        for i in 0..spec.axial {
            let x = apex + (spec.rmax - apex) * i as f64 / (spec.axial - 1) as f64;
            for m in 0..spec.transverse {
                let s = 2.0 * m as f64 / (spec.transverse - 1) as f64 - 1.0;
                points.push(Complex64::new(x, k * (x - apex) * s));
            }
        }
    }
    debug_assert!(points.iter().all(|&z| region.contains(z)));
    Ok(points)
}

/// Grid in the open union, apexes excluded and rays strictly interior.
pub fn omega_grid(
    hp: &AsymptoticHalfplane,
    spec: &GridSpec,
) -> Result<Vec<Complex64>, MellinError> {
    let max_apex = hp.kappas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    spec.validate(max_apex)?;
    let mut points = Vec::with_capacity(hp.sectors() * spec.axial * spec.transverse);
    for (&kappa, &k) in hp.kappas.iter().zip(&hp.ks) {
        for i in 0..spec.axial {
            let x = kappa + (spec.rmax - kappa) * (i + 1) as f64 / spec.axial as f64;
            for m in 0..spec.transverse {
                let s = 2.0 * (m + 1) as f64 / (spec.transverse + 1) as f64 - 1.0;
                points.push(Complex64::new(x, k * (x - kappa) * s));
            }
        }
    }
    debug_assert!(points.iter().all(|&z| hp.contains(z)));
    Ok(points)
}

/// `mu(z) = exp(t sum_k a_k (z+1)^{-k})` on an asymptotic half-plane.
#[derive(Debug, Clone)]
pub struct MellinWitness {
    coeffs: Vec<Complex64>,
    t: f64,
    domain: AsymptoticHalfplane,
}

impl MellinWitness {
    pub fn new(
        coeffs: Vec<Complex64>,
        t: f64,
        domain: AsymptoticHalfplane,
    ) -> Result<Self, MellinError> {
        for (i, c) in coeffs.iter().enumerate() {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(MellinError::NonFiniteCoefficient { index: i });
            }
        }
        Ok(MellinWitness { coeffs, t, domain })
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn domain(&self) -> &AsymptoticHalfplane {
        &self.domain
    }

    /// The same witness at a different time.
    pub fn at_time(&self, t: f64) -> Self {
        MellinWitness {
            coeffs: self.coeffs.clone(),
            t,
            domain: self.domain.clone(),
        }
    }

    pub fn evaluate(&self, z: Complex64) -> Result<Complex64, MellinError> {
        let w_den = z + Complex64::new(1.0, 0.0);
        if w_den.norm() <= POLE_GUARD {
            return Err(MellinError::PoleAtMinusOne { re: z.re, im: z.im });
        }
        let w = w_den.inv();
        let mut m = Complex64::new(0.0, 0.0);
        for a in self.coeffs.iter().rev() {
            m = m * w + a;
        }
        Ok((self.t * m).exp())
    }

    /// Grid points of `Gamma_j` paired with `|mu(z)| e^{-(a + 1/j) Re z}`.
    pub fn weighted_samples(
        &self,
        j: usize,
        a: f64,
        spec: &GridSpec,
    ) -> Result<Vec<(Complex64, f64)>, MellinError> {
        let rate = a + 1.0 / j as f64;
        gamma_grid(&self.domain, j, spec)?
            .into_iter()
            .map(|z| Ok((z, self.evaluate(z)?.norm() * (-rate * z.re).exp())))
            .collect()
    }

    /// Sampled seminorm `p_j`: the sup of the weighted samples.
    pub fn seminorm(
        &self,
        j: usize,
        a: f64,
        spec: &GridSpec,
    ) -> Result<SeminormSample, MellinError> {
        let samples = self.weighted_samples(j, a, spec)?;
        let points = samples.len();
        let mut value = f64::NEG_INFINITY;
        let mut attained_at = Complex64::new(f64::NAN, f64::NAN);
        for (z, v) in samples {
            if v > value {
                value = v;
                attained_at = z;
            }
        }
        Ok(SeminormSample {
            value,
            attained_at,
            points,
        })
    }

    /// Closed-form ceiling for the sampled `p_j`.
    ///
    /// On `Gamma_j` the pole distance satisfies `|z+1| >= 1 + leftmost`, so
    /// `|mu| <= exp(sum_k |t a_k| / (1 + leftmost)^k)`, and the weight is
    /// monotone in `Re z` so it peaks at an end of `[leftmost, rmax]`. For
    /// `a + 1/j >= 0` the ceiling holds for the full region, otherwise only
    /// for the window the grid samples.
    pub fn a_priori_bound(&self, j: usize, a: f64, spec: &GridSpec) -> Result<f64, MellinError> {
        let region = self.domain.gamma_region(j)?;
        let leftmost = region.leftmost();
        let pole_dist = 1.0 + leftmost;
        let mut arg = 0.0;
        let mut power = 1.0;
        for c in &self.coeffs {
            arg += (self.t * c).norm() / power;
            power *= pole_dist;
        }
        let rate = a + 1.0 / j as f64;
        let weight = (-rate * leftmost).max(-rate * spec.rmax);
        Ok(arg.exp() * weight.exp())
    }
}

/// Builds the interpolating witness for a Hardy-rational symbol on the
/// default domain: `mu(n) = e^{t m_n}` at nonnegative integers `n`.
pub fn build_hardy_witness(symbol: &HardyRational, t: f64) -> MellinWitness {
    let coeffs = symbol.coeffs().iter().map(|c| c.to_complex()).collect();
    MellinWitness::new(coeffs, t, AsymptoticHalfplane::default_domain())
        .expect("exact coefficients convert to finite floats")
}

/// Worst weighted sample relative to the a-priori ceiling, over all regions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MellinBoundCheck {
    pub holds: bool,
    pub max_ratio: f64,
    pub worst: Complex64,
    pub worst_j: usize,
}

/// Checks `p_j(mu) <= a_priori_bound` on every region grid.
pub fn verify_mellin_bound(
    witness: &MellinWitness,
    a: f64,
    spec: &GridSpec,
) -> Result<MellinBoundCheck, MellinError> {
    let mut max_ratio = 0.0;
    let mut worst = Complex64::new(f64::NAN, f64::NAN);
    let mut worst_j = 1;
    for j in 1..=witness.domain().sectors() {
        let sample = witness.seminorm(j, a, spec)?;
        let bound = witness.a_priori_bound(j, a, spec)?;
        let ratio = sample.value / bound;
        if ratio > max_ratio {
            max_ratio = ratio;
            worst = sample.attained_at;
            worst_j = j;
        }
    }
    Ok(MellinBoundCheck {
        holds: max_ratio <= 1.0 + BOUND_TOLERANCE,
        max_ratio,
        worst,
        worst_j,
    })
}

/// Sampled seminorm with the point that attains it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeminormSample {
    pub value: f64,
    pub attained_at: Complex64,
    pub points: usize,
}

/// `p_j(mu_{t+h} - mu_t)` for each step in `hs`: the strong-continuity
/// modulus of the witness orbit, measured in the region seminorm.
pub fn witness_continuity_modulus(
    witness: &MellinWitness,
    hs: &[f64],
    j: usize,
    a: f64,
    spec: &GridSpec,
) -> Result<Vec<f64>, MellinError> {
    let grid = gamma_grid(witness.domain(), j, spec)?;
    let rate = a + 1.0 / j as f64;
    let base: Vec<Complex64> = grid
        .iter()
        .map(|&z| witness.evaluate(z))
        .collect::<Result<_, _>>()?;
    hs.iter()
        .map(|&h| {
            let shifted = witness.at_time(witness.time() + h);
            let mut sup = 0.0f64;
            for (&z, &b) in grid.iter().zip(&base) {
                let v = shifted.evaluate(z)?;
                sup = sup.max((v - b).norm() * (-rate * z.re).exp());
            }
            Ok(sup)
        })
        .collect()
}
