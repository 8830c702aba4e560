//! Generation verdicts for multiplier symbols, each backed by a certificate.
//!
//! The decision procedure:
//!
//! * Hardy-rational symbols always generate a C0-group; the certificate
//!   points at the Mellin-side exponential witness.
//! * Polynomial symbols of degree <= 1 generate exactly when the linear
//!   coefficient is real (closed-form dilation); otherwise the evolved unit
//!   picks up an off-axis pole `e^{-a_1}` already at t = 1.
//! * Polynomial symbols of degree >= 2 fail to generate in two certified
//!   ways: a positive real part in the top coefficient block makes the
//!   coefficients blow up (radius collapses to zero), and a purely imaginary
//!   rational top block concentrates the evolved unit at a root-of-unity
//!   pole off the positive axis at the explicit time `t0 = S pi / q`. A
//!   linear term with irrational imaginary part instead rotates the pole to
//!   an off-axis position at `t0 = 2 S pi`.
//! * Everything else is answered `Unknown`; positive and negative verdicts
//!   always carry a certificate, `Unknown` never does.

use crate::mellin::AsymptoticHalfplane;
use crate::symbols::{EulerPoly, ExactScalar, MultiplierSymbol, SymbolError};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use std::cmp::Ordering;
use std::f64::consts::PI;
use thiserror::Error;

/// Upper bound for the witness base-point search.
pub const WITNESS_SEARCH_BOUND: u64 = 1_000_000;

/// A root-of-unity numerator value counts as nonvanishing above this.
pub const OFFAXIS_NUMERATOR_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error, PartialEq)]
pub enum ClassifyError {
    #[error("no witness base point n0 <= {bound} satisfies the size and parity conditions")]
    WitnessNotFound { bound: u64 },
    #[error("witness search needs a purely imaginary rational polynomial with zero constant term and degree >= 2")]
    WitnessIneligible,
    #[error("scaled polynomial is not {period}-periodic mod {period} at index {index}")]
    PeriodicityViolation { index: u64, period: u64 },
    #[error("numerator vanishes at every off-axis root of unity for q = {q}")]
    NoOffAxisPole { q: u64 },
    #[error("witness parameter does not fit the certificate range: {what}")]
    WitnessOutOfRange { what: &'static str },
    #[error("numerator length {len} does not match 2q = {expected}")]
    NumeratorLengthMismatch { len: usize, expected: u64 },
    #[error("could not certify coefficient growth within the sampled range")]
    EvidenceExhausted,
    #[error(transparent)]
    Symbol(#[from] SymbolError),
}

/// Generation answer for a multiplier symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Generates { group: bool },
    NotGenerates,
    Unknown,
}

/// Which decision rule produced the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reason {
    /// Polynomial symbol of degree <= 1.
    EulerDegreeOne,
    /// Degree >= 2 with a positive real part on top: coefficient blow-up.
    RealPartBlowUp,
    /// Purely imaginary rational upper coefficients: pole at a root of unity.
    RootOfUnityObstruction,
    /// Irrational imaginary linear term over an imaginary rational top block.
    IrrationalRotation,
    /// Hardy-rational symbols generate a group unconditionally.
    HardyGroup,
    /// Sum of two generating symbols.
    Additivity,
    /// No decision rule applies.
    NoApplicableRule,
}

impl Reason {
    pub fn as_str(self) -> &'static str {
        match self {
            Reason::EulerDegreeOne => "euler_degree_one",
            Reason::RealPartBlowUp => "real_part_blow_up",
            Reason::RootOfUnityObstruction => "root_of_unity_obstruction",
            Reason::IrrationalRotation => "irrational_rotation",
            Reason::HardyGroup => "hardy_group",
            Reason::Additivity => "additivity",
            Reason::NoApplicableRule => "no_applicable_rule",
        }
    }
}

/// Checkable evidence attached to a definite verdict.
#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    /// `T_t f(x) = e^{t b} f(e^{t a} x)`.
    ClosedFormDilation { a: f64, b: Complex64 },
    /// Strictly increasing root-test evidence `t Re P(n) / n` at the sampled
    /// indices; `l` is the top coefficient index with positive real part.
    BlowUp {
        l: usize,
        t: f64,
        sample_n: Vec<u64>,
        log_growth: Vec<f64>,
    },
    /// At `t0 = S pi / q` the evolved unit is `2q`-periodic in its
    /// coefficients and keeps the off-axis pole recorded here.
    RootOfUnityPole {
        s: u64,
        q: u64,
        n0: u64,
        t0: f64,
        period: u64,
        pole: Complex64,
        numerator_abs: f64,
    },
    /// Exact rotation rate whose pole `e^{-2 pi i r}` misses the positive
    /// axis; for degree-one symbols the rate datum is the linear coefficient
    /// itself and the pole is sampled at t = 1.
    IrrationalRotation {
        r_description: Box<ExactScalar>,
        pole: Complex64,
    },
    /// Parameters of the Mellin-side exponential witness domain.
    MellinWitnessRef {
        a: f64,
        kappas: Vec<f64>,
        ks: Vec<f64>,
    },
    /// Additivity of two generating symbols.
    SumOf {
        left: Box<Certificate>,
        right: Box<Certificate>,
    },
}

fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

impl Certificate {
    pub fn to_json(&self) -> Value {
        match self {
            Certificate::ClosedFormDilation { a, b } => json!({
                "type": "closed_form_dilation",
                "a": a,
                "b": complex_json(*b),
            }),
            Certificate::BlowUp {
                l,
                t,
                sample_n,
                log_growth,
            } => json!({
                "type": "blow_up",
                "l": l,
                "t": t,
                "sample_n": sample_n,
                "log_growth": log_growth,
            }),
            Certificate::RootOfUnityPole {
                s,
                q,
                n0,
                t0,
                period,
                pole,
                numerator_abs,
            } => json!({
                "type": "root_of_unity_pole",
                "s": s,
                "q": q,
                "n0": n0,
                "t0": t0,
                "period": period,
                "pole": complex_json(*pole),
                "numerator_abs": numerator_abs,
            }),
            Certificate::IrrationalRotation {
                r_description,
                pole,
            } => json!({
                "type": "irrational_rotation",
                "r_description": r_description.to_string(),
                "pole": complex_json(*pole),
            }),
            Certificate::MellinWitnessRef { a, kappas, ks } => json!({
                "type": "mellin_witness",
                "a": a,
                "kappas": kappas,
                "ks": ks,
            }),
            Certificate::SumOf { left, right } => json!({
                "type": "sum_of",
                "left": left.to_json(),
                "right": right.to_json(),
            }),
        }
    }
}

/// Verdict, rule, and certificate for one symbol.
///
/// Invariant: `Generates` and `NotGenerates` carry a certificate, `Unknown`
/// never does. The constructors enforce it.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationVerdict {
    verdict: Verdict,
    reason: Reason,
    certificate: Option<Certificate>,
}

impl GenerationVerdict {
    pub fn generates(group: bool, reason: Reason, certificate: Certificate) -> Self {
        GenerationVerdict {
            verdict: Verdict::Generates { group },
            reason,
            certificate: Some(certificate),
        }
    }

    pub fn not_generates(reason: Reason, certificate: Certificate) -> Self {
        GenerationVerdict {
            verdict: Verdict::NotGenerates,
            reason,
            certificate: Some(certificate),
        }
    }

    pub fn unknown(reason: Reason) -> Self {
        GenerationVerdict {
            verdict: Verdict::Unknown,
            reason,
            certificate: None,
        }
    }

    pub fn verdict(&self) -> Verdict {
        self.verdict
    }

    pub fn reason(&self) -> Reason {
        self.reason
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        self.certificate.as_ref()
    }

    pub fn is_generates(&self) -> bool {
        matches!(self.verdict, Verdict::Generates { .. })
    }

    pub fn to_json(&self) -> Value {
        let mut out = serde_json::Map::new();
        match self.verdict {
            Verdict::Generates { group } => {
                out.insert("verdict".into(), json!("generates"));
                out.insert("group".into(), json!(group));
            }
            Verdict::NotGenerates => {
                out.insert("verdict".into(), json!("not_generates"));
            }
            Verdict::Unknown => {
                out.insert("verdict".into(), json!("unknown"));
            }
        }
        out.insert("reason".into(), json!(self.reason.as_str()));
        out.insert(
            "certificate".into(),
            self.certificate
                .as_ref()
                .map_or(Value::Null, Certificate::to_json),
        );
        Value::Object(out)
    }
}

impl serde::Serialize for GenerationVerdict {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

/// Witness data for the root-of-unity obstruction: base point `n0`, modulus
/// `q = |Ptilde(n0 + 2)| > 2` with `Ptilde(n0) != Ptilde(n0 + 2) mod 2q`,
/// where `Ptilde = S * Im P` is the integer-scaled imaginary part.
#[derive(Debug, Clone)]
pub struct RootOfUnityWitness {
    pub s: u64,
    pub q: u64,
    pub n0: u64,
    pub t0: f64,
    ptilde: Vec<BigInt>,
}

impl RootOfUnityWitness {
    /// Integer coefficients of `S * Im P`, low to high.
    pub fn ptilde(&self) -> &[BigInt] {
        &self.ptilde
    }
}

fn eval_bigint_poly(coeffs: &[BigInt], n: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in coeffs.iter().rev() {
        acc = acc * n + c;
    }
    acc
}

/// Searches `n0 = 0..=search_bound` for the witness base point.
///
/// The polynomial must have zero constant term, degree >= 2, and purely
/// imaginary rational coefficients (the caller splits off everything else).
pub fn find_witness(
    poly: &EulerPoly,
    search_bound: u64,
) -> Result<RootOfUnityWitness, ClassifyError> {
    if poly.degree() < 2
        || !poly.coeff(0).is_zero()
        || poly
            .coeffs()
            .iter()
            .any(|c| !c.is_purely_imaginary_rational())
    {
        return Err(ClassifyError::WitnessIneligible);
    }

    let betas: Vec<BigRational> = poly
        .coeffs()
        .iter()
        .map(|c| {
            c.im_as_rational()
                .expect("imaginary rational checked above")
        })
        .collect();
    let s_big: BigInt = betas
        .iter()
        .skip(1)
        .fold(BigInt::from(1), |acc, b| acc.lcm(b.denom()));
    let ptilde: Vec<BigInt> = betas
        .iter()
        .map(|b| (b * BigRational::from_integer(s_big.clone())).to_integer())
        .collect();

    for n0 in 0..=search_bound {
        let p2 = eval_bigint_poly(&ptilde, &BigInt::from(n0 + 2));
        let q_big = p2.abs();
        if q_big <= BigInt::from(2) {
            continue;
        }
        let p0 = eval_bigint_poly(&ptilde, &BigInt::from(n0));
        let modulus = BigInt::from(2) * &q_big;
        if !(&p0 - &p2).mod_floor(&modulus).is_zero() {
            let q = q_big
                .to_u64()
                .ok_or(ClassifyError::WitnessOutOfRange { what: "q" })?;
            let s = s_big
                .to_u64()
                .ok_or(ClassifyError::WitnessOutOfRange { what: "S" })?;
            let t0 = s as f64 * PI / q as f64;
            return Ok(RootOfUnityWitness {
                s,
                q,
                n0,
                t0,
                ptilde,
            });
        }
    }
    Err(ClassifyError::WitnessNotFound {
        bound: search_bound,
    })
}

/// Coefficients of the evolved unit at `t0`: `xi_n = e^{i pi Ptilde(n) / q}`,
/// one full period of `2q` entries, with the periodicity verified exactly.
///
/// The phases are reduced mod `2q` in integer arithmetic before any floating
/// point enters, so the entries are exact up to one `sin`/`cos` rounding.
pub fn build_periodic_numerator(
    ptilde: &[BigInt],
    q: u64,
) -> Result<Vec<Complex64>, ClassifyError> {
    if q < 3 {
        return Err(ClassifyError::WitnessOutOfRange {
            what: "q must be at least 3",
        });
    }
    let period = 2 * q;
    let modulus = BigInt::from(period);
    for n in 0..period {
        let here = eval_bigint_poly(ptilde, &BigInt::from(n));
        let there = eval_bigint_poly(ptilde, &BigInt::from(n + period));
        if !(&there - &here).mod_floor(&modulus).is_zero() {
            return Err(ClassifyError::PeriodicityViolation { index: n, period });
        }
    }
    Ok((0..period)
        .map(|n| {
            let residue = eval_bigint_poly(ptilde, &BigInt::from(n))
                .mod_floor(&modulus)
                .to_u64()
                .expect("residue lies in [0, 2q)");
            Complex64::from_polar(1.0, PI * residue as f64 / q as f64)
        })
        .collect())
}

/// An off-axis root of unity where the periodic numerator survives.
#[derive(Debug, Clone, PartialEq)]
pub struct OffAxisPole {
    pub pole: Complex64,
    pub numerator_abs: f64,
    /// Root index `j` with `pole = e^{i pi j / q}`, `j` outside `{0, q}`.
    pub root_index: u64,
}

/// Finds the first `j in {1..2q-1} \ {q}` with `|N(e^{i pi j / q})|` above
/// [`OFFAXIS_NUMERATOR_TOLERANCE`]. Phase products are reduced mod `2q` in
/// integers, so each numerator value is a sum of exactly placed unit vectors.
pub fn certify_offaxis_pole(numerator: &[Complex64], q: u64) -> Result<OffAxisPole, ClassifyError> {
    let period = 2 * q;
    if numerator.len() as u64 != period {
        return Err(ClassifyError::NumeratorLengthMismatch {
            len: numerator.len(),
            expected: period,
        });
    }
    let roots: Vec<Complex64> = (0..period)
        .map(|m| Complex64::from_polar(1.0, PI * m as f64 / q as f64))
        .collect();
    for j in 1..period {
        if j == q {
            continue;
        }
        let value: Complex64 = numerator
            .iter()
            .enumerate()
            .map(|(n, coeff)| coeff * roots[((j as u128 * n as u128) % period as u128) as usize])
            .sum();
        if value.norm() > OFFAXIS_NUMERATOR_TOLERANCE {
            return Ok(OffAxisPole {
                pole: roots[j as usize],
                numerator_abs: value.norm(),
                root_index: j,
            });
        }
    }
    Err(ClassifyError::NoOffAxisPole { q })
}

/// Strictly increasing root-test evidence for the blow-up certificate.
fn blow_up_certificate(poly: &EulerPoly, l: usize) -> Result<Certificate, ClassifyError> {
    let t = 1.0;
    for shift in 3..=20u32 {
        let base = 1u64 << shift;
        let sample_n: Vec<u64> = (0..5).map(|i| base << i).collect();
        let log_growth: Vec<f64> = sample_n
            .iter()
            .map(|&n| t * poly.eval_exact(n).re_as_f64() / n as f64)
            .collect();
        let increasing = log_growth.windows(2).all(|w| w[0] < w[1]);
        if increasing && log_growth.iter().all(|g| g.is_finite()) {
            return Ok(Certificate::BlowUp {
                l,
                t,
                sample_n,
                log_growth,
            });
        }
    }
    Err(ClassifyError::EvidenceExhausted)
}

fn hardy_verdict() -> GenerationVerdict {
    let domain = AsymptoticHalfplane::default_domain();
    GenerationVerdict::generates(
        true,
        Reason::HardyGroup,
        Certificate::MellinWitnessRef {
            a: 1.0,
            kappas: domain.kappas().to_vec(),
            ks: domain.ks().to_vec(),
        },
    )
}

fn classify_degree_one(poly: &EulerPoly) -> GenerationVerdict {
    let a1 = poly.coeff(1);
    let a0 = poly.coeff(0);
    if a1.is_real() {
        GenerationVerdict::generates(
            true,
            Reason::EulerDegreeOne,
            Certificate::ClosedFormDilation {
                a: a1.re_as_f64(),
                b: a0.to_complex(),
            },
        )
    } else {
        // sampled at t = 1: coefficients e^{a_1 n} sum to a pole at e^{-a_1},
        // off the positive axis because Im a_1 is algebraic and nonzero
        let pole = (-a1.to_complex()).exp();
        GenerationVerdict::not_generates(
            Reason::EulerDegreeOne,
            Certificate::IrrationalRotation {
                r_description: Box::new(a1),
                pole,
            },
        )
    }
}

fn classify_higher_degree(poly: &EulerPoly) -> Result<GenerationVerdict, ClassifyError> {
    let degree = poly.degree();

    // topmost coefficient with a nonzero real part decides the real route
    if let Some(l) = (2..=degree)
        .rev()
        .find(|&k| poly.coeff(k).re_sign() != Ordering::Equal)
    {
        return if poly.coeff(l).re_sign() == Ordering::Greater {
            Ok(GenerationVerdict::not_generates(
                Reason::RealPartBlowUp,
                blow_up_certificate(poly, l)?,
            ))
        } else {
            Ok(GenerationVerdict::unknown(Reason::NoApplicableRule))
        };
    }

    // upper block purely imaginary; need rational ratios for the arithmetic
    if (2..=degree).any(|k| !poly.coeff(k).im_is_rational()) {
        return Ok(GenerationVerdict::unknown(Reason::NoApplicableRule));
    }

    let a1 = poly.coeff(1);
    if a1.im_is_rational() {
        // witness machine on i * Im P (constant and real parts split off:
        // they only multiply the evolved unit by a harmless scalar factor)
        let mut im_coeffs = vec![ExactScalar::zero()];
        for k in 1..=degree {
            let beta = poly
                .coeff(k)
                .im_as_rational()
                .expect("rational by the checks above");
            im_coeffs.push(
                ExactScalar::new(
                    BigRational::zero(),
                    BigRational::zero(),
                    beta,
                    BigRational::zero(),
                    0,
                )
                .map_err(SymbolError::from)?,
            );
        }
        let witness_poly = EulerPoly::new(im_coeffs)?;
        let witness = find_witness(&witness_poly, WITNESS_SEARCH_BOUND)?;
        let numerator = build_periodic_numerator(witness.ptilde(), witness.q)?;
        match certify_offaxis_pole(&numerator, witness.q) {
            Ok(off) => Ok(GenerationVerdict::not_generates(
                Reason::RootOfUnityObstruction,
                Certificate::RootOfUnityPole {
                    s: witness.s,
                    q: witness.q,
                    n0: witness.n0,
                    t0: witness.t0,
                    period: 2 * witness.q,
                    pole: off.pole,
                    numerator_abs: off.numerator_abs,
                },
            )),
            Err(ClassifyError::NoOffAxisPole { .. }) => {
                Ok(GenerationVerdict::unknown(Reason::NoApplicableRule))
            }
            Err(e) => Err(e),
        }
    } else {
        // Im a_1 = rational + surd, surd nonzero: an irrational rotation rate.
        // S clears the denominators of the upper block; after time 2 S pi the
        // upper block contributes full turns and the pole sits at e^{-2 pi i r}
        // with r = S * Im a_1 irrational, hence off the positive axis.
        let s_big: BigInt = (2..=degree)
            .map(|k| {
                poly.coeff(k)
                    .im_as_rational()
                    .expect("upper block rational")
            })
            .fold(BigInt::from(1), |acc, b| acc.lcm(b.denom()));
        let s_rat = BigRational::from_integer(s_big);
        let r = ExactScalar::new(
            a1.im_rational_component() * &s_rat,
            a1.im_surd_component() * &s_rat,
            BigRational::zero(),
            BigRational::zero(),
            a1.surd_base(),
        )
        .map_err(SymbolError::from)?;
        let pole = Complex64::from_polar(1.0, -2.0 * PI * r.re_as_f64());
        Ok(GenerationVerdict::not_generates(
            Reason::IrrationalRotation,
            Certificate::IrrationalRotation {
                r_description: Box::new(r),
                pole,
            },
        ))
    }
}

/// Decides generation for one symbol.
pub fn classify(symbol: &MultiplierSymbol) -> Result<GenerationVerdict, ClassifyError> {
    match symbol {
        MultiplierSymbol::HardyRational(_) => Ok(hardy_verdict()),
        MultiplierSymbol::Explicit(_) => Ok(GenerationVerdict::unknown(Reason::NoApplicableRule)),
        MultiplierSymbol::EulerPoly(poly) => {
            if poly.degree() <= 1 {
                Ok(classify_degree_one(poly))
            } else {
                classify_higher_degree(poly)
            }
        }
    }
}

/// Combines verdicts for a sum of symbols. Generation is additive; nothing
/// can be concluded when either summand fails or is undecided, so the answer
/// is never `NotGenerates`.
pub fn classify_sum(left: &GenerationVerdict, right: &GenerationVerdict) -> GenerationVerdict {
    match (left.verdict(), right.verdict()) {
        (Verdict::Generates { group: g1 }, Verdict::Generates { group: g2 }) => {
            let certificate = Certificate::SumOf {
                left: Box::new(
                    left.certificate()
                        .expect("generating verdicts carry certificates")
                        .clone(),
                ),
                right: Box::new(
                    right
                        .certificate()
                        .expect("generating verdicts carry certificates")
                        .clone(),
                ),
            };
            GenerationVerdict::generates(g1 && g2, Reason::Additivity, certificate)
        }
        _ => GenerationVerdict::unknown(Reason::NoApplicableRule),
    }
}
