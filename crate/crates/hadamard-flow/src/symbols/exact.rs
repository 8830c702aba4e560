//! Exact complex scalars `(p + q sqrt(d)) + (r + s sqrt(d)) i` with rational
//! `p, q, r, s` and one square-free surd base `d` per scalar.
//!
//! Restricting every scalar to a single quadratic extension keeps the
//! questions the classifier asks decidable by inspection: reality, sign of
//! the real part, rationality of the imaginary part, and membership in
//! `i * Q` all reduce to checking which components vanish. Conversion to
//! `f64` happens once, at the edge, via correctly rounded division.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

/// Largest accepted surd base; square-free reduction trial-divides to 1e6.
pub const MAX_SURD_BASE: u64 = 1_000_000_000_000;

#[derive(Debug, Error, PartialEq)]
pub enum ExactError {
    #[error("incompatible surd bases sqrt({0}) and sqrt({1})")]
    IncompatibleSurds(u64, u64),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("surd base {0} exceeds the supported maximum {MAX_SURD_BASE}")]
    SurdBaseTooLarge(u64),
}

/// One coordinate `rat + surd * sqrt(d)` of a scalar.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Quad {
    rat: BigRational,
    surd: BigRational,
}

impl Quad {
    fn zero() -> Self {
        Quad {
            rat: BigRational::zero(),
            surd: BigRational::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.surd.is_zero()
    }

    fn add(&self, other: &Quad) -> Quad {
        Quad {
            rat: &self.rat + &other.rat,
            surd: &self.surd + &other.surd,
        }
    }

    fn sub(&self, other: &Quad) -> Quad {
        Quad {
            rat: &self.rat - &other.rat,
            surd: &self.surd - &other.surd,
        }
    }

    fn neg(&self) -> Quad {
        Quad {
            rat: -self.rat.clone(),
            surd: -self.surd.clone(),
        }
    }

    fn scale(&self, factor: &BigRational) -> Quad {
        Quad {
            rat: &self.rat * factor,
            surd: &self.surd * factor,
        }
    }

    /// `(p + q sqrt(d)) (r + s sqrt(d)) = (pr + qs d) + (ps + qr) sqrt(d)`
    fn mul(&self, other: &Quad, base: u64) -> Quad {
        let d = BigRational::from_integer(BigInt::from(base));
        Quad {
            rat: &self.rat * &other.rat + &self.surd * &other.surd * &d,
            surd: &self.rat * &other.surd + &self.surd * &other.rat,
        }
    }

    /// Exact sign of `rat + surd * sqrt(base)`. For square-free `base >= 2`
    /// the value can only vanish when both components do.
    fn sign(&self, base: u64) -> Ordering {
        let rs = rational_sign(&self.rat);
        let ss = rational_sign(&self.surd);
        match (rs, ss) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (a, b) if a == b => a,
            (a, _) => {
                // mixed signs: compare rat^2 against surd^2 * base
                let d = BigRational::from_integer(BigInt::from(base));
                let lhs = &self.rat * &self.rat;
                let rhs = &self.surd * &self.surd * &d;
                match lhs.cmp(&rhs) {
                    Ordering::Greater => a,
                    Ordering::Less => a.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    fn to_f64(&self, base: u64) -> f64 {
        let mut value = big_ratio_to_f64(&self.rat);
        if !self.surd.is_zero() {
            value += big_ratio_to_f64(&self.surd) * (base as f64).sqrt();
        }
        value
    }
}

fn rational_sign(r: &BigRational) -> Ordering {
    match r.numer().sign() {
        Sign::Minus => Ordering::Less,
        Sign::NoSign => Ordering::Equal,
        Sign::Plus => Ordering::Greater,
    }
}

/// Correctly rounded `BigRational -> f64`.
///
/// Scales the quotient to at least 55 significant bits, folds the division
/// remainder into a sticky bit, and lets the single integer-to-float
/// conversion perform the rounding (round half to even). Saturates to
/// `0`/`inf` outside the exponent range.
fn big_ratio_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let negative = r.numer().sign() == Sign::Minus;
    let a: &BigUint = r.numer().magnitude();
    let b: &BigUint = r.denom().magnitude();
    let shift: i64 = 55 + b.bits() as i64 - a.bits() as i64;
    let shift = shift.clamp(-1_100, 1_100);
    let (sa, sb) = if shift >= 0 {
        (a << shift as u64, b.clone())
    } else {
        (a.clone(), b << (-shift) as u64)
    };
    let (q, rem) = sa.div_rem(&sb);
    let mut q2 = q << 1u32;
    if !rem.is_zero() {
        q2 += 1u32;
    }
    let magnitude = q2.to_f64().unwrap_or(f64::INFINITY) * 2f64.powi(-(shift as i32) - 1);
    if negative {
        -magnitude
    } else {
        magnitude
    }
}

/// Splits `d = outer^2 * free` with `free` square-free.
fn square_free_split(d: u64) -> (u64, u64) {
    let mut m = d;
    let mut outer = 1u64;
    let mut free = 1u64;
    let mut p = 2u64;
    while p.checked_mul(p).is_some_and(|pp| pp <= m) {
        if m.is_multiple_of(p) {
            let mut count = 0u32;
            while m.is_multiple_of(p) {
                m /= p;
                count += 1;
            }
            outer *= p.pow(count / 2);
            if count % 2 == 1 {
                free *= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    free *= m; // the leftover factor is prime or 1
    (outer, free)
}

/// Exact complex scalar over `Q(sqrt(d), i)`.
///
/// Normal form: the base is square-free and at least 2 whenever a surd
/// component is present, and 0 otherwise, so structural equality is
/// semantic equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactScalar {
    re: Quad,
    im: Quad,
    base: u64,
}

impl ExactScalar {
    fn normalized(mut re: Quad, mut im: Quad, base: u64) -> Result<Self, ExactError> {
        if base > MAX_SURD_BASE {
            return Err(ExactError::SurdBaseTooLarge(base));
        }
        let mut base = base;
        if base == 0 {
            // sqrt(0) = 0: drop the surd components
            re.surd = BigRational::zero();
            im.surd = BigRational::zero();
        } else {
            let (outer, free) = square_free_split(base);
            if outer > 1 {
                let factor = BigRational::from_integer(BigInt::from(outer));
                re.surd = &re.surd * &factor;
                im.surd = &im.surd * &factor;
            }
            base = free;
            if base == 1 {
                // sqrt(1) = 1: fold into the rational parts
                re.rat = &re.rat + &re.surd;
                im.rat = &im.rat + &im.surd;
                re.surd = BigRational::zero();
                im.surd = BigRational::zero();
                base = 0;
            }
        }
        if re.surd.is_zero() && im.surd.is_zero() {
            base = 0;
        }
        Ok(ExactScalar { re, im, base })
    }

    pub fn new(
        re_rat: BigRational,
        re_surd: BigRational,
        im_rat: BigRational,
        im_surd: BigRational,
        base: u64,
    ) -> Result<Self, ExactError> {
        Self::normalized(
            Quad {
                rat: re_rat,
                surd: re_surd,
            },
            Quad {
                rat: im_rat,
                surd: im_surd,
            },
            base,
        )
    }

    pub fn zero() -> Self {
        ExactScalar {
            re: Quad::zero(),
            im: Quad::zero(),
            base: 0,
        }
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn i() -> Self {
        let mut s = Self::zero();
        s.im.rat = BigRational::from_integer(BigInt::from(1));
        s
    }

    pub fn from_integer(n: i64) -> Self {
        let mut s = Self::zero();
        s.re.rat = BigRational::from_integer(BigInt::from(n));
        s
    }

    pub fn from_ratio(numer: i64, denom: i64) -> Result<Self, ExactError> {
        if denom == 0 {
            return Err(ExactError::ZeroDenominator);
        }
        let mut s = Self::zero();
        s.re.rat = BigRational::new(BigInt::from(numer), BigInt::from(denom));
        Ok(s)
    }

    pub fn from_big_rational(r: BigRational) -> Self {
        let mut s = Self::zero();
        s.re.rat = r;
        s
    }

    /// `sqrt(d)` with the square part folded out: `sqrt(8) = 2 sqrt(2)`.
    pub fn sqrt(d: u64) -> Result<Self, ExactError> {
        Self::normalized(
            Quad {
                rat: BigRational::zero(),
                surd: BigRational::from_integer(BigInt::from(1)),
            },
            Quad::zero(),
            d,
        )
    }

    fn unified_base(&self, other: &Self) -> Result<u64, ExactError> {
        match (self.base, other.base) {
            (0, b) => Ok(b),
            (a, 0) => Ok(a),
            (a, b) if a == b => Ok(a),
            (a, b) => Err(ExactError::IncompatibleSurds(a, b)),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, ExactError> {
        let base = self.unified_base(other)?;
        Self::normalized(self.re.add(&other.re), self.im.add(&other.im), base)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ExactError> {
        let base = self.unified_base(other)?;
        Self::normalized(self.re.sub(&other.re), self.im.sub(&other.im), base)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, ExactError> {
        let base = self.unified_base(other)?;
        let re = self
            .re
            .mul(&other.re, base)
            .sub(&self.im.mul(&other.im, base));
        let im = self
            .re
            .mul(&other.im, base)
            .add(&self.im.mul(&other.re, base));
        Self::normalized(re, im, base)
    }

    pub fn neg(&self) -> Self {
        ExactScalar {
            re: self.re.neg(),
            im: self.im.neg(),
            base: self.base,
        }
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        let mut s = ExactScalar {
            re: self.re.scale(factor),
            im: self.im.scale(factor),
            base: self.base,
        };
        if s.re.surd.is_zero() && s.im.surd.is_zero() {
            s.base = 0;
        }
        s
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Exact sign of the real part.
    pub fn re_sign(&self) -> Ordering {
        self.re.sign(self.base)
    }

    /// Exact sign of the imaginary part.
    pub fn im_sign(&self) -> Ordering {
        self.im.sign(self.base)
    }

    /// True when the imaginary part carries no surd component.
    pub fn im_is_rational(&self) -> bool {
        self.im.surd.is_zero()
    }

    pub fn re_is_rational(&self) -> bool {
        self.re.surd.is_zero()
    }

    /// Membership in `i * Q`: zero real part and rational imaginary part.
    pub fn is_purely_imaginary_rational(&self) -> bool {
        self.re.is_zero() && self.im.surd.is_zero()
    }

    /// The imaginary part as a rational, when it has no surd component.
    pub fn im_as_rational(&self) -> Option<BigRational> {
        if self.im.surd.is_zero() {
            Some(self.im.rat.clone())
        } else {
            None
        }
    }

    pub fn re_as_rational(&self) -> Option<BigRational> {
        if self.re.surd.is_zero() {
            Some(self.re.rat.clone())
        } else {
            None
        }
    }

    /// Rational component of the imaginary part (the surd component may be
    /// nonzero alongside it).
    pub fn im_rational_component(&self) -> &BigRational {
        &self.im.rat
    }

    pub fn im_surd_component(&self) -> &BigRational {
        &self.im.surd
    }

    pub fn re_rational_component(&self) -> &BigRational {
        &self.re.rat
    }

    pub fn re_surd_component(&self) -> &BigRational {
        &self.re.surd
    }

    pub fn surd_base(&self) -> u64 {
        self.base
    }

    pub fn re_as_f64(&self) -> f64 {
        self.re.to_f64(self.base)
    }

    pub fn im_as_f64(&self) -> f64 {
        self.im.to_f64(self.base)
    }

    pub fn to_complex(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re_as_f64(), self.im_as_f64())
    }
}

fn push_term(parts: &mut Vec<String>, coeff: &BigRational, tail: &str) {
    if coeff.is_zero() {
        return;
    }
    let one = BigRational::from_integer(BigInt::from(1));
    if tail.is_empty() {
        parts.push(format!("{coeff}"));
    } else if *coeff == one {
        parts.push(tail.to_string());
    } else if *coeff == -one.clone() {
        parts.push(format!("-{tail}"));
    } else {
        parts.push(format!("{coeff}*{tail}"));
    }
}

impl fmt::Display for ExactScalar {
    /// Canonical form like `1/2 - 1/3*sqrt(2)*i`; parses back through the
    /// operator DSL's scalar grammar.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        push_term(&mut parts, &self.re.rat, "");
        if self.base != 0 {
            push_term(&mut parts, &self.re.surd, &format!("sqrt({})", self.base));
        }
        push_term(&mut parts, &self.im.rat, "i");
        if self.base != 0 {
            push_term(&mut parts, &self.im.surd, &format!("sqrt({})*i", self.base));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (k, part) in parts.iter().enumerate() {
            if k == 0 {
                out.push_str(part);
            } else if let Some(rest) = part.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(part);
            }
        }
        write!(f, "{out}")
    }
}

impl serde::Serialize for ExactScalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
