//! Coefficientwise (Hadamard) multiplier operators on truncated power series.
//!
//! A multiplier acts diagonally on Taylor coefficients: the monomial `x^n` is
//! an eigenvector with eigenvalue `m_n`. This crate provides
//!
//! * exact multiplier symbols (polynomials in n, rational expressions in
//!   1/(n+1), explicit tables) over rational + quadratic-surd scalars,
//! * the induced evolution families `t -> (e^{t m_n} c_n)` together with
//!   semigroup-law, generator and continuity diagnostics,
//! * a classifier deciding whether a symbol generates a C0-semigroup on the
//!   scale of spaces carried by the coefficient norms, answering `Unknown`
//!   where no decision rule applies and backing every definite verdict with
//!   a checkable certificate,
//! * Mellin-side exponential witnesses for the rational symbols and pole
//!   diagnostics for the coefficient sequences behind negative verdicts.

#![forbid(unsafe_code)]

pub mod classify;
pub mod mellin;
pub mod poles;
pub mod semigroup;
pub mod series;
pub mod symbols;

pub use classify::{classify, classify_sum, Certificate, GenerationVerdict, Reason, Verdict};
pub use series::{
    LaurentTailSeries, Radius, RadiusEstimate, TruncatedTaylorSeries, DEFAULT_TRUNCATION_ORDER,
};
pub use symbols::{ExactScalar, MultiplierSymbol};
