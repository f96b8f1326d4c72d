//! Exact moments of sums of iid random variables.
//!
//! For `S_n = X_1 + ... + X_n` with `X_i` iid copies of `X`, the `p`-th moment
//! `E(S_n^p)` is a finite sum over the integer partitions of `p`. Each
//! partition `{p_1, ..., p_m}` contributes the product of raw moments
//! `E(X^{p_1}) ... E(X^{p_m})` weighted by an integer polynomial in `n`:
//!
//! ```text
//! a = n!/(n-m)! * p!/(p_1! ... p_m!) / (l_1! ... l_h!)
//! ```
//!
//! where `l_j` are the multiplicities of the distinct part values. This crate
//! builds those expansions symbolically ([`symbolic::moment_of_sum`]),
//! evaluates them exactly over rationals, derives the normalized-moment
//! correction terms used in central-limit and law-of-large-numbers arguments
//! ([`limits`]) and checks everything against a brute-force expansion and a
//! seeded Monte Carlo estimator ([`oracle`]).
//!
//! ```
//! use iid_moments::{moment_of_sum, Mode};
//!
//! let third = moment_of_sum(3, Mode::General).unwrap();
//! assert_eq!(third.to_string(), "n*u3 + 3*(n^2-n)*u2*u1 + (n^3-3n^2+2n)*u1^3");
//! ```

pub mod combinatorics;
pub mod distributions;
mod error;
pub mod limits;
pub mod oracle;
pub mod rational;
pub mod symbolic;

pub use combinatorics::{
    coefficient, enumerate_partitions, falling_factorial, multiplicity_profile,
    MultiplicityProfile, NPoly, Partition, DEFAULT_ORDER_CAP,
};
pub use distributions::{builtin_providers, MomentProvider};
pub use error::{Error, Result};
pub use limits::{
    clt_correction, lln_correction, normal_moment, step_moment, strong_law_coefficients,
    weak_law_bound, CorrectionExpansion, StrongLawCoefficients, SymbolicExpansion,
};
pub use oracle::{brute_force_moment, monte_carlo_moment, McEstimate};
pub use symbolic::{
    evaluate, evaluate_f64, moment_of_sum, moments_match, EvalResult, Mode, MomentAssignment,
    MomentExpr, MomentMonomial, MomentPoly,
};

/// Exact rational number used throughout the crate.
pub type Rational = num_rational::BigRational;
