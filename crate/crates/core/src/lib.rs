//! Stieltjes constants from Bernoulli numbers.
//!
//! The crate has two halves. The exact half works over arbitrary-precision
//! rationals: Bernoulli numbers and polynomials, binomial moment sums, the
//! Riordan inverse pair, and a suite of convolution identities, all checked
//! with exact equality. The numeric half evaluates the classical
//! representations of the Stieltjes constants gamma_m (Coffey /
//! Zhang-Williams, Liang-Todd, Kluyver, Briggs-Chowla) over
//! arbitrary-precision floats with tracked error estimates, and
//! cross-validates them against one another.

pub mod altzeta;
pub mod bernoulli;
pub mod comb;
pub mod crossval;
pub mod error;
pub mod real;
pub mod riordan;
pub mod series;
pub mod stieltjes;

pub use altzeta::{
    accelerated_alt_zeta_deriv, direct_series_oracle, hasse_alt_zeta_deriv, AltZetaDerivatives,
    AltZetaMethod,
};
pub use bernoulli::{
    bernoulli_number, bernoulli_poly_eval, binomial_bernoulli_symmetry_check,
    full_range_moment_sum, negative_bernoulli_sum_check, rubenstein_identity_check,
    truncated_moment_sum, BernoulliCache, BernoulliPolynomial,
};
pub use comb::{binomial, rational, Rational};
pub use error::{Error, Result};
pub use real::{log_integer, parse_decimal_rational, BigReal, PrecisionContext};
pub use crossval::{cross_validation_report, CrossValReport};
pub use riordan::{riordan_forward, riordan_inverse, SequencePair};
pub use series::{iterated_average, sum_until_stable, SeriesResult};
pub use stieltjes::{
    alt_zeta_from_gamma_half, briggs_chowla_a_form, briggs_chowla_zeta_deriv,
    closure_identity_check, equivalence_tolerance, gamma_binomial_involution_check, gamma_coffey,
    gamma_half, gamma_kluyver, gamma_liang_todd, gamma_zhang_williams, kluyver_generalized,
    BriggsChowlaCoefficients, GeneralizedKluyver, IdentityOutcome, Method, StieltjesEstimate,
};
