//! Derivatives of the alternating zeta function at s = 1, the numeric
//! inputs to every Stieltjes-constant formula in this crate.
//!
//! Three routes are provided:
//!
//! * `hasse_alt_zeta_deriv` - the globally convergent double sum with outer
//!   weights 2^-(k+1) over binomial finite differences;
//! * `accelerated_alt_zeta_deriv` - its one-parameter generalization with
//!   outer weights lambda^k / (1+lambda)^(k+1), which collapses to the
//!   first form at lambda = 1 and must agree with it for every lambda > 0;
//! * `direct_series_oracle` - iterated averaging of the defining
//!   conditionally convergent series, kept computationally independent of
//!   the other two so it can serve as a cross-check.

use num_traits::{One, Signed, ToPrimitive};

use crate::comb::{rational, Rational};
use crate::error::{Error, Result};
use crate::real::{ln_integer_memo, log_integer, BigReal, PrecisionContext};
use crate::series::{iterated_average, sum_until_stable, SeriesResult};

/// How a set of derivative values was produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AltZetaMethod {
    Hasse,
    Accelerated(Rational),
    DirectOracle,
}

/// log^n(j+1) / (j+1) at the given precision.
fn log_power_over_linear(n: usize, j: u64, bits: usize) -> BigReal {
    let ln = ln_integer_memo(j + 1, bits);
    ln.powi(n).div(&BigReal::from_u64(j + 1, bits))
}

/// Estimated number of outer terms needed for the target tolerance when the
/// outer weight ratio is lambda / (1 + lambda).
fn initial_term_estimate(lambda: &Rational, ctx: &PrecisionContext) -> usize {
    let lam = lambda.to_f64().unwrap_or(1.0).max(1e-6);
    let ratio = lam / (1.0 + lam);
    let bits_per_term = -ratio.log2();
    let needed = (ctx.tolerance_bits() as f64 / bits_per_term * 1.2).ceil() as usize + 48;
    needed.max(8).min(ctx.max_terms())
}

/// Evaluates sum_{j>=0} (-1)^j log^n(j+1)/(j+1) by the lambda-weighted
/// binomial transform
///
///   (1/(1+lambda)) sum_k (lambda/(1+lambda))^k
///       sum_j C(k,j) (-1)^j lambda^-j log^n(j+1)/(j+1)
///
/// realized as repeated forward differencing of a precomputed row, so the
/// inner binomial sums never materialize binomial coefficients. The row is
/// built at working precision plus one extra bit per potential differencing
/// step (an order-k difference can lose about k bits to cancellation).
fn lambda_accelerated_alternating(
    n: usize,
    lambda: &Rational,
    ctx: &PrecisionContext,
    mut term_log: Option<&mut Vec<f64>>,
) -> SeriesResult {
    let wb = ctx.working_bits();
    // geometric tail of the outer sum: ratio r = lambda/(1+lambda) gives
    // r/(1-r) = lambda; keep the conventional factor-two floor
    let two = rational(2, 1);
    let tail_rat = if lambda > &two { lambda.clone() } else { two };
    let tail_factor = BigReal::from_rational(&tail_rat, wb);
    let kernel_tol = ctx.target_tolerance().mul_pow2(-1).div(&tail_factor);

    let mut terms_budget = initial_term_estimate(lambda, ctx);
    loop {
        let p_row = wb + terms_budget + 64;
        let mut row: Vec<BigReal> = Vec::with_capacity(terms_budget);
        if lambda.is_one() {
            for j in 0..terms_budget {
                row.push(log_power_over_linear(n, j as u64, p_row));
            }
        } else {
            let lam_inv = BigReal::from_rational(&(Rational::one() / lambda), p_row);
            let mut lam_pow = BigReal::one(p_row);
            for j in 0..terms_budget {
                row.push(log_power_over_linear(n, j as u64, p_row).mul(&lam_pow));
                lam_pow = lam_pow.mul(&lam_inv);
            }
        }

        let one_plus = Rational::one() + lambda;
        let mut weight = BigReal::from_rational(&(Rational::one() / &one_plus), p_row);
        let outer_ratio = BigReal::from_rational(&(lambda / &one_plus), p_row);
        let kernel_ctx = ctx
            .clone()
            .with_tolerance(kernel_tol.clone())
            .with_max_terms(terms_budget);
        let res = sum_until_stable(
            |_| {
                let t = weight.mul(&row[0]);
                if let Some(log) = term_log.as_deref_mut() {
                    log.push(t.abs().to_f64());
                }
                for i in 0..row.len() - 1 {
                    row[i] = row[i].sub(&row[i + 1]);
                }
                row.pop();
                weight = weight.mul(&outer_ratio);
                t
            },
            &kernel_ctx,
        );

        if res.converged || terms_budget >= ctx.max_terms() {
            let error_estimate = res
                .error_estimate
                .mul(&tail_factor)
                .add(&ctx.rounding_floor())
                .with_bits(wb);
            let converged = res.converged
                && error_estimate.cmp(ctx.target_tolerance()) != std::cmp::Ordering::Greater;
            return SeriesResult {
                value: res.value.with_bits(wb),
                error_estimate,
                terms_used: res.terms_used,
                converged,
            };
        }
        terms_budget = (terms_budget * 2).min(ctx.max_terms());
        if let Some(log) = term_log.as_deref_mut() {
            log.clear();
        }
    }
}

/// zeta_a^(n)(1) via the globally convergent double sum
///
///   zeta_a^(n)(1) = (-1)^n sum_k 2^-(k+1) sum_j C(k,j) (-1)^j log^n(1+j)/(1+j).
///
/// Converges roughly one bit per outer term; the error estimate is the
/// geometric tail bound (twice the last outer term) plus rounding noise.
pub fn hasse_alt_zeta_deriv(n: usize, ctx: &PrecisionContext) -> SeriesResult {
    let res = lambda_accelerated_alternating(n, &Rational::one(), ctx, None);
    if n % 2 == 1 {
        res.map_value(|v| v.neg())
    } else {
        res
    }
}

/// (-1)^n zeta_a^(n)(1) via the lambda-parameterized acceleration (n >= 1,
/// lambda > 0). For every valid lambda the value agrees with
/// `hasse_alt_zeta_deriv(n)` up to the (-1)^n sign convention, within
/// combined error estimates.
pub fn accelerated_alt_zeta_deriv(
    n: usize,
    lambda: &Rational,
    ctx: &PrecisionContext,
) -> Result<SeriesResult> {
    assert!(n >= 1, "accelerated evaluation requires n >= 1");
    if !lambda.is_positive() {
        return Err(Error::InvalidParameter {
            what: format!("lambda must be positive, got {lambda}"),
        });
    }
    Ok(lambda_accelerated_alternating(n, lambda, ctx, None))
}

/// Outer-term magnitudes of the Hasse evaluation, for inspecting the
/// geometric decay of the summand.
pub fn hasse_outer_term_magnitudes(n: usize, ctx: &PrecisionContext) -> Vec<f64> {
    let mut log = Vec::new();
    lambda_accelerated_alternating(n, &Rational::one(), ctx, Some(&mut log));
    log
}

/// Estimates zeta_a^(n)(1) from the defining conditionally convergent series
/// sum (-1)^(k+1) log^n(k)/k by iterated averaging of its partial sums.
///
/// This is a deliberately independent, oracle-grade path (roughly 10-12
/// decimal digits with 10^4 terms); it shares no code with the binomial
/// transform evaluations above. Requires `num_terms >= 2 * averaging_depth`.
pub fn direct_series_oracle(
    n: usize,
    num_terms: usize,
    averaging_depth: usize,
    ctx: &PrecisionContext,
) -> Result<SeriesResult> {
    if averaging_depth == 0 || num_terms < 2 * averaging_depth {
        return Err(Error::InsufficientTerms {
            needed: 2 * averaging_depth.max(1),
            got: num_terms,
        });
    }
    let wb = ctx.working_bits();
    let mut partial = Vec::with_capacity(num_terms);
    let mut acc = BigReal::zero(wb);
    for k in 1..=num_terms as u64 {
        let mut t = log_power_over_linear(n, k - 1, wb);
        if k % 2 == 0 {
            t = t.neg();
        }
        acc = acc.add(&t);
        partial.push(acc.clone());
    }
    let averaged = iterated_average(&partial, averaging_depth);
    let value = averaged.last().unwrap().clone();
    let spread = if averaged.len() >= 2 {
        value.sub(&averaged[averaged.len() - 2]).abs()
    } else {
        value.sub(partial.last().unwrap()).abs()
    };
    let error_estimate = spread.mul_pow2(3).add(&ctx.rounding_floor());
    let converged = error_estimate.cmp(ctx.target_tolerance()) != std::cmp::Ordering::Greater;
    let signed = if n % 2 == 1 { value.neg() } else { value };
    Ok(SeriesResult {
        value: signed,
        error_estimate,
        terms_used: num_terms,
        converged,
    })
}

/// Vector of zeta_a^(l)(1) values for l = 0..=max_order, with per-entry
/// error estimates, produced by a single method.
#[derive(Clone, Debug)]
pub struct AltZetaDerivatives {
    method: AltZetaMethod,
    values: Vec<BigReal>,
    error_estimates: Vec<BigReal>,
    terms_used: Vec<usize>,
    converged: Vec<bool>,
}

impl AltZetaDerivatives {
    fn push(&mut self, res: SeriesResult) {
        self.values.push(res.value);
        self.error_estimates.push(res.error_estimate);
        self.terms_used.push(res.terms_used);
        self.converged.push(res.converged);
    }

    fn empty(method: AltZetaMethod, capacity: usize) -> Self {
        AltZetaDerivatives {
            method,
            values: Vec::with_capacity(capacity),
            error_estimates: Vec::with_capacity(capacity),
            terms_used: Vec::with_capacity(capacity),
            converged: Vec::with_capacity(capacity),
        }
    }

    /// Builds a derivative vector from precomputed per-order results
    /// (entry l holds zeta_a^(l)(1)).
    pub fn from_series(method: AltZetaMethod, entries: Vec<SeriesResult>) -> Self {
        assert!(!entries.is_empty(), "need at least order zero");
        let mut out = Self::empty(method, entries.len());
        for e in entries {
            out.push(e);
        }
        out
    }

    /// All orders up to `max_order` via the globally convergent double sum.
    pub fn hasse(max_order: usize, ctx: &PrecisionContext) -> Self {
        let mut out = Self::empty(AltZetaMethod::Hasse, max_order + 1);
        for l in 0..=max_order {
            out.push(hasse_alt_zeta_deriv(l, ctx));
        }
        out
    }

    /// All orders via the lambda acceleration. Order zero is taken from
    /// `log_integer(2)` directly (the acceleration is defined for n >= 1;
    /// the order-zero value log 2 is method-independent).
    pub fn accelerated(
        max_order: usize,
        lambda: &Rational,
        ctx: &PrecisionContext,
    ) -> Result<Self> {
        let mut out = Self::empty(AltZetaMethod::Accelerated(lambda.clone()), max_order + 1);
        out.push(SeriesResult {
            value: log_integer(2, ctx),
            error_estimate: BigReal::pow2(2 - ctx.working_bits() as i64, ctx.working_bits()),
            terms_used: 1,
            converged: true,
        });
        for l in 1..=max_order {
            let res = accelerated_alt_zeta_deriv(l, lambda, ctx)?;
            let signed = if l % 2 == 1 {
                res.map_value(|v| v.neg())
            } else {
                res
            };
            out.push(signed);
        }
        Ok(out)
    }

    /// All orders via the averaging oracle.
    pub fn direct_oracle(
        max_order: usize,
        num_terms: usize,
        averaging_depth: usize,
        ctx: &PrecisionContext,
    ) -> Result<Self> {
        let mut out = Self::empty(AltZetaMethod::DirectOracle, max_order + 1);
        for l in 0..=max_order {
            out.push(direct_series_oracle(l, num_terms, averaging_depth, ctx)?);
        }
        Ok(out)
    }

    pub fn method(&self) -> &AltZetaMethod {
        &self.method
    }

    pub fn max_order(&self) -> usize {
        self.values.len() - 1
    }

    /// zeta_a^(l)(1).
    pub fn value(&self, l: usize) -> &BigReal {
        &self.values[l]
    }

    pub fn error_estimate(&self, l: usize) -> &BigReal {
        &self.error_estimates[l]
    }

    pub fn terms_used(&self, l: usize) -> usize {
        self.terms_used[l]
    }

    pub fn is_converged(&self, l: usize) -> bool {
        self.converged[l]
    }

    pub fn all_converged(&self) -> bool {
        self.converged.iter().all(|&c| c)
    }

    pub fn max_terms_used(&self) -> usize {
        self.terms_used.iter().copied().max().unwrap_or(0)
    }
}
