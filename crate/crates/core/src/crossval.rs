//! Cross-validation of every gamma_m representation against every other,
//! plus the reconstruction round trips and consistency identities, gathered
//! into one deterministic report.

use crate::altzeta::AltZetaDerivatives;
use crate::bernoulli::BernoulliCache;
use crate::comb::{binomial_row, rational, Rational};
use crate::error::Result;
use crate::real::{log_integer, BigReal, PrecisionContext};
use crate::stieltjes::{
    alt_zeta_from_gamma_half, briggs_chowla_a_form, briggs_chowla_zeta_deriv,
    closure_identity_check, equivalence_tolerance, gamma_binomial_involution_check, gamma_coffey,
    gamma_half, gamma_kluyver, gamma_liang_todd, gamma_zhang_williams, resolve_reflection_sign,
    IdentityOutcome, Method, ReflectionSignVariant, StieltjesEstimate,
};

/// One (m, method) cell of the report.
#[derive(Clone, Debug)]
pub struct MethodCell {
    pub m: usize,
    pub method: Method,
    pub value: BigReal,
    pub error_estimate: BigReal,
    pub terms_used: usize,
    pub converged: bool,
}

/// Pairwise discrepancy between two methods at the same index.
#[derive(Clone, Debug)]
pub struct PairRow {
    pub m: usize,
    pub first: Method,
    pub second: Method,
    pub discrepancy: BigReal,
    pub tolerance: BigReal,
    pub pass: bool,
}

/// A reconstruction compared against its reference value.
#[derive(Clone, Debug)]
pub struct RoundTripRow {
    pub label: &'static str,
    pub index: usize,
    pub reconstructed: BigReal,
    pub reference: BigReal,
    pub discrepancy: BigReal,
    pub tolerance: BigReal,
    pub pass: bool,
}

/// A tolerance-checked identity.
#[derive(Clone, Debug)]
pub struct CheckRow {
    pub label: &'static str,
    pub index: usize,
    pub outcome: IdentityOutcome,
}

/// Agreement of gamma_m built from two different acceleration parameters.
#[derive(Clone, Debug)]
pub struct LambdaRow {
    pub m: usize,
    pub first_lambda: Rational,
    pub second_lambda: Rational,
    pub discrepancy: BigReal,
    pub tolerance: BigReal,
    pub pass: bool,
}

/// Full cross-validation report; field order fixes the emission order.
#[derive(Clone, Debug)]
pub struct CrossValReport {
    pub m_max: usize,
    pub requested_bits: usize,
    pub cells: Vec<MethodCell>,
    pub pairs: Vec<PairRow>,
    pub round_trips: Vec<RoundTripRow>,
    pub checks: Vec<CheckRow>,
    pub lambda_rows: Vec<LambdaRow>,
    /// Resolved orientation of the gamma_k(1/2) reflection, when computable.
    pub sign_variant: Option<ReflectionSignVariant>,
    /// False when non-converged inputs forced the dependent sections to be
    /// skipped (their absence is reported, never hidden).
    pub complete: bool,
}

impl CrossValReport {
    pub fn any_non_converged(&self) -> bool {
        self.cells.iter().any(|c| !c.converged)
    }

    pub fn all_pass(&self) -> bool {
        self.complete
            && !self.any_non_converged()
            && self.pairs.iter().all(|p| p.pass)
            && self.round_trips.iter().all(|r| r.pass)
            && self.checks.iter().all(|c| c.outcome.passed)
            && self.lambda_rows.iter().all(|l| l.pass)
    }
}

fn cell(est: &StieltjesEstimate) -> MethodCell {
    MethodCell {
        m: est.m,
        method: est.method,
        value: est.value.clone(),
        error_estimate: est.error_estimate.clone(),
        terms_used: est.terms_used,
        converged: est.converged,
    }
}

fn pair(a: &StieltjesEstimate, b: &StieltjesEstimate, ctx: &PrecisionContext) -> PairRow {
    let discrepancy = a.value.sub(&b.value).abs();
    let tolerance = equivalence_tolerance(&a.error_estimate, &b.error_estimate, ctx);
    PairRow {
        m: a.m,
        first: a.method,
        second: b.method,
        pass: a.converged
            && b.converged
            && discrepancy.cmp(&tolerance) != std::cmp::Ordering::Greater,
        discrepancy,
        tolerance,
    }
}

/// Worst-case error of the Briggs-Chowla reconstruction at order l given the
/// gamma error estimates.
fn briggs_chowla_error_bound(
    l: usize,
    gammas: &[StieltjesEstimate],
    ctx: &PrecisionContext,
) -> BigReal {
    let wb = ctx.working_bits();
    let l2 = log_integer(2, ctx);
    let row = binomial_row(l as u64);
    let mut err = ctx.rounding_floor();
    for (k, g) in gammas.iter().take(l).enumerate() {
        let coef = BigReal::from_bigint(&row[k], wb).mul(&l2.powi(l - k));
        err = err.add(&coef.abs().mul(&g.error_estimate));
    }
    err
}

/// Worst-case error of gamma_k(1/2) given the gamma error estimates.
fn gamma_half_error_bound(
    k: usize,
    gammas: &[StieltjesEstimate],
    ctx: &PrecisionContext,
) -> BigReal {
    let wb = ctx.working_bits();
    let l2 = log_integer(2, ctx);
    let row = binomial_row(k as u64);
    let mut err = gammas[k].error_estimate.clone();
    for j in 0..=k {
        let coef = BigReal::from_bigint(&row[j], wb).mul(&l2.powi(j)).mul_pow2(1);
        err = err.add(&coef.abs().mul(&gammas[k - j].error_estimate));
    }
    err.add(&ctx.rounding_floor())
}

/// Worst-case error of the reflection reconstruction at order l.
fn reflection_error_bound(
    l: usize,
    gammas: &[StieltjesEstimate],
    ctx: &PrecisionContext,
) -> BigReal {
    let wb = ctx.working_bits();
    let l2 = log_integer(2, ctx);
    let row = binomial_row(l as u64);
    let mut err = ctx.rounding_floor();
    for k in 0..=l {
        let bracket_err = gamma_half_error_bound(k, gammas, ctx).add(&gammas[k].error_estimate);
        let coef = BigReal::from_bigint(&row[k], wb).mul(&l2.powi(l - k));
        err = err.add(&coef.abs().mul(&bracket_err));
    }
    err.mul_pow2(-1)
}

/// Computes gamma_m by all methods for m <= m_max, runs the Briggs-Chowla
/// round trips, the gamma_k(1/2) reflection checks, and the binomial
/// involution / closure identities, and reports per-pair discrepancies with
/// pass/fail against tolerance. Any non-converged sub-computation is
/// reported, never hidden. Deterministic for a given context.
pub fn cross_validation_report(
    m_max: usize,
    cache: &BernoulliCache,
    ctx: &PrecisionContext,
) -> Result<CrossValReport> {
    let z = AltZetaDerivatives::hasse(m_max + 1, ctx);

    let mut cells = Vec::new();
    let mut pairs = Vec::new();
    let mut coffey_gammas = Vec::with_capacity(m_max + 1);
    for m in 0..=m_max {
        let coffey = gamma_coffey(m, &z, cache, ctx)?;
        let liang_todd = gamma_liang_todd(m, &z, cache, ctx)?;
        let zhang_williams = gamma_zhang_williams(m, &z, cache, ctx)?;
        let kluyver = gamma_kluyver(m, cache, ctx);

        cells.push(cell(&coffey));
        cells.push(cell(&liang_todd));
        cells.push(cell(&zhang_williams));
        cells.push(cell(&kluyver));
        pairs.push(pair(&coffey, &liang_todd, ctx));
        pairs.push(pair(&coffey, &zhang_williams, ctx));
        pairs.push(pair(&coffey, &kluyver, ctx));
        coffey_gammas.push(coffey);
    }

    let complete = coffey_gammas.iter().all(|g| g.converged);
    let mut round_trips = Vec::new();
    let mut checks = Vec::new();
    let mut lambda_rows = Vec::new();
    let mut sign_variant = None;

    if complete {
        let l2 = log_integer(2, ctx);
        for l in 0..=m_max {
            let bc = briggs_chowla_zeta_deriv(l, &coffey_gammas, ctx)?;
            let bc_err = briggs_chowla_error_bound(l, &coffey_gammas, ctx);
            let discrepancy = bc.sub(z.value(l)).abs();
            let tolerance = equivalence_tolerance(&bc_err, z.error_estimate(l), ctx);
            round_trips.push(RoundTripRow {
                label: "briggs-chowla",
                index: l,
                reconstructed: bc.clone(),
                reference: z.value(l).clone(),
                pass: discrepancy.cmp(&tolerance) != std::cmp::Ordering::Greater,
                discrepancy,
                tolerance,
            });

            let a_form = briggs_chowla_a_form(l, &coffey_gammas, ctx)?;
            let discrepancy = a_form.sub(&bc).abs();
            let tolerance = ctx.equivalence_floor();
            round_trips.push(RoundTripRow {
                label: "a-form-vs-expanded",
                index: l,
                reconstructed: a_form,
                reference: bc,
                pass: discrepancy.cmp(&tolerance) != std::cmp::Ordering::Greater,
                discrepancy,
                tolerance,
            });

            let refl = alt_zeta_from_gamma_half(l, &coffey_gammas, ctx)?;
            let refl_err = reflection_error_bound(l, &coffey_gammas, ctx);
            let discrepancy = refl.sub(z.value(l)).abs();
            let tolerance = equivalence_tolerance(&refl_err, z.error_estimate(l), ctx);
            round_trips.push(RoundTripRow {
                label: "reflection",
                index: l,
                reconstructed: refl,
                reference: z.value(l).clone(),
                pass: discrepancy.cmp(&tolerance) != std::cmp::Ordering::Greater,
                discrepancy,
                tolerance,
            });
        }

        // psi(1/2) anchor: gamma_0(1/2) = gamma + 2 log 2
        let anchor = gamma_half(0, &coffey_gammas, ctx)?;
        let expected = coffey_gammas[0].value.add(&l2.mul_pow2(1));
        let discrepancy = anchor.sub(&expected).abs();
        let tolerance = equivalence_tolerance(
            &gamma_half_error_bound(0, &coffey_gammas, ctx),
            &coffey_gammas[0].error_estimate,
            ctx,
        );
        round_trips.push(RoundTripRow {
            label: "gamma-half-anchor",
            index: 0,
            reconstructed: anchor,
            reference: expected,
            pass: discrepancy.cmp(&tolerance) != std::cmp::Ordering::Greater,
            discrepancy,
            tolerance,
        });

        for l in 0..=m_max {
            checks.push(CheckRow {
                label: "binomial-involution",
                index: l,
                outcome: gamma_binomial_involution_check(l, &coffey_gammas, ctx)?,
            });
            checks.push(CheckRow {
                label: "closure",
                index: l,
                outcome: closure_identity_check(l, &coffey_gammas, cache, ctx)?,
            });
        }

        if m_max >= 1 {
            sign_variant = Some(resolve_reflection_sign(&coffey_gammas, ctx)?);
        }

        // lambda independence of the accelerated route
        let lambda_set = [rational(1, 2), rational(1, 1), rational(2, 1)];
        let order = m_max.min(5);
        let mut per_lambda: Vec<Vec<StieltjesEstimate>> = Vec::new();
        for lam in &lambda_set {
            let z_lam = AltZetaDerivatives::accelerated(order + 1, lam, ctx)?;
            let mut gammas = Vec::with_capacity(order + 1);
            for m in 0..=order {
                gammas.push(gamma_coffey(m, &z_lam, cache, ctx)?);
            }
            per_lambda.push(gammas);
        }
        for m in 0..=order {
            for i in 0..lambda_set.len() {
                for j in i + 1..lambda_set.len() {
                    let a = &per_lambda[i][m];
                    let b = &per_lambda[j][m];
                    let discrepancy = a.value.sub(&b.value).abs();
                    let tolerance =
                        equivalence_tolerance(&a.error_estimate, &b.error_estimate, ctx);
                    lambda_rows.push(LambdaRow {
                        m,
                        first_lambda: lambda_set[i].clone(),
                        second_lambda: lambda_set[j].clone(),
                        pass: a.converged
                            && b.converged
                            && discrepancy.cmp(&tolerance) != std::cmp::Ordering::Greater,
                        discrepancy,
                        tolerance,
                    });
                }
            }
        }
    }

    Ok(CrossValReport {
        m_max,
        requested_bits: ctx.requested_bits(),
        cells,
        pairs,
        round_trips,
        checks,
        lambda_rows,
        sign_variant,
        complete,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_term_cap_flags_everything() {
        let cache = BernoulliCache::new();
        let ctx = PrecisionContext::new(64).with_max_terms(1);
        let report = cross_validation_report(0, &cache, &ctx).unwrap();
        assert!(report.any_non_converged());
        assert!(!report.complete);
        assert!(!report.all_pass());
        assert!(report.round_trips.is_empty());
    }

    #[test]
    fn single_index_report_passes() {
        let cache = BernoulliCache::new();
        let ctx = PrecisionContext::new(128);
        let report = cross_validation_report(0, &cache, &ctx).unwrap();
        assert!(report.complete);
        assert!(report.all_pass(), "report failed: {report:?}");
        assert_eq!(report.cells.len(), 4);
        assert_eq!(report.pairs.len(), 3);
    }
}
