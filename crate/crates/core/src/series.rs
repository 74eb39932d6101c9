//! Shared summation kernels: stability-windowed partial summation and
//! iterated averaging of partial sums for conditionally convergent
//! alternating series.

use crate::real::{BigReal, PrecisionContext};

/// Outcome of a series evaluation.
#[derive(Clone, Debug)]
pub struct SeriesResult {
    pub value: BigReal,
    /// Non-negative absolute error estimate.
    pub error_estimate: BigReal,
    pub terms_used: usize,
    pub converged: bool,
}

impl SeriesResult {
    /// Applies a post-processing step to the value, keeping the bookkeeping.
    pub(crate) fn map_value(mut self, f: impl FnOnce(BigReal) -> BigReal) -> Self {
        self.value = f(self.value);
        self
    }
}

/// Sums `term(0) + term(1) + ...` in ascending index order until a stability
/// window of two consecutive terms falls below the context's tolerance, or
/// `max_terms` is reached.
///
/// The error estimate is the magnitude of the last window of added terms.
/// When `max_terms` is hit first the result reports `converged = false`
/// rather than silently truncating. Deterministic: identical inputs and
/// context give bit-identical output.
pub fn sum_until_stable(
    mut term: impl FnMut(usize) -> BigReal,
    ctx: &PrecisionContext,
) -> SeriesResult {
    let tol = ctx.target_tolerance();
    let mut sum = BigReal::zero(ctx.working_bits());
    let mut prev_mag: Option<BigReal> = None;
    let mut last_window = BigReal::zero(ctx.working_bits());
    for k in 0..ctx.max_terms() {
        let t = term(k);
        sum = sum.add(&t);
        let mag = t.abs();
        if let Some(prev) = prev_mag {
            last_window = mag.max_by_abs(&prev);
            if last_window.cmp(tol) != std::cmp::Ordering::Greater {
                return SeriesResult {
                    value: sum,
                    error_estimate: last_window,
                    terms_used: k + 1,
                    converged: true,
                };
            }
        } else {
            last_window = mag.clone();
        }
        prev_mag = Some(mag);
    }
    SeriesResult {
        value: sum,
        error_estimate: last_window,
        terms_used: ctx.max_terms(),
        converged: false,
    }
}

/// Repeated pairwise means of a partial-sum sequence. Each pass replaces
/// s_i by (s_i + s_{i+1}) / 2 and shortens the row by one; `depth` passes
/// are applied. Returns the final row (non-empty; requires
/// `sums.len() > depth`).
pub fn iterated_average(sums: &[BigReal], depth: usize) -> Vec<BigReal> {
    assert!(
        sums.len() > depth,
        "averaging depth {depth} needs more than {depth} partial sums"
    );
    let mut row = sums.to_vec();
    for _ in 0..depth {
        for i in 0..row.len() - 1 {
            row[i] = row[i].add(&row[i + 1]).mul_pow2(-1);
        }
        row.pop();
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comb::rational;

    #[test]
    fn geometric_series_sums_to_one() {
        let ctx = PrecisionContext::new(128);
        let res = sum_until_stable(|k| BigReal::pow2(-(k as i64) - 1, 192), &ctx);
        assert!(res.converged);
        let err = res.value.sub(&BigReal::one(192)).abs();
        assert!(err.cmp(&BigReal::pow2(-126, 64)) == std::cmp::Ordering::Less);
        assert!(res.error_estimate.cmp(ctx.target_tolerance()) != std::cmp::Ordering::Greater);
    }

    #[test]
    fn all_zero_terms_converge_immediately() {
        let ctx = PrecisionContext::new(64);
        let res = sum_until_stable(|_| BigReal::zero(128), &ctx);
        assert!(res.converged);
        assert!(res.value.is_zero());
        assert_eq!(res.terms_used, 2); // minimal for a two-term window
    }

    #[test]
    fn divergent_series_does_not_report_convergence() {
        let ctx = PrecisionContext::new(64).with_max_terms(100);
        let res = sum_until_stable(
            |k| BigReal::from_rational(&rational(1, k as i64 + 1), 128),
            &ctx,
        );
        assert!(!res.converged);
        assert_eq!(res.terms_used, 100);
    }

    #[test]
    fn single_term_cap_cannot_converge() {
        let ctx = PrecisionContext::new(64).with_max_terms(1);
        let res = sum_until_stable(|_| BigReal::zero(128), &ctx);
        assert!(!res.converged);
        assert_eq!(res.terms_used, 1);
    }

    #[test]
    fn summation_is_deterministic() {
        let ctx = PrecisionContext::new(128);
        let run = || {
            sum_until_stable(
                |k| {
                    BigReal::from_rational(&rational(1, 3), 192)
                        .powi(k)
                        .mul_pow2(-1)
                },
                &ctx,
            )
        };
        let a = run();
        let b = run();
        assert_eq!(a.value.to_rational(), b.value.to_rational());
        assert_eq!(a.terms_used, b.terms_used);
    }

    #[test]
    fn higher_precision_stays_within_error_estimate() {
        // increasing working precision by 64 bits moves a converged value
        // by less than the reported estimate plus 2^-requested
        let base = PrecisionContext::new(128);
        let finer = PrecisionContext::new(192);
        let term = |bits: usize| {
            move |k: usize| {
                BigReal::from_rational(&rational(2, 3), bits)
                    .powi(k)
                    .mul(&BigReal::from_rational(&rational(1, 7), bits))
            }
        };
        let lo = sum_until_stable(term(base.working_bits()), &base);
        let hi = sum_until_stable(term(finer.working_bits()), &finer);
        assert!(lo.converged && hi.converged);
        let drift = lo.value.sub(&hi.value).abs();
        let allowance = lo
            .error_estimate
            .add(&BigReal::pow2(-(base.requested_bits() as i64), 64));
        assert!(drift.cmp(&allowance) == std::cmp::Ordering::Less);
    }

    #[test]
    fn averaging_matches_hand_example() {
        // partial sums 1, 1/2 averaged once: 3/4
        let sums = vec![BigReal::one(64), BigReal::from_rational(&rational(1, 2), 64)];
        let row = iterated_average(&sums, 1);
        assert_eq!(row.len(), 1);
        assert_eq!(row[0].to_rational(), rational(3, 4));
    }

    #[test]
    fn averaging_accelerates_alternating_harmonic() {
        // sum (-1)^(k+1)/k = ln 2; plain partial sums give ~3 digits at
        // n = 40, averaging gives far more
        let bits = 192;
        let mut acc = BigReal::zero(bits);
        let mut sums = Vec::new();
        for k in 1i64..=40 {
            let t = BigReal::from_rational(&rational(if k % 2 == 1 { 1 } else { -1 }, k), bits);
            acc = acc.add(&t);
            sums.push(acc.clone());
        }
        let row = iterated_average(&sums, 20);
        let ln2 = BigReal::from_u64(2, bits).ln(bits);
        let err = row.last().unwrap().sub(&ln2).abs().to_f64();
        assert!(err < 1e-12, "averaged error {err}");
    }
}
