//! Bernoulli numbers and polynomials over exact rationals, with the
//! moment-sum and convolution identities they satisfy.
//!
//! Convention: B_1 = -1/2 (the generating-function convention t/(e^t - 1)).
//! Everything here is exact; there is no floating point in this module
//! except the polynomial evaluation hook used by the series code.

use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::comb::{binomial_row, rational, Rational};
use crate::real::BigReal;

/// Memoized exact Bernoulli numbers B_0..B_N.
///
/// Values are extended on demand via the defining recurrence
/// sum_{k=0}^{n} C(n+1, k) B_k = 0 (n >= 1), which pins B_n once
/// B_0..B_{n-1} are known. Extension is internally synchronized; reads
/// are concurrent.
pub struct BernoulliCache {
    values: RwLock<Vec<Rational>>,
}

impl BernoulliCache {
    pub fn new() -> Self {
        BernoulliCache {
            values: RwLock::new(vec![Rational::one()]),
        }
    }

    /// Cache pre-filled through B_n.
    pub fn with_capacity(n: usize) -> Self {
        let cache = Self::new();
        cache.ensure(n);
        cache
    }

    /// Extends the cache so that B_0..B_n are available.
    pub fn ensure(&self, n: usize) {
        {
            let values = self.values.read().unwrap();
            if values.len() > n {
                return;
            }
        }
        let mut values = self.values.write().unwrap();
        while values.len() <= n {
            let m = values.len(); // computing B_m
            let mut acc = Rational::zero();
            let mut c = BigInt::one(); // C(m+1, k), updated in place
            for (k, b) in values.iter().enumerate() {
                acc += Rational::from(c.clone()) * b;
                c = c * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
            }
            // C(m+1, m) = m + 1, hence B_m = -acc / (m + 1)
            values.push(-acc / rational(m as i64 + 1, 1));
        }
    }

    /// Exact B_n.
    pub fn get(&self, n: usize) -> Rational {
        self.ensure(n);
        self.values.read().unwrap()[n].clone()
    }

    /// Number of cached values.
    pub fn len(&self) -> usize {
        self.values.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        false // B_0 is always present
    }
}

impl Default for BernoulliCache {
    fn default() -> Self {
        Self::new()
    }
}

/// Exact Bernoulli number B_n under the convention B_1 = -1/2.
pub fn bernoulli_number(n: usize, cache: &BernoulliCache) -> Rational {
    cache.get(n)
}

/// Bernoulli polynomial B_m(x) held as exact coefficients:
/// the coefficient of x^l is C(m, l) B_{m-l}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BernoulliPolynomial {
    degree: usize,
    coeffs: Vec<Rational>,
}

impl BernoulliPolynomial {
    pub fn new(m: usize, cache: &BernoulliCache) -> Self {
        cache.ensure(m);
        let row = binomial_row(m as u64);
        let coeffs = (0..=m)
            .map(|l| Rational::from(row[l].clone()) * cache.get(m - l))
            .collect();
        BernoulliPolynomial { degree: m, coeffs }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficient of x^l.
    pub fn coeff(&self, l: usize) -> &Rational {
        &self.coeffs[l]
    }

    /// Exact evaluation at a rational point (Horner).
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Evaluation at a big-float point, at the argument's precision.
    pub fn eval_real(&self, x: &BigReal) -> BigReal {
        let bits = x.bits();
        let mut acc = BigReal::zero(bits);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&BigReal::from_rational(c, bits));
        }
        acc
    }

    /// Exact integral over [0, 1]: sum of coeff(l) / (l + 1).
    pub fn integral_unit_interval(&self) -> Rational {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(l, c)| c / rational(l as i64 + 1, 1))
            .sum()
    }
}

/// Exact value of B_m(x) = sum_{l=0}^{m} C(m, l) B_{m-l} x^l.
pub fn bernoulli_poly_eval(m: usize, x: &Rational, cache: &BernoulliCache) -> Rational {
    BernoulliPolynomial::new(m, cache).eval(x)
}

/// sum_{l=0}^{m} C(m, l) B_{m-l} / (l + 1), exactly. Zero for every m >= 1,
/// being the integral of B_m over [0, 1].
pub fn full_range_moment_sum(m: usize, cache: &BernoulliCache) -> Rational {
    assert!(m >= 1, "moment sum requires m >= 1");
    cache.ensure(m);
    let row = binomial_row(m as u64);
    let mut acc = Rational::zero();
    for l in 0..=m {
        acc += Rational::new(row[l].clone(), BigInt::from(l + 1)) * cache.get(m - l);
    }
    acc
}

/// sum_{l=1}^{m} C(m, l) B_{m-l} / (l + 1), exactly. Equals -B_m: the full
/// range sum vanishes and the omitted l = 0 term is B_m itself.
pub fn truncated_moment_sum(m: usize, cache: &BernoulliCache) -> Rational {
    assert!(m >= 1, "moment sum requires m >= 1");
    cache.ensure(m);
    let row = binomial_row(m as u64);
    let mut acc = Rational::zero();
    for l in 1..=m {
        acc += Rational::new(row[l].clone(), BigInt::from(l + 1)) * cache.get(m - l);
    }
    acc
}

/// Checks sum_{k=1}^{n} C(n, k) B_{n-k} (-1)^k B_k = -n B_n exactly
/// (Rubenstein's convolution identity).
pub fn rubenstein_identity_check(n: usize, cache: &BernoulliCache) -> bool {
    assert!(n >= 1);
    cache.ensure(n);
    let row = binomial_row(n as u64);
    let mut lhs = Rational::zero();
    for k in 1..=n {
        let term = Rational::from(row[k].clone()) * cache.get(n - k) * cache.get(k);
        if k % 2 == 0 {
            lhs += term;
        } else {
            lhs -= term;
        }
    }
    lhs == -(rational(n as i64, 1) * cache.get(n))
}

/// Checks sum_{k=0}^{p-1} C(p, k) B_k / (p - k + 1) = -B_p exactly.
pub fn negative_bernoulli_sum_check(p: usize, cache: &BernoulliCache) -> bool {
    assert!(p >= 1);
    cache.ensure(p);
    let row = binomial_row(p as u64);
    let mut lhs = Rational::zero();
    for k in 0..p {
        lhs += Rational::new(row[k].clone(), BigInt::from(p - k + 1)) * cache.get(k);
    }
    lhs == -cache.get(p)
}

/// Checks sum_{k=0}^{n} C(n, k) B_k = (-1)^n B_n exactly
/// (equivalently B_n(1) = (-1)^n B_n under the B_1 = -1/2 convention).
pub fn binomial_bernoulli_symmetry_check(n: usize, cache: &BernoulliCache) -> bool {
    cache.ensure(n);
    let row = binomial_row(n as u64);
    let mut lhs = Rational::zero();
    for k in 0..=n {
        lhs += Rational::from(row[k].clone()) * cache.get(k);
    }
    let rhs = cache.get(n);
    if n % 2 == 0 {
        lhs == rhs
    } else {
        lhs == -rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comb::binomial;

    /// Independent route for small Bernoulli numbers: the recurrence written
    /// out directly with explicit binomials, no cache involved.
    fn bernoulli_by_hand(up_to: usize) -> Vec<Rational> {
        let mut b = vec![Rational::one()];
        for n in 1..=up_to {
            let mut acc = Rational::zero();
            for (k, bk) in b.iter().enumerate() {
                acc += Rational::from(binomial(n as u64 + 1, k as i64)) * bk;
            }
            b.push(-acc / rational(n as i64 + 1, 1));
        }
        b
    }

    #[test]
    fn small_values() {
        let cache = BernoulliCache::new();
        assert_eq!(bernoulli_number(0, &cache), rational(1, 1));
        assert_eq!(bernoulli_number(1, &cache), rational(-1, 2));
        assert_eq!(bernoulli_number(2, &cache), rational(1, 6));
        assert_eq!(bernoulli_number(3, &cache), rational(0, 1));
        assert_eq!(bernoulli_number(4, &cache), rational(-1, 30));
        assert_eq!(bernoulli_number(12, &cache), rational(-691, 2730));
    }

    #[test]
    fn matches_hand_recurrence() {
        let cache = BernoulliCache::new();
        for (n, expected) in bernoulli_by_hand(60).into_iter().enumerate() {
            assert_eq!(cache.get(n), expected, "B_{n}");
        }
    }

    #[test]
    fn defining_recurrence_holds() {
        let cache = BernoulliCache::with_capacity(80);
        for n in 1..=80usize {
            let mut acc = Rational::zero();
            for k in 0..=n {
                acc += Rational::from(binomial(n as u64 + 1, k as i64)) * cache.get(k);
            }
            assert!(acc.is_zero(), "recurrence failed at n = {n}");
        }
    }

    #[test]
    fn odd_indices_vanish() {
        let cache = BernoulliCache::new();
        for k in 1..=39 {
            assert!(cache.get(2 * k + 1).is_zero());
        }
    }

    #[test]
    fn polynomial_examples() {
        let cache = BernoulliCache::new();
        assert_eq!(
            bernoulli_poly_eval(1, &rational(0, 1), &cache),
            rational(-1, 2)
        );
        assert_eq!(
            bernoulli_poly_eval(2, &rational(1, 1), &cache),
            rational(1, 6)
        );
        assert_eq!(
            bernoulli_poly_eval(3, &rational(1, 2), &cache),
            rational(0, 1)
        );
    }

    #[test]
    fn polynomial_half_argument_identity() {
        // B_m(1/2) = (2^{1-m} - 1) B_m
        let cache = BernoulliCache::new();
        let half = rational(1, 2);
        for m in 0..=30usize {
            let lhs = bernoulli_poly_eval(m, &half, &cache);
            let factor = rational(2, 1).pow(1 - m as i32) - Rational::one();
            assert_eq!(lhs, factor * cache.get(m), "m = {m}");
        }
    }

    #[test]
    fn polynomial_integral_vanishes() {
        let cache = BernoulliCache::new();
        for m in 1..=40 {
            let poly = BernoulliPolynomial::new(m, &cache);
            assert!(poly.integral_unit_interval().is_zero(), "m = {m}");
        }
    }

    #[test]
    fn full_range_moment_examples() {
        let cache = BernoulliCache::new();
        for m in [1usize, 2, 10] {
            assert!(full_range_moment_sum(m, &cache).is_zero(), "m = {m}");
        }
    }

    #[test]
    fn truncated_moment_examples() {
        let cache = BernoulliCache::new();
        assert_eq!(truncated_moment_sum(1, &cache), rational(1, 2));
        assert_eq!(truncated_moment_sum(2, &cache), rational(-1, 6));
        assert_eq!(truncated_moment_sum(3, &cache), rational(0, 1));
    }

    /// The l >= 1 moment sum is -B_m, not zero: at m = 1 it equals 1/2.
    /// Starting the sum at l = 0 is what makes it vanish.
    #[test]
    fn truncated_sum_at_one_is_half_not_zero() {
        let cache = BernoulliCache::new();
        let value = truncated_moment_sum(1, &cache);
        assert_eq!(value, rational(1, 2));
        assert!(!value.is_zero());
    }

    #[test]
    fn moment_sums_related_by_leading_term() {
        let cache = BernoulliCache::new();
        for m in 1..=40 {
            assert!(full_range_moment_sum(m, &cache).is_zero());
            assert_eq!(truncated_moment_sum(m, &cache), -cache.get(m));
        }
    }

    #[test]
    fn rubenstein_small_cases() {
        let cache = BernoulliCache::new();
        // n = 1: C(1,1) B_0 (-1) B_1 = 1/2 = -B_1
        // n = 2: 2 B_1 (-1) B_1 + B_0 B_2 = -1/2 + 1/6 = -1/3 = -2 B_2
        for n in 1..=40 {
            assert!(rubenstein_identity_check(n, &cache), "n = {n}");
        }
    }

    #[test]
    fn negative_sum_small_cases() {
        let cache = BernoulliCache::new();
        for p in 1..=40 {
            assert!(negative_bernoulli_sum_check(p, &cache), "p = {p}");
        }
    }

    #[test]
    fn symmetry_consequence() {
        let cache = BernoulliCache::new();
        for n in 0..=40 {
            assert!(binomial_bernoulli_symmetry_check(n, &cache), "n = {n}");
        }
    }

    #[test]
    fn cache_is_shareable_across_threads() {
        let cache = std::sync::Arc::new(BernoulliCache::new());
        let handles: Vec<_> = (0..4)
            .map(|i| {
                let c = std::sync::Arc::clone(&cache);
                std::thread::spawn(move || c.get(30 + i))
            })
            .collect();
        for h in handles {
            h.join().unwrap();
        }
        assert_eq!(cache.get(30), bernoulli_by_hand(30)[30]);
    }
}
