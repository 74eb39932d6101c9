//! Exact integer and rational combinatorics shared by every identity in the
//! crate: binomial coefficients and a few small closed-form binomial sums.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Exact arbitrary-precision fraction, always in canonical form
/// (gcd(|numerator|, denominator) = 1, denominator > 0).
pub type Rational = num_rational::BigRational;

/// Shorthand for building a `Rational` from small integers.
pub fn rational(numerator: i64, denominator: i64) -> Rational {
    Rational::new(BigInt::from(numerator), BigInt::from(denominator))
}

/// Binomial coefficient C(n, k) as an exact integer.
///
/// Out-of-range `k` (negative or above `n`) yields 0, so sums written with
/// C(n, -1) terms can be evaluated verbatim.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut c = BigInt::one();
    for i in 0..k {
        // exact at every step: c * (n - i) is divisible by (i + 1)
        c = c * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    c
}

/// Row n of Pascal's triangle: C(n, 0) ..= C(n, n).
pub fn binomial_row(n: u64) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = BigInt::one();
    row.push(c.clone());
    for k in 0..n {
        c = c * BigInt::from(n - k) / BigInt::from(k + 1);
        row.push(c.clone());
    }
    row
}

/// sum_{k=0}^{l} C(l, k) (-1)^k / (k + 1), exactly.
///
/// Closed form 1/(l + 1); evaluated term by term so callers can assert the
/// closed form against an independent route.
pub fn alternating_binomial_reciprocal_sum(l: u64) -> Rational {
    let mut acc = Rational::zero();
    for (k, c) in binomial_row(l).into_iter().enumerate() {
        let term = Rational::new(c, BigInt::from(k as u64 + 1));
        if k % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(7, 7), BigInt::one());
        assert_eq!(binomial(0, 0), BigInt::one());
    }

    #[test]
    fn binomial_out_of_range_is_zero() {
        assert_eq!(binomial(5, -1), BigInt::zero());
        assert_eq!(binomial(5, 6), BigInt::zero());
        assert_eq!(binomial(0, -3), BigInt::zero());
    }

    #[test]
    fn binomial_row_matches_single() {
        for n in 0..=20u64 {
            let row = binomial_row(n);
            assert_eq!(row.len(), n as usize + 1);
            for (k, c) in row.iter().enumerate() {
                assert_eq!(*c, binomial(n, k as i64));
            }
        }
    }

    #[test]
    fn reciprocal_sum_closed_form() {
        // l = 3: 1 - 3/2 + 1 - 1/4 = 1/4
        assert_eq!(alternating_binomial_reciprocal_sum(3), rational(1, 4));
        for l in 0..=40u64 {
            assert_eq!(
                alternating_binomial_reciprocal_sum(l),
                Rational::new(BigInt::one(), BigInt::from(l + 1))
            );
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn symmetry(n in 0u64..60, k in 0i64..60) {
                prop_assert_eq!(binomial(n, k), binomial(n, n as i64 - k));
            }

            #[test]
            fn pascal_rule(n in 1u64..60, k in 0i64..60) {
                prop_assert_eq!(
                    binomial(n, k),
                    binomial(n - 1, k - 1) + binomial(n - 1, k)
                );
            }
        }
    }
}
