//! The mutually inverse sequence transforms
//!
//!   a_n = sum_{k=0}^{n} C(n, k) b_k / (n - k + 1)
//!   b_n = sum_{k=0}^{n} C(n, k) B_{n-k} a_k
//!
//! acting on finite prefixes. The output length always equals the input
//! length, and the two maps invert each other exactly.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::bernoulli::BernoulliCache;
use crate::comb::{binomial_row, Rational};
use crate::error::{Error, Result};

/// Applies a_n = sum_{k=0}^{n} C(n, k) b_k / (n - k + 1) for each n.
pub fn riordan_forward(b: &[Rational]) -> Result<Vec<Rational>> {
    if b.is_empty() {
        return Err(Error::EmptyInput { what: "sequence b" });
    }
    let mut a = Vec::with_capacity(b.len());
    for n in 0..b.len() {
        let row = binomial_row(n as u64);
        let mut acc = Rational::zero();
        for (k, bk) in b.iter().take(n + 1).enumerate() {
            acc += Rational::new(row[k].clone(), BigInt::from(n - k + 1)) * bk;
        }
        a.push(acc);
    }
    Ok(a)
}

/// Applies b_n = sum_{k=0}^{n} C(n, k) B_{n-k} a_k for each n.
pub fn riordan_inverse(a: &[Rational], cache: &BernoulliCache) -> Result<Vec<Rational>> {
    if a.is_empty() {
        return Err(Error::EmptyInput { what: "sequence a" });
    }
    cache.ensure(a.len() - 1);
    let mut b = Vec::with_capacity(a.len());
    for n in 0..a.len() {
        let row = binomial_row(n as u64);
        let mut acc = Rational::zero();
        for (k, ak) in a.iter().take(n + 1).enumerate() {
            acc += Rational::from(row[k].clone()) * cache.get(n - k) * ak;
        }
        b.push(acc);
    }
    Ok(b)
}

/// A pair of equal-length sequences related by the inverse transforms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequencePair {
    pub a: Vec<Rational>,
    pub b: Vec<Rational>,
}

impl SequencePair {
    /// Builds the pair from `b` by the forward transform.
    pub fn from_b(b: Vec<Rational>, _cache: &BernoulliCache) -> Result<Self> {
        let a = riordan_forward(&b)?;
        Ok(SequencePair { a, b })
    }

    /// Builds the pair from `a` by the inverse transform.
    pub fn from_a(a: Vec<Rational>, cache: &BernoulliCache) -> Result<Self> {
        let b = riordan_inverse(&a, cache)?;
        Ok(SequencePair { a, b })
    }

    /// Exact verification that both transform directions hold.
    pub fn verify(&self, cache: &BernoulliCache) -> bool {
        riordan_forward(&self.b).map(|a| a == self.a).unwrap_or(false)
            && riordan_inverse(&self.a, cache)
                .map(|b| b == self.b)
                .unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comb::rational;

    #[test]
    fn forward_unit_sequence() {
        let b = vec![
            rational(1, 1),
            rational(0, 1),
            rational(0, 1),
            rational(0, 1),
        ];
        let a = riordan_forward(&b).unwrap();
        assert_eq!(
            a,
            vec![
                rational(1, 1),
                rational(1, 2),
                rational(1, 3),
                rational(1, 4)
            ]
        );
    }

    #[test]
    fn forward_shifted_unit() {
        let b = vec![rational(0, 1), rational(1, 1), rational(0, 1)];
        let a = riordan_forward(&b).unwrap();
        assert_eq!(a, vec![rational(0, 1), rational(1, 1), rational(1, 1)]);
    }

    #[test]
    fn forward_zero_is_zero() {
        let b = vec![rational(0, 1); 8];
        assert_eq!(riordan_forward(&b).unwrap(), b);
    }

    #[test]
    fn inverse_recovers_unit() {
        let cache = BernoulliCache::new();
        let a = vec![
            rational(1, 1),
            rational(1, 2),
            rational(1, 3),
            rational(1, 4),
        ];
        let b = riordan_inverse(&a, &cache).unwrap();
        assert_eq!(
            b,
            vec![
                rational(1, 1),
                rational(0, 1),
                rational(0, 1),
                rational(0, 1)
            ]
        );
    }

    #[test]
    fn empty_input_rejected() {
        let cache = BernoulliCache::new();
        assert!(riordan_forward(&[]).is_err());
        assert!(riordan_inverse(&[], &cache).is_err());
    }

    #[test]
    fn pair_verifies() {
        let cache = BernoulliCache::new();
        let pair = SequencePair::from_b(
            vec![rational(3, 7), rational(-2, 5), rational(11, 3)],
            &cache,
        )
        .unwrap();
        assert!(pair.verify(&cache));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn rational_seq() -> impl Strategy<Value = Vec<Rational>> {
            prop::collection::vec((-200i64..200, 1i64..50), 1..=30)
                .prop_map(|v| v.into_iter().map(|(n, d)| rational(n, d)).collect())
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn round_trip_inverse_of_forward(b in rational_seq()) {
                let cache = BernoulliCache::new();
                let a = riordan_forward(&b).unwrap();
                prop_assert_eq!(riordan_inverse(&a, &cache).unwrap(), b);
            }

            #[test]
            fn round_trip_forward_of_inverse(a in rational_seq()) {
                let cache = BernoulliCache::new();
                let b = riordan_inverse(&a, &cache).unwrap();
                prop_assert_eq!(riordan_forward(&b).unwrap(), a);
            }
        }
    }
}
