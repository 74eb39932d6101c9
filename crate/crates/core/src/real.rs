//! Arbitrary-precision binary floating point and its evaluation policy.
//!
//! `BigReal` wraps a binary big-float together with its precision in bits;
//! arithmetic between two values runs at the larger of the two precisions
//! with round-to-nearest-even. Decimal input and output go through exact
//! rational arithmetic so that formatting is reproducible bit for bit.

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::comb::Rational;
use crate::error::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    static CONSTS: OnceLock<Mutex<Consts>> = OnceLock::new();
    let cell = CONSTS.get_or_init(|| Mutex::new(Consts::new().expect("constants cache")));
    let mut guard = cell.lock().unwrap();
    f(&mut guard)
}

/// Arbitrary-precision binary float carrying its own precision.
#[derive(Clone, Debug)]
pub struct BigReal {
    value: BigFloat,
    bits: usize,
}

impl BigReal {
    fn wrap(value: BigFloat, bits: usize) -> Self {
        debug_assert!(!value.is_nan() && !value.is_inf(), "non-finite BigReal");
        BigReal { value, bits }
    }

    pub fn zero(bits: usize) -> Self {
        Self::wrap(BigFloat::from_u64(0, bits), bits)
    }

    pub fn one(bits: usize) -> Self {
        Self::wrap(BigFloat::from_u64(1, bits), bits)
    }

    pub fn from_u64(v: u64, bits: usize) -> Self {
        Self::wrap(BigFloat::from_u64(v, bits), bits)
    }

    pub fn from_i64(v: i64, bits: usize) -> Self {
        Self::wrap(BigFloat::from_i64(v, bits), bits)
    }

    /// Exact power of two 2^k at the given precision.
    pub fn pow2(k: i64, bits: usize) -> Self {
        let mut one = BigFloat::from_u64(1, bits);
        let e = one.exponent().unwrap();
        one.set_exponent(e + i32::try_from(k).expect("pow2 exponent"));
        Self::wrap(one, bits)
    }

    /// Exact conversion from a big integer (the mantissa is never truncated).
    pub fn from_bigint(n: &BigInt, bits: usize) -> Self {
        let mag = n.magnitude();
        if mag.is_zero() {
            return Self::zero(bits);
        }
        let len = mag.bits() as usize;
        let shift = (64 - (len % 64)) % 64;
        let shifted: BigUint = mag << shift;
        let words: Vec<u64> = shifted.iter_u64_digits().collect();
        let sign = if n.is_negative() { Sign::Neg } else { Sign::Pos };
        let value = BigFloat::from_words(&words, sign, len as i32);
        Self::wrap(value, bits.max(len))
    }

    /// Correctly rounded conversion from an exact rational.
    pub fn from_rational(r: &Rational, bits: usize) -> Self {
        let num = Self::from_bigint(r.numer(), bits);
        if r.denom().is_one() {
            return Self::wrap(num.value, bits);
        }
        let den = Self::from_bigint(r.denom(), bits);
        Self::wrap(num.value.div(&den.value, bits, RM), bits)
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    /// Rounds (or zero-extends) to the given precision.
    pub fn with_bits(&self, bits: usize) -> Self {
        let mut v = self.value.clone();
        v.set_precision(bits.max(1), RM).expect("set precision");
        Self::wrap(v, bits)
    }

    fn working(&self, rhs: &Self) -> usize {
        self.bits.max(rhs.bits)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let p = self.working(rhs);
        Self::wrap(self.value.add(&rhs.value, p, RM), p)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let p = self.working(rhs);
        Self::wrap(self.value.sub(&rhs.value, p, RM), p)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let p = self.working(rhs);
        Self::wrap(self.value.mul(&rhs.value, p, RM), p)
    }

    pub fn div(&self, rhs: &Self) -> Self {
        assert!(!rhs.is_zero(), "division by zero");
        let p = self.working(rhs);
        Self::wrap(self.value.div(&rhs.value, p, RM), p)
    }

    pub fn neg(&self) -> Self {
        Self::wrap(self.value.neg(), self.bits)
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Exact scaling by 2^k.
    pub fn mul_pow2(&self, k: i32) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = self.value.clone();
        let e = v.exponent().unwrap();
        v.set_exponent(e + k);
        Self::wrap(v, self.bits)
    }

    /// Integer power with 0^0 = 1.
    pub fn powi(&self, n: usize) -> Self {
        if n == 0 {
            return Self::one(self.bits);
        }
        Self::wrap(self.value.powi(n, self.bits, RM), self.bits)
    }

    /// Integer power allowing negative exponents (reciprocal powers).
    pub fn powi_signed(&self, n: i64) -> Self {
        if n >= 0 {
            self.powi(n as usize)
        } else {
            self.powi((-n) as usize).reciprocal()
        }
    }

    pub fn reciprocal(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Self::wrap(self.value.reciprocal(self.bits, RM), self.bits)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.value.is_negative() && !self.value.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.value.is_positive() && !self.value.is_zero()
    }

    pub fn cmp(&self, rhs: &Self) -> Ordering {
        match self.value.cmp(&rhs.value) {
            Some(s) if s < 0 => Ordering::Less,
            Some(s) if s > 0 => Ordering::Greater,
            Some(_) => Ordering::Equal,
            None => panic!("comparison of non-finite values"),
        }
    }

    pub fn max_by_abs(&self, rhs: &Self) -> Self {
        if self.abs().cmp(&rhs.abs()) == Ordering::Less {
            rhs.clone()
        } else {
            self.clone()
        }
    }

    /// Binary exponent e with |x| in [2^(e-1), 2^e); 0 for zero.
    pub fn magnitude_exponent(&self) -> i32 {
        if self.is_zero() {
            0
        } else {
            self.value.exponent().unwrap()
        }
    }

    /// Exact rational value of this float.
    pub fn to_rational(&self) -> Rational {
        let Some((words, _, sign, e, _)) = self.value.as_raw_parts() else {
            panic!("non-finite value");
        };
        let mut bytes = Vec::with_capacity(words.len() * 8);
        for w in words {
            bytes.extend_from_slice(&w.to_le_bytes());
        }
        let mag = BigUint::from_bytes_le(&bytes);
        if mag.is_zero() {
            return Rational::zero();
        }
        let mut num = BigInt::from(mag);
        if sign == Sign::Neg {
            num = -num;
        }
        let shift = e as i64 - (words.len() as i64) * 64;
        if shift >= 0 {
            Rational::from(num << shift)
        } else {
            Rational::new(num, BigInt::one() << (-shift))
        }
    }

    /// Approximate f64 value, for diagnostics only.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let r = self.with_bits(64).to_rational();
        let num = r.numer();
        let den = r.denom();
        let scale = num.bits().max(den.bits()).saturating_sub(512);
        let n = (num >> scale).to_f64().unwrap_or(f64::NAN);
        let d = (den >> scale).to_f64().unwrap_or(f64::NAN);
        n / d
    }

    /// Natural logarithm at this value's precision (positive input).
    pub(crate) fn ln(&self, bits: usize) -> Self {
        assert!(self.is_positive(), "ln of non-positive value");
        let v = with_consts(|cc| self.value.ln(bits, RM, cc));
        Self::wrap(v, bits)
    }

    /// Parses a plain decimal string (sign, digits, optional fraction and
    /// exponent) exactly, then rounds once to `bits`.
    pub fn from_decimal_str(s: &str, bits: usize) -> Result<Self> {
        let r = parse_decimal_rational(s)?;
        Ok(Self::from_rational(&r, bits))
    }

    /// Decimal rendering with `sig_digits` significant digits,
    /// round-to-nearest-even, explicit sign. Fixed-point notation below
    /// magnitude 10^6, scientific notation at or above it.
    pub fn to_decimal_string(&self, sig_digits: usize) -> String {
        assert!(sig_digits >= 1);
        if self.is_zero() {
            return "+0".to_string();
        }
        let sign = if self.is_negative() { '-' } else { '+' };
        let mag = self.to_rational().abs();

        // decimal exponent: 10^e10 <= mag < 10^(e10+1)
        let mut e10 =
            (((self.magnitude_exponent() as f64) - 1.0) * std::f64::consts::LOG10_2).floor() as i64;
        while mag < pow10_rational(e10) {
            e10 -= 1;
        }
        while mag >= pow10_rational(e10 + 1) {
            e10 += 1;
        }

        // digit string: round mag * 10^(sig-1-e10) to a sig-digit integer
        let scaled = &mag * pow10_rational(sig_digits as i64 - 1 - e10);
        let mut n = round_half_even(scaled.numer(), scaled.denom());
        if n == BigInt::from(10u32).pow(sig_digits as u32) {
            n = BigInt::from(10u32).pow(sig_digits as u32 - 1);
            e10 += 1;
        }
        let digits = n.to_string();
        debug_assert_eq!(digits.len(), sig_digits);

        if e10 >= 6 {
            let exp = format!("{:+03}", e10);
            if digits.len() == 1 {
                format!("{sign}{digits}e{exp}")
            } else {
                format!("{sign}{}.{}e{exp}", &digits[..1], &digits[1..])
            }
        } else if e10 >= 0 {
            let int_len = (e10 + 1) as usize;
            if digits.len() <= int_len {
                let mut int = digits;
                int.push_str(&"0".repeat(int_len - int.len()));
                format!("{sign}{int}")
            } else {
                format!("{sign}{}.{}", &digits[..int_len], &digits[int_len..])
            }
        } else {
            format!("{sign}0.{}{}", "0".repeat((-e10 - 1) as usize), digits)
        }
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_string(32))
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn pow10_rational(e: i64) -> Rational {
    let p = BigInt::from(10u32).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        Rational::from(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

fn round_half_even(num: &BigInt, den: &BigInt) -> BigInt {
    debug_assert!(num >= &BigInt::zero() && den > &BigInt::zero());
    let (q, r) = num.div_rem(den);
    match (&r * 2u32).cmp(den) {
        Ordering::Less => q,
        Ordering::Greater => q + 1,
        Ordering::Equal => {
            if q.is_even() {
                q
            } else {
                q + 1
            }
        }
    }
}

/// Parses `[+-]digits[.digits][eE[+-]digits]` into an exact rational.
pub fn parse_decimal_rational(s: &str) -> Result<Rational> {
    let err = || Error::ParseNumber {
        input: s.to_string(),
    };
    let t = s.trim();
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = t[i + 1..].parse().map_err(|_| err())?;
            (&t[..i], e)
        }
        None => (t, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match body.find('.') {
        Some(i) => (&body[..i], &body[i + 1..]),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(err());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num: BigInt = digits.parse().map_err(|_| err())?;
    if neg {
        num = -num;
    }
    Ok(Rational::from(num) * pow10_rational(exp - frac_part.len() as i64))
}

/// Evaluation policy for series and formula computations.
///
/// `working_bits` is the requested precision plus at least 64 guard bits;
/// `target_tolerance` is the absolute tolerance series aim for; `max_terms`
/// caps any single summation.
#[derive(Clone, Debug)]
pub struct PrecisionContext {
    working_bits: usize,
    guard_bits: usize,
    target_tolerance: BigReal,
    max_terms: usize,
}

impl PrecisionContext {
    pub const DEFAULT_GUARD_BITS: usize = 64;

    /// Policy for a requested precision of `requested_bits`: 64 guard bits,
    /// tolerance 2^-requested, term cap 10 * working bits.
    pub fn new(requested_bits: usize) -> Self {
        assert!(requested_bits >= 8, "requested precision too small");
        let guard_bits = Self::DEFAULT_GUARD_BITS;
        let working_bits = requested_bits + guard_bits;
        PrecisionContext {
            working_bits,
            guard_bits,
            target_tolerance: BigReal::pow2(-(requested_bits as i64), working_bits),
            max_terms: 10 * working_bits,
        }
    }

    pub fn working_bits(&self) -> usize {
        self.working_bits
    }

    pub fn guard_bits(&self) -> usize {
        self.guard_bits
    }

    pub fn requested_bits(&self) -> usize {
        self.working_bits - self.guard_bits
    }

    pub fn target_tolerance(&self) -> &BigReal {
        &self.target_tolerance
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    pub fn with_tolerance(mut self, tolerance: BigReal) -> Self {
        assert!(tolerance.is_positive(), "tolerance must be positive");
        self.target_tolerance = tolerance;
        self
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Self {
        assert!(max_terms >= 1);
        self.max_terms = max_terms;
        self
    }

    /// Absolute floor used when comparing two independently computed values:
    /// 2^(-requested + 8), guarding against correlated rounding.
    pub fn equivalence_floor(&self) -> BigReal {
        BigReal::pow2(-(self.requested_bits() as i64) + 8, self.working_bits)
    }

    /// Rounding-noise floor at working precision.
    pub fn rounding_floor(&self) -> BigReal {
        BigReal::pow2(-(self.working_bits as i64) + 8, self.working_bits)
    }

    /// Roughly -log2(target_tolerance), for sizing term counts.
    pub fn tolerance_bits(&self) -> usize {
        let e = self.target_tolerance.magnitude_exponent();
        if e >= 0 {
            1
        } else {
            (-e) as usize
        }
    }
}

/// Natural logarithm of a positive integer, correct to within 1 ulp at the
/// context's working precision. `log_integer(1, ctx)` is exactly zero.
pub fn log_integer(k: u64, ctx: &PrecisionContext) -> BigReal {
    assert!(k >= 1, "log_integer requires k >= 1");
    if k == 1 {
        return BigReal::zero(ctx.working_bits());
    }
    BigReal::from_u64(k, ctx.working_bits()).ln(ctx.working_bits())
}

/// Memoized natural logarithm of a positive integer at an explicit
/// precision. Keys are (k, word-aligned bits), so repeated series
/// evaluations share the expensive log computations.
pub(crate) fn ln_integer_memo(k: u64, bits: usize) -> BigReal {
    assert!(k >= 1);
    static MEMO: OnceLock<Mutex<std::collections::HashMap<(u64, usize), BigFloat>>> =
        OnceLock::new();
    if k == 1 {
        return BigReal::zero(bits);
    }
    let aligned = bits.div_ceil(64) * 64;
    let cell = MEMO.get_or_init(|| Mutex::new(std::collections::HashMap::new()));
    {
        let memo = cell.lock().unwrap();
        if let Some(v) = memo.get(&(k, aligned)) {
            return BigReal::wrap(v.clone(), bits);
        }
    }
    let v = BigReal::from_u64(k, aligned).ln(aligned);
    cell.lock()
        .unwrap()
        .insert((k, aligned), v.value.clone());
    BigReal::wrap(v.value, bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comb::rational;

    #[test]
    fn exact_small_values() {
        let x = BigReal::from_rational(&rational(3, 8), 128);
        assert_eq!(x.to_rational(), rational(3, 8));
        let y = BigReal::from_i64(-6, 64);
        assert_eq!(y.to_rational(), rational(-6, 1));
        assert_eq!(BigReal::pow2(-4, 64).to_rational(), rational(1, 16));
    }

    #[test]
    fn arithmetic_runs_at_max_precision() {
        let a = BigReal::from_u64(1, 128);
        let b = BigReal::from_u64(3, 320);
        assert_eq!(a.add(&b).bits(), 320);
        assert_eq!(b.div(&a).bits(), 320);
    }

    #[test]
    fn mul_pow2_is_exact() {
        let x = BigReal::from_rational(&rational(5, 3), 192);
        let y = x.mul_pow2(-7);
        assert_eq!(y.to_rational(), x.to_rational() / rational(128, 1));
    }

    #[test]
    fn powi_signed_handles_edges() {
        let x = BigReal::from_u64(2, 64);
        assert_eq!(x.powi(0).to_rational(), rational(1, 1));
        assert_eq!(x.powi_signed(-2).to_rational(), rational(1, 4));
        let zero = BigReal::zero(64);
        assert_eq!(zero.powi(0).to_rational(), rational(1, 1));
        assert!(zero.powi(3).is_zero());
    }

    #[test]
    fn bigint_conversion_round_trips() {
        let n: BigInt = "-123456789012345678901234567890123".parse().unwrap();
        let x = BigReal::from_bigint(&n, 256);
        assert_eq!(x.to_rational(), Rational::from(n));
    }

    #[test]
    fn decimal_rendering() {
        let x = BigReal::from_rational(&rational(1, 8), 128);
        assert_eq!(x.to_decimal_string(4), "+0.1250");
        assert_eq!(x.neg().to_decimal_string(3), "-0.125");
        let big = BigReal::from_u64(12_345_678, 128);
        assert_eq!(big.to_decimal_string(6), "+1.23457e+07");
        let six_digits = BigReal::from_u64(999_999, 128);
        assert_eq!(six_digits.to_decimal_string(6), "+999999");
        assert_eq!(six_digits.to_decimal_string(7), "+999999.0");
        let rolled = BigReal::from_u64(999_999, 128);
        assert_eq!(rolled.to_decimal_string(3), "+1.00e+06");
        assert_eq!(BigReal::zero(64).to_decimal_string(10), "+0");
        let tiny = BigReal::from_rational(&rational(1, 4096), 128);
        assert_eq!(tiny.to_decimal_string(5), "+0.00024414");
    }

    #[test]
    fn decimal_rounding_is_half_even() {
        // 0.15625 = 5/32: to two digits the scaled value is 15.625 -> 16
        let x = BigReal::from_rational(&rational(5, 32), 128);
        assert_eq!(x.to_decimal_string(2), "+0.16");
        // exact tie 0.25 -> one digit: 2.5 rounds to the even digit 2
        let tie = BigReal::from_rational(&rational(1, 4), 128);
        assert_eq!(tie.to_decimal_string(1), "+0.2");
        // exact tie 0.75 -> 7.5 rounds up to 8
        let tie_up = BigReal::from_rational(&rational(3, 4), 128);
        assert_eq!(tie_up.to_decimal_string(1), "+0.8");
    }

    #[test]
    fn decimal_parsing() {
        assert_eq!(parse_decimal_rational("1.5").unwrap(), rational(3, 2));
        assert_eq!(parse_decimal_rational("-0.25").unwrap(), rational(-1, 4));
        assert_eq!(parse_decimal_rational("1e-3").unwrap(), rational(1, 1000));
        assert_eq!(
            parse_decimal_rational("+2.5e2").unwrap(),
            rational(250, 1)
        );
        assert!(parse_decimal_rational("abc").is_err());
        assert!(parse_decimal_rational("").is_err());
        assert!(parse_decimal_rational("1.2.3").is_err());
    }

    #[test]
    fn parse_format_round_trip() {
        let x = BigReal::from_rational(&rational(-355, 113), 192);
        let s = x.to_decimal_string(60);
        let y = BigReal::from_decimal_str(&s, 192).unwrap();
        let diff = x.sub(&y).abs();
        assert!(diff.cmp(&BigReal::pow2(-180, 192)) == Ordering::Less);
    }

    #[test]
    fn log_of_one_is_exact_zero() {
        let ctx = PrecisionContext::new(128);
        assert!(log_integer(1, &ctx).is_zero());
    }

    #[test]
    fn log_two_matches_f64() {
        let ctx = PrecisionContext::new(128);
        let ln2 = log_integer(2, &ctx);
        let diff = ln2.sub(&BigReal::from_decimal_str("0.6931471805599453", 192).unwrap());
        assert!(diff.abs().to_f64() < 1e-15);
        assert!((ln2.to_f64() - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn log_four_is_twice_log_two() {
        let ctx = PrecisionContext::new(200);
        let ln2 = log_integer(2, &ctx);
        let ln4 = log_integer(4, &ctx);
        let diff = ln4.sub(&ln2.mul_pow2(1)).abs();
        // within 2 ulp at working precision
        let ulp2 = BigReal::pow2(2 - ctx.working_bits() as i64, 64);
        assert!(diff.cmp(&ulp2) != Ordering::Greater);
    }

    #[test]
    fn memoized_log_matches_direct() {
        let ctx = PrecisionContext::new(128);
        let direct = log_integer(7, &ctx);
        let memoized = ln_integer_memo(7, ctx.working_bits());
        assert_eq!(direct.to_rational(), memoized.to_rational());
        // second lookup hits the cache and must be identical
        let again = ln_integer_memo(7, ctx.working_bits());
        assert_eq!(memoized.to_rational(), again.to_rational());
    }

    #[test]
    fn context_invariants() {
        let ctx = PrecisionContext::new(256);
        assert_eq!(ctx.working_bits(), 320);
        assert_eq!(ctx.requested_bits(), 256);
        assert!(ctx.guard_bits() >= 64);
        assert_eq!(ctx.max_terms(), 3200);
        assert!(ctx.target_tolerance().is_positive());
        assert_eq!(
            ctx.target_tolerance().to_rational(),
            BigReal::pow2(-256, 64).to_rational()
        );
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn rational_construction_is_correctly_rounded(
                n in -100_000i64..100_000,
                d in 1i64..100_000,
                bits in 64usize..256,
            ) {
                let r = rational(n, d);
                let x = BigReal::from_rational(&r, bits);
                let diff = (x.to_rational() - &r).abs();
                // round-to-nearest: error at most one half ulp ~ |r| * 2^-bits
                let bound = r.abs() * rational(1, 2).pow(bits as i32 - 1)
                    + rational(1, 2).pow(bits as i32 * 2);
                prop_assert!(diff <= bound);
            }

            #[test]
            fn formatting_round_trips_at_full_digits(
                n in -1_000_000i64..1_000_000,
                d in 1i64..1_000_000,
            ) {
                prop_assume!(n != 0);
                let x = BigReal::from_rational(&rational(n, d), 128);
                let s = x.to_decimal_string(50);
                let y = BigReal::from_decimal_str(&s, 160).unwrap();
                let diff = x.sub(&y).abs();
                let scale = x.abs();
                prop_assert!(diff.cmp(&scale.mul_pow2(-120)) == Ordering::Less);
            }
        }
    }
}
