//! Exact rationals and base-n expansions of points of `[0,1]`.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::word::{check_base, FiniteWord};

/// Parses `p/q` or a bare integer `p`. The result is reduced.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::MalformedRational(s.to_string());
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = num.parse().map_err(|_| bad())?;
    let q: BigInt = den.parse().map_err(|_| bad())?;
    if !q.is_positive() {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

/// `p/q` in lowest terms with `q >= 1`; integers keep the `/1`.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub(crate) fn pow2(k: usize) -> BigInt {
    BigInt::one() << k
}

/// `(0.w)_n = Σ w_i n^{-(i+1)}`.
pub fn word_value(w: &FiniteWord) -> BigRational {
    let base = BigInt::from(w.base());
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for &d in w.digits() {
        num = num * &base + BigInt::from(d);
        den *= &base;
    }
    BigRational::new(num, den)
}

/// The first `k` digits of the base-`n` expansion of `x ∈ [0,1]`.
///
/// Points with a terminating expansion use the representation whose digits
/// are ultimately `n-1` (so `1/2 = 0.0111…` in base 2); `0` is all zeros and
/// `1` is all `n-1`.
pub fn expand(x: &BigRational, base: u8, k: usize) -> Result<FiniteWord> {
    check_base(u32::from(base))?;
    if x.is_negative() || *x > BigRational::one() {
        return Err(Error::OutOfRange { value: format_rational(x), range: "[0, 1]".into() });
    }
    if x.is_zero() {
        return FiniteWord::repeat_symbol(0, k, base);
    }
    // Invariant: 0 < num/den <= 1. Next digit is ceil(n·r) - 1.
    let n = BigInt::from(base);
    let den = x.denom().clone();
    let mut num = x.numer().clone();
    let mut digits = Vec::with_capacity(k);
    for _ in 0..k {
        let scaled = &num * &n;
        let ceil = (&scaled + &den - BigInt::one()) / &den;
        let d = ceil - BigInt::one();
        num = scaled - &d * &den;
        digits.push(d.to_u8().expect("digit below base"));
    }
    FiniteWord::new(digits, base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(format_rational(&parse_rational("6/4").unwrap()), "3/2");
        assert_eq!(format_rational(&parse_rational("3").unwrap()), "3/1");
        assert_eq!(format_rational(&parse_rational("0").unwrap()), "0/1");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1/-2").is_err());
        assert!(parse_rational("a/b").is_err());
    }

    #[test]
    fn expansion_examples() {
        assert_eq!(expand(&ratio(1, 2), 2, 5).unwrap().to_string(), "01111");
        assert_eq!(expand(&ratio(0, 1), 2, 4).unwrap().to_string(), "0000");
        assert_eq!(expand(&ratio(1, 3), 2, 6).unwrap().to_string(), "010101");
        assert_eq!(expand(&ratio(1, 1), 2, 3).unwrap().to_string(), "111");
        assert_eq!(expand(&ratio(1, 2), 3, 4).unwrap().to_string(), "1111");
        assert_eq!(expand(&ratio(1, 3), 3, 4).unwrap().to_string(), "0222");
        assert!(expand(&ratio(3, 2), 2, 4).is_err());
    }

    #[test]
    fn word_values() {
        assert_eq!(word_value(&"01".parse().unwrap()), ratio(1, 4));
        assert_eq!(word_value(&"0110".parse().unwrap()), ratio(3, 8));
        assert_eq!(word_value(&FiniteWord::parse_in_base("1", 3).unwrap()), ratio(1, 3));
    }

    proptest! {
        #[test]
        fn expansion_prefixes_nest_and_bracket(p in 0i64..1000, q in 1i64..1000, k in 1usize..40) {
            prop_assume!(p <= q);
            let x = ratio(p, q);
            let long = expand(&x, 2, k + 5).unwrap();
            let short = expand(&x, 2, k).unwrap();
            prop_assert_eq!(long.prefix(k), short.clone());
            let lo = word_value(&short);
            let width = BigRational::new(BigInt::one(), pow2(k));
            prop_assert!(lo <= x);
            prop_assert!(x <= &lo + width);
        }
    }
}
