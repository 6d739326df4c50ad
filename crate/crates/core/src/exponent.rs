//! Exact critical exponents of finite words.
//!
//! For a finite word the supremum of the rationals `r` such that `w`
//! contains an `r`-power is attained, and equals the maximum over subwords
//! `u` of `|u| / per(u)` where `per` is the smallest period. For a fixed
//! period `q`, the best subword is a maximal stretch of positions with
//! `w[j] = w[j+q]`; scanning each diagonal once gives every such stretch,
//! so the engine runs in `O(n²)` time with `O(1)` extra space.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::expansion::{format_rational, parse_rational};
use crate::stream::StreamWord;
use crate::word::FiniteWord;

/// Default length bound for [`critical_exponent_oracle`].
pub const ORACLE_DEFAULT_BOUND: usize = 64;

/// A critical exponent: an exact nonnegative rational or `+∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExponentValue {
    Finite(BigRational),
    Infinite,
}

impl ExponentValue {
    pub fn zero() -> Self {
        Self::Finite(BigRational::zero())
    }

    pub fn from_integer(n: u64) -> Self {
        Self::Finite(BigRational::from_integer(BigInt::from(n)))
    }

    /// `p/q`, reduced. Panics on `q = 0`.
    pub fn from_ratio(p: u64, q: u64) -> Self {
        Self::Finite(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn from_rational(r: BigRational) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::OutOfRange { value: format_rational(&r), range: "[0, +inf]".into() });
        }
        Ok(Self::Finite(r))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Self::Infinite)
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Self::Finite(r) => Some(r),
            Self::Infinite => None,
        }
    }

    /// `1/E` with `1/∞ = 0`. The reciprocal of `0` is reported as `None`.
    pub fn reciprocal(&self) -> Option<BigRational> {
        match self {
            Self::Infinite => Some(BigRational::zero()),
            Self::Finite(r) if r.is_zero() => None,
            Self::Finite(r) => Some(r.recip()),
        }
    }

    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        match self {
            Self::Infinite => Ordering::Greater,
            Self::Finite(v) => v.cmp(r),
        }
    }
}

impl Ord for ExponentValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Self::Infinite, Self::Infinite) => Ordering::Equal,
            (Self::Infinite, _) => Ordering::Greater,
            (_, Self::Infinite) => Ordering::Less,
            (Self::Finite(a), Self::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for ExponentValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl serde::Serialize for ExponentValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl fmt::Display for ExponentValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(r) => f.write_str(&format_rational(r)),
            Self::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for ExponentValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "+inf" | "infinity" => Ok(Self::Infinite),
            other => Self::from_rational(parse_rational(other)?),
        }
    }
}

/// `w[start..start+length)` has period `period`; `length/period` is the
/// exponent it certifies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct PowerWitness {
    pub start: usize,
    pub length: usize,
    pub period: usize,
}

impl PowerWitness {
    pub fn exponent(&self) -> ExponentValue {
        ExponentValue::from_ratio(self.length as u64, self.period as u64)
    }

    /// Replays the witness against `w`.
    pub fn verify(&self, w: &FiniteWord) -> bool {
        let Some(end) = self.start.checked_add(self.length) else { return false };
        if self.period == 0 || self.length == 0 || end > w.len() {
            return false;
        }
        let d = &w.digits()[self.start..end];
        (0..self.length.saturating_sub(self.period)).all(|i| d[i] == d[i + self.period])
    }
}

/// Whether `w` (of length `p`) is a `p/q`-power, i.e. has period `q`.
pub fn is_power(w: &FiniteWord, p: usize, q: usize) -> Result<bool> {
    if p != w.len() {
        return Err(Error::LengthMismatch { p, len: w.len() });
    }
    if p == 0 {
        return Err(Error::EmptyWord);
    }
    if q == 0 {
        return Err(Error::ZeroPeriod);
    }
    if q > p {
        return Ok(false);
    }
    let d = w.digits();
    Ok((0..p - q).all(|i| d[i] == d[i + q]))
}

#[inline]
pub(crate) fn ratio_cmp(p1: u64, q1: u64, p2: u64, q2: u64) -> Ordering {
    (u128::from(p1) * u128::from(q2)).cmp(&(u128::from(p2) * u128::from(q1)))
}

/// Witness order among maximizers: smallest start, then largest length, then
/// smallest period.
fn witness_preferred(a: &PowerWitness, b: &PowerWitness) -> bool {
    (a.start, std::cmp::Reverse(a.length), a.period) < (b.start, std::cmp::Reverse(b.length), b.period)
}

/// `E(w)` together with one maximizing witness (`None` for `ε`).
pub fn critical_exponent(w: &FiniteWord) -> (ExponentValue, Option<PowerWitness>) {
    let d = w.digits();
    let n = d.len();
    if n == 0 {
        return (ExponentValue::zero(), None);
    }
    let mut best = PowerWitness { start: 0, length: n, period: n };
    for q in 1..n {
        let mut j = 0;
        while j + q < n {
            if d[j] != d[j + q] {
                j += 1;
                continue;
            }
            let start = j;
            while j + q < n && d[j] == d[j + q] {
                j += 1;
            }
            let cand = PowerWitness { start, length: j - start + q, period: q };
            match ratio_cmp(cand.length as u64, q as u64, best.length as u64, best.period as u64) {
                Ordering::Greater => best = cand,
                Ordering::Equal if witness_preferred(&cand, &best) => best = cand,
                _ => {}
            }
        }
    }
    (best.exponent(), Some(best))
}

/// Exhaustive reference: every `(start, length)` pair, smallest period found
/// by trying each candidate period in turn. Rejects words longer than
/// [`ORACLE_DEFAULT_BOUND`].
pub fn critical_exponent_oracle(w: &FiniteWord) -> Result<ExponentValue> {
    critical_exponent_oracle_bounded(w, ORACLE_DEFAULT_BOUND)
}

pub fn critical_exponent_oracle_bounded(w: &FiniteWord, bound: usize) -> Result<ExponentValue> {
    if w.len() > bound {
        return Err(Error::OracleBound { len: w.len(), bound });
    }
    let d = w.digits();
    let n = d.len();
    let (mut num, mut den) = (0u64, 1u64);
    for start in 0..n {
        for len in 1..=n - start {
            let u = &d[start..start + len];
            let per = (1..=len)
                .find(|&q| (0..len - q).all(|i| u[i] == u[i + q]))
                .expect("len is always a period");
            // len/per > num/den
            if (len as u64) * den > num * (per as u64) {
                num = len as u64;
                den = per as u64;
            }
        }
    }
    Ok(ExponentValue::from_ratio(num, den))
}

/// Incremental critical exponent under right extension.
///
/// `runs[q-1]` is the length of the longest suffix with period `q`; one
/// appended symbol updates every entry in `O(1)`, so extension costs `O(ℓ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionState {
    digits: Vec<u8>,
    base: u8,
    runs: Vec<u32>,
    best_len: u64,
    best_period: u64,
}

impl ExtensionState {
    pub fn new(base: u8) -> Self {
        Self { digits: Vec::new(), base, runs: Vec::new(), best_len: 0, best_period: 1 }
    }

    pub fn from_word(w: &FiniteWord) -> Self {
        let mut s = Self::new(w.base());
        for &a in w.digits() {
            s.push(a);
        }
        s
    }

    /// State for `w·a`.
    pub fn extend(&self, a: u8) -> Result<Self> {
        if a >= self.base {
            return Err(Error::DigitOutOfRange { position: self.len(), digit: u32::from(a), base: self.base });
        }
        let mut next = self.clone();
        next.push(a);
        Ok(next)
    }

    /// In-place extension; `a` must be below the base.
    pub fn push(&mut self, a: u8) {
        debug_assert!(a < self.base);
        let n = self.digits.len();
        let (mut bl, mut bp) = (self.best_len, self.best_period);
        for q in 1..=n {
            let r = &mut self.runs[q - 1];
            if self.digits[n - q] == a {
                *r += 1;
            } else {
                *r = q as u32;
            }
            if u64::from(*r) * bp > bl * q as u64 {
                bl = u64::from(*r);
                bp = q as u64;
            }
        }
        self.runs.push(n as u32 + 1);
        if bl == 0 {
            bl = 1;
            bp = 1;
        }
        self.best_len = bl;
        self.best_period = bp;
        self.digits.push(a);
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn base(&self) -> u8 {
        self.base
    }

    pub fn word(&self) -> FiniteWord {
        FiniteWord::from_trusted(self.digits.clone(), self.base)
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn exponent(&self) -> ExponentValue {
        if self.digits.is_empty() {
            ExponentValue::zero()
        } else {
            ExponentValue::from_ratio(self.best_len, self.best_period)
        }
    }

    /// Current exponent as an unreduced `(length, period)` pair.
    pub fn ratio(&self) -> (u64, u64) {
        (self.best_len, self.best_period)
    }

    /// Orders the current exponent against `p/q`.
    pub fn cmp_ratio(&self, p: u64, q: u64) -> Ordering {
        ratio_cmp(self.best_len, self.best_period, p, q)
    }
}

/// `E(w_0…w_i)` for every `i`, in one incremental pass.
pub fn prefix_exponent_profile(w: &FiniteWord) -> Vec<ExponentValue> {
    let mut state = ExtensionState::new(w.base());
    w.digits()
        .iter()
        .map(|&a| {
            state.push(a);
            state.exponent()
        })
        .collect()
}

/// `E` of the length-`depth` prefix of `s`.
pub fn max_prefix_exponent(s: &StreamWord, depth: usize) -> Result<ExponentValue> {
    if depth == 0 {
        return Err(Error::OutOfRange { value: "0".into(), range: "depth >= 1".into() });
    }
    Ok(critical_exponent(&s.prefix(depth)).0)
}

/// Reduces an `ExponentValue` built from `(len, period)` pairs for display.
pub fn exponent_of_ratio(p: u64, q: u64) -> ExponentValue {
    debug_assert!(q > 0);
    ExponentValue::Finite(BigRational::new(BigInt::from(p), BigInt::from(q)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{thue_morse_block, thue_morse_prefix};
    use proptest::prelude::*;

    fn w(s: &str) -> FiniteWord {
        s.parse().unwrap()
    }

    fn ev(s: &str) -> ExponentValue {
        s.parse().unwrap()
    }

    #[test]
    fn power_examples() {
        assert!(is_power(&w("001001001"), 9, 3).unwrap());
        assert!(is_power(&w("0"), 1, 1).unwrap());
        assert!(is_power(&w("00100100"), 8, 3).unwrap());
        assert!(!is_power(&w("00100101"), 8, 3).unwrap());
        assert!(!is_power(&w("01"), 2, 3).unwrap());
        assert_eq!(is_power(&w("0101"), 3, 2), Err(Error::LengthMismatch { p: 3, len: 4 }));
        assert_eq!(is_power(&w("0101"), 4, 0), Err(Error::ZeroPeriod));
    }

    #[test]
    fn counterexample_word() {
        let (e, wit) = critical_exponent(&w("00100100"));
        assert_eq!(e, ev("8/3"));
        assert_eq!(wit, Some(PowerWitness { start: 0, length: 8, period: 3 }));
        assert_eq!(critical_exponent(&w("001001000")).0, ev("3"));
        assert_eq!(critical_exponent(&w("001001001")).0, ev("3"));
    }

    #[test]
    fn small_examples() {
        assert_eq!(critical_exponent(&w("")), (ExponentValue::zero(), None));
        assert_eq!(critical_exponent(&w("010")).0, ev("3/2"));
        assert_eq!(critical_exponent(&w("000")).0, ev("3"));
        assert_eq!(critical_exponent(&thue_morse_block(3)).0, ev("2"));
        assert_eq!(critical_exponent(&w("11")).0, ev("2"));
        assert_eq!(critical_exponent(&w("0110")).0, ev("2"));
        assert_eq!(critical_exponent(&w("01")).1, Some(PowerWitness { start: 0, length: 2, period: 2 }));
        assert_eq!(critical_exponent_oracle(&w("11")).unwrap(), ev("2"));
        assert_eq!(critical_exponent_oracle(&w("0110")).unwrap(), ev("2"));
        assert_eq!(critical_exponent_oracle(&w("")).unwrap(), ExponentValue::zero());
    }

    #[test]
    fn witness_tie_break() {
        // squares 00 (start 0) and 11 (start 2)
        let (e, wit) = critical_exponent(&w("0011"));
        assert_eq!(e, ev("2"));
        assert_eq!(wit, Some(PowerWitness { start: 0, length: 2, period: 1 }));
        // the whole word has period 3; "00" also gives 2 but starts later
        let (e, wit) = critical_exponent(&w("010010"));
        assert_eq!(e, ev("2"));
        assert_eq!(wit, Some(PowerWitness { start: 0, length: 6, period: 3 }));
    }

    #[test]
    fn oracle_rejects_long_words() {
        let long = thue_morse_prefix(65);
        assert_eq!(critical_exponent_oracle(&long), Err(Error::OracleBound { len: 65, bound: 64 }));
        assert!(critical_exponent_oracle_bounded(&long, 65).is_ok());
    }

    #[test]
    fn oracle_agrees_up_to_length_ten() {
        for len in 0..=10usize {
            for i in 0..(1u64 << len) {
                let u = FiniteWord::binary_from_index(len, i);
                let (e, wit) = critical_exponent(&u);
                assert_eq!(e, critical_exponent_oracle(&u).unwrap(), "{u}");
                if let Some(wit) = wit {
                    assert!(wit.verify(&u));
                    assert_eq!(wit.exponent(), e);
                }
            }
        }
    }

    #[test]
    fn ternary_words() {
        let u = FiniteWord::parse_in_base("0120120", 3).unwrap();
        assert_eq!(critical_exponent(&u).0, ev("7/3"));
        assert_eq!(critical_exponent_oracle(&u).unwrap(), ev("7/3"));
    }

    #[test]
    fn extension_examples() {
        let s = ExtensionState::from_word(&w("0010010"));
        assert_eq!(s.extend(0).unwrap().exponent(), ev("8/3"));
        assert_eq!(ExtensionState::new(2).extend(0).unwrap().exponent(), ev("1"));
        let s = ExtensionState::from_word(&w("00100100"));
        assert_eq!(s.exponent(), ev("8/3"));
        assert_eq!(s.extend(1).unwrap().exponent(), ev("3"));
        assert_eq!(s.extend(0).unwrap().exponent(), ev("3"));
        assert!(s.extend(2).is_err());
        assert_eq!(ExtensionState::new(2).exponent(), ExponentValue::zero());
    }

    #[test]
    fn monotone_under_extension_exhaustive() {
        for len in 0..=12usize {
            for i in 0..(1u64 << len) {
                let u = FiniteWord::binary_from_index(len, i);
                let state = ExtensionState::from_word(&u);
                for a in 0..2 {
                    assert!(state.extend(a).unwrap().exponent() >= state.exponent());
                }
            }
        }
    }

    #[test]
    fn floor_at_length_four() {
        for i in 0..16 {
            assert!(critical_exponent(&FiniteWord::binary_from_index(4, i)).0 >= ev("2"));
        }
        let square_free3 = (0..8)
            .filter(|&i| critical_exponent(&FiniteWord::binary_from_index(3, i)).0 < ev("2"))
            .count();
        assert_eq!(square_free3, 2); // 010 and 101
    }

    #[test]
    fn prefix_profile_of_thue_morse() {
        let profile = prefix_exponent_profile(&thue_morse_prefix(256));
        assert_eq!(profile[0], ev("1"));
        assert_eq!(profile[2], ev("2"));
        assert!(profile[3..].iter().all(|e| *e == ev("2")));
    }

    #[test]
    fn max_prefix_of_streams() {
        assert_eq!(max_prefix_exponent(&StreamWord::thue_morse(), 1024).unwrap(), ev("2"));
        let zeros = StreamWord::constant(0, 2).unwrap();
        assert_eq!(max_prefix_exponent(&zeros, 37).unwrap(), ev("37"));
        assert!(max_prefix_exponent(&zeros, 0).is_err());
    }

    #[test]
    fn value_order_and_parse() {
        assert!(ExponentValue::Infinite > ev("1000000/3"));
        assert!(ev("5/2") < ev("3"));
        assert_eq!(ev("6/4").to_string(), "3/2");
        assert_eq!(ExponentValue::zero().to_string(), "0/1");
        assert_eq!(ev("inf"), ExponentValue::Infinite);
        assert!("-1/2".parse::<ExponentValue>().is_err());
        assert_eq!(ExponentValue::Infinite.reciprocal(), Some(BigRational::zero()));
        assert_eq!(ExponentValue::zero().reciprocal(), None);
    }

    fn binary_word() -> impl Strategy<Value = FiniteWord> {
        proptest::collection::vec(0u8..2, 0..60).prop_map(|d| FiniteWord::binary(d).unwrap())
    }

    proptest! {
        #[test]
        fn incremental_matches_batch(u in binary_word()) {
            let profile = prefix_exponent_profile(&u);
            for (i, e) in profile.iter().enumerate() {
                prop_assert_eq!(e, &critical_exponent(&u.prefix(i + 1)).0);
            }
        }

        #[test]
        fn symmetric_under_negation_and_reversal(u in binary_word()) {
            let e = critical_exponent(&u).0;
            prop_assert_eq!(&critical_exponent(&u.negate().unwrap()).0, &e);
            prop_assert_eq!(&critical_exponent(&u.reverse()).0, &e);
        }

        #[test]
        fn subwords_do_not_exceed(u in binary_word(), a in 0usize..60, b in 0usize..60) {
            let e = critical_exponent(&u).0;
            prop_assert!(critical_exponent(&u.subword(a, b)).0 <= e);
        }

        #[test]
        fn witness_replays(u in binary_word()) {
            let (e, wit) = critical_exponent(&u);
            if let Some(wit) = wit {
                prop_assert!(wit.verify(&u));
                prop_assert_eq!(wit.exponent(), e);
            } else {
                prop_assert!(u.is_empty());
            }
        }

        #[test]
        fn extension_is_monotone(u in binary_word(), a in 0u8..2) {
            let s = ExtensionState::from_word(&u);
            let t = s.extend(a).unwrap();
            prop_assert!(t.exponent() >= s.exponent());
            prop_assert_eq!(t.exponent(), critical_exponent(&u.with_symbol(a).unwrap()).0);
        }
    }
}
