use std::cmp::Ordering;
use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expansion::{format_rational, pow2};
use crate::word::FiniteWord;

/// `numerator / 2^exponent`, kept with an odd numerator (or `0/2^0`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyadicRational {
    numerator: BigInt,
    exponent: usize,
}

impl DyadicRational {
    pub fn new(numerator: BigInt, exponent: usize) -> Result<Self> {
        if numerator.is_negative() {
            return Err(Error::OutOfRange { value: numerator.to_string(), range: "[0, inf)".into() });
        }
        Ok(Self::canonical(numerator, exponent))
    }

    fn canonical(mut numerator: BigInt, mut exponent: usize) -> Self {
        if numerator.is_zero() {
            return Self { numerator, exponent: 0 };
        }
        while exponent > 0 && numerator.is_even() {
            numerator >>= 1usize;
            exponent -= 1;
        }
        Self { numerator, exponent }
    }

    /// `(0.w)_2`.
    pub fn from_word(w: &FiniteWord) -> Self {
        let mut num = BigInt::zero();
        for &d in w.digits() {
            num = (num << 1usize) + BigInt::from(d);
        }
        Self::canonical(num, w.len())
    }

    pub fn numerator(&self) -> &BigInt {
        &self.numerator
    }

    pub fn exponent(&self) -> usize {
        self.exponent
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.numerator.clone(), pow2(self.exponent))
    }

    /// `self + 2^{-k}`.
    pub fn add_ulp(&self, k: usize) -> Self {
        let e = self.exponent.max(k);
        let num = (&self.numerator << (e - self.exponent)) + (BigInt::one() << (e - k));
        Self::canonical(num, e)
    }

    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        (&self.numerator * r.denom()).cmp(&(r.numer() * pow2(self.exponent)))
    }
}

impl Ord for DyadicRational {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exponent.max(other.exponent);
        let a = &self.numerator << (e - self.exponent);
        let b = &other.numerator << (e - other.exponent);
        a.cmp(&b)
    }
}

impl PartialOrd for DyadicRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.to_rational()))
    }
}

impl Serialize for DyadicRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The points whose binary expansion begins with `word`:
/// `((0.w)_2, (0.w)_2 + 2^{-ℓ(w)})`, open or closed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cylinder {
    pub word: FiniteWord,
    pub lower: DyadicRational,
    pub upper: DyadicRational,
    pub closed: bool,
}

/// The open cylinder `I_w`.
pub fn cylinder(w: &FiniteWord) -> Result<Cylinder> {
    make(w, false)
}

/// The closed cylinder `[(0.w)_2, (0.w)_2 + 2^{-ℓ(w)}]`.
pub fn closed_cylinder(w: &FiniteWord) -> Result<Cylinder> {
    make(w, true)
}

fn make(w: &FiniteWord, closed: bool) -> Result<Cylinder> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    if !w.is_binary() {
        return Err(Error::NotBinary(w.base()));
    }
    let lower = DyadicRational::from_word(w);
    let upper = lower.add_ulp(w.len());
    Ok(Cylinder { word: w.clone(), lower, upper, closed })
}

impl Cylinder {
    pub fn width(&self) -> DyadicRational {
        DyadicRational::canonical(BigInt::one(), self.word.len())
    }

    pub fn contains_rational(&self, x: &BigRational) -> bool {
        let lo = self.lower.cmp_rational(x);
        let hi = self.upper.cmp_rational(x);
        if self.closed {
            lo != Ordering::Greater && hi != Ordering::Less
        } else {
            lo == Ordering::Less && hi == Ordering::Greater
        }
    }

    /// Whether `other ⊆ self` as point sets.
    pub fn contains(&self, other: &Cylinder) -> bool {
        let inner_ok = |a: Ordering, strict_needed: bool| if strict_needed { a == Ordering::Less } else { a != Ordering::Greater };
        let needs_strict = other.closed && !self.closed;
        inner_ok(self.lower.cmp(&other.lower), needs_strict) && inner_ok(other.upper.cmp(&self.upper), needs_strict)
    }

    /// Whether the two sets share no point.
    pub fn is_disjoint(&self, other: &Cylinder) -> bool {
        let sep = |hi: &DyadicRational, lo: &DyadicRational, touch_ok: bool| match hi.cmp(lo) {
            Ordering::Less => true,
            Ordering::Equal => touch_ok,
            Ordering::Greater => false,
        };
        let touch_ok = !(self.closed && other.closed);
        sep(&self.upper, &other.lower, touch_ok) || sep(&other.upper, &self.lower, touch_ok)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::ratio;

    fn w(s: &str) -> FiniteWord {
        s.parse().unwrap()
    }

    #[test]
    fn endpoints() {
        let c = cylinder(&w("01")).unwrap();
        assert_eq!((c.lower.to_rational(), c.upper.to_rational()), (ratio(1, 4), ratio(1, 2)));
        let c = cylinder(&w("0110")).unwrap();
        assert_eq!((c.lower.to_rational(), c.upper.to_rational()), (ratio(3, 8), ratio(7, 16)));
        assert_eq!(c.width().to_rational(), ratio(1, 16));
        assert!(cylinder(&FiniteWord::empty(2)).is_err());
    }

    #[test]
    fn canonical_form() {
        let d = DyadicRational::new(BigInt::from(12), 5).unwrap();
        assert_eq!((d.numerator().clone(), d.exponent()), (BigInt::from(3), 3));
        assert_eq!(DyadicRational::new(BigInt::from(0), 7).unwrap().exponent(), 0);
        assert!(DyadicRational::new(BigInt::from(-1), 1).is_err());
    }

    #[test]
    fn nesting_and_disjointness() {
        for len in 1..=6usize {
            for i in 0..1u64 << len {
                let u = FiniteWord::binary_from_index(len, i);
                let c = cylinder(&u).unwrap();
                for a in 0..2 {
                    let child = cylinder(&u.with_symbol(a).unwrap()).unwrap();
                    assert!(c.contains(&child));
                    assert!(closed_cylinder(&u).unwrap().contains(&closed_cylinder(&child.word).unwrap()));
                }
                let left = cylinder(&u.with_symbol(0).unwrap()).unwrap();
                let right = cylinder(&u.with_symbol(1).unwrap()).unwrap();
                assert!(left.is_disjoint(&right));
                let (lc, rc) = (closed_cylinder(&left.word).unwrap(), closed_cylinder(&right.word).unwrap());
                assert!(!lc.is_disjoint(&rc));
            }
        }
        assert!(cylinder(&w("011")).unwrap().contains(&cylinder(&w("0110")).unwrap()));
    }

    #[test]
    fn membership() {
        let c = cylinder(&w("01")).unwrap();
        assert!(c.contains_rational(&ratio(1, 3)));
        assert!(!c.contains_rational(&ratio(1, 4)));
        assert!(closed_cylinder(&w("01")).unwrap().contains_rational(&ratio(1, 4)));
    }
}
