//! Infinite binary words with a prescribed critical exponent.
//!
//! Every builder returns a [`ConstructedPoint`]: a stream together with the
//! exponent it is known (by theorem) to have, and the parameters that
//! produced it. The exponent is a claim; [`ConstructedPoint::certify`]
//! measures prefixes up to a chosen depth and never exceeds what it checked.

mod builders;
mod schedule;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::Serialize;

pub use builders::{build_cr, build_near_zero, build_with_tm_prefix, extend_word, stage_word};
pub use schedule::{make_schedule, make_schedule_for, Schedule, Stage};

use crate::error::{Error, Result};
use crate::exponent::{critical_exponent, prefix_exponent_profile, ExponentValue};
use crate::expansion::{format_rational, pow2, word_value};
use crate::stream::StreamWord;
use crate::word::FiniteWord;

/// Digits examined before a comparison against a real value gives up.
pub const MAX_REFINEMENT_DIGITS: usize = 1 << 14;

/// An exact real in `[0,1]`: a rational, or the value `(0.s)_2` of a
/// constructed stream.
#[derive(Clone, Debug)]
pub enum Real {
    Rational(BigRational),
    Point(Arc<ConstructedPoint>),
}

impl Real {
    pub fn rational(r: BigRational) -> Self {
        Self::Rational(r)
    }

    pub fn point(p: ConstructedPoint) -> Self {
        Self::Point(Arc::new(p))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Self::Rational(r) => r.is_zero(),
            Self::Point(p) => matches!(p.provenance(), Provenance::Zero),
        }
    }

    pub fn cmp_rational(&self, c: &BigRational) -> Result<Ordering> {
        match self {
            Self::Rational(r) => Ok(r.cmp(c)),
            Self::Point(p) => p.value_cmp(c),
        }
    }

    /// Exact bracket `[lo, hi]` of width at most `2^{-k}`.
    pub fn bracket(&self, k: usize) -> (BigRational, BigRational) {
        match self {
            Self::Rational(r) => (r.clone(), r.clone()),
            Self::Point(p) => p.bracket(k),
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Rational(r) => f.write_str(&format_rational(r)),
            Self::Point(p) => write!(f, "(0.{}…)_2", p.prefix(24)),
        }
    }
}

/// A target critical exponent.
#[derive(Clone, Debug)]
pub enum Target {
    Rational(BigRational),
    Infinite,
    /// `1/x` for the value `x > 0` of a constructed point.
    ReciprocalOf(Arc<ConstructedPoint>),
}

impl Target {
    pub fn rational(r: BigRational) -> Self {
        Self::Rational(r)
    }

    /// The exponent realizing `κ₂ = y`, i.e. `1/y` with `1/0 = ∞`.
    pub fn from_kappa(y: &Real) -> Self {
        if y.is_zero() {
            return Self::Infinite;
        }
        match y {
            Real::Rational(r) => Self::Rational(r.recip()),
            Real::Point(p) => Self::ReciprocalOf(Arc::clone(p)),
        }
    }

    /// The `κ₂` value `1/α`.
    pub fn kappa(&self) -> Real {
        match self {
            Self::Rational(r) if r.is_zero() => Real::Rational(BigRational::zero()),
            Self::Rational(r) => Real::Rational(r.recip()),
            Self::Infinite => Real::Rational(BigRational::zero()),
            Self::ReciprocalOf(p) => Real::Point(Arc::clone(p)),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Self::Rational(r) => Some(r),
            _ => None,
        }
    }

    /// As an [`ExponentValue`] when the target is rational or infinite.
    pub fn exponent_value(&self) -> Option<ExponentValue> {
        match self {
            Self::Rational(r) => Some(ExponentValue::Finite(r.clone())),
            Self::Infinite => Some(ExponentValue::Infinite),
            Self::ReciprocalOf(_) => None,
        }
    }

    pub fn cmp_rational(&self, r: &BigRational) -> Result<Ordering> {
        match self {
            Self::Rational(a) => Ok(a.cmp(r)),
            Self::Infinite => Ok(Ordering::Greater),
            Self::ReciprocalOf(x) => {
                if !r.is_positive() {
                    return Ok(Ordering::Greater);
                }
                Ok(x.value_cmp(&r.recip())?.reverse())
            }
        }
    }

    pub fn cmp_integer(&self, n: u64) -> Result<Ordering> {
        self.cmp_rational(&BigRational::from_integer(BigInt::from(n)))
    }

    /// `⌈α⌉` when `α` is not an integer, `α` itself otherwise.
    pub fn zero_block_length(&self) -> Result<u64> {
        if let Self::Rational(a) = self {
            let c = a.ceil().to_integer();
            return u64::try_from(c).map_err(|_| Error::TargetOutOfContract {
                alpha: format_rational(a),
                requirement: "exponent must fit in 64 bits".into(),
            });
        }
        // A reciprocal of a constructed point is irrational, so ⌈α⌉ is the
        // first integer above it.
        let mut n = 1u64;
        while self.cmp_integer(n)? != Ordering::Less {
            n = n.checked_mul(2).ok_or_else(|| Error::InvalidArgument("target too large".into()))?;
        }
        let (mut lo, mut hi) = (n / 2, n);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.cmp_integer(mid)? == Ordering::Less {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        if self.cmp_integer(lo)? == Ordering::Equal {
            return Ok(lo);
        }
        Ok(hi)
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Rational(r) => f.write_str(&format_rational(r)),
            Self::Infinite => f.write_str("inf"),
            Self::ReciprocalOf(p) => write!(f, "1/(0.{}…)_2", p.prefix(24)),
        }
    }
}

impl Serialize for Target {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Which builder produced a point, with its parameters.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "builder", rename_all = "kebab-case")]
pub enum Provenance {
    ThueMorse,
    /// `δ^offset(τ)`.
    ThueMorseSuffix { offset: usize },
    /// The limit of `φ_1(φ_2(…φ_n(ε)))`.
    StagedLimit { stages: Vec<Stage> },
    /// `δ^shift` of a schedule whose first stage is `(2, 5, s_1)`.
    ThueMorsePrefix { word: String, tm_position: usize, shift: u64, stages: Vec<Stage> },
    /// `w̃·0^{ℓ(w)}·ỹ` for `y = 00ỹ` from an inner construction.
    ExtendWord { word: String, zero_block: usize, inner: Box<Provenance> },
    /// `w·0^ω`.
    ZeroTail { word: String },
    /// A point below `2^{-2^n}` with prescribed `κ₂`.
    NearZero { n: u32, inner: Box<Provenance> },
    Zero,
}

/// A stream with a theorem-backed critical exponent.
#[derive(Clone, Debug)]
pub struct ConstructedPoint {
    stream: StreamWord,
    alpha: Target,
    provenance: Provenance,
}

/// Prefix measurements backing an exponent claim up to a fixed depth.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certification {
    pub depth: usize,
    /// `E` of the depth-length prefix.
    pub measured: String,
    /// Every prefix of length `>= 2` stayed at or below the claim.
    pub never_exceeds: bool,
    /// Every prefix stayed strictly below the claim.
    pub strictly_below: bool,
}

impl ConstructedPoint {
    pub(crate) fn new(stream: StreamWord, alpha: Target, provenance: Provenance) -> Self {
        let stream = match alpha.exponent_value() {
            Some(v) => stream.with_exponent(v),
            None => stream,
        };
        Self { stream, alpha, provenance }
    }

    pub fn stream(&self) -> &StreamWord {
        &self.stream
    }

    pub fn alpha(&self) -> &Target {
        &self.alpha
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn prefix(&self, k: usize) -> FiniteWord {
        self.stream.prefix(k)
    }

    /// `[(0.p)_2, (0.p)_2 + 2^{-k}]` for the length-`k` prefix `p`.
    pub fn bracket(&self, k: usize) -> (BigRational, BigRational) {
        let lo = word_value(&self.prefix(k));
        let hi = &lo + BigRational::new(BigInt::one(), pow2(k));
        (lo, hi)
    }

    /// Orders the point's value against `c`, refining the bracket until it
    /// excludes `c`.
    pub fn value_cmp(&self, c: &BigRational) -> Result<Ordering> {
        let mut num = BigInt::zero();
        let mut checkpoint = 32;
        for k in 0..MAX_REFINEMENT_DIGITS {
            num = (num << 1usize) + BigInt::from(self.stream.digit(k as u64));
            if k + 1 == checkpoint {
                let den = pow2(k + 1);
                // lo = num/den, hi = (num+1)/den
                let lhs_lo = &num * c.denom();
                let rhs = c.numer() * &den;
                if lhs_lo > rhs {
                    return Ok(Ordering::Greater);
                }
                if (&num + BigInt::one()) * c.denom() < rhs {
                    return Ok(Ordering::Less);
                }
                checkpoint *= 2;
            }
        }
        Err(Error::Undecided(MAX_REFINEMENT_DIGITS))
    }

    /// Measures every prefix up to `depth` against the claimed exponent.
    pub fn certify(&self, depth: usize) -> Result<Certification> {
        let profile = prefix_exponent_profile(&self.prefix(depth));
        let mut never_exceeds = true;
        let mut strictly_below = true;
        for e in profile.iter().skip(1) {
            let ord = self.cmp_claim(e)?;
            never_exceeds &= ord != Ordering::Greater;
            strictly_below &= ord == Ordering::Less;
        }
        let measured = profile.last().cloned().unwrap_or_else(ExponentValue::zero);
        Ok(Certification { depth, measured: measured.to_string(), never_exceeds, strictly_below })
    }

    /// Orders a measured exponent against the claim.
    fn cmp_claim(&self, e: &ExponentValue) -> Result<Ordering> {
        match e {
            ExponentValue::Infinite => Ok(if matches!(self.alpha, Target::Infinite) {
                Ordering::Equal
            } else {
                Ordering::Greater
            }),
            ExponentValue::Finite(r) => Ok(self.alpha.cmp_rational(r)?.reverse()),
        }
    }

    /// `E` of the depth-length prefix.
    pub fn measured_exponent(&self, depth: usize) -> ExponentValue {
        critical_exponent(&self.prefix(depth)).0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::ratio;

    #[test]
    fn reciprocal_target_comparisons() {
        // x = (0.δ⁵τ)_2 ≈ 0.2xx, so 1/x ≈ 4.x
        let p = build_with_tm_prefix(&"00".parse().unwrap(), &Target::rational(ratio(2, 1))).unwrap();
        let (lo, hi) = p.bracket(40);
        assert!(lo < hi);
        let t = Target::ReciprocalOf(Arc::new(p));
        assert_eq!(t.cmp_rational(&ratio(2, 1)).unwrap(), Ordering::Greater);
        assert_eq!(t.cmp_rational(&ratio(100, 1)).unwrap(), Ordering::Less);
        assert_eq!(t.cmp_rational(&ratio(-1, 1)).unwrap(), Ordering::Greater);
        let r = t.zero_block_length().unwrap();
        assert_eq!(t.cmp_integer(r).unwrap(), Ordering::Less);
        assert_eq!(t.cmp_integer(r - 1).unwrap(), Ordering::Greater);
    }

    #[test]
    fn kappa_round_trip() {
        let y = Real::rational(ratio(1, 5));
        let t = Target::from_kappa(&y);
        assert_eq!(t.as_rational(), Some(&ratio(5, 1)));
        assert!(matches!(Target::from_kappa(&Real::rational(ratio(0, 1))), Target::Infinite));
        assert!(matches!(t.kappa(), Real::Rational(r) if r == ratio(1, 5)));
    }

    #[test]
    fn zero_block_lengths() {
        assert_eq!(Target::rational(ratio(5, 2)).zero_block_length().unwrap(), 3);
        assert_eq!(Target::rational(ratio(3, 1)).zero_block_length().unwrap(), 3);
        assert_eq!(Target::rational(ratio(7, 2)).zero_block_length().unwrap(), 4);
    }
}
