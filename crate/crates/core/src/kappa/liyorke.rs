use std::cmp::Ordering;
use std::sync::Arc;

use num::bigint::BigInt;
use num::rational::BigRational;
use serde::Serialize;

use super::cylinder::{cylinder, DyadicRational};
use crate::construct::{build_near_zero, build_with_tm_prefix, extend_word, ConstructedPoint, Real, Target};
use crate::error::{Error, Result};
use crate::expansion::{format_rational, word_value};
use crate::word::FiniteWord;

/// Largest `n` used for a near-zero step; larger ones push the next point
/// beyond the precision of exact comparisons.
const MAX_NEAR_ZERO_STEP: u32 = 4;
const MAX_W1_LEN: usize = 1 << 16;

/// One point `κ₂^j(x)` of a certified orbit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitStep {
    pub iterate: usize,
    pub builder: String,
    pub prefix: FiniteWord,
    pub lower: DyadicRational,
    pub upper: DyadicRational,
    /// Exponent claimed for the point's expansion, i.e. `1/κ₂`.
    pub exponent_claim: String,
    /// Every prefix up to the depth stayed at or below the claim.
    pub prefixes_within_claim: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub claim: String,
    pub holds: bool,
}

/// Points `x_1, x_2 ∈ I_{w1}` with `κ₂^{n+2}(x_i) ∈ I_{w2}` and
/// `κ₂^n(x_2) - κ₂^n(x_1) > 1/8`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiYorkeReport {
    pub w1: FiniteWord,
    pub w2: FiniteWord,
    pub depth: usize,
    pub n: usize,
    /// `κ₂^j(x_1)` for `j = 0..=n+1`.
    pub orbit1: Vec<OrbitStep>,
    pub orbit2: Vec<OrbitStep>,
    /// `κ₂^{n+2}(x_1)` and `κ₂^{n+2}(x_2)`, exact.
    pub c1: String,
    pub c2: String,
    /// Lower bound on `κ₂^n(x_2) - κ₂^n(x_1)` from the brackets.
    pub separation_lower_bound: String,
    pub separated: bool,
    pub memberships: Vec<Membership>,
}

impl LiYorkeReport {
    pub fn verified(&self) -> bool {
        self.separated
            && self.memberships.iter().all(|m| m.holds)
            && self.orbit1.iter().chain(&self.orbit2).all(|s| s.prefixes_within_claim)
    }
}

fn check_word(w: &FiniteWord, name: &str) -> Result<()> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    if !w.is_binary() {
        return Err(Error::NotBinary(w.base()));
    }
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    if word_value(w) >= half {
        return Err(Error::OutOfRange { value: format!("(0.{w})_2 for {name}"), range: "[0, 1/2)".into() });
    }
    Ok(())
}

fn dyadic(r: &BigRational) -> DyadicRational {
    let k = r.denom().bits() as usize - 1;
    DyadicRational::new(r.numer().clone(), k).expect("nonnegative bracket")
}

fn step(j: usize, builder: &str, p: &ConstructedPoint, depth: usize) -> Result<OrbitStep> {
    let (lo, hi) = p.bracket(depth);
    Ok(OrbitStep {
        iterate: j,
        builder: builder.into(),
        prefix: p.prefix(depth),
        lower: dyadic(&lo),
        upper: dyadic(&hi),
        exponent_claim: p.alpha().to_string(),
        prefixes_within_claim: p.certify(depth)?.never_exceeds,
    })
}

fn pow2_recip(m: u32) -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(1u64 << m))
}

/// `p_0 = y`, `κ₂(p_{j+1}) = p_j` through near-zero steps, until `p` fits
/// `extend_word(w1, 1/p)` and at least `min_steps` steps were taken.
fn chain_back(y: Arc<ConstructedPoint>, w1_len: usize, min_steps: usize) -> Result<Vec<(String, Arc<ConstructedPoint>)>> {
    let limit = BigRational::new(BigInt::from(1), BigInt::from(w1_len.max(2) as u64));
    let mut chain = Vec::new();
    let mut p = y;
    loop {
        let real = Real::Point(Arc::clone(&p));
        if chain.len() >= min_steps && real.cmp_rational(&limit)? != Ordering::Greater {
            break;
        }
        let mut m = 1;
        while m < MAX_NEAR_ZERO_STEP && real.cmp_rational(&pow2_recip(m + 1))? != Ordering::Greater {
            m += 1;
        }
        let next = Arc::new(build_near_zero(m, &real)?);
        chain.push((format!("near-zero n={m}"), Arc::clone(&next)));
        p = next;
    }
    Ok(chain)
}

pub fn liyorke_witnesses(w1: &FiniteWord, w2: &FiniteWord, depth: usize) -> Result<LiYorkeReport> {
    check_word(w1, "w1")?;
    check_word(w2, "w2")?;
    if w1.len() > MAX_W1_LEN {
        return Err(Error::InvalidArgument(format!("w1 longer than {MAX_W1_LEN}")));
    }
    let depth = depth.max(w1.len()).max(w2.len()).max(8);
    let i2 = cylinder(w2)?;
    let (lo, width) = (i2.lower.to_rational(), i2.width().to_rational());
    let third = BigRational::new(BigInt::from(1), BigInt::from(3));
    let c1 = &lo + &width * &third;
    let c2 = &lo + &width * &third * BigRational::from_integer(BigInt::from(2));

    let word = |s: &str| -> FiniteWord { s.parse().expect("binary literal") };
    let z1 = Arc::new(build_with_tm_prefix(&word("00"), &Target::rational(c1.recip()))?);
    let z2 = Arc::new(build_with_tm_prefix(&word("01"), &Target::rational(c2.recip()))?);
    let y1 = Arc::new(build_near_zero(2, &Real::Point(Arc::clone(&z1)))?);
    let y2 = Arc::new(build_with_tm_prefix(&word("010"), &Target::from_kappa(&Real::Point(Arc::clone(&z2))))?);

    let short1 = chain_back(Arc::clone(&y1), w1.len(), 0)?;
    let short2 = chain_back(Arc::clone(&y2), w1.len(), 0)?;
    let steps = short1.len().max(short2.len());
    let back1 = if short1.len() == steps { short1 } else { chain_back(Arc::clone(&y1), w1.len(), steps)? };
    let back2 = if short2.len() == steps { short2 } else { chain_back(Arc::clone(&y2), w1.len(), steps)? };
    if back1.len() != back2.len() {
        return Err(Error::InvalidArgument("backward chains have different lengths".into()));
    }

    let orbit = |y: &Arc<ConstructedPoint>, y_name: &str, z: &Arc<ConstructedPoint>, z_name: &str, back: &[(String, Arc<ConstructedPoint>)]| -> Result<(Arc<ConstructedPoint>, Vec<OrbitStep>)> {
        let last = back.last().map_or(y, |(_, p)| p);
        let x = Arc::new(extend_word(w1, &Target::from_kappa(&Real::Point(Arc::clone(last))))?);
        let mut steps = vec![step(0, "extend-word", &x, depth)?];
        for (j, (name, p)) in back.iter().rev().enumerate() {
            steps.push(step(j + 1, name, p, depth)?);
        }
        let n = back.len() + 1;
        steps.push(step(n, y_name, y, depth)?);
        steps.push(step(n + 1, z_name, z, depth)?);
        Ok((x, steps))
    };
    let (x1, orbit1) = orbit(&y1, "near-zero n=2", &z1, "thue-morse-prefix 00", &back1)?;
    let (x2, orbit2) = orbit(&y2, "thue-morse-prefix 010", &z2, "thue-morse-prefix 01", &back2)?;
    let n = back1.len() + 1;

    let (_, y1_hi) = y1.bracket(depth);
    let (y2_lo, _) = y2.bracket(depth);
    let gap = &y2_lo - &y1_hi;
    let eighth = BigRational::new(BigInt::from(1), BigInt::from(8));

    let starts = |p: &ConstructedPoint, w: &FiniteWord| p.prefix(w.len()) == *w;
    let mut memberships = vec![
        Membership { claim: format!("x1 in I_{w1}"), holds: starts(&x1, w1) },
        Membership { claim: format!("x2 in I_{w1}"), holds: starts(&x2, w1) },
        Membership { claim: "z1 starts with 00".into(), holds: starts(&z1, &word("00")) },
        Membership { claim: "z2 starts with 01".into(), holds: starts(&z2, &word("01")) },
        Membership { claim: "y1 starts with 0000".into(), holds: starts(&y1, &word("0000")) },
        Membership { claim: "y2 starts with 010".into(), holds: starts(&y2, &word("010")) },
        Membership { claim: format!("c1 in I_{w2}"), holds: i2.contains_rational(&c1) },
        Membership { claim: format!("c2 in I_{w2}"), holds: i2.contains_rational(&c2) },
    ];
    for (i, back) in [&back1, &back2].into_iter().enumerate() {
        for (j, (name, p)) in back.iter().enumerate() {
            let m: u32 = name.rsplit('=').next().and_then(|s| s.parse().ok()).unwrap_or(1);
            let zeros = FiniteWord::repeat_symbol(0, 1 << m, 2)?;
            memberships.push(Membership { claim: format!("chain {} step {} starts with 0^{}", i + 1, j + 1, 1 << m), holds: starts(p, &zeros) });
        }
    }

    Ok(LiYorkeReport {
        w1: w1.clone(),
        w2: w2.clone(),
        depth,
        n,
        orbit1,
        orbit2,
        c1: format_rational(&c1),
        c2: format_rational(&c2),
        separation_lower_bound: format_rational(&gap),
        separated: gap > eighth,
        memberships,
    })
}
