use std::cmp::Ordering;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed};
use serde::Serialize;

use super::cylinder::{cylinder, Cylinder};
use super::x_tau;
use crate::construct::{build_with_tm_prefix, Target};
use crate::error::{Error, Result};
use crate::expansion::{format_rational, pow2};
use crate::word::{thue_morse_position, thue_morse_prefix, FiniteWord};

/// Precision of the `x_τ` bracket used to place candidates.
const X_TAU_PRECISION: usize = 4096;
/// Neighbourhoods `I_{τ_(m)0}` tried, starting from the largest that fits.
const NEIGHBOURHOODS: usize = 2;

/// A point `x` with `κ₂(x) = c` (by construction) and `|x - c|` below a bound.
/// Whether an exact fixed point lies nearby is not decided here.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedPointCandidate {
    pub status: &'static str,
    /// `τ_(m)0` for the neighbourhood that confines the candidate.
    pub neighbourhood: Cylinder,
    /// Expansion prefix shared by `x` and `c`.
    pub prefix: FiniteWord,
    /// `κ₂(x)`, exact.
    pub kappa: String,
    /// `x - c ∈ [residual_lower, residual_upper]`.
    pub residual_lower: String,
    pub residual_upper: String,
    pub residual_precision: usize,
    pub inside_left_neighbourhood: bool,
}

/// Candidates for fixed points of `κ₂` inside `(x_τ - ε, x_τ)`.
///
/// Every `τ`-subword prefix `p` admits points of any exponent `α ≥ 2`, so
/// `x = build_with_tm_prefix(p, 1/c)` has `κ₂(x) = c`. Taking `c` in the
/// closure of `I_p` gives `|x - c| ≤ 2^{-ℓ(p)}`. The prefix grows one digit
/// per iteration by bisection on the sign of `x - c` at the midpoint, among
/// the children that remain `τ`-subwords.
pub fn fixed_point_candidates(eps: &BigRational, iterations: usize) -> Result<Vec<FixedPointCandidate>> {
    let (xt_lo, xt_hi) = x_tau(X_TAU_PRECISION)?;
    if !eps.is_positive() || xt_lo.cmp_rational(eps) != Ordering::Greater {
        return Err(Error::OutOfRange { value: format_rational(eps), range: "(0, x_tau)".into() });
    }
    if iterations > 1024 {
        return Err(Error::InvalidArgument(format!("iterations = {iterations} above 1024")));
    }
    // x_τ - (0.τ_(m)0)_2 < 2^{-2^m}, so the smallest m with 2^{-2^m} ≤ ε fits.
    let mut m = 0u32;
    while BigRational::new(BigInt::one(), pow2(1 << m)) > *eps {
        m += 1;
    }
    let left = xt_hi.to_rational() - eps;
    let right = xt_lo.to_rational();

    let mut out = Vec::new();
    for mm in m..m + NEIGHBOURHOODS as u32 {
        let seed = thue_morse_prefix(1 << mm).with_symbol(0)?;
        let neighbourhood = cylinder(&seed)?;
        let mut p = seed;
        while p.len() < iterations + 1 {
            p = next_prefix(&p)?;
        }
        let c = midpoint(&p)?;
        let x = build_with_tm_prefix(&p, &Target::rational(c.recip()))?;
        let precision = p.len().max(iterations) + 16;
        let (lo, hi) = x.bracket(precision);
        let inside = lo > left && hi < right;
        out.push(FixedPointCandidate {
            status: "CANDIDATE",
            neighbourhood,
            prefix: p,
            kappa: format_rational(&c),
            residual_lower: format_rational(&(&lo - &c)),
            residual_upper: format_rational(&(&hi - &c)),
            residual_precision: precision,
            inside_left_neighbourhood: inside,
        });
    }
    Ok(out)
}

/// `(0.p1)_2`, the centre of `I_p`.
fn midpoint(p: &FiniteWord) -> Result<BigRational> {
    let c = cylinder(p)?;
    Ok((c.lower.to_rational() + c.upper.to_rational()) / BigRational::from_integer(BigInt::from(2)))
}

fn next_prefix(p: &FiniteWord) -> Result<FiniteWord> {
    let children: Vec<FiniteWord> = (0..2u8)
        .map(|a| p.with_symbol(a))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|q| thue_morse_position(q).is_some())
        .collect();
    match children.len() {
        0 => Err(Error::NotThueMorseSubword(p.to_string())),
        1 => Ok(children.into_iter().next().expect("one child")),
        _ => {
            let c = midpoint(p)?;
            let x = build_with_tm_prefix(p, &Target::rational(c.recip()))?;
            let upper = x.value_cmp(&c)? == Ordering::Greater;
            Ok(children.into_iter().nth(usize::from(upper)).expect("two children"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::ratio;

    #[test]
    fn candidates_near_x_tau() {
        let cands = fixed_point_candidates(&ratio(1, 16), 20).unwrap();
        assert!(!cands.is_empty());
        let bound = BigRational::new(BigInt::one(), pow2(20));
        for c in &cands {
            assert_eq!(c.status, "CANDIDATE");
            assert!(c.inside_left_neighbourhood);
            let lo: BigRational = crate::expansion::parse_rational(&c.residual_lower).unwrap();
            let hi: BigRational = crate::expansion::parse_rational(&c.residual_upper).unwrap();
            assert!(&hi - &lo < bound);
            assert!(lo.abs() < bound && hi.abs() < bound);
            assert!(crate::expansion::parse_rational(&c.kappa).unwrap() < ratio(1, 2));
            assert!(c.prefix.len() > 20);
        }
    }

    #[test]
    fn rejects_bad_eps() {
        assert!(fixed_point_candidates(&ratio(0, 1), 4).is_err());
        assert!(fixed_point_candidates(&ratio(1, 2), 4).is_err());
    }
}
