use num::rational::BigRational;
use serde::Serialize;

use super::kappa_bound_of_prefix;
use crate::error::{Error, Result};
use crate::expansion::{expand, format_rational};

/// `1/E` of the first `depth` base-`n` digits of `x`; an upper bound on
/// `κ_n(x)`.
pub fn kappa_n_upper_bound(x: &BigRational, n: u8, depth: usize) -> Result<BigRational> {
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    kappa_bound_of_prefix(&expand(x, n, depth)?)
}

/// Membership of `x` in `A₂ⁿ` (base-`n` digits all in `{0,1}`), as far as a
/// prefix can tell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "SCREAMING-KEBAB-CASE")]
pub enum A2nMembership {
    YesSoFar { depth: usize },
    No { position: usize, digit: u8 },
    Unknown,
}

pub fn a2n_member(x: &BigRational, n: u8, depth: usize) -> Result<A2nMembership> {
    if depth == 0 {
        return Ok(A2nMembership::Unknown);
    }
    let w = expand(x, n, depth)?;
    Ok(match w.digits().iter().position(|&d| d > 1) {
        Some(position) => A2nMembership::No { position, digit: w.digits()[position] },
        None => A2nMembership::YesSoFar { depth },
    })
}

/// Per-base bounds and their maximum: an upper estimate of
/// `max_{2≤n≤N} κ_n(x)`, which itself only bounds `κ(x)` from below.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KappaSup {
    pub max_base: u8,
    pub depth: usize,
    pub per_base: Vec<(u8, String)>,
    pub value: String,
}

pub fn kappa_sup_truncated(x: &BigRational, max_base: u8, depth: usize) -> Result<(BigRational, KappaSup)> {
    if max_base < 2 {
        return Err(Error::InvalidBase(u32::from(max_base)));
    }
    let bounds = (2..=max_base)
        .map(|n| Ok((n, kappa_n_upper_bound(x, n, depth)?)))
        .collect::<Result<Vec<_>>>()?;
    let best = bounds.iter().map(|(_, b)| b).max().cloned().expect("at least base 2");
    let report = KappaSup {
        max_base,
        depth,
        per_base: bounds.iter().map(|(n, b)| (*n, format_rational(b))).collect(),
        value: format_rational(&best),
    };
    Ok((best, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::ratio;
    use crate::kappa::kappa_bound_of_prefix;
    use crate::word::FiniteWord;

    #[test]
    fn base_three_examples() {
        let w = FiniteWord::parse_in_base("01101001", 3).unwrap();
        assert_eq!(kappa_bound_of_prefix(&w).unwrap(), ratio(1, 2));
        for d in 1..20 {
            assert_eq!(kappa_n_upper_bound(&ratio(1, 2), 3, d).unwrap(), ratio(1, d as i64));
            assert_eq!(a2n_member(&ratio(1, 2), 3, d).unwrap(), A2nMembership::YesSoFar { depth: d });
        }
        assert_eq!(a2n_member(&ratio(1, 3), 3, 5).unwrap(), A2nMembership::No { position: 1, digit: 2 });
        assert_eq!(a2n_member(&ratio(1, 3), 3, 0).unwrap(), A2nMembership::Unknown);
    }

    #[test]
    fn truncated_sup() {
        let (v, _) = kappa_sup_truncated(&ratio(0, 1), 6, 10).unwrap();
        assert_eq!(v, ratio(1, 10));
        let (v, rep) = kappa_sup_truncated(&ratio(1, 3), 3, 8).unwrap();
        let b2 = kappa_n_upper_bound(&ratio(1, 3), 2, 8).unwrap();
        let b3 = kappa_n_upper_bound(&ratio(1, 3), 3, 8).unwrap();
        assert_eq!(v, b2.clone().max(b3));
        assert_eq!(rep.per_base.len(), 2);
        let mut prev = ratio(1, 1);
        for d in 1..30 {
            let (v, _) = kappa_sup_truncated(&ratio(2, 7), 5, d).unwrap();
            assert!(v <= prev);
            prev = v;
        }
        assert!(kappa_sup_truncated(&ratio(1, 3), 1, 8).is_err());
    }
}
