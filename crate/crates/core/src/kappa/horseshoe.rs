use serde::Serialize;

use super::cylinder::{closed_cylinder, Cylinder, DyadicRational};
use super::x_tau;
use crate::error::{Error, Result};
use crate::word::{find_subword, thue_morse_prefix, FiniteWord};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HorseshoeInterval {
    pub k: usize,
    /// `τ_(k+1)0`.
    pub word: FiniteWord,
    pub interval: Cylinder,
    /// First occurrence of `word` in `τ_(k+3)`, if any.
    pub position_in_tau: Option<usize>,
}

/// `I_1, …, I_m` with `J = [0, x_τ] ⊂ κ₂(I_k)`.
///
/// Disjointness, placement left of `x_τ` and the subword occurrences are
/// checked with exact endpoints. The covering `κ₂(I_k) ⊇ [0, 1/2)` holds
/// because every `τ`-subword prefix admits every exponent `α ≥ 2`; it is
/// recorded, not checked.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HorseshoeCertificate {
    pub order: usize,
    pub intervals: Vec<HorseshoeInterval>,
    /// A bracket of `x_τ` lying strictly right of every interval.
    pub x_tau_lower: DyadicRational,
    pub x_tau_upper: DyadicRational,
    pub x_tau_precision: usize,
    pub pairwise_disjoint: bool,
    pub left_of_x_tau: bool,
    pub subwords_found: bool,
    /// `κ₂(I_k) ⊇ [0, 1/2) ⊇ J`.
    pub covering_claim: String,
    /// Topological entropy is at least `log(order)`.
    pub entropy_lower_bound: String,
}

impl HorseshoeCertificate {
    pub fn machine_checked(&self) -> bool {
        self.pairwise_disjoint && self.left_of_x_tau && self.subwords_found
    }
}

/// An `m`-horseshoe of `κ₂` from the closed cylinders of `τ_(k+1)0`.
pub fn horseshoe_certificate(m: usize) -> Result<HorseshoeCertificate> {
    if !(2..=16).contains(&m) {
        return Err(Error::InvalidArgument(format!("order m = {m} outside 2..=16")));
    }
    let intervals = (1..=m)
        .map(|k| {
            let word = thue_morse_prefix(1 << (k + 1)).with_symbol(0)?;
            let interval = closed_cylinder(&word)?;
            let position_in_tau = find_subword(&word, &thue_morse_prefix(1 << (k + 3)));
            Ok(HorseshoeInterval { k, word, interval, position_in_tau })
        })
        .collect::<Result<Vec<_>>>()?;

    let pairwise_disjoint = intervals
        .iter()
        .enumerate()
        .all(|(i, a)| intervals[i + 1..].iter().all(|b| a.interval.is_disjoint(&b.interval)));
    // τ has no 000, so three digits past the longest word separate x_τ.
    let precision = (1 << (m + 1)) + 4;
    let (x_lo, x_hi) = x_tau(precision)?;
    let left_of_x_tau = intervals.iter().all(|iv| iv.interval.upper < x_lo);
    let subwords_found = intervals.iter().all(|iv| iv.position_in_tau.is_some());

    Ok(HorseshoeCertificate {
        order: m,
        intervals,
        x_tau_lower: x_lo,
        x_tau_upper: x_hi,
        x_tau_precision: precision,
        pairwise_disjoint,
        left_of_x_tau,
        subwords_found,
        covering_claim: "kappa2(I_k) contains [0, 1/2), which contains J = [0, x_tau]".into(),
        entropy_lower_bound: format!("log({m})"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_two_words() {
        let c = horseshoe_certificate(2).unwrap();
        assert_eq!(c.intervals[0].word.to_string(), "01100");
        assert_eq!(c.intervals[1].word.to_string(), "011010010");
        assert!(c.machine_checked());
    }

    #[test]
    fn orders_up_to_ten() {
        for m in 2..=10 {
            let c = horseshoe_certificate(m).unwrap();
            assert!(c.machine_checked(), "m = {m}");
            assert_eq!(c.entropy_lower_bound, format!("log({m})"));
            assert_eq!(c.intervals.len(), m);
        }
        assert!(horseshoe_certificate(1).is_err());
    }
}
