use std::cmp::Ordering;

use num::bigint::BigInt;
use num::rational::BigRational;
use serde::Serialize;

use super::Target;
use crate::error::{Error, Result};
use crate::expansion::format_rational;
use crate::word::thue_morse_digit;

/// Largest `s` a schedule may use; coverage of the full `u64` index range is
/// reached long before this.
const MAX_STAGE_EXPONENT: u32 = 48;
const MAX_STAGES: usize = 64;

/// One level `φ(u) = δ^t μ^s(0^{r-2} u)` of the construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
pub struct Stage {
    pub r: u64,
    pub t: u64,
    pub s: u32,
}

impl Stage {
    /// `β = r - t/2^s`, the exponent of the level's leading repetition.
    pub fn beta(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.r))
            - BigRational::new(BigInt::from(self.t), BigInt::from(self.period()))
    }

    pub fn period(&self) -> u64 {
        1u64 << self.s
    }

    /// Whether `δ^t μ^s(0)` begins with `00`.
    pub fn deletion_starts_with_00(&self) -> bool {
        self.t + 1 < self.period() && thue_morse_digit(self.t) == 0 && thue_morse_digit(self.t + 1) == 0
    }
}

/// A sequence of stages converging to a target exponent `α > 2`.
#[derive(Clone, Debug)]
pub struct Schedule {
    pub(super) target: Target,
    pub(super) stages: Vec<Stage>,
}

/// `stages` stages for a rational target `α > 2`.
pub fn make_schedule(alpha: &BigRational, stages: usize) -> Result<Schedule> {
    make_schedule_for(Target::Rational(alpha.clone()), stages)
}

/// Stage rule: `s_i = max(3, s_{i-1}+1)`, `r_i = ⌈α⌉` (or `α` when
/// integral), and `t_i` the smallest `t` for which `δ^t μ^{s_i}(0)` begins
/// with `00` and `β_i ∈ (β_{i-1}, α)`; `s_i` grows until such a `t` exists.
pub fn make_schedule_for(target: Target, stages: usize) -> Result<Schedule> {
    check_target(&target)?;
    let mut schedule = Schedule { target, stages: Vec::new() };
    for _ in 0..stages {
        schedule.push_next()?;
    }
    Ok(schedule)
}

fn check_target(target: &Target) -> Result<()> {
    if matches!(target, Target::Infinite) || target.cmp_integer(2)? != Ordering::Greater {
        return Err(Error::TargetOutOfContract {
            alpha: target.to_string(),
            requirement: "schedules need a finite target alpha > 2 (alpha = 2 uses the Thue-Morse word)".into(),
        });
    }
    Ok(())
}

impl Schedule {
    /// A schedule with a prescribed first stage, as used to force a
    /// Thue-Morse prefix.
    pub fn with_first_stage(target: Target, first: Stage) -> Result<Self> {
        check_target(&target)?;
        let schedule = Self { target, stages: vec![first] };
        schedule.validate()?;
        Ok(schedule)
    }

    pub fn target(&self) -> &Target {
        &self.target
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn betas(&self) -> Vec<BigRational> {
        self.stages.iter().map(Stage::beta).collect()
    }

    pub fn push_next(&mut self) -> Result<Stage> {
        let stage = self.next_stage()?;
        self.stages.push(stage);
        Ok(stage)
    }

    fn next_stage(&self) -> Result<Stage> {
        if self.stages.len() >= MAX_STAGES {
            return Err(Error::InvalidArgument(format!("schedule limited to {MAX_STAGES} stages")));
        }
        let r = self.target.zero_block_length()?;
        let prev = self.stages.last();
        let prev_beta = prev.map(Stage::beta);
        let mut s = prev.map_or(3, |p| (p.s + 1).max(3));
        while s <= MAX_STAGE_EXPONENT {
            if let Some(t) = self.pick_t(r, s, prev_beta.as_ref())? {
                return Ok(Stage { r, t, s });
            }
            s += 1;
        }
        Err(Error::InvalidArgument(format!("no stage found up to s = {MAX_STAGE_EXPONENT} for target {}", self.target)))
    }

    fn pick_t(&self, r: u64, s: u32, prev_beta: Option<&BigRational>) -> Result<Option<u64>> {
        let period = 1u64 << s;
        let beta = |t: u64| Stage { r, t, s }.beta();
        // β(t) is decreasing in t, so "β(t) < α" holds on a final segment.
        let below = |t: u64| -> Result<bool> { Ok(self.target.cmp_rational(&beta(t))? == Ordering::Greater) };
        let last = period - 2;
        if !below(last)? {
            return Ok(None);
        }
        let (mut lo, mut hi) = (0u64, last); // below(hi), and lo is either 0 or !below(lo)
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if below(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let first = if lo >= 1 && below(lo)? { lo } else { hi };
        for t in first..=last {
            let stage = Stage { r, t, s };
            if !stage.deletion_starts_with_00() {
                continue;
            }
            return Ok(match prev_beta {
                Some(pb) if stage.beta() <= *pb => None,
                _ => Some(t),
            });
        }
        Ok(None)
    }

    /// Length of the prefix of the limit word fixed by the current stages.
    pub fn covered_length(&self) -> u64 {
        let mut iter = self.stages.iter().rev();
        let Some(last) = iter.next() else { return 0 };
        let mut len = u128::from(last.r) * u128::from(last.period()) - u128::from(last.t);
        for st in iter {
            len = (u128::from(st.r) - 2 + len).saturating_mul(u128::from(st.period())) - u128::from(st.t);
            len = len.min(u128::from(u64::MAX) + 1);
        }
        u64::try_from(len).unwrap_or(u64::MAX)
    }

    /// Appends stages until every `u64` index of the limit word is fixed.
    pub fn extend_to_cover_all(&mut self) -> Result<()> {
        while self.covered_length() < u64::MAX {
            self.push_next()?;
        }
        Ok(())
    }

    /// Checks every schedule invariant.
    pub fn validate(&self) -> Result<()> {
        let fail = |why: String| Err(Error::InvalidArgument(format!("invalid schedule: {why}")));
        let mut prev: Option<BigRational> = None;
        for (i, st) in self.stages.iter().enumerate() {
            if st.s < 3 || st.s > MAX_STAGE_EXPONENT {
                return fail(format!("stage {i}: s = {} outside [3, {MAX_STAGE_EXPONENT}]", st.s));
            }
            if st.t == 0 || st.t >= st.period() {
                return fail(format!("stage {i}: t = {} outside [1, 2^s)", st.t));
            }
            if st.r < 2 {
                return fail(format!("stage {i}: r = {} below 2", st.r));
            }
            if !st.deletion_starts_with_00() {
                return fail(format!("stage {i}: δ^t μ^s(0) does not begin with 00"));
            }
            let beta = st.beta();
            if self.target.cmp_rational(&beta)? != Ordering::Greater {
                return fail(format!("stage {i}: beta {} is not below the target", format_rational(&beta)));
            }
            if let Some(p) = &prev {
                if beta <= *p {
                    return fail(format!("stage {i}: beta does not increase"));
                }
            }
            prev = Some(beta);
        }
        Ok(())
    }
}

/// Digit `k` of the limit word `Z_1`, where `Z_i = δ^{t_i} μ^{s_i}(0^{r_i-2} Z_{i+1})`.
///
/// Block `b` of `μ^s(X)` is `τ_(s)` or its negation according to `X[b]`, so
/// each level contributes one Thue-Morse digit to an XOR and hands the block
/// index down to the next level until it lands in a zero block.
pub(crate) fn limit_digit(stages: &[Stage], k: u64) -> u8 {
    let mut acc = 0u8;
    let mut k = u128::from(k);
    let n = stages.len();
    for (i, st) in stages.iter().enumerate() {
        let pos = k + u128::from(st.t);
        let block = pos >> st.s;
        let offset = (pos & u128::from(st.period() - 1)) as u64;
        acc ^= thue_morse_digit(offset);
        let zeros = u128::from(st.r) - if i + 1 == n { 0 } else { 2 };
        if block < zeros {
            return acc;
        }
        k = block - zeros;
    }
    debug_assert!(false, "index beyond the covered prefix");
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::ratio;

    #[test]
    fn five_halves_schedule() {
        let sch = make_schedule(&ratio(5, 2), 3).unwrap();
        sch.validate().unwrap();
        let st = sch.stages();
        assert_eq!(st[0], Stage { r: 3, t: 5, s: 3 });
        assert_eq!(st[0].beta(), ratio(19, 8));
        assert_eq!(st[1], Stage { r: 3, t: 9, s: 4 });
        let betas = sch.betas();
        assert!(betas.windows(2).all(|w| w[0] < w[1]));
        assert!(betas.iter().all(|b| *b < ratio(5, 2)));
    }

    #[test]
    fn integer_target_single_stage() {
        let sch = make_schedule(&ratio(3, 1), 1).unwrap();
        let st = sch.stages()[0];
        assert_eq!(st.r, 3);
        assert!(st.beta() < ratio(3, 1));
        assert_eq!(st.beta(), ratio(19, 8));
    }

    #[test]
    fn seven_thirds_stages_start_with_00() {
        let sch = make_schedule(&ratio(7, 3), 4).unwrap();
        for st in sch.stages() {
            assert!(st.deletion_starts_with_00());
            assert_eq!(thue_morse_digit(st.t), 0);
            assert_eq!(thue_morse_digit(st.t + 1), 0);
        }
        sch.validate().unwrap();
    }

    #[test]
    fn betas_converge() {
        for alpha in [ratio(9, 4), ratio(5, 2), ratio(3, 1), ratio(7, 2), ratio(21, 10)] {
            let mut sch = make_schedule(&alpha, 0).unwrap();
            sch.extend_to_cover_all().unwrap();
            sch.validate().unwrap();
            let last = sch.stages().last().unwrap();
            let gap = &alpha - last.beta();
            // within a handful of 00-gaps of the final resolution
            assert!(gap < ratio(16, 1) / BigRational::from_integer(BigInt::from(last.period())), "{alpha}");
        }
    }

    #[test]
    fn rejects_small_targets() {
        assert!(make_schedule(&ratio(2, 1), 1).is_err());
        assert!(make_schedule(&ratio(3, 2), 1).is_err());
        assert!(make_schedule_for(Target::Infinite, 1).is_err());
    }

    #[test]
    fn validate_catches_bad_stages() {
        let bad = Schedule { target: Target::rational(ratio(5, 2)), stages: vec![Stage { r: 3, t: 4, s: 3 }] };
        assert!(bad.validate().is_err());
        let too_big = Schedule { target: Target::rational(ratio(5, 2)), stages: vec![Stage { r: 3, t: 1, s: 3 }] };
        assert!(too_big.validate().is_err());
    }

    #[test]
    fn coverage_grows() {
        let mut sch = make_schedule(&ratio(5, 2), 1).unwrap();
        assert_eq!(sch.covered_length(), 3 * 8 - 5);
        sch.push_next().unwrap();
        assert_eq!(sch.covered_length(), (1 + 3 * 16 - 9) * 8 - 5);
    }
}
