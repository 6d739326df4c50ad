use std::cmp::Ordering;
use std::sync::Arc;

use num::bigint::BigInt;
use num::rational::BigRational;

use super::schedule::limit_digit;
use super::{make_schedule_for, ConstructedPoint, Provenance, Real, Schedule, Stage, Target};
use crate::error::{Error, Result};
use crate::stream::StreamWord;
use crate::word::{mu_power, thue_morse_digit, thue_morse_position, FiniteWord};

/// Largest `w_n` that [`stage_word`] materializes.
const MAX_STAGE_WORD: u64 = 1 << 24;

fn limit_stream(stages: Vec<Stage>, shift: u64) -> StreamWord {
    let stages: Arc<[Stage]> = stages.into();
    StreamWord::binary_fn(move |i| limit_digit(&stages, i.saturating_add(shift)))
}

fn zero_tail(w: &FiniteWord) -> Result<ConstructedPoint> {
    let stream = StreamWord::constant(0, 2)?.prepend(w)?.with_tag("zero-tail");
    Ok(ConstructedPoint::new(stream, Target::Infinite, Provenance::ZeroTail { word: w.to_string() }))
}

fn check_binary(w: &FiniteWord) -> Result<()> {
    if w.is_binary() {
        Ok(())
    } else {
        Err(Error::NotBinary(w.base()))
    }
}

/// The limit of `w_n = φ_1(φ_2(…φ_n(ε)))` for a schedule, extended
/// deterministically until every `u64` index is fixed.
pub fn build_cr(schedule: &Schedule) -> Result<ConstructedPoint> {
    schedule.validate()?;
    let mut full = schedule.clone();
    full.extend_to_cover_all()?;
    let stages = full.stages().to_vec();
    let stream = limit_stream(stages.clone(), 0).with_tag("staged-limit");
    Ok(ConstructedPoint::new(stream, full.target().clone(), Provenance::StagedLimit { stages }))
}

/// The explicit finite word `w_n` for the first `n` stages.
pub fn stage_word(schedule: &Schedule, n: usize) -> Result<FiniteWord> {
    let stages = schedule.stages();
    if n == 0 || n > stages.len() {
        return Err(Error::InvalidArgument(format!("stage count {n} outside 1..={}", stages.len())));
    }
    let truncated = Schedule { target: schedule.target().clone(), stages: stages[..n].to_vec() };
    if truncated.covered_length() > MAX_STAGE_WORD {
        return Err(Error::InvalidArgument(format!("w_{n} is longer than {MAX_STAGE_WORD} symbols")));
    }
    let mut w = FiniteWord::empty(2);
    for (i, st) in stages[..n].iter().enumerate().rev() {
        let zeros = if i + 1 == n { st.r } else { st.r - 2 };
        let x = FiniteWord::repeat_symbol(0, zeros as usize, 2)?.concat(&w)?;
        w = mu_power(st.s, &x)?.delete_prefix(st.t as usize);
    }
    Ok(w)
}

/// A point whose expansion starts with the Thue-Morse subword `p` and whose
/// critical exponent is `α ≥ 2`.
///
/// For `α > 2` the first stage is `(r, t, s) = (2, 5, s_1)` with `2^{s_1}`
/// beyond the end of the first occurrence of `p` in `τ`; then `δ^{2^{s_1}-5}`
/// of the limit starts with `τ_(s_1)`, and a further shift lands on `p`.
pub fn build_with_tm_prefix(p: &FiniteWord, alpha: &Target) -> Result<ConstructedPoint> {
    check_binary(p)?;
    let pos = thue_morse_position(p).ok_or_else(|| Error::NotThueMorseSubword(p.to_string()))?;
    if matches!(alpha, Target::Infinite) {
        return zero_tail(p);
    }
    match alpha.cmp_integer(2)? {
        Ordering::Less => {
            return Err(Error::TargetOutOfContract {
                alpha: alpha.to_string(),
                requirement: "alpha >= 2 (every infinite binary word has exponent at least 2)".into(),
            })
        }
        Ordering::Equal => {
            let offset = pos as u64;
            let stream = StreamWord::binary_fn(move |i| thue_morse_digit(i.saturating_add(offset)))
                .with_tag("thue-morse-suffix");
            let provenance =
                if pos == 0 { Provenance::ThueMorse } else { Provenance::ThueMorseSuffix { offset: pos } };
            return Ok(ConstructedPoint::new(stream, alpha.clone(), provenance));
        }
        Ordering::Greater => {}
    }
    let end = (pos + p.len()) as u64;
    let mut s = 3u32;
    while (1u64 << s) <= end {
        s += 1;
    }
    let mut schedule = Schedule::with_first_stage(alpha.clone(), Stage { r: 2, t: 5, s })?;
    schedule.extend_to_cover_all()?;
    let shift = (1u64 << s) - 5 + pos as u64;
    let stages = schedule.stages().to_vec();
    let stream = limit_stream(stages.clone(), shift).with_tag("thue-morse-prefix");
    let provenance = Provenance::ThueMorsePrefix { word: p.to_string(), tm_position: pos, shift, stages };
    Ok(ConstructedPoint::new(stream, alpha.clone(), provenance))
}

/// A point in `𝒫(w)` with critical exponent `α ≥ ℓ(w)`.
///
/// Writing `w = w̃0^k` with `w̃` empty or ending in 1, the stream is
/// `w̃·0^{ℓ(w)}·ỹ` where `y = 00ỹ` is the limit word for `α`. The zero block
/// has length exactly `ℓ(w)` and occurs once, since `y` has no `000`.
pub fn extend_word(w: &FiniteWord, alpha: &Target) -> Result<ConstructedPoint> {
    check_binary(w)?;
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let len = w.len();
    if len <= 2 {
        return build_with_tm_prefix(w, alpha);
    }
    if alpha.cmp_integer(len as u64)? == Ordering::Less {
        return Err(Error::TargetOutOfContract {
            alpha: alpha.to_string(),
            requirement: format!("alpha >= l(w) = {len}"),
        });
    }
    if matches!(alpha, Target::Infinite) {
        return zero_tail(w);
    }
    let trailing = w.digits().iter().rev().take_while(|&&d| d == 0).count();
    let stem = w.prefix(len - trailing);
    let head = stem.concat(&FiniteWord::repeat_symbol(0, len, 2)?)?;
    let inner = build_cr(&make_schedule_for(alpha.clone(), 1)?)?;
    let tail = StreamWord::binary_fn({
        let s = inner.stream().clone();
        move |i| s.digit(i.saturating_add(2))
    });
    let stream = tail.prepend(&head)?.with_tag("extend-word");
    let provenance =
        Provenance::ExtendWord { word: w.to_string(), zero_block: len, inner: Box::new(inner.provenance().clone()) };
    Ok(ConstructedPoint::new(stream, alpha.clone(), provenance))
}

/// A point `x` with expansion starting `0^{2^n}` (so `x ≤ 2^{-2^n}`) and
/// `κ₂(x) = y`, for `0 ≤ y ≤ 2^{-n}`. `y = 0` gives `x = 0`.
pub fn build_near_zero(n: u32, y: &Real) -> Result<ConstructedPoint> {
    if n == 0 || n > 16 {
        return Err(Error::InvalidArgument(format!("n = {n} outside 1..=16")));
    }
    if y.is_zero() {
        let stream = StreamWord::constant(0, 2)?;
        return Ok(ConstructedPoint::new(stream, Target::Infinite, Provenance::Zero));
    }
    let bound = BigRational::new(BigInt::from(1), BigInt::from(1u64 << n));
    if y.cmp_rational(&BigRational::from_integer(BigInt::from(0)))? != Ordering::Greater
        || y.cmp_rational(&bound)? == Ordering::Greater
    {
        return Err(Error::OutOfRange { value: y.to_string(), range: format!("[0, 1/{}]", 1u64 << n) });
    }
    let alpha = Target::from_kappa(y);
    let inner = if n == 1 {
        build_with_tm_prefix(&FiniteWord::repeat_symbol(0, 2, 2)?, &alpha)?
    } else {
        extend_word(&FiniteWord::repeat_symbol(0, 1 << n, 2)?, &alpha)?
    };
    let stream = inner.stream().clone().with_tag("near-zero");
    Ok(ConstructedPoint::new(stream, alpha, Provenance::NearZero { n, inner: Box::new(inner.provenance().clone()) }))
}
