use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponent::{ExponentValue, ExtensionState};
use crate::expansion::{format_rational, pow2};

/// Samples drawn from one ChaCha stream; chunks are independent, so the
/// result does not depend on how they are spread over workers.
pub const PROBE_CHUNK: usize = 1024;
const MAX_PREFIX_LEN: usize = 1 << 16;

/// Floating-point summaries; everything else in [`ProbeStats`] is exact.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeEstimate {
    pub float: bool,
    pub fraction_at_least_three: f64,
    pub reference_probability: f64,
    pub standard_error: f64,
    /// `|fraction - reference| / standard_error` (0 when both agree exactly).
    pub z_score: f64,
    pub within_three_standard_errors: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeStats {
    pub samples: usize,
    pub prefix_len: usize,
    pub seed: u64,
    /// `(E, count)` sorted by `E`.
    pub histogram: Vec<(ExponentValue, u64)>,
    pub at_least_three: u64,
    /// Exact probability that a uniform word of this length contains `000` or
    /// `111`, which is a lower bound on `P(E ≥ 3)`.
    pub reference_probability: String,
    pub estimate: ProbeEstimate,
}

/// `P(000 or 111 occurs)` for a uniform binary word of length `len`, from a
/// transfer matrix over the length (1 or 2) of the final run.
pub fn probability_of_triple_run(len: usize) -> BigRational {
    if len < 3 {
        return BigRational::zero();
    }
    // words avoiding both cubes ending in a run of length 1 / 2
    let (mut one, mut two) = (BigInt::from(2), BigInt::zero());
    for _ in 1..len {
        let next_one = &one + &two;
        two = std::mem::replace(&mut one, next_one);
    }
    let avoiding = one + two;
    BigRational::one() - BigRational::new(avoiding, pow2(len))
}

fn chunk_histogram(seed: u64, chunk: usize, count: usize, len: usize) -> BTreeMap<ExponentValue, u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    let mut hist = BTreeMap::new();
    for _ in 0..count {
        let mut state = ExtensionState::new(2);
        let mut bits = 0u64;
        for i in 0..len {
            if i % 64 == 0 {
                bits = rng.random::<u64>();
            }
            state.push((bits & 1) as u8);
            bits >>= 1;
        }
        *hist.entry(state.exponent()).or_insert(0) += 1;
    }
    hist
}

/// Empirical distribution of `E` over uniform random words of length
/// `prefix_len`.
pub fn measure_probe(samples: usize, prefix_len: usize, seed: u64, parallel: bool) -> Result<ProbeStats> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    if prefix_len == 0 || prefix_len > MAX_PREFIX_LEN {
        return Err(Error::InvalidArgument(format!("prefix_len must be in 1..={MAX_PREFIX_LEN}")));
    }
    let chunks: Vec<(usize, usize)> = (0..samples.div_ceil(PROBE_CHUNK))
        .map(|c| (c, PROBE_CHUNK.min(samples - c * PROBE_CHUNK)))
        .collect();
    let run = |&(c, n): &(usize, usize)| chunk_histogram(seed, c, n, prefix_len);
    let parts: Vec<_> = if parallel { chunks.par_iter().map(run).collect() } else { chunks.iter().map(run).collect() };
    let mut hist = BTreeMap::new();
    for part in parts {
        for (e, n) in part {
            *hist.entry(e).or_insert(0u64) += n;
        }
    }
    let three = ExponentValue::from_integer(3);
    let at_least_three: u64 = hist.iter().filter(|(e, _)| **e >= three).map(|(_, n)| n).sum();

    let reference = probability_of_triple_run(prefix_len);
    let p = reference.to_f64().unwrap_or(0.0);
    let frac = at_least_three as f64 / samples as f64;
    let se = (p * (1.0 - p) / samples as f64).sqrt();
    let diff = (frac - p).abs();
    let z = if diff == 0.0 { 0.0 } else if se == 0.0 { f64::INFINITY } else { diff / se };

    Ok(ProbeStats {
        samples,
        prefix_len,
        seed,
        histogram: hist.into_iter().collect(),
        at_least_three,
        reference_probability: format_rational(&reference),
        estimate: ProbeEstimate {
            float: true,
            fraction_at_least_three: frac,
            reference_probability: p,
            standard_error: se,
            z_score: z,
            within_three_standard_errors: z <= 3.0,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::ratio;
    use crate::word::FiniteWord;

    #[test]
    fn transfer_matrix_matches_enumeration() {
        for len in 0..=16usize {
            let hits = (0..1u64 << len)
                .filter(|&i| {
                    let w = FiniteWord::binary_from_index(len, i);
                    w.longest_run_of(0) >= 3 || w.longest_run_of(1) >= 3
                })
                .count();
            assert_eq!(probability_of_triple_run(len), BigRational::new(BigInt::from(hits), pow2(len)), "len {len}");
        }
        assert_eq!(probability_of_triple_run(3), ratio(1, 4));
    }

    #[test]
    fn deterministic_and_worker_independent() {
        let a = measure_probe(3000, 40, 7, false).unwrap();
        let b = measure_probe(3000, 40, 7, true).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.histogram, measure_probe(3000, 40, 8, false).unwrap().histogram);
        assert_eq!(a.histogram.iter().map(|(_, n)| n).sum::<u64>(), 3000);
    }

    #[test]
    fn length_three() {
        let s = measure_probe(20000, 3, 1, false).unwrap();
        assert_eq!(s.reference_probability, "1/4");
        assert!(s.estimate.within_three_standard_errors);
    }
}
