//! Branch-and-bound over binary right extensions.
//!
//! Every search is exact: `E` never decreases under extension, so a branch
//! whose running exponent already reaches the best leaf cannot improve it.
//! Parallel runs split the tree at a fixed depth into independent subtrees
//! and merge in lexicographic order, so reports (node counts included) do
//! not depend on the number of workers.

use std::cmp::Ordering;

use num::rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::construct::{extend_word, Target};
use crate::error::{Error, Result};
use crate::exponent::{critical_exponent, exponent_of_ratio, ratio_cmp, ExponentValue, ExtensionState};
use crate::word::{thue_morse_position, FiniteWord};

/// Knobs shared by every search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub prune: bool,
    pub parallel: bool,
    /// Abort once more nodes than this have been visited.
    pub node_budget: Option<u64>,
    /// Depth at which the tree is cut into independent subtrees.
    pub split_depth: u32,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { prune: true, parallel: false, node_budget: None, split_depth: 6 }
    }
}

impl SearchConfig {
    pub fn parallel(mut self, on: bool) -> Self {
        self.parallel = on;
        self
    }

    pub fn budget(mut self, nodes: Option<u64>) -> Self {
        self.node_budget = nodes;
        self
    }

    pub fn prune(mut self, on: bool) -> Self {
        self.prune = on;
        self
    }
}

/// Result of a minimum search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinSearch {
    /// `L(d)`; when incomplete, only the best leaf seen.
    pub value: ExponentValue,
    /// Lexicographically smallest `v` of length `d` with `E(wv) = L(d)`.
    pub extension: FiniteWord,
    pub nodes: u64,
    pub complete: bool,
}

type Ratio = (u64, u64);

fn lt(a: Ratio, b: Ratio) -> bool {
    ratio_cmp(a.0, a.1, b.0, b.1) == Ordering::Less
}

struct Leaf {
    ratio: Ratio,
    digits: Vec<u8>,
}

struct Subtree {
    best: Option<Leaf>,
    nodes: u64,
    aborted: bool,
}

struct MinDfs {
    target_len: usize,
    prune: bool,
    cap: Option<Ratio>,
    budget: u64,
    nodes: u64,
    best: Option<Leaf>,
}

impl MinDfs {
    fn run(&mut self, state: &ExtensionState) -> bool {
        if state.len() == self.target_len {
            let r = state.ratio();
            if self.best.as_ref().is_none_or(|b| lt(r, b.ratio)) {
                self.best = Some(Leaf { ratio: r, digits: state.digits().to_vec() });
            }
            return true;
        }
        for a in 0..2u8 {
            self.nodes += 1;
            if self.nodes > self.budget {
                return false;
            }
            let mut child = state.clone();
            child.push(a);
            if self.prune {
                let r = child.ratio();
                if self.cap.is_some_and(|c| lt(c, r)) || self.best.as_ref().is_some_and(|b| !lt(r, b.ratio)) {
                    continue;
                }
            }
            if !self.run(&child) {
                return false;
            }
        }
        true
    }
}

/// The leaf reached by always taking the child of smaller exponent.
fn greedy_leaf(root: &ExtensionState, target_len: usize) -> Ratio {
    let mut state = root.clone();
    while state.len() < target_len {
        let mut zero = state.clone();
        zero.push(0);
        let mut one = state;
        one.push(1);
        state = if lt(one.ratio(), zero.ratio()) { one } else { zero };
    }
    state.ratio()
}

fn split_roots(w: &FiniteWord, d: usize, split: usize) -> Vec<ExtensionState> {
    let root = ExtensionState::from_word(w);
    let mut layer = vec![root];
    for _ in 0..split {
        layer = layer
            .into_iter()
            .flat_map(|s| {
                (0..2u8).map(move |a| {
                    let mut c = s.clone();
                    c.push(a);
                    c
                })
            })
            .collect();
    }
    debug_assert!(split <= d);
    layer
}

/// Exact `L(d) = min { E(wv) : v ∈ {0,1}^d }` with the default config.
pub fn min_exponent_at_depth(w: &FiniteWord, d: usize) -> Result<(ExponentValue, FiniteWord)> {
    let r = min_exponent_search(w, d, &SearchConfig::default())?;
    Ok((r.value, r.extension))
}

/// `L(d)` under an explicit config; see [`MinSearch::complete`].
pub fn min_exponent_search(w: &FiniteWord, d: usize, config: &SearchConfig) -> Result<MinSearch> {
    if !w.is_binary() {
        return Err(Error::NotBinary(w.base()));
    }
    let target_len = w.len() + d;
    let split = (config.split_depth as usize).min(d);
    let budget = config.node_budget.unwrap_or(u64::MAX);
    let root = ExtensionState::from_word(w);
    let cap = config.prune.then(|| greedy_leaf(&root, target_len));
    let roots = split_roots(w, d, split);
    let split_nodes: u64 = (1..=split as u32).map(|k| 1u64 << k).sum();

    let solve = |state: &ExtensionState| -> Subtree {
        let mut dfs = MinDfs { target_len, prune: config.prune, cap, budget, nodes: 0, best: None };
        let done = dfs.run(state);
        Subtree { best: dfs.best, nodes: dfs.nodes, aborted: !done }
    };
    let subtrees: Vec<Subtree> = if config.parallel {
        roots.par_iter().map(solve).collect()
    } else {
        let mut out = Vec::with_capacity(roots.len());
        let mut used = split_nodes;
        for r in &roots {
            let s = solve(r);
            used = used.saturating_add(s.nodes);
            let stop = s.aborted || used > budget;
            out.push(s);
            if stop {
                break;
            }
        }
        out
    };

    let mut nodes = split_nodes;
    let mut complete = nodes <= budget;
    let mut best: Option<Leaf> = None;
    for s in subtrees {
        if !complete {
            break;
        }
        nodes = nodes.saturating_add(s.nodes);
        if s.aborted || nodes > budget {
            complete = false;
        }
        if let Some(leaf) = s.best {
            if best.as_ref().is_none_or(|b| lt(leaf.ratio, b.ratio)) {
                best = Some(leaf);
            }
        }
    }
    let nodes = nodes.min(budget);
    match best {
        Some(leaf) => {
            let extension = FiniteWord::from_trusted(leaf.digits[w.len()..].to_vec(), 2);
            let value = if leaf.digits.is_empty() { ExponentValue::zero() } else { exponent_of_ratio(leaf.ratio.0, leaf.ratio.1) };
            Ok(MinSearch { value, extension, nodes, complete })
        }
        None => Ok(MinSearch { value: ExponentValue::Infinite, extension: FiniteWord::empty(2), nodes, complete: false }),
    }
}

/// Where an upper bound on `𝓔_w` comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum UpperCertificate {
    /// `w` occurs in `τ` at this position, so a suffix of `τ` lies in `𝒫(w)`.
    ThueMorse { position: usize },
    /// `extend_word(w, ℓ(w))`.
    ExtendWord { alpha: usize },
    None,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub word: FiniteWord,
    pub depth: usize,
    pub exponent: ExponentValue,
    pub lower: ExponentValue,
    pub minimizing_extension: FiniteWord,
    pub upper: ExponentValue,
    pub upper_certificate: UpperCertificate,
    pub nodes: u64,
    pub complete: bool,
}

/// `L(d) ≤ 𝓔_w ≤ upper`.
pub fn ew_bounds(w: &FiniteWord, d: usize, config: &SearchConfig) -> Result<BoundsReport> {
    let search = min_exponent_search(w, d, config)?;
    let (upper, upper_certificate) = upper_bound(w, &search.value)?;
    Ok(BoundsReport {
        word: w.clone(),
        depth: d,
        exponent: critical_exponent(w).0,
        lower: search.value,
        minimizing_extension: search.extension,
        upper,
        upper_certificate,
        nodes: search.nodes,
        complete: search.complete,
    })
}

fn upper_bound(w: &FiniteWord, lower: &ExponentValue) -> Result<(ExponentValue, UpperCertificate)> {
    if let Some(position) = thue_morse_position(w) {
        return Ok((ExponentValue::from_integer(2), UpperCertificate::ThueMorse { position }));
    }
    let len = w.len();
    let ell = ExponentValue::from_integer(len as u64);
    if ell >= *lower {
        // Constructing the point checks the builder contract.
        let alpha = BigRational::from_integer(len.into());
        extend_word(w, &Target::rational(alpha))?;
        return Ok((ell, UpperCertificate::ExtendWord { alpha: len }));
    }
    Ok((ExponentValue::Infinite, UpperCertificate::None))
}

/// A word refuting "every `w` has an infinite extension with exponent
/// `max(2, E(w))`".
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CounterexampleRecord {
    pub word: FiniteWord,
    pub exponent: ExponentValue,
    pub threshold: ExponentValue,
    /// Smallest `d` with `L(d) > threshold`.
    pub depth: usize,
    pub lower: ExponentValue,
    /// The negation, which is always a counterexample too.
    pub negation: FiniteWord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CounterexampleSearch {
    pub records: Vec<CounterexampleRecord>,
    pub words_checked: u64,
    pub nodes: u64,
    pub complete: bool,
}

/// Longest extension depth (capped at `d`) keeping `E ≤ p/q`, and nodes used.
fn survivable_depth(w: &FiniteWord, threshold: Ratio, d: usize, budget: u64) -> (usize, u64, bool) {
    fn go(state: &ExtensionState, left: usize, t: Ratio, nodes: &mut u64, budget: u64) -> Option<usize> {
        if left == 0 {
            return Some(0);
        }
        let mut deepest = 0;
        for a in 0..2u8 {
            *nodes += 1;
            if *nodes > budget {
                return None;
            }
            let mut child = state.clone();
            child.push(a);
            if lt(t, child.ratio()) {
                continue;
            }
            let got = 1 + go(&child, left - 1, t, nodes, budget)?;
            deepest = deepest.max(got);
            if deepest == left {
                break;
            }
        }
        Some(deepest)
    }
    let mut nodes = 0;
    match go(&ExtensionState::from_word(w), d, threshold, &mut nodes, budget) {
        Some(depth) => (depth, nodes, true),
        None => (0, nodes.min(budget), false),
    }
}

/// Every binary `w` with `1 ≤ ℓ(w) ≤ max_len` and `L(d') > max(2, E(w))`
/// for some `d' ≤ d`, in length-lexicographic order.
pub fn counterexample_search(max_len: usize, d: usize, config: &SearchConfig) -> Result<CounterexampleSearch> {
    if max_len == 0 || d == 0 {
        return Err(Error::InvalidArgument("max_len and depth must be at least 1".into()));
    }
    if max_len > 30 {
        return Err(Error::InvalidArgument(format!("max_len = {max_len} exceeds 30")));
    }
    let words: Vec<FiniteWord> = (1..=max_len)
        .flat_map(|len| (0..1u64 << len).map(move |i| FiniteWord::binary_from_index(len, i)))
        .collect();
    let budget = config.node_budget.unwrap_or(u64::MAX);

    let check = |w: &FiniteWord| -> (Option<(usize, ExponentValue, Ratio)>, u64, bool) {
        let (e, witness) = critical_exponent(w);
        let t = witness.map_or((2, 1), |wt| {
            let r = (wt.length as u64, wt.period as u64);
            if lt(r, (2, 1)) {
                (2, 1)
            } else {
                r
            }
        });
        let (depth, nodes, done) = survivable_depth(w, t, d, budget);
        if !done || depth >= d {
            return (None, nodes, done);
        }
        (Some((depth + 1, e, t)), nodes, true)
    };
    let results: Vec<_> = if config.parallel { words.par_iter().map(check).collect() } else { words.iter().map(check).collect() };

    let mut records = Vec::new();
    let mut nodes = 0u64;
    let mut complete = true;
    let mut words_checked = 0;
    for (w, (hit, n, done)) in words.iter().zip(results) {
        nodes = nodes.saturating_add(n);
        if !done || nodes > budget {
            complete = false;
            break;
        }
        words_checked += 1;
        if let Some((depth, exponent, t)) = hit {
            let cfg = SearchConfig { parallel: false, node_budget: None, ..config.clone() };
            let lower = min_exponent_search(w, depth, &cfg)?.value;
            records.push(CounterexampleRecord {
                word: w.clone(),
                exponent,
                threshold: exponent_of_ratio(t.0, t.1),
                depth,
                lower,
                negation: w.negate()?,
            });
        }
    }
    Ok(CounterexampleSearch { records, words_checked, nodes: nodes.min(budget), complete })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum Achievability {
    Realized,
    ImpossibleBelowBound,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AchievableEntry {
    pub target: ExponentValue,
    pub status: Achievability,
    pub reason: String,
}

/// Evidence about which exponents `E(wy)` can take; never a proof of a gap.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AchievableReport {
    pub word: FiniteWord,
    pub depth: usize,
    pub lower: ExponentValue,
    pub lower_complete: bool,
    pub entries: Vec<AchievableEntry>,
    pub nodes: u64,
}

pub fn achievable_exponents(
    w: &FiniteWord,
    targets: &[ExponentValue],
    d: usize,
    config: &SearchConfig,
) -> Result<AchievableReport> {
    if targets.windows(2).any(|p| p[0] > p[1]) {
        return Err(Error::UnsortedTargets);
    }
    let search = min_exponent_search(w, d, config)?;
    let tm = thue_morse_position(w);
    let len = w.len() as u64;
    let two = ExponentValue::from_integer(2);
    let entries = targets
        .iter()
        .map(|alpha| {
            let (status, reason) = if tm.is_some() && *alpha >= two {
                (Achievability::Realized, "Thue-Morse subword: prefix-preserving construction".to_string())
            } else if len >= 3 && *alpha >= ExponentValue::from_integer(len) {
                (Achievability::Realized, format!("alpha >= l(w) = {len}: extend-word construction"))
            } else if search.complete && *alpha < search.value {
                (Achievability::ImpossibleBelowBound, format!("every depth-{d} extension has exponent >= {}", search.value))
            } else {
                (Achievability::Unknown, "no certificate either way at this depth".to_string())
            };
            AchievableEntry { target: alpha.clone(), status, reason }
        })
        .collect();
    Ok(AchievableReport {
        word: w.clone(),
        depth: d,
        lower: search.value,
        lower_complete: search.complete,
        entries,
        nodes: search.nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> FiniteWord {
        s.parse().unwrap()
    }

    fn brute_min(w: &FiniteWord, d: usize) -> ExponentValue {
        (0..1u64 << d)
            .map(|i| critical_exponent(&w.concat(&FiniteWord::binary_from_index(d, i)).unwrap()).0)
            .min()
            .unwrap()
    }

    #[test]
    fn spec_examples() {
        assert_eq!(min_exponent_at_depth(&w("00100100"), 1).unwrap(), (ExponentValue::from_integer(3), w("0")));
        assert_eq!(min_exponent_at_depth(&FiniteWord::empty(2), 3).unwrap(), (ExponentValue::from_ratio(3, 2), w("010")));
        let (e, v) = min_exponent_at_depth(&FiniteWord::empty(2), 10).unwrap();
        assert_eq!(e, ExponentValue::from_integer(2));
        assert_eq!(critical_exponent(&v).0, e);
        assert_eq!(min_exponent_at_depth(&w("0110"), 0).unwrap(), (ExponentValue::from_integer(2), FiniteWord::empty(2)));
    }

    #[test]
    fn pruning_is_sound() {
        for len in 0..=4usize {
            for i in 0..1u64 << len {
                let base = FiniteWord::binary_from_index(len, i);
                for d in 0..=7 {
                    let a = min_exponent_search(&base, d, &SearchConfig::default()).unwrap();
                    let b = min_exponent_search(&base, d, &SearchConfig::default().prune(false)).unwrap();
                    assert_eq!(a.value, b.value);
                    assert_eq!(a.extension, b.extension);
                    assert_eq!(a.value, brute_min(&base, d));
                }
            }
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        for word in ["", "0", "00100100", "0110"] {
            for d in [3, 8, 12] {
                let seq = min_exponent_search(&w(word), d, &SearchConfig::default()).unwrap();
                let par = min_exponent_search(&w(word), d, &SearchConfig::default().parallel(true)).unwrap();
                assert_eq!(seq, par);
            }
        }
    }

    #[test]
    fn budget_marks_incomplete() {
        let cfg = SearchConfig::default().budget(Some(10)).prune(false);
        let r = min_exponent_search(&FiniteWord::empty(2), 12, &cfg).unwrap();
        assert!(!r.complete);
        assert_eq!(r.nodes, 10);
        let par = min_exponent_search(&FiniteWord::empty(2), 12, &cfg.clone().parallel(true)).unwrap();
        assert_eq!(r, par);
    }

    #[test]
    fn bounds_examples() {
        let r = ew_bounds(&w("00100100"), 6, &SearchConfig::default()).unwrap();
        assert!(r.lower >= ExponentValue::from_integer(3));
        assert_eq!(r.upper, ExponentValue::from_integer(8));
        assert_eq!(r.upper_certificate, UpperCertificate::ExtendWord { alpha: 8 });
        let r = ew_bounds(&w("0"), 8, &SearchConfig::default()).unwrap();
        assert_eq!((r.lower.clone(), r.upper.clone()), (ExponentValue::from_integer(2), ExponentValue::from_integer(2)));
        let r = ew_bounds(&FiniteWord::empty(2), 12, &SearchConfig::default()).unwrap();
        assert_eq!((r.lower, r.upper), (ExponentValue::from_integer(2), ExponentValue::from_integer(2)));
    }

    #[test]
    fn counterexamples() {
        let found = counterexample_search(8, 2, &SearchConfig::default()).unwrap();
        assert!(found.complete);
        let words: Vec<String> = found.records.iter().map(|r| r.word.to_string()).collect();
        assert!(words.contains(&"00100100".to_string()));
        assert!(words.contains(&"11011011".to_string()));
        for r in &found.records {
            assert!(words.contains(&r.negation.to_string()));
            assert!(brute_min(&r.word, r.depth) > r.threshold);
            if r.depth > 1 {
                assert!(brute_min(&r.word, r.depth - 1) <= r.threshold);
            }
            assert_eq!(brute_min(&r.word, r.depth), r.lower);
        }
        let rec = found.records.iter().find(|r| r.word.to_string() == "00100100").unwrap();
        assert_eq!((rec.depth, rec.lower.clone()), (1, ExponentValue::from_integer(3)));
        assert!(counterexample_search(3, 4, &SearchConfig::default()).unwrap().records.is_empty());
        let par = counterexample_search(8, 2, &SearchConfig::default().parallel(true)).unwrap();
        assert_eq!(found, par);
    }

    #[test]
    fn achievable_examples() {
        let targets = ["5/2", "3", "8"].map(|s| s.parse::<ExponentValue>().unwrap());
        let r = achievable_exponents(&w("00100100"), &targets, 4, &SearchConfig::default()).unwrap();
        let st: Vec<_> = r.entries.iter().map(|e| e.status).collect();
        assert_eq!(st[0], Achievability::ImpossibleBelowBound);
        assert_ne!(st[1], Achievability::ImpossibleBelowBound);
        assert_eq!(st[2], Achievability::Realized);
        let r = achievable_exponents(&w("01"), &[ExponentValue::from_integer(2)], 4, &SearchConfig::default()).unwrap();
        assert_eq!(r.entries[0].status, Achievability::Realized);
        let r = achievable_exponents(&FiniteWord::empty(2), &[ExponentValue::from_ratio(3, 2)], 4, &SearchConfig::default())
            .unwrap();
        assert_eq!(r.entries[0].status, Achievability::ImpossibleBelowBound);
        assert!(achievable_exponents(&w("0"), &targets[..2].iter().rev().cloned().collect::<Vec<_>>(), 2, &SearchConfig::default())
            .is_err());
    }
}
