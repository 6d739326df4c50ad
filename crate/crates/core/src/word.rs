//! Finite words over a small alphabet, the Thue-Morse sequence and morphism,
//! and the deletion / negation / subword primitives shared by every other
//! module.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest supported alphabet; digits serialize as `0-9a-z`.
pub const MAX_BASE: u8 = 36;

/// An immutable word `w_0 w_1 ... w_{n-1}` with every digit below `base`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteWord {
    digits: Vec<u8>,
    base: u8,
}

impl FiniteWord {
    pub fn new(digits: Vec<u8>, base: u8) -> Result<Self> {
        check_base(u32::from(base))?;
        if let Some((position, &digit)) = digits.iter().enumerate().find(|(_, &d)| d >= base) {
            return Err(Error::DigitOutOfRange { position, digit: u32::from(digit), base });
        }
        Ok(Self { digits, base })
    }

    pub fn binary(digits: Vec<u8>) -> Result<Self> {
        Self::new(digits, 2)
    }

    /// Caller guarantees every digit is below `base`.
    pub(crate) fn from_trusted(digits: Vec<u8>, base: u8) -> Self {
        debug_assert!(digits.iter().all(|&d| d < base));
        Self { digits, base }
    }

    pub fn empty(base: u8) -> Self {
        Self { digits: Vec::new(), base }
    }

    /// `a^n` for a single symbol.
    pub fn repeat_symbol(symbol: u8, n: usize, base: u8) -> Result<Self> {
        Self::new(vec![symbol; n], base)
    }

    /// The binary word of length `len` whose digits spell `index` most
    /// significant bit first. Enumerating `0..2^len` walks `{0,1}^len` in
    /// lexicographic order.
    pub fn binary_from_index(len: usize, index: u64) -> Self {
        let digits = (0..len).map(|i| ((index >> (len - 1 - i)) & 1) as u8).collect();
        Self { digits, base: 2 }
    }

    /// Parses an ASCII digit string in the given base.
    pub fn parse_in_base(s: &str, base: u8) -> Result<Self> {
        check_base(u32::from(base))?;
        let digits = s
            .chars()
            .map(|c| c.to_digit(u32::from(MAX_BASE)).map(|d| d as u8).ok_or(Error::InvalidDigitChar(c)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(digits, base)
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn base(&self) -> u8 {
        self.base
    }

    pub fn is_binary(&self) -> bool {
        self.base == 2
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn into_digits(self) -> Vec<u8> {
        self.digits
    }

    pub fn get(&self, i: usize) -> Option<u8> {
        self.digits.get(i).copied()
    }

    pub fn last(&self) -> Option<u8> {
        self.digits.last().copied()
    }

    pub fn prefix(&self, k: usize) -> Self {
        Self { digits: self.digits[..k.min(self.len())].to_vec(), base: self.base }
    }

    pub fn subword(&self, start: usize, len: usize) -> Self {
        let start = start.min(self.len());
        let end = (start + len).min(self.len());
        Self { digits: self.digits[start..end].to_vec(), base: self.base }
    }

    /// `w·a`.
    pub fn with_symbol(&self, a: u8) -> Result<Self> {
        if a >= self.base {
            return Err(Error::DigitOutOfRange { position: self.len(), digit: u32::from(a), base: self.base });
        }
        let mut digits = self.digits.clone();
        digits.push(a);
        Ok(Self { digits, base: self.base })
    }

    pub fn concat(&self, other: &FiniteWord) -> Result<Self> {
        if self.base != other.base {
            return Err(Error::InvalidArgument(format!(
                "cannot concatenate words over bases {} and {}",
                self.base, other.base
            )));
        }
        let mut digits = self.digits.clone();
        digits.extend_from_slice(&other.digits);
        Ok(Self { digits, base: self.base })
    }

    pub fn reverse(&self) -> Self {
        let mut digits = self.digits.clone();
        digits.reverse();
        Self { digits, base: self.base }
    }

    /// `δ^n(w)`; deleting more digits than the word has yields `ε`.
    pub fn delete_prefix(&self, n: usize) -> Self {
        Self { digits: self.digits[n.min(self.len())..].to_vec(), base: self.base }
    }

    /// Digit-wise `1 - d`. Binary words only.
    pub fn negate(&self) -> Result<Self> {
        if !self.is_binary() {
            return Err(Error::NotBinary(self.base));
        }
        Ok(Self { digits: self.digits.iter().map(|d| 1 - d).collect(), base: 2 })
    }

    /// Length of the longest run of `symbol` anywhere in the word.
    pub fn longest_run_of(&self, symbol: u8) -> usize {
        let mut best = 0;
        let mut cur = 0;
        for &d in &self.digits {
            cur = if d == symbol { cur + 1 } else { 0 };
            best = best.max(cur);
        }
        best
    }

    /// Number of (possibly overlapping) occurrences of `u`.
    pub fn count_occurrences(&self, u: &FiniteWord) -> usize {
        if u.is_empty() {
            return self.len() + 1;
        }
        let fail = prefix_function(u.digits());
        let mut count = 0;
        let mut k = 0;
        for &d in &self.digits {
            while k > 0 && (k == u.len() || u.digits[k] != d) {
                k = fail[k - 1];
            }
            if u.digits[k] == d {
                k += 1;
            }
            if k == u.len() {
                count += 1;
            }
        }
        count
    }
}

impl serde::Serialize for FiniteWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &d in &self.digits {
            let c = char::from_digit(u32::from(d), u32::from(MAX_BASE)).unwrap_or('?');
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_binary() {
            write!(f, "\"{self}\"")
        } else {
            write!(f, "\"{self}\"_{}", self.base)
        }
    }
}

/// Binary parse; use [`FiniteWord::parse_in_base`] for other alphabets.
impl FromStr for FiniteWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_in_base(s, 2)
    }
}

pub(crate) fn check_base(base: u32) -> Result<()> {
    if (2..=u32::from(MAX_BASE)).contains(&base) {
        Ok(())
    } else {
        Err(Error::InvalidBase(base))
    }
}

/// Operations available on both finite words and streams.
pub trait WordLike: Sized {
    fn delete_prefix(&self, n: usize) -> Self;
    fn negate(&self) -> Result<Self>;
}

impl WordLike for FiniteWord {
    fn delete_prefix(&self, n: usize) -> Self {
        FiniteWord::delete_prefix(self, n)
    }

    fn negate(&self) -> Result<Self> {
        FiniteWord::negate(self)
    }
}

/// `δ^n(w)` for a finite word or a stream.
pub fn delete_prefix<W: WordLike>(n: usize, w: &W) -> W {
    w.delete_prefix(n)
}

/// Bitwise negation of a finite word or a stream.
pub fn negate<W: WordLike>(w: &W) -> Result<W> {
    w.negate()
}

/// `τ_i`: the parity of the number of ones in the binary representation of `i`.
#[inline]
pub fn thue_morse_digit(i: u64) -> u8 {
    (i.count_ones() & 1) as u8
}

/// `τ_0 … τ_{k-1}`, built by repeatedly appending the bitwise negation of
/// the prefix obtained so far.
pub fn thue_morse_prefix(k: usize) -> FiniteWord {
    let mut digits = Vec::with_capacity(k.next_power_of_two().max(1));
    digits.push(0u8);
    while digits.len() < k {
        let negated: Vec<u8> = digits.iter().map(|d| 1 - d).collect();
        digits.extend(negated);
    }
    digits.truncate(k);
    FiniteWord::from_trusted(digits, 2)
}

/// `τ_(m)`, the prefix of length `2^m`.
pub fn thue_morse_block(m: u32) -> FiniteWord {
    thue_morse_prefix(1usize << m)
}

/// A morphism given by the image of each symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    images: Vec<FiniteWord>,
}

impl Morphism {
    /// `images[a]` is the image of symbol `a`; images must be nonempty and
    /// live over the same alphabet as the domain.
    pub fn new(images: Vec<FiniteWord>) -> Result<Self> {
        let base = u8::try_from(images.len()).map_err(|_| Error::InvalidBase(images.len() as u32))?;
        check_base(u32::from(base))?;
        for img in &images {
            if img.is_empty() {
                return Err(Error::EmptyWord);
            }
            if img.base() != base {
                return Err(Error::InvalidArgument(format!(
                    "image {img} is over base {} but the morphism acts on base {base}",
                    img.base()
                )));
            }
        }
        Ok(Self { images })
    }

    /// `μ`: 0 ↦ 01, 1 ↦ 10.
    pub fn thue_morse() -> Self {
        Self {
            images: vec![FiniteWord::from_trusted(vec![0, 1], 2), FiniteWord::from_trusted(vec![1, 0], 2)],
        }
    }

    pub fn base(&self) -> u8 {
        self.images.len() as u8
    }

    pub fn image(&self, symbol: u8) -> Option<&FiniteWord> {
        self.images.get(usize::from(symbol))
    }

    pub fn apply(&self, w: &FiniteWord) -> Result<FiniteWord> {
        if w.base() != self.base() {
            return Err(Error::InvalidArgument(format!(
                "morphism over base {} applied to a word over base {}",
                self.base(),
                w.base()
            )));
        }
        let mut out = Vec::new();
        for &d in w.digits() {
            out.extend_from_slice(self.images[usize::from(d)].digits());
        }
        Ok(FiniteWord::from_trusted(out, self.base()))
    }

    pub fn power(&self, s: u32, w: &FiniteWord) -> Result<FiniteWord> {
        let mut cur = w.clone();
        for _ in 0..s {
            cur = self.apply(&cur)?;
        }
        Ok(cur)
    }
}

/// `μ^s(w)` for the Thue-Morse morphism.
pub fn mu_power(s: u32, w: &FiniteWord) -> Result<FiniteWord> {
    if !w.is_binary() {
        return Err(Error::NotBinary(w.base()));
    }
    Morphism::thue_morse().power(s, w)
}

/// Knuth-Morris-Pratt failure table.
pub(crate) fn prefix_function(s: &[u8]) -> Vec<usize> {
    let mut pi = vec![0; s.len()];
    for i in 1..s.len() {
        let mut k = pi[i - 1];
        while k > 0 && s[i] != s[k] {
            k = pi[k - 1];
        }
        if s[i] == s[k] {
            k += 1;
        }
        pi[i] = k;
    }
    pi
}

/// Smallest index at which `u` occurs in `w`.
pub fn find_subword(u: &FiniteWord, w: &FiniteWord) -> Option<usize> {
    if u.is_empty() {
        return Some(0);
    }
    if u.len() > w.len() {
        return None;
    }
    let pi = prefix_function(u.digits());
    let mut k = 0;
    for (i, &d) in w.digits().iter().enumerate() {
        while k > 0 && u.digits()[k] != d {
            k = pi[k - 1];
        }
        if u.digits()[k] == d {
            k += 1;
        }
        if k == u.len() {
            return Some(i + 1 - u.len());
        }
    }
    None
}

/// Length of a Thue-Morse prefix guaranteed to contain every factor of
/// length `len`: a factor of length at most `2^k` lies inside `μ^k(ab)` for
/// some length-2 factor `ab`, and all four of those occur in `τ_(3)`.
pub fn thue_morse_search_window(len: usize) -> usize {
    let k = len.max(1).next_power_of_two().trailing_zeros();
    1usize << (k + 3)
}

/// First occurrence of `w` in `τ`, or `None` when `w` is not a factor.
/// The search window makes `None` a proof of absence.
pub fn thue_morse_position(w: &FiniteWord) -> Option<usize> {
    if !w.is_binary() {
        return None;
    }
    find_subword(w, &thue_morse_prefix(thue_morse_search_window(w.len())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> FiniteWord {
        s.parse().unwrap()
    }

    #[test]
    fn thue_morse_first_sixteen() {
        assert_eq!(thue_morse_prefix(16).to_string(), "0110100110010110");
        assert!(thue_morse_prefix(0).is_empty());
    }

    #[test]
    fn thue_morse_matches_recurrence() {
        // τ_0 = 0, τ_{2n} = τ_n, τ_{2n+1} = 1 - τ_n
        let n = 1 << 14;
        let mut rec = vec![0u8; n];
        for i in 1..n {
            rec[i] = if i % 2 == 0 { rec[i / 2] } else { 1 - rec[i / 2] };
        }
        for m in 0..=14u32 {
            let k = 1usize << m;
            let block = thue_morse_prefix(k);
            assert_eq!(block.digits(), &rec[..k]);
            assert_eq!(mu_power(m, &w("0")).unwrap(), block);
        }
        for (i, &d) in rec.iter().enumerate() {
            assert_eq!(thue_morse_digit(i as u64), d);
        }
    }

    #[test]
    fn doubling_appends_negation() {
        for m in 0..12u32 {
            let half = thue_morse_block(m);
            let full = thue_morse_block(m + 1);
            assert_eq!(full, half.concat(&half.negate().unwrap()).unwrap());
        }
    }

    #[test]
    fn mu_examples() {
        assert_eq!(mu_power(1, &w("0")).unwrap().to_string(), "01");
        assert_eq!(mu_power(0, &w("0110")).unwrap().to_string(), "0110");
        assert_eq!(mu_power(3, &w("00")).unwrap().to_string(), "0110100101101001");
        let ternary = FiniteWord::parse_in_base("012", 3).unwrap();
        assert_eq!(mu_power(1, &ternary), Err(Error::NotBinary(3)));
    }

    #[test]
    fn deletion_and_negation() {
        assert_eq!(w("0110").delete_prefix(1).to_string(), "110");
        assert_eq!(w("0110").delete_prefix(0), w("0110"));
        assert!(w("01").delete_prefix(7).is_empty());
        assert_eq!(w("0110").negate().unwrap().to_string(), "1001");
        assert_eq!(thue_morse_block(2).negate().unwrap(), thue_morse_block(3).delete_prefix(4));
    }

    #[test]
    fn subword_search() {
        assert_eq!(find_subword(&w(""), &w("01")), Some(0));
        assert_eq!(find_subword(&w("1010"), &w("01101001")), Some(2));
        assert_eq!(find_subword(&w("000"), &thue_morse_block(5)), None);
        assert_eq!(find_subword(&w("0110"), &w("0110")), Some(0));
        assert_eq!(find_subword(&w("01101"), &w("0110")), None);
    }

    #[test]
    fn thue_morse_factor_positions() {
        assert_eq!(thue_morse_position(&w("00")), Some(5));
        assert_eq!(thue_morse_position(&w("010")), Some(3));
        assert_eq!(thue_morse_position(&w("000")), None);
        assert_eq!(thue_morse_position(&w("00100100")), None);
        // every word of length <= 2 occurs
        for len in 0..=2 {
            for i in 0..(1u64 << len) {
                assert!(thue_morse_position(&FiniteWord::binary_from_index(len, i)).is_some());
            }
        }
        // the window is large enough: compare against a much longer prefix
        let long = thue_morse_prefix(1 << 14);
        for len in 1..=12usize {
            for i in 0..(1u64 << len) {
                let u = FiniteWord::binary_from_index(len, i);
                assert_eq!(thue_morse_position(&u), find_subword(&u, &long), "{u}");
            }
        }
    }

    #[test]
    fn parsing_and_display() {
        assert_eq!(FiniteWord::parse_in_base("0120", 3).unwrap().to_string(), "0120");
        assert!(matches!("012".parse::<FiniteWord>(), Err(Error::DigitOutOfRange { position: 2, .. })));
        assert!(matches!("0#".parse::<FiniteWord>(), Err(Error::InvalidDigitChar('#'))));
        assert_eq!(FiniteWord::binary_from_index(4, 5).to_string(), "0101");
    }

    #[test]
    fn occurrence_counting() {
        assert_eq!(w("0000").count_occurrences(&w("00")), 3);
        assert_eq!(w("010010").count_occurrences(&w("010")), 2);
        assert_eq!(w("0110").longest_run_of(1), 2);
    }
}
