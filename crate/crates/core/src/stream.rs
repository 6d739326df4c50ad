//! Lazy infinite words.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exponent::ExponentValue;
use crate::word::{check_base, thue_morse_digit, FiniteWord, WordLike};

type Generator = dyn Fn(u64) -> u8 + Send + Sync;

/// An infinite word given by a pure function of the index.
///
/// Only finite prefixes are ever materialized; emitting the same prefix twice
/// yields identical digits, and prefixes of increasing length are nested.
#[derive(Clone)]
pub struct StreamWord {
    generator: Arc<Generator>,
    base: u8,
    exponent: Option<ExponentValue>,
    tag: Option<String>,
}

impl StreamWord {
    /// The generator must be total and return digits below `base`.
    pub fn from_fn<F>(base: u8, f: F) -> Result<Self>
    where
        F: Fn(u64) -> u8 + Send + Sync + 'static,
    {
        check_base(u32::from(base))?;
        Ok(Self { generator: Arc::new(f), base, exponent: None, tag: None })
    }

    pub(crate) fn binary_fn<F>(f: F) -> Self
    where
        F: Fn(u64) -> u8 + Send + Sync + 'static,
    {
        Self { generator: Arc::new(f), base: 2, exponent: None, tag: None }
    }

    /// `τ`, tagged with its known critical exponent 2.
    pub fn thue_morse() -> Self {
        Self::binary_fn(thue_morse_digit)
            .with_exponent(ExponentValue::from_integer(2))
            .with_tag("thue-morse")
    }

    /// `a a a …`; its critical exponent is infinite.
    pub fn constant(symbol: u8, base: u8) -> Result<Self> {
        if symbol >= base {
            return Err(Error::DigitOutOfRange { position: 0, digit: u32::from(symbol), base });
        }
        Ok(Self::from_fn(base, move |_| symbol)?
            .with_exponent(ExponentValue::Infinite)
            .with_tag(format!("constant-{symbol}")))
    }

    pub fn with_exponent(mut self, alpha: ExponentValue) -> Self {
        self.exponent = Some(alpha);
        self
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.tag = Some(tag.into());
        self
    }

    pub fn base(&self) -> u8 {
        self.base
    }

    /// Claimed exact critical exponent, when a construction backs one.
    pub fn exponent(&self) -> Option<&ExponentValue> {
        self.exponent.as_ref()
    }

    pub fn tag(&self) -> Option<&str> {
        self.tag.as_deref()
    }

    #[inline]
    pub fn digit(&self, i: u64) -> u8 {
        (self.generator)(i)
    }

    /// The first `k` digits.
    pub fn prefix(&self, k: usize) -> FiniteWord {
        let digits = (0..k as u64).map(|i| self.digit(i)).collect();
        FiniteWord::from_trusted(digits, self.base)
    }

    /// `p·s`. Metadata is dropped since the exponent generally changes.
    pub fn prepend(&self, p: &FiniteWord) -> Result<Self> {
        if p.base() != self.base {
            return Err(Error::InvalidArgument(format!(
                "cannot prepend a base-{} word to a base-{} stream",
                p.base(),
                self.base
            )));
        }
        let head: Arc<[u8]> = p.digits().into();
        let tail = Arc::clone(&self.generator);
        let n = head.len() as u64;
        Ok(Self {
            generator: Arc::new(move |i| if i < n { head[i as usize] } else { tail(i - n) }),
            base: self.base,
            exponent: None,
            tag: None,
        })
    }
}

impl WordLike for StreamWord {
    /// `δ^n(s)`. The exponent claim is dropped: a suffix may have a smaller
    /// critical exponent, and builders re-attach it when a theorem backs it.
    fn delete_prefix(&self, n: usize) -> Self {
        let inner = Arc::clone(&self.generator);
        let n = n as u64;
        Self {
            generator: Arc::new(move |i| inner(i + n)),
            base: self.base,
            exponent: None,
            tag: self.tag.clone(),
        }
    }

    /// Negation preserves every period, hence the critical exponent.
    fn negate(&self) -> Result<Self> {
        if self.base != 2 {
            return Err(Error::NotBinary(self.base));
        }
        let inner = Arc::clone(&self.generator);
        Ok(Self {
            generator: Arc::new(move |i| 1 - inner(i)),
            base: 2,
            exponent: self.exponent.clone(),
            tag: self.tag.clone(),
        })
    }
}

impl fmt::Debug for StreamWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StreamWord")
            .field("base", &self.base)
            .field("tag", &self.tag)
            .field("exponent", &self.exponent)
            .field("head", &self.prefix(16))
            .finish()
    }
}
