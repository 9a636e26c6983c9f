//! Finite binary words.
//!
//! Letters are packed most-significant-bit first into 64-bit limbs, so the
//! first letter of a word is the top bit of its first limb. Unused low bits of
//! the last limb are always zero; with that invariant, comparing limbs as
//! unsigned integers gives lexicographic order directly. Words of up to 64
//! letters live inline in a single limb.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;
use thiserror::Error;

const LIMB_BITS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("requested {requested} letters from a word of length {len}")]
    OutOfRange { len: usize, requested: usize },
    #[error("`{prefix}` is not a prefix of `{word}`")]
    NotAPrefix { prefix: String, word: String },
    #[error("invalid letter {0:?}, expected '0' or '1'")]
    InvalidLetter(char),
}

/// A finite word over `{0, 1}`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BinaryWord {
    len: usize,
    limbs: SmallVec<[u64; 1]>,
}

#[inline]
fn limbs_for(len: usize) -> usize {
    len.div_ceil(LIMB_BITS)
}

impl BinaryWord {
    /// The empty word.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn with_capacity(len: usize) -> Self {
        Self { len: 0, limbs: SmallVec::with_capacity(limbs_for(len)) }
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut w = Self::empty();
        for b in bits {
            w.push(b);
        }
        w
    }

    /// Builds a word from the low `len` bits of `value`, most significant first.
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= LIMB_BITS, "inline words hold at most 64 letters");
        if len == 0 {
            return Self::empty();
        }
        let mut limbs = SmallVec::new();
        limbs.push(value << (LIMB_BITS - len));
        Self { len, limbs }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Letter at position `i` (0-based). Panics when out of bounds.
    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "index {i} out of bounds for word of length {}", self.len);
        (self.limbs[i / LIMB_BITS] >> (LIMB_BITS - 1 - i % LIMB_BITS)) & 1 == 1
    }

    pub fn first(&self) -> Option<bool> {
        (!self.is_empty()).then(|| self.get(0))
    }

    pub fn last(&self) -> Option<bool> {
        (!self.is_empty()).then(|| self.get(self.len - 1))
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn push(&mut self, letter: bool) {
        let offset = self.len % LIMB_BITS;
        if offset == 0 {
            self.limbs.push(0);
        }
        if letter {
            let last = self.limbs.len() - 1;
            self.limbs[last] |= 1 << (LIMB_BITS - 1 - offset);
        }
        self.len += 1;
    }

    /// Returns `w·a`.
    pub fn append_letter(&self, letter: bool) -> Self {
        let mut w = self.clone();
        w.push(letter);
        w
    }

    pub fn concat(&self, other: &BinaryWord) -> Self {
        let mut w = self.clone();
        w.extend_from(other);
        w
    }

    pub fn extend_from(&mut self, other: &BinaryWord) {
        if self.len.is_multiple_of(LIMB_BITS) {
            self.limbs.extend_from_slice(&other.limbs);
            self.len += other.len;
            return;
        }
        for b in other.iter() {
            self.push(b);
        }
    }

    /// Letter-wise complement, `0 ↔ 1`.
    pub fn mirror(&self) -> Self {
        let mut limbs: SmallVec<[u64; 1]> = self.limbs.iter().map(|l| !l).collect();
        let tail = self.len % LIMB_BITS;
        if tail != 0 {
            let last = limbs.len() - 1;
            limbs[last] &= !0u64 << (LIMB_BITS - tail);
        }
        Self { len: self.len, limbs }
    }

    /// The factor of length `len` starting at `start`.
    pub fn slice(&self, start: usize, len: usize) -> Result<Self, WordError> {
        let end = start
            .checked_add(len)
            .filter(|&e| e <= self.len)
            .ok_or(WordError::OutOfRange { len: self.len, requested: start.saturating_add(len) })?;
        debug_assert!(end <= self.len);
        let n = limbs_for(len);
        let q = start / LIMB_BITS;
        let r = start % LIMB_BITS;
        let mut limbs = SmallVec::with_capacity(n);
        for j in 0..n {
            let hi = self.limbs[q + j];
            let limb = if r == 0 {
                hi
            } else {
                let lo = self.limbs.get(q + j + 1).copied().unwrap_or(0);
                (hi << r) | (lo >> (LIMB_BITS - r))
            };
            limbs.push(limb);
        }
        let tail = len % LIMB_BITS;
        if tail != 0 {
            limbs[n - 1] &= !0u64 << (LIMB_BITS - tail);
        }
        Ok(Self { len, limbs })
    }

    /// The first `len` letters.
    pub fn prefix(&self, len: usize) -> Result<Self, WordError> {
        self.slice(0, len)
    }

    /// The last `len` letters.
    pub fn suffix(&self, len: usize) -> Result<Self, WordError> {
        if len > self.len {
            return Err(WordError::OutOfRange { len: self.len, requested: len });
        }
        self.slice(self.len - len, len)
    }

    pub fn starts_with(&self, prefix: &BinaryWord) -> bool {
        prefix.len <= self.len && self.prefix(prefix.len).as_ref() == Ok(prefix)
    }

    /// Left cancellation `p⁻¹w`.
    pub fn strip_prefix(&self, prefix: &BinaryWord) -> Result<Self, WordError> {
        if !self.starts_with(prefix) {
            return Err(WordError::NotAPrefix { prefix: prefix.to_string(), word: self.to_string() });
        }
        self.slice(prefix.len, self.len - prefix.len)
    }

    /// Right cancellation `w·s⁻¹`.
    pub fn strip_suffix(&self, suffix: &BinaryWord) -> Result<Self, WordError> {
        if suffix.len > self.len || self.suffix(suffix.len).as_ref() != Ok(suffix) {
            return Err(WordError::NotAPrefix { prefix: suffix.to_string(), word: self.to_string() });
        }
        self.prefix(self.len - suffix.len)
    }

    /// Image under the Thue-Morse morphism `0 ↦ 01, 1 ↦ 10`.
    pub fn thue_morse_image(&self) -> Self {
        let mut w = Self::with_capacity(2 * self.len);
        for b in self.iter() {
            w.push(b);
            w.push(!b);
        }
        w
    }

    /// Whether `factor` occurs somewhere in `self`.
    pub fn contains(&self, factor: &BinaryWord) -> bool {
        if factor.len > self.len {
            return false;
        }
        (0..=self.len - factor.len).any(|i| self.slice(i, factor.len).as_ref() == Ok(factor))
    }
}

/// `a⁻¹w` as a free function, mirroring the group notation.
pub fn strip_prefix(prefix: &BinaryWord, word: &BinaryWord) -> Result<BinaryWord, WordError> {
    word.strip_prefix(prefix)
}

pub fn lex_compare(u: &BinaryWord, v: &BinaryWord) -> Ordering {
    u.cmp(v)
}

impl Ord for BinaryWord {
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.limbs.len().max(other.limbs.len());
        for i in 0..n {
            let a = self.limbs.get(i).copied().unwrap_or(0);
            let b = other.limbs.get(i).copied().unwrap_or(0);
            match a.cmp(&b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        // Zero padding agrees, so the shorter word is a prefix of the longer.
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for BinaryWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.iter().map(|b| if b { '1' } else { '0' }).collect();
        f.pad(&s)
    }
}

impl fmt::Debug for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryWord({self})")
    }
}

impl FromStr for BinaryWord {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut w = Self::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => w.push(false),
                '1' => w.push(true),
                other => return Err(WordError::InvalidLetter(other)),
            }
        }
        Ok(w)
    }
}

#[cfg(test)]
pub(crate) fn w(s: &str) -> BinaryWord {
    s.parse().unwrap()
}
