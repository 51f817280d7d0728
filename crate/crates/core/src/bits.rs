//! Bit strings and the in-order total order on them.
//!
//! `BitString` orders by `≺`, the order in which the nodes of an infinite
//! binary trie are met by an in-order walk: appending a `0` moves a string
//! down, appending a `1` moves it up, so `s0t ≺ s ≺ s1t'` for all `s, t, t'`.
//! For strings of length at most three this gives
//!
//! ```text
//! 000 ≺ 00 ≺ 001 ≺ 0 ≺ 010 ≺ 01 ≺ 011 ≺ ε ≺ 100 ≺ 10 ≺ 101 ≺ 1 ≺ 110 ≺ 11 ≺ 111
//! ```

use std::cmp::Ordering;
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use smallvec::SmallVec;
use thiserror::Error;

const WORD: usize = 64;

/// A finite sequence of bits with an exact length.
///
/// Bits are packed most-significant first. Unused bits of the last word are
/// kept zero so that derived equality and hashing are exact.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    words: SmallVec<[u64; 1]>,
    len: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid character {found:?} at offset {offset} in bit string")]
pub struct ParseBitsError {
    pub offset: usize,
    pub found: char,
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        Self {
            words: SmallVec::with_capacity(bits.div_ceil(WORD)),
            len: 0,
        }
    }

    /// `0` repeated `len` times.
    pub fn zeros(len: usize) -> Self {
        let mut words = SmallVec::new();
        words.resize(len.div_ceil(WORD), 0);
        Self { words, len }
    }

    /// The low `width` bits of `value`, most significant first.
    pub fn from_u64(value: u64, width: usize) -> Self {
        let mut s = Self::with_capacity(width);
        s.push_u64(value, width);
        s
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut s = Self::new();
        for b in bits {
            s.push(b);
        }
        s
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (WORD - 1 - i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(WORD) {
            self.words.push(0);
        }
        if bit {
            let last = self.words.len() - 1;
            self.words[last] |= 1 << (WORD - 1 - self.len % WORD);
        }
        self.len += 1;
    }

    /// Appends the low `width` bits of `value`, most significant first.
    pub fn push_u64(&mut self, value: u64, width: usize) {
        assert!(width <= WORD);
        if width == 0 {
            return;
        }
        let value = if width == WORD {
            value
        } else {
            value & ((1u64 << width) - 1)
        };
        let used = self.len % WORD;
        if used == 0 {
            self.words.push(value << (WORD - width));
        } else {
            let free = WORD - used;
            let last = self.words.len() - 1;
            if width <= free {
                self.words[last] |= value << (free - width);
            } else {
                self.words[last] |= value >> (width - free);
                self.words.push(value << (WORD - (width - free)));
            }
        }
        self.len += width;
    }

    /// Reads `width <= 64` bits starting at `start` as an unsigned integer.
    pub fn read_u64(&self, start: usize, width: usize) -> u64 {
        assert!(width <= WORD);
        assert!(start + width <= self.len, "read past end of bit string");
        if width == 0 {
            return 0;
        }
        let w = start / WORD;
        let off = start % WORD;
        let hi = self.words[w] << off;
        let combined = if off + width > WORD {
            hi | (self.words[w + 1] >> (WORD - off))
        } else {
            hi
        };
        combined >> (WORD - width)
    }

    pub fn extend_from(&mut self, other: &BitString) {
        let mut pos = 0;
        while pos < other.len {
            let width = (other.len - pos).min(WORD);
            self.push_u64(other.read_u64(pos, width), width);
            pos += width;
        }
    }

    pub fn extend_from_range(&mut self, other: &BitString, range: Range<usize>) {
        assert!(range.start <= range.end && range.end <= other.len);
        let mut pos = range.start;
        while pos < range.end {
            let width = (range.end - pos).min(WORD);
            self.push_u64(other.read_u64(pos, width), width);
            pos += width;
        }
    }

    /// `a ∘ b`.
    pub fn concat(a: &BitString, b: &BitString) -> BitString {
        let mut out = BitString::with_capacity(a.len + b.len);
        out.extend_from(a);
        out.extend_from(b);
        out
    }

    pub fn slice(&self, range: Range<usize>) -> BitString {
        assert!(range.start <= range.end, "bad range {range:?}");
        let len = range.end - range.start;
        if len <= WORD {
            // one word: shift into place directly
            let value = self.read_u64(range.start, len);
            let mut words = SmallVec::new();
            if len > 0 {
                words.push(value << (WORD - len));
            }
            return Self { words, len };
        }
        let mut out = BitString::with_capacity(range.end.saturating_sub(range.start));
        out.extend_from_range(self, range);
        out
    }

    /// Positions of the one bits in `range`, relative to `range.start`, ascending.
    pub fn ones(&self, range: Range<usize>) -> impl Iterator<Item = usize> + '_ {
        assert!(range.start <= range.end && range.end <= self.len);
        let (mut next, mut word, mut word_start) = (range.start, 0u64, range.start);
        std::iter::from_fn(move || loop {
            if word != 0 {
                let lz = word.leading_zeros() as usize;
                word &= !(1u64 << (WORD - 1 - lz));
                return Some(word_start + lz - range.start);
            }
            if next >= range.end {
                return None;
            }
            let width = (range.end - next).min(WORD);
            word = self.read_u64(next, width) << (WORD - width);
            word_start = next;
            next += width;
        })
    }

    /// Keeps the first `len` bits.
    pub fn truncate(&mut self, len: usize) {
        if len >= self.len {
            return;
        }
        self.words.truncate(len.div_ceil(WORD));
        if !len.is_multiple_of(WORD) {
            let last = self.words.len() - 1;
            self.words[last] &= !0u64 << (WORD - len % WORD);
        }
        self.len = len;
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Word `w` of `self ∘ 1 ∘ 0^∞`, the dyadic key that realizes `≺`.
    #[inline]
    fn key_word(&self, w: usize) -> u64 {
        let base = self.words.get(w).copied().unwrap_or(0);
        if self.len / WORD == w {
            base | (1u64 << (WORD - 1 - self.len % WORD))
        } else {
            base
        }
    }

    /// The `≺`-minimum string `a` with `|a| <= max_len` and `self ≺ a`.
    ///
    /// Shorter than `max_len`: the leftmost string of the right subtree,
    /// `self ∘ 1 ∘ 0^(max_len - |self| - 1)`. Otherwise the answer is the
    /// deepest prefix `self[..i]` with `i <= max_len` that is followed by a
    /// `0` in `self`.
    pub fn succ_bounded(&self, max_len: usize) -> Option<BitString> {
        if self.len < max_len {
            let mut out = BitString::with_capacity(max_len);
            out.extend_from(self);
            out.push(true);
            out.push_zeros(max_len - self.len - 1);
            return Some(out);
        }
        if self.is_empty() {
            return None;
        }
        let top = max_len.min(self.len - 1);
        (0..=top).rev().find(|&i| !self.get(i)).map(|i| self.slice(0..i))
    }

    /// The `≺`-minimum string of length at most `max_len`, i.e. `0^max_len`.
    pub fn min_bounded(max_len: usize) -> BitString {
        BitString::zeros(max_len)
    }

    pub fn push_zeros(&mut self, count: usize) {
        let mut left = count;
        while left > 0 {
            let width = left.min(WORD);
            self.push_u64(0, width);
            left -= width;
        }
    }

    /// True if `self` is a prefix of `other`.
    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        self.len <= other.len && other.read_prefix_eq(self)
    }

    fn read_prefix_eq(&self, prefix: &BitString) -> bool {
        let full = prefix.len / WORD;
        if self.words[..full] != prefix.words[..full] {
            return false;
        }
        let rest = prefix.len % WORD;
        rest == 0 || (self.words[full] >> (WORD - rest)) == (prefix.words[full] >> (WORD - rest))
    }
}

impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        let words = self.len.max(other.len) / WORD + 1;
        for w in 0..words {
            match self.key_word(w).cmp(&other.key_word(w)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Renders as `0`/`1` characters; the empty string renders as `-`.
impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("-");
        }
        let s: String = self.iter().map(|b| if b { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            f.write_str("ε")
        } else {
            fmt::Display::fmt(self, f)
        }
    }
}

impl FromStr for BitString {
    type Err = ParseBitsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "-" {
            return Ok(BitString::new());
        }
        let mut out = BitString::with_capacity(s.len());
        for (offset, c) in s.chars().enumerate() {
            match c {
                '0' => out.push(false),
                '1' => out.push(true),
                found => return Err(ParseBitsError { offset, found }),
            }
        }
        Ok(out)
    }
}

/// Parses a `0`/`1`/`-` literal, panicking on anything else.
pub fn bits(s: &str) -> BitString {
    s.parse().expect("valid bit string literal")
}
