//! Self-delimiting codecs for lists of bit strings.
//!
//! Every codec maps a list whose concatenation has `t` bits to a codeword
//! whose length is a strictly increasing function of `t`, so a decoder can
//! recover `t` from the codeword length alone. The all-empty list `(ε)` is
//! the only list with `t = 0` that any codec accepts, and it encodes as `ε`.
//!
//! * [`encode_pair`]: two strings, `t + ⌈log₂(t+1)⌉` bits.
//! * [`encode_alt_3t`]: `(a_0, …, a_2k)` with `a_2i ∘ a_2i+1 ≠ ε`, `3t` bits.
//! * [`encode_alt_opt`]: same lists, `⌈(1 + log₂(2+√2))·t⌉` bits, by ranking.
//! * [`encode_consecutive`]: `(a_0, …, a_k)` with `a_i ∘ a_i+1 ≠ ε`,
//!   `t + ⌈(t−1)·log₂3⌉ + 2` bits.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{Num, One, Zero};
use smallvec::{smallvec, SmallVec};
use thiserror::Error;

use crate::bits::BitString;
use crate::ordered_codes::ceil_log2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("list must have {0} length")]
    ListShape(&'static str),
    #[error("adjacent strings at positions {0} and {1} are both empty")]
    EmptyRun(usize, usize),
    #[error("no codeword has length {0}")]
    BadLength(usize),
    #[error("inconsistent boundary marks in codeword")]
    InconsistentMarks,
    #[error("codeword index out of range")]
    IndexOutOfRange,
}

/// `s_t`: the number of `(x_0, …, x_2k)`, over all `k >= 0`, with
/// `Σ x_i = t` and `x_2i + x_2i+1 >= 1` for `i < k`.
///
/// Satisfies `s_0 = 1`, `s_1 = 3`, `s_t = 4·s_{t−1} − 2·s_{t−2}`.
pub fn count_subdivisions(t: usize) -> BigUint {
    subdivision_counts::<BigUint>(t).pop().unwrap()
}

/// `s_0, …, s_t`.
fn subdivision_counts<T: Wide>(t: usize) -> Vec<T> {
    let mut s: Vec<T> = Vec::with_capacity(t + 1);
    s.push(T::from(1));
    if t >= 1 {
        s.push(T::from(3));
    }
    for i in 2..=t {
        let next = T::from(4) * s[i - 1].clone() - T::from(2) * s[i - 2].clone();
        s.push(next);
    }
    s
}

/// `s_t` for every `t` whose rank codec fits in `u128`.
fn narrow_counts() -> &'static [u128] {
    static TABLE: OnceLock<Vec<u128>> = OnceLock::new();
    // s_70 < 2^125; the narrow path needs t <= 45
    TABLE.get_or_init(|| subdivision_counts::<u128>(70))
}

fn concat_all(items: &[BitString]) -> BitString {
    let t = items.iter().map(BitString::len).sum();
    let mut out = BitString::with_capacity(t);
    for a in items {
        out.extend_from(a);
    }
    out
}

fn check_alternating(items: &[BitString]) -> Result<(), CodecError> {
    if items.len().is_multiple_of(2) {
        return Err(CodecError::ListShape("odd"));
    }
    for i in 0..items.len() / 2 {
        if items[2 * i].is_empty() && items[2 * i + 1].is_empty() {
            return Err(CodecError::EmptyRun(2 * i, 2 * i + 1));
        }
    }
    Ok(())
}

fn check_consecutive(items: &[BitString]) -> Result<(), CodecError> {
    if items.is_empty() {
        return Err(CodecError::ListShape("nonzero"));
    }
    for i in 1..items.len() {
        if items[i - 1].is_empty() && items[i].is_empty() {
            return Err(CodecError::EmptyRun(i - 1, i));
        }
    }
    Ok(())
}

/// Smallest `t` with `len_of(t) == len`, for a strictly increasing `len_of`
/// with `len_of(t) >= t`.
fn invert_length(len: usize, len_of: impl Fn(usize) -> usize) -> Result<usize, CodecError> {
    let mut t = 0;
    loop {
        let l = len_of(t);
        if l == len {
            return Ok(t);
        }
        if l > len {
            return Err(CodecError::BadLength(len));
        }
        t += 1;
    }
}

// ---------------------------------------------------------------------------
// Pairs

/// Codeword length for a pair with `t` total bits.
pub fn pair_len(t: usize) -> usize {
    t + ceil_log2(t as u64 + 1)
}

/// `|a0|` in `⌈log₂(t+1)⌉` bits, then `a0 ∘ a1`.
pub fn encode_pair(a0: &BitString, a1: &BitString) -> BitString {
    let t = a0.len() + a1.len();
    let mut out = BitString::with_capacity(pair_len(t));
    out.push_u64(a0.len() as u64, ceil_log2(t as u64 + 1));
    out.extend_from(a0);
    out.extend_from(a1);
    out
}

pub fn decode_pair(code: &BitString) -> Result<(BitString, BitString), CodecError> {
    let t = invert_length(code.len(), pair_len)?;
    let width = code.len() - t;
    let split = code.read_u64(0, width) as usize;
    if split > t {
        return Err(CodecError::IndexOutOfRange);
    }
    Ok((
        code.slice(width..width + split),
        code.slice(width + split..code.len()),
    ))
}

// ---------------------------------------------------------------------------
// Alternating lists, 3t bits

/// Encodes `(a_0, …, a_2k)` as three strings of `t`, `t − 1` and `t + 1` bits:
/// the concatenation; a mark at every start of a pair `a_2j ∘ a_2j+1`
/// after the first; a mark at the start of every nonempty `a_2j+1` and of
/// `a_2k`, followed by a flag for `a_2k ≠ ε`.
pub fn encode_alt_3t(items: &[BitString]) -> Result<BitString, CodecError> {
    check_alternating(items)?;
    let t: usize = items.iter().map(BitString::len).sum();
    if t == 0 {
        return Ok(BitString::new());
    }
    let k = items.len() / 2;
    let mut out = BitString::with_capacity(3 * t);
    for a in items {
        out.extend_from(a);
    }
    // Marked positions are strictly increasing, so both strings are written
    // left to right as runs of zeros ending in a one.
    let mut next = 1;
    let mut offset = 0;
    for (j, a) in items.iter().enumerate() {
        if j % 2 == 0 && j < 2 * k && offset > 0 {
            out.push_zeros(offset - next);
            out.push(true);
            next = offset + 1;
        }
        offset += a.len();
    }
    out.push_zeros(t - next);
    next = 0;
    offset = 0;
    for (j, a) in items.iter().enumerate() {
        if (j % 2 == 1 || j == 2 * k) && !a.is_empty() {
            out.push_zeros(offset - next);
            out.push(true);
            next = offset + 1;
        }
        offset += a.len();
    }
    out.push_zeros(t - next);
    out.push(!items[2 * k].is_empty());
    Ok(out)
}

pub fn decode_alt_3t(code: &BitString) -> Result<Vec<BitString>, CodecError> {
    if !code.len().is_multiple_of(3) {
        return Err(CodecError::BadLength(code.len()));
    }
    let t = code.len() / 3;
    if t == 0 {
        return Ok(vec![BitString::new()]);
    }
    let last_nonempty = code.get(3 * t - 1);
    // group ends: every marked pair start, then t
    let ends = code.ones(t..2 * t - 1).map(|i| i + 1).chain(std::iter::once(t));
    let mut parts = code.ones(2 * t - 1..3 * t - 1).peekable();

    let mut items = Vec::with_capacity(8);
    let mut start = 0;
    for end in ends {
        // first two part marks in [start, end), and how many there are
        let mut marks = [usize::MAX; 2];
        let mut count = 0;
        while let Some(&p) = parts.peek() {
            if p >= end {
                break;
            }
            if count < 2 {
                marks[count] = p;
            }
            count += 1;
            parts.next();
        }
        let [p, q] = marks;
        if end < t {
            match count {
                0 => {
                    items.push(code.slice(start..end));
                    items.push(BitString::new());
                }
                1 => {
                    items.push(code.slice(start..p));
                    items.push(code.slice(p..end));
                }
                _ => return Err(CodecError::InconsistentMarks),
            }
            start = end;
            continue;
        }
        match (count, last_nonempty) {
            (1, true) if start == 0 && p == 0 => {
                // k = 0: the whole string is a_0.
                items.push(code.slice(0..t));
            }
            (0, false) => {
                items.push(code.slice(start..end));
                items.push(BitString::new());
                items.push(BitString::new());
            }
            (1, true) if p > start => {
                items.push(code.slice(start..p));
                items.push(BitString::new());
                items.push(code.slice(p..end));
            }
            (1, false) => {
                items.push(code.slice(start..p));
                items.push(code.slice(p..end));
                items.push(BitString::new());
            }
            (2, true) => {
                items.push(code.slice(start..p));
                items.push(code.slice(p..q));
                items.push(code.slice(q..end));
            }
            _ => return Err(CodecError::InconsistentMarks),
        }
        start = end;
    }
    Ok(items)
}

// ---------------------------------------------------------------------------
// Alternating lists, rank-based

/// Integer arithmetic wide enough for codeword indices.
trait Wide: Clone + Ord + Num + From<u64> {
    fn from_bits(code: &BitString, start: usize, width: usize) -> Self;
    fn push_bits(&self, width: usize, out: &mut BitString);
}

impl Wide for u128 {
    fn from_bits(code: &BitString, start: usize, width: usize) -> Self {
        debug_assert!(width <= 128);
        if width > 64 {
            let hi = code.read_u64(start, width - 64) as u128;
            (hi << 64) | code.read_u64(start + width - 64, 64) as u128
        } else {
            code.read_u64(start, width) as u128
        }
    }

    fn push_bits(&self, width: usize, out: &mut BitString) {
        debug_assert!(width <= 128);
        if width > 64 {
            out.push_u64((self >> 64) as u64, width - 64);
            out.push_u64(*self as u64, 64);
        } else {
            out.push_u64(*self as u64, width);
        }
    }
}

impl Wide for BigUint {
    fn from_bits(code: &BitString, start: usize, width: usize) -> Self {
        let mut v = BigUint::zero();
        for i in 0..width {
            if code.get(start + i) {
                v.set_bit((width - 1 - i) as u64, true);
            }
        }
        v
    }

    fn push_bits(&self, width: usize, out: &mut BitString) {
        for i in (0..width).rev() {
            out.push(self.bit(i as u64));
        }
    }
}

const C_OPT: f64 = 2.771_553_303_163_612; // 1 + log2(2 + sqrt 2)
const OPT_TABLE: usize = 512;

/// `⌈(1 + log₂(2+√2))·t⌉`, exactly: the least `L` with
/// `2^L >= (4 + 2√2)^t = A + B√2`.
fn opt_len_exact(t: usize) -> usize {
    let mut a = BigUint::one();
    let mut b = BigUint::zero();
    for _ in 0..t {
        let na = (&a + &b) * 4u32;
        let nb = &a * 2u32 + &b * 4u32;
        a = na;
        b = nb;
    }
    let fits = |l: usize| {
        let p = BigUint::one() << l;
        if p < a {
            return false;
        }
        let d = p - &a;
        &d * &d >= &b * &b * 2u32
    };
    let mut l = (t as f64 * C_OPT).ceil() as usize;
    while l > 0 && fits(l - 1) {
        l -= 1;
    }
    while !fits(l) {
        l += 1;
    }
    l
}

/// Codeword length of the rank-based codec for `t` total bits.
pub fn opt_len(t: usize) -> usize {
    static TABLE: OnceLock<Vec<usize>> = OnceLock::new();
    if t < OPT_TABLE {
        return TABLE.get_or_init(|| (0..OPT_TABLE).map(opt_len_exact).collect())[t];
    }
    let x = t as f64 * C_OPT;
    if (x - x.round()).abs() < 1e-8 {
        opt_len_exact(t)
    } else {
        x.ceil() as usize
    }
}

/// Rank of the subdivision `lens` of `t` bits. The `k = 0` subdivision comes
/// first; then by `j = x_0 + x_1` ascending, then `x_0` ascending, then the
/// rank of the tail `(x_2, …)` as a subdivision of `t − j`.
fn rank_subdivision<T: Wide>(lens: &[usize], counts: &[T]) -> T {
    let mut t: usize = lens.iter().sum();
    let mut rank = T::zero();
    let mut rest = lens;
    while rest.len() > 1 {
        let j = rest[0] + rest[1];
        rank = rank + T::one();
        for i in 1..j {
            rank = rank + T::from(i as u64 + 1) * counts[t - i].clone();
        }
        rank = rank + T::from(rest[0] as u64) * counts[t - j].clone();
        t -= j;
        rest = &rest[2..];
    }
    rank
}

fn unrank_subdivision<T: Wide>(mut rank: T, mut t: usize, counts: &[T]) -> SmallVec<[usize; 32]> {
    let mut lens = SmallVec::new();
    loop {
        if rank.is_zero() {
            lens.push(t);
            return lens;
        }
        rank = rank - T::one();
        let mut j = 1;
        loop {
            let block = T::from(j as u64 + 1) * counts[t - j].clone();
            if rank < block {
                break;
            }
            rank = rank - block;
            j += 1;
        }
        let x0 = rank.clone() / counts[t - j].clone();
        rank = rank % counts[t - j].clone();
        let x0 = usize::try_from(x0_to_u64(&x0)).unwrap();
        lens.push(x0);
        lens.push(j - x0);
        t -= j;
    }
}

fn x0_to_u64<T: Wide>(x: &T) -> u64 {
    let mut tmp = BitString::new();
    x.push_bits(64, &mut tmp);
    tmp.read_u64(0, 64)
}

fn encode_opt_with<T: Wide>(items: &[BitString], concat: &BitString, counts: &[T]) -> BitString {
    let t = concat.len();
    let lens: SmallVec<[usize; 32]> = items.iter().map(BitString::len).collect();
    let rank = rank_subdivision(&lens, counts);
    let mut index = rank;
    // index = rank · 2^t + value(concat), built bit by bit
    for i in 0..t {
        index = index * T::from(2) + T::from(concat.get(i) as u64);
    }
    let mut out = BitString::with_capacity(opt_len(t));
    index.push_bits(opt_len(t), &mut out);
    out
}

fn decode_opt_with<T: Wide>(code: &BitString, t: usize, counts: &[T]) -> Result<Vec<BitString>, CodecError> {
    let index = T::from_bits(code, 0, code.len());
    let mut scale = T::one();
    for _ in 0..t {
        scale = scale * T::from(2);
    }
    let rank = index.clone() / scale.clone();
    let value = index % scale;
    if rank >= counts[t] {
        return Err(CodecError::IndexOutOfRange);
    }
    let mut concat = BitString::with_capacity(t);
    value.push_bits(t, &mut concat);
    let lens = unrank_subdivision(rank, t, counts);
    let mut items = Vec::with_capacity(lens.len());
    let mut offset = 0;
    for len in lens {
        items.push(concat.slice(offset..offset + len));
        offset += len;
    }
    Ok(items)
}

/// Encodes `(a_0, …, a_2k)` as the index `rank · 2^t + value(ã)` in exactly
/// [`opt_len`]`(t)` bits, where `rank` numbers the subdivision of `ã` into
/// the `a_i`.
pub fn encode_alt_opt(items: &[BitString]) -> Result<BitString, CodecError> {
    check_alternating(items)?;
    let concat = concat_all(items);
    let t = concat.len();
    if t == 0 {
        return Ok(BitString::new());
    }
    Ok(if opt_len(t) <= 127 {
        encode_opt_with(items, &concat, narrow_counts())
    } else {
        encode_opt_with(items, &concat, &subdivision_counts::<BigUint>(t))
    })
}

pub fn decode_alt_opt(code: &BitString) -> Result<Vec<BitString>, CodecError> {
    let t = invert_length(code.len(), opt_len)?;
    if t == 0 {
        return Ok(vec![BitString::new()]);
    }
    if code.len() <= 127 {
        decode_opt_with(code, t, narrow_counts())
    } else {
        decode_opt_with(code, t, &subdivision_counts::<BigUint>(t))
    }
}

// ---------------------------------------------------------------------------
// Consecutive lists

/// `⌈m·log₂3⌉`, the width that holds any `m`-digit base-3 number.
pub fn ternary_width(m: usize) -> usize {
    if m == 0 {
        return 0;
    }
    if m <= 80 {
        // 3^m is odd and > 1, so its bit length is the ceiling.
        return (u128::BITS - 3u128.pow(m as u32).leading_zeros()) as usize;
    }
    let x = m as f64 * 3f64.log2();
    if (x - x.round()).abs() < 1e-8 {
        BigUint::from(3u32).pow(m as u32).bits() as usize
    } else {
        x.ceil() as usize
    }
}

/// Codeword length of the consecutive-pairs codec for `t` total bits.
pub fn consecutive_len(t: usize) -> usize {
    if t == 0 {
        0
    } else {
        t + ternary_width(t - 1) + 2
    }
}

/// Role of the bit at each position `p >= 1` of the concatenation.
const STARTS_AFTER_NONEMPTY: u8 = 0;
const STARTS_AFTER_EMPTY: u8 = 1;
const CONTINUES: u8 = 2;

/// Encodes `(a_0, …, a_k)` as the concatenation, a base-3 string recording
/// for every bit after the first whether it starts a new string (and whether
/// an empty string precedes it), and flags for `a_0 = ε` and `a_k = ε`.
pub fn encode_consecutive(items: &[BitString]) -> Result<BitString, CodecError> {
    check_consecutive(items)?;
    let concat = concat_all(items);
    let t = concat.len();
    if t == 0 {
        return Ok(BitString::new());
    }
    let mut roles: SmallVec<[u8; 64]> = smallvec![CONTINUES; t - 1];
    let mut offset = 0;
    for (j, a) in items.iter().enumerate() {
        if !a.is_empty() && offset > 0 {
            roles[offset - 1] = if items[j - 1].is_empty() {
                STARTS_AFTER_EMPTY
            } else {
                STARTS_AFTER_NONEMPTY
            };
        }
        offset += a.len();
    }
    let width = ternary_width(t - 1);
    let mut out = BitString::with_capacity(consecutive_len(t));
    out.extend_from(&concat);
    if width <= 127 {
        pack_ternary::<u128>(&roles, width, &mut out);
    } else {
        pack_ternary::<BigUint>(&roles, width, &mut out);
    }
    out.push(items[0].is_empty());
    out.push(items[items.len() - 1].is_empty());
    Ok(out)
}

fn pack_ternary<T: Wide>(digits: &[u8], width: usize, out: &mut BitString) {
    let mut v = T::zero();
    for &d in digits {
        v = v * T::from(3) + T::from(d as u64);
    }
    v.push_bits(width, out);
}

fn unpack_ternary<T: Wide>(code: &BitString, start: usize, width: usize, m: usize) -> Option<SmallVec<[u8; 64]>> {
    let mut v = T::from_bits(code, start, width);
    let mut digits: SmallVec<[u8; 64]> = smallvec![0u8; m];
    for d in digits.iter_mut().rev() {
        let r = v.clone() % T::from(3);
        *d = x0_to_u64(&r) as u8;
        v = v / T::from(3);
    }
    v.is_zero().then_some(digits)
}

pub fn decode_consecutive(code: &BitString) -> Result<Vec<BitString>, CodecError> {
    let t = invert_length(code.len(), consecutive_len)?;
    if t == 0 {
        return Ok(vec![BitString::new()]);
    }
    let width = ternary_width(t - 1);
    let roles = if width <= 127 {
        unpack_ternary::<u128>(code, t, width, t - 1)
    } else {
        unpack_ternary::<BigUint>(code, t, width, t - 1)
    }
    .ok_or(CodecError::IndexOutOfRange)?;
    let first_empty = code.get(t + width);
    let last_empty = code.get(t + width + 1);

    let mut items = Vec::new();
    if first_empty {
        items.push(BitString::new());
    }
    let mut start = 0;
    for p in 1..t {
        match roles[p - 1] {
            CONTINUES => {}
            STARTS_AFTER_NONEMPTY => {
                items.push(code.slice(start..p));
                start = p;
            }
            _ => {
                items.push(code.slice(start..p));
                items.push(BitString::new());
                start = p;
            }
        }
    }
    items.push(code.slice(start..t));
    if last_empty {
        items.push(BitString::new());
    }
    Ok(items)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use proptest::prelude::*;

    fn v(items: &[&str]) -> Vec<BitString> {
        items.iter().map(|s| bits(s)).collect()
    }

    /// Enumerates subdivisions directly: all `k`, all compositions.
    fn brute_count(t: usize) -> u64 {
        fn go(rest: usize) -> u64 {
            // either stop here with x_2k = rest, or place a pair (x, y) with x + y >= 1
            let mut total = 1;
            for j in 1..=rest {
                for _x in 0..=j {
                    total += go(rest - j);
                }
            }
            total
        }
        go(t)
    }

    #[test]
    fn subdivision_counts_match_enumeration() {
        assert_eq!(count_subdivisions(0), BigUint::from(1u32));
        assert_eq!(count_subdivisions(1), BigUint::from(3u32));
        assert_eq!(brute_count(2), 10);
        for t in 0..=14 {
            assert_eq!(count_subdivisions(t), BigUint::from(brute_count(t)), "t={t}");
        }
        let c = 2.0 + 2f64.sqrt();
        for t in 0..=64 {
            let s = count_subdivisions(t);
            let bound = c.powi(t as i32);
            assert!(s.to_string().parse::<f64>().unwrap() <= bound * (1.0 + 1e-12));
        }
    }

    #[test]
    fn opt_budget_holds() {
        for t in 0..=64 {
            let universe = count_subdivisions(t) << t;
            assert!(universe <= BigUint::one() << opt_len(t), "t={t}");
            assert_eq!(opt_len(t), (t as f64 * C_OPT).ceil() as usize);
        }
        assert_eq!(opt_len(4), 12);
        assert!((C_OPT - (1.0 + (2.0 + 2f64.sqrt()).log2())).abs() < 1e-15);
    }

    #[test]
    fn lengths_are_injective() {
        for len_of in [pair_len as fn(usize) -> usize, opt_len, consecutive_len, |t| 3 * t] {
            let mut prev = len_of(0);
            for t in 1..=1_000_000 {
                let l = len_of(t);
                assert!(l > prev, "t={t}");
                prev = l;
            }
        }
        assert_eq!(opt_len(1000), opt_len_exact(1000));
        assert_eq!(ternary_width(100), BigUint::from(3u32).pow(100).bits() as usize);
    }

    #[test]
    fn pair_examples() {
        assert_eq!(encode_pair(&bits("0"), &bits("1")), bits("0101"));
        assert_eq!(encode_pair(&bits("-"), &bits("-")), bits("-"));
        assert_eq!(encode_pair(&bits("10"), &bits("-")), bits("1010"));
        assert_eq!(decode_pair(&bits("0101")).unwrap(), (bits("0"), bits("1")));
        assert_eq!(decode_pair(&bits("-")).unwrap(), (bits("-"), bits("-")));
        assert_eq!(decode_pair(&bits("1010")).unwrap(), (bits("10"), bits("-")));
        // t = 2 has length 4, t = 3 has length 5: length 3 is impossible
        assert_eq!(pair_len(1), 2);
        assert_eq!(decode_pair(&bits("11")).unwrap(), (bits("1"), bits("-")));
        assert_eq!(decode_pair(&bits("1110000")), Err(CodecError::IndexOutOfRange));
        assert_eq!(decode_pair(&bits("10")).unwrap(), (bits("0"), bits("-")));
        assert_eq!(decode_pair(&bits("111")), Err(CodecError::BadLength(3)));
    }

    #[test]
    fn alt_3t_examples() {
        assert_eq!(encode_alt_3t(&v(&["-", "0", "-"])).unwrap(), bits("010"));
        assert_eq!(encode_alt_3t(&v(&["-"])).unwrap(), bits("-"));
        // k = 0: a_0 starts at position 0 and is the last item, flag set
        assert_eq!(encode_alt_3t(&v(&["1"])).unwrap(), bits("111"));
        assert_eq!(encode_alt_3t(&v(&["1", "-", "-"])).unwrap(), bits("100"));
        assert_eq!(decode_alt_3t(&bits("010")).unwrap(), v(&["-", "0", "-"]));
        assert_eq!(decode_alt_3t(&bits("111")).unwrap(), v(&["1"]));
        assert_eq!(decode_alt_3t(&bits("-")).unwrap(), v(&["-"]));
        assert_eq!(decode_alt_3t(&bits("0101")), Err(CodecError::BadLength(4)));
        // no marks but the final flag claims a nonempty last item
        assert_eq!(decode_alt_3t(&bits("001")), Err(CodecError::InconsistentMarks));
        assert_eq!(encode_alt_3t(&v(&["-", "-", "1"])), Err(CodecError::EmptyRun(0, 1)));
        assert_eq!(encode_alt_3t(&v(&["1", "0"])), Err(CodecError::ListShape("odd")));
    }

    #[test]
    fn opt_examples() {
        assert_eq!(encode_alt_opt(&v(&["-"])).unwrap(), bits("-"));
        let code = encode_alt_opt(&v(&["10", "-", "0", "1", "-"])).unwrap();
        assert_eq!(code.len(), 12);
        assert_eq!(decode_alt_opt(&code).unwrap(), v(&["10", "-", "0", "1", "-"]));
        // t = 1: s_1 · 2 = 6 codewords in 3 bits; indices 6 and 7 are invalid
        assert_eq!(decode_alt_opt(&bits("111")), Err(CodecError::IndexOutOfRange));
        assert_eq!(decode_alt_opt(&bits("11")), Err(CodecError::BadLength(2)));
    }

    #[test]
    fn consecutive_examples() {
        assert_eq!(encode_consecutive(&v(&["-"])).unwrap(), bits("-"));
        assert_eq!(encode_consecutive(&v(&["1"])).unwrap().len(), 3);
        assert_eq!(encode_consecutive(&v(&["1"])).unwrap(), bits("100"));
        assert_eq!(encode_consecutive(&v(&["-", "1", "-"])).unwrap(), bits("111"));
        assert_eq!(decode_consecutive(&bits("111")).unwrap(), v(&["-", "1", "-"]));
        assert_eq!(encode_consecutive(&v(&["1", "-", "-"])), Err(CodecError::EmptyRun(1, 2)));
        // t = 2: one ternary digit in 2 bits; value 3 is out of range
        assert_eq!(decode_consecutive(&bits("001100")), Err(CodecError::IndexOutOfRange));
    }

    /// Every alternating list with concatenation exactly `t` bits of a fixed
    /// pattern, over all subdivisions.
    fn all_alternating(t: usize) -> Vec<Vec<BitString>> {
        fn go(rest: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            prefix.push(rest);
            out.push(prefix.clone());
            prefix.pop();
            for j in 1..=rest {
                for x in 0..=j {
                    prefix.push(x);
                    prefix.push(j - x);
                    go(rest - j, prefix, out);
                    prefix.pop();
                    prefix.pop();
                }
            }
        }
        let mut lens = Vec::new();
        go(t, &mut Vec::new(), &mut lens);
        let concat = BitString::from_bits((0..t).map(|i| (i * 7 + 3) % 5 < 2));
        lens.into_iter()
            .map(|ls| {
                let mut off = 0;
                ls.iter()
                    .map(|&l| {
                        off += l;
                        concat.slice(off - l..off)
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn exhaustive_alternating_round_trips() {
        for t in 0..=10 {
            let lists = all_alternating(t);
            assert_eq!(lists.len() as u64, brute_count(t));
            let mut seen_3t = std::collections::HashSet::new();
            let mut seen_opt = std::collections::HashSet::new();
            for items in &lists {
                let c3 = encode_alt_3t(items).unwrap();
                assert_eq!(c3.len(), 3 * t);
                assert_eq!(&decode_alt_3t(&c3).unwrap(), items, "t={t}");
                assert!(seen_3t.insert(c3));
                let co = encode_alt_opt(items).unwrap();
                assert_eq!(co.len(), opt_len(t));
                assert_eq!(&decode_alt_opt(&co).unwrap(), items);
                assert!(seen_opt.insert(co));
            }
        }
    }

    #[test]
    fn opt_rank_is_dense() {
        // ranks of all subdivisions of t are exactly 0..s_t
        for t in 0..=9 {
            let counts = subdivision_counts::<u128>(t);
            let mut ranks: Vec<u128> = all_alternating(t)
                .iter()
                .map(|items| {
                    let lens: Vec<usize> = items.iter().map(BitString::len).collect();
                    rank_subdivision(&lens, &counts)
                })
                .collect();
            ranks.sort();
            assert_eq!(ranks, (0..counts[t]).collect::<Vec<_>>());
        }
    }

    #[test]
    fn wide_path_matches_narrow_path() {
        let items = v(&["1011", "-", "01", "110", "-", "1", "0", "-", "111"]);
        let concat = concat_all(&items);
        let t = concat.len();
        let narrow = encode_opt_with(&items, &concat, narrow_counts());
        let wide = encode_opt_with(&items, &concat, &subdivision_counts::<BigUint>(t));
        assert_eq!(narrow, wide);
        assert_eq!(
            decode_opt_with(&wide, t, &subdivision_counts::<BigUint>(t)).unwrap(),
            items
        );
    }

    fn bitstring(max: usize) -> impl Strategy<Value = BitString> {
        prop::collection::vec(any::<bool>(), 0..=max).prop_map(BitString::from_bits)
    }

    /// Alternating lists: pairs are repaired to be nonempty.
    fn alternating() -> impl Strategy<Value = Vec<BitString>> {
        (prop::collection::vec(bitstring(4), 0..8), bitstring(4)).prop_map(|(mut v, last)| {
            if v.len() % 2 == 1 {
                v.pop();
            }
            for i in 0..v.len() / 2 {
                if v[2 * i].is_empty() && v[2 * i + 1].is_empty() {
                    v[2 * i + 1].push(i % 2 == 0);
                }
            }
            v.push(last);
            v
        })
    }

    fn consecutive() -> impl Strategy<Value = Vec<BitString>> {
        prop::collection::vec(bitstring(4), 1..16).prop_map(|mut v| {
            for i in 1..v.len() {
                if v[i - 1].is_empty() && v[i].is_empty() {
                    v[i].push(true);
                }
            }
            v
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn pair_round_trip(a in bitstring(20), b in bitstring(20)) {
            let code = encode_pair(&a, &b);
            prop_assert_eq!(code.len(), pair_len(a.len() + b.len()));
            prop_assert_eq!(decode_pair(&code).unwrap(), (a, b));
        }

        #[test]
        fn alt_3t_round_trip(items in alternating()) {
            let t: usize = items.iter().map(BitString::len).sum();
            let code = encode_alt_3t(&items).unwrap();
            prop_assert_eq!(code.len(), 3 * t);
            prop_assert_eq!(decode_alt_3t(&code).unwrap(), items);
        }

        #[test]
        fn opt_round_trip(items in alternating()) {
            let t: usize = items.iter().map(BitString::len).sum();
            let code = encode_alt_opt(&items).unwrap();
            prop_assert_eq!(code.len(), opt_len(t));
            prop_assert_eq!(decode_alt_opt(&code).unwrap(), items);
        }

        #[test]
        fn consecutive_round_trip(items in consecutive()) {
            let t: usize = items.iter().map(BitString::len).sum();
            let code = encode_consecutive(&items).unwrap();
            prop_assert_eq!(code.len(), consecutive_len(t));
            prop_assert_eq!(decode_consecutive(&code).unwrap(), items);
        }

        #[test]
        fn decoders_never_panic(raw in prop::collection::vec(any::<bool>(), 0..60)) {
            let code = BitString::from_bits(raw);
            let _ = decode_pair(&code);
            if let Ok(items) = decode_alt_3t(&code) {
                prop_assert_eq!(encode_alt_3t(&items).unwrap(), code.clone());
            }
            if let Ok(items) = decode_alt_opt(&code) {
                prop_assert_eq!(encode_alt_opt(&items).unwrap(), code.clone());
            }
            if let Ok(items) = decode_consecutive(&code) {
                prop_assert_eq!(encode_consecutive(&items).unwrap(), code);
            }
        }
    }
}
