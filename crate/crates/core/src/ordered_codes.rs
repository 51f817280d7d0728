//! Fixed-width integer codes and weighted `≺`-ordered code assignment.

use thiserror::Error;

use crate::bits::BitString;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("index {index} out of range for universe of size {universe}")]
    IndexOutOfRange { index: u64, universe: u64 },
    #[error("expected a {expected}-bit code, got {found} bits")]
    WrongWidth { expected: usize, found: usize },
    #[error("weight sequence must be non-empty")]
    EmptyWeights,
    #[error("weight at position {0} is zero")]
    ZeroWeight(usize),
}

/// `⌈log₂ n⌉`, with `ceil_log2(0) = ceil_log2(1) = 0`.
#[inline]
pub fn ceil_log2(n: u64) -> usize {
    if n <= 1 {
        0
    } else {
        (u64::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// `⌊log₂ n⌋` for `n >= 1`.
#[inline]
pub fn floor_log2(n: u64) -> usize {
    assert!(n > 0, "floor_log2(0) is undefined");
    (u64::BITS - 1 - n.leading_zeros()) as usize
}

/// `⌊log₂ total − log₂ part⌋`: the largest `t` with `part · 2^t <= total`.
#[inline]
pub fn floor_log_ratio(total: u64, part: u64) -> usize {
    debug_assert!(part >= 1 && part <= total);
    let mut t = floor_log2(total) - floor_log2(part);
    if (part as u128) << t > total as u128 {
        t -= 1;
    }
    t
}

/// Binary representation of `index`, left-padded to `⌈log₂ universe⌉` bits.
pub fn fixed_width_encode(index: u64, universe: u64) -> Result<BitString, CodeError> {
    if index >= universe {
        return Err(CodeError::IndexOutOfRange { index, universe });
    }
    Ok(BitString::from_u64(index, ceil_log2(universe)))
}

pub fn fixed_width_decode(code: &BitString, universe: u64) -> Result<u64, CodeError> {
    let width = ceil_log2(universe);
    if code.len() != width {
        return Err(CodeError::WrongWidth {
            expected: width,
            found: code.len(),
        });
    }
    let index = code.read_u64(0, width);
    if index >= universe {
        return Err(CodeError::IndexOutOfRange { index, universe });
    }
    Ok(index)
}

/// A non-empty list of positive integer weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSequence {
    weights: Vec<u64>,
    total: u64,
}

impl WeightSequence {
    pub fn new(weights: Vec<u64>) -> Result<Self, CodeError> {
        if weights.is_empty() {
            return Err(CodeError::EmptyWeights);
        }
        if let Some(pos) = weights.iter().position(|&w| w == 0) {
            return Err(CodeError::ZeroWeight(pos));
        }
        let total = weights.iter().sum();
        Ok(Self { weights, total })
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Smallest index `k` with `Σ_{i<=k} w_i > w/2`.
    pub fn median_index(&self) -> usize {
        let mut acc = 0u64;
        for (k, &w) in self.weights.iter().enumerate() {
            acc += w;
            if 2 * acc as u128 > self.total as u128 {
                return k;
            }
        }
        unreachable!("prefix sums reach the total")
    }

    /// A `≺`-ordered sequence with `|a_i| <= ⌊log w − log w_i⌋`.
    ///
    /// Greedy: `a_1 = 0^{t_1}`, then each `a_i` is the `≺`-least string of
    /// length at most `t_i` above `a_{i-1}`. Choosing the least admissible
    /// string at every step leaves the most room for the rest, so the greedy
    /// succeeds whenever any assignment exists.
    pub fn ordered_codes(&self) -> Vec<BitString> {
        let bounds = self.weights.iter().map(|&w| floor_log_ratio(self.total, w));
        greedy(bounds, false)
    }

    /// A `≺`-ordered sequence of nonempty strings with
    /// `|a_i| <= ⌊log(w + w_k) − log w_i⌋`, `k` the median index.
    ///
    /// The bounds are those of `ordered_codes` on the sequence with `w_k`
    /// duplicated; the greedy runs directly over nonempty strings, skipping
    /// `ε` when it would be the next choice.
    pub fn nonempty_ordered_codes(&self) -> Vec<BitString> {
        let doubled = self.total + self.weights[self.median_index()];
        let bounds = self.weights.iter().map(|&w| floor_log_ratio(doubled, w));
        greedy(bounds, true)
    }
}

fn greedy(bounds: impl ExactSizeIterator<Item = usize>, nonempty: bool) -> Vec<BitString> {
    let mut out: Vec<BitString> = Vec::with_capacity(bounds.len());
    for t in bounds {
        let mut next = match out.last() {
            None => BitString::min_bounded(t),
            Some(prev) => prev
                .succ_bounded(t)
                .expect("length bounds admit an ordered assignment"),
        };
        if nonempty && next.is_empty() {
            next = next
                .succ_bounded(t)
                .expect("length bounds admit a nonempty ordered assignment");
        }
        out.push(next);
    }
    out
}
