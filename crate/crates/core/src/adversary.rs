//! 3-2 sequences and trees, edit distance, and an empirical check of the
//! induced-sequence inequality `lev(x, I(S)) <= log_{3/2}(6^k / m)`.
//!
//! The 3-2 tree of `x = (x_1, …, x_2k)` gives every node at depth `i − 1`
//! exactly `x_i` children, so it has `6^k` leaves. For a set `S` of `m`
//! leaves, the labels of `S` alone determine the tree spanned by their NCA
//! closure and its induced sequence `I(S)`; the inequality bounds how far
//! `I(S)` can drift from `x`.

use std::fmt;

use rand::seq::index::sample;
use rand::Rng;
use thiserror::Error;

use crate::decoder::{close_under_nca, induced_sequence, LabelSetError};
use crate::schemes::{decode_list, label_tree, SchemeError, SchemeId};
use crate::sublabels::SubLabelList;
use crate::tree::{random_three_two, rng_from_seed, NodeId, RootedTree, TreeError};

/// Largest `k` for which [`separated_set`] enumerates all `C(2k, k)` sequences.
pub const MAX_ENUMERATION_K: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdversaryError {
    #[error("3-2 sequence entries must be 2 or 3, found {0}")]
    BadEntry(u8),
    #[error("3-2 sequence needs as many 2s as 3s, found {twos} and {threes}")]
    Unbalanced { twos: usize, threes: usize },
    #[error("enumeration is limited to k <= {MAX_ENUMERATION_K}, got {0}")]
    TooLarge(usize),
    #[error("separation needs 2 <= h <= k, got h = {h}, k = {k}")]
    BadSeparation { k: usize, h: usize },
    #[error("leaf set must be nonempty")]
    EmptyLeafSet,
    #[error("node {0} is not a leaf of the 3-2 tree")]
    NotALeaf(NodeId),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    LabelSet(#[from] LabelSetError),
}

/// Unit-cost edit distance (insertions, deletions, substitutions).
pub fn levenshtein<T: PartialEq>(x: &[T], y: &[T]) -> usize {
    let mut row: Vec<usize> = (0..=y.len()).collect();
    for (i, a) in x.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, b) in y.iter().enumerate() {
            let next = (diag + usize::from(a != b)).min(row[j] + 1).min(row[j + 1] + 1);
            diag = row[j + 1];
            row[j + 1] = next;
        }
    }
    row[y.len()]
}

/// A sequence of `k` 2s and `k` 3s.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ThreeTwoSequence(Vec<u8>);

impl ThreeTwoSequence {
    pub fn new(entries: Vec<u8>) -> Result<Self, AdversaryError> {
        if let Some(&e) = entries.iter().find(|&&e| e != 2 && e != 3) {
            return Err(AdversaryError::BadEntry(e));
        }
        let twos = entries.iter().filter(|&&e| e == 2).count();
        let threes = entries.len() - twos;
        if twos != threes {
            return Err(AdversaryError::Unbalanced { twos, threes });
        }
        Ok(Self(entries))
    }

    pub fn random<R: Rng>(k: usize, rng: &mut R) -> Self {
        Self(random_three_two(k, rng))
    }

    pub fn k(&self) -> usize {
        self.0.len() / 2
    }

    pub fn entries(&self) -> &[u8] {
        &self.0
    }

    /// `6^k`.
    pub fn leaf_count(&self) -> usize {
        6usize.pow(self.k() as u32)
    }

    pub fn tree(&self) -> RootedTree {
        let counts: Vec<usize> = self.0.iter().map(|&e| e as usize).collect();
        RootedTree::from_level_counts(&counts).expect("level counts are positive")
    }

    /// Every sequence for a given `k`, in lexicographic order.
    pub fn all(k: usize) -> Result<Vec<Self>, AdversaryError> {
        if k > MAX_ENUMERATION_K {
            return Err(AdversaryError::TooLarge(k));
        }
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(2 * k);
        fn go(twos: usize, threes: usize, cur: &mut Vec<u8>, out: &mut Vec<ThreeTwoSequence>) {
            if twos == 0 && threes == 0 {
                out.push(ThreeTwoSequence(cur.clone()));
                return;
            }
            for (e, left) in [(2, twos), (3, threes)] {
                if left > 0 {
                    cur.push(e);
                    if e == 2 {
                        go(twos - 1, threes, cur, out);
                    } else {
                        go(twos, threes - 1, cur, out);
                    }
                    cur.pop();
                }
            }
        }
        go(k, k, &mut cur, &mut out);
        Ok(out)
    }
}

impl fmt::Display for ThreeTwoSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.0 {
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// Greedy packing of 3-2 sequences with pairwise edit distance `> h`: take
/// the lexicographically first remaining sequence, drop everything within
/// distance `h` of it, repeat.
pub fn separated_set(k: usize, h: usize) -> Result<Vec<ThreeTwoSequence>, AdversaryError> {
    if h < 2 || h > k {
        return Err(AdversaryError::BadSeparation { k, h });
    }
    let mut remaining = ThreeTwoSequence::all(k)?;
    let mut picked = Vec::new();
    while !remaining.is_empty() {
        let x = remaining.remove(0);
        remaining.retain(|y| levenshtein(x.entries(), y.entries()) > h);
        picked.push(x);
    }
    Ok(picked)
}

/// Leaves of the 3-2 tree of `x`, in id order.
pub fn leaves(tree: &RootedTree) -> Vec<NodeId> {
    tree.nodes().filter(|&v| tree.is_leaf(v)).collect()
}

/// One evaluation of the inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct InducedReport {
    pub k: usize,
    pub m: usize,
    pub lev: usize,
    pub bound: f64,
    pub pass: bool,
}

impl fmt::Display for InducedReport {
    /// `k m lev bound pass`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {:.4} {}",
            self.k,
            self.m,
            self.lev,
            self.bound,
            if self.pass { "pass" } else { "fail" }
        )
    }
}

/// `log_{3/2}(6^k / m)`.
pub fn induced_bound(k: usize, m: usize) -> f64 {
    (k as f64 * 6f64.ln() - (m as f64).ln()) / 1.5f64.ln()
}

/// Labels the 3-2 tree of `x` with `scheme`, closes the labels of the leaves
/// in `subset` under NCA, and compares `lev(x, I(S))` against the bound.
pub fn check_induced_bound(
    x: &ThreeTwoSequence,
    scheme: SchemeId,
    subset: &[NodeId],
) -> Result<InducedReport, AdversaryError> {
    let tree = x.tree();
    let labeling = label_tree(&tree, scheme, None)?;
    check_with_labels(x, &tree, scheme, labeling.labels(), subset)
}

fn check_with_labels(
    x: &ThreeTwoSequence,
    tree: &RootedTree,
    scheme: SchemeId,
    labels: &[crate::bits::BitString],
    subset: &[NodeId],
) -> Result<InducedReport, AdversaryError> {
    if subset.is_empty() {
        return Err(AdversaryError::EmptyLeafSet);
    }
    let mut lists: Vec<SubLabelList> = Vec::with_capacity(subset.len());
    for &v in subset {
        tree.check_node(v)?;
        if !tree.is_leaf(v) {
            return Err(AdversaryError::NotALeaf(v));
        }
        lists.push(decode_list(scheme, &labels[v - 1])?);
    }
    let closure = close_under_nca(&lists)?;
    let induced: Vec<u8> = induced_sequence(&closure).iter().map(|&c| c as u8).collect();
    let lev = levenshtein(x.entries(), &induced);
    let bound = induced_bound(x.k(), subset.len());
    Ok(InducedReport {
        k: x.k(),
        m: subset.len(),
        lev,
        bound,
        // the bound is irrational in general; allow for rounding in the logs
        pass: lev as f64 <= bound + 1e-9,
    })
}

/// `trials` independent checks for one `k`: each draws a random `x` and a
/// uniformly random nonempty leaf subset of random size.
pub fn run_trials(
    k: usize,
    trials: usize,
    scheme: SchemeId,
    seed: u64,
) -> Result<Vec<InducedReport>, AdversaryError> {
    let mut rng = rng_from_seed(seed);
    let mut out = Vec::with_capacity(trials);
    for _ in 0..trials {
        let x = ThreeTwoSequence::random(k, &mut rng);
        let tree = x.tree();
        let labeling = label_tree(&tree, scheme, None)?;
        let all = leaves(&tree);
        let m = rng.gen_range(1..=all.len());
        let subset: Vec<NodeId> = sample(&mut rng, all.len(), m).into_iter().map(|i| all[i]).collect();
        out.push(check_with_labels(&x, &tree, scheme, labeling.labels(), &subset)?);
    }
    Ok(out)
}
