//! NCA computation on sub-label lists, and the label trees induced by sets
//! of lists.

use thiserror::Error;

use crate::bits::BitString;
use crate::sublabels::SubLabelList;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelSetError {
    #[error("label set is empty")]
    Empty,
    #[error("labels do not come from a single tree")]
    Inconsistent,
}

/// Position of the first differing item, if any.
#[inline]
fn first_difference(a: &[BitString], b: &[BitString]) -> Option<usize> {
    a.iter().zip(b).position(|(x, y)| x != y)
}

/// `l(nca(v, w))` from `l(v)` and `l(w)`.
///
/// Scans for the first differing position. No difference: the shorter list
/// is a prefix of the other and is the answer. A difference at a light
/// position keeps the common prefix, which ends with a heavy sub-label. A
/// difference at a heavy position keeps the common prefix and appends the
/// `≺`-smaller of the two heavy sub-labels.
pub fn nca_of_lists(a: &SubLabelList, b: &SubLabelList) -> SubLabelList {
    let (x, y) = (a.items(), b.items());
    let items = match first_difference(x, y) {
        None => {
            if x.len() <= y.len() {
                return a.clone();
            }
            return b.clone();
        }
        Some(i) if i % 2 == 1 => x[..i].to_vec(),
        Some(i) => {
            let mut out = Vec::with_capacity(i + 1);
            out.extend_from_slice(&x[..i]);
            out.push(std::cmp::min(&x[i], &y[i]).clone());
            out
        }
    };
    SubLabelList::new(items).expect("common prefix ending at a heavy position has odd length")
}

/// Whether the node of `a` is an ancestor of (or equal to) the node of `b`.
pub fn is_ancestor(a: &SubLabelList, b: &SubLabelList) -> bool {
    let (x, y) = (a.items(), b.items());
    match first_difference(x, y) {
        None => x.len() <= y.len(),
        Some(i) => i % 2 == 0 && i + 1 == x.len() && x[i] < y[i],
    }
}

/// A rooted tree of sub-label lists organised by ancestry.
///
/// Nodes are stored in list order, which is a preorder, so index 0 is the
/// root and every parent precedes its children.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelTree {
    lists: Vec<SubLabelList>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
}

impl LabelTree {
    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    pub fn lists(&self) -> &[SubLabelList] {
        &self.lists
    }

    pub fn list(&self, i: usize) -> &SubLabelList {
        &self.lists[i]
    }

    pub fn parent(&self, i: usize) -> Option<usize> {
        self.parent[i]
    }

    pub fn children(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    pub fn position(&self, list: &SubLabelList) -> Option<usize> {
        self.lists.binary_search(list).ok()
    }

    /// Number of leaves in each node's subtree.
    pub fn leaf_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.len()];
        for i in (0..self.len()).rev() {
            if self.children[i].is_empty() {
                counts[i] = 1;
            }
            if let Some(p) = self.parent[i] {
                counts[p] += counts[i];
            }
        }
        counts
    }
}

/// `S′ = S ∪ {nca(x, y) : x, y ∈ S}` organised as a tree by ancestry.
///
/// In preorder, the NCAs of all pairs are already the NCAs of adjacent
/// pairs, so one pass over the sorted set closes it.
pub fn close_under_nca(set: &[SubLabelList]) -> Result<LabelTree, LabelSetError> {
    if set.is_empty() {
        return Err(LabelSetError::Empty);
    }
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let joins: Vec<SubLabelList> = sorted.windows(2).map(|w| nca_of_lists(&w[0], &w[1])).collect();
    sorted.extend(joins);
    sorted.sort_unstable();
    sorted.dedup();

    let mut parent = vec![None; sorted.len()];
    let mut children = vec![Vec::new(); sorted.len()];
    let mut stack: Vec<usize> = Vec::new();
    for i in 0..sorted.len() {
        while let Some(&top) = stack.last() {
            if is_ancestor(&sorted[top], &sorted[i]) {
                break;
            }
            stack.pop();
        }
        match stack.last() {
            Some(&top) => {
                parent[i] = Some(top);
                children[top].push(i);
            }
            None if i > 0 => return Err(LabelSetError::Inconsistent),
            None => {}
        }
        stack.push(i);
    }
    Ok(LabelTree {
        lists: sorted,
        parent,
        children,
    })
}

/// Child counts along a root-to-leaf walk that always descends into a child
/// with the most leaves below it (the first such child in list order). The
/// final leaf's count of 0 is omitted.
pub fn induced_sequence(tree: &LabelTree) -> Vec<usize> {
    let leaves = tree.leaf_counts();
    let mut out = Vec::new();
    let mut cur = 0;
    while !tree.children(cur).is_empty() {
        let kids = tree.children(cur);
        out.push(kids.len());
        let mut best = kids[0];
        for &c in &kids[1..] {
            if leaves[c] > leaves[best] {
                best = c;
            }
        }
        cur = best;
    }
    out
}
