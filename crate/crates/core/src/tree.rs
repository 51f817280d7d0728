//! Rooted trees, the parent-array file format, heavy-light decomposition and
//! a brute-force NCA oracle.
//!
//! Node ids are `1..=n` and the root is always node `1`. Id `0` is used as
//! the "no node" sentinel in the internal arrays.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub type NodeId = usize;

pub const ROOT: NodeId = 1;
const NONE: NodeId = 0;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("tree must have at least one node")]
    Empty,
    #[error("malformed integer {0:?}")]
    Malformed(String),
    #[error("expected {expected} parent ids, found {found}")]
    WrongCount { expected: usize, found: usize },
    #[error("parent {parent} of node {node} is out of range 1..={n}")]
    ParentOutOfRange { node: NodeId, parent: NodeId, n: usize },
    #[error("parent links contain a cycle; {reached} of {n} nodes reachable from the root")]
    NotConnected { reached: usize, n: usize },
    #[error("node id {id} out of range 1..={n}")]
    NodeOutOfRange { id: NodeId, n: usize },
    #[error("invalid size parameter {0}")]
    InvalidSize(usize),
    #[error("unknown tree family {0:?}")]
    UnknownFamily(String),
}

/// A rooted tree with children stored in ascending id order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    parent: Vec<NodeId>,
    child_start: Vec<usize>,
    child_list: Vec<NodeId>,
    depth: Vec<u32>,
    bfs: Vec<NodeId>,
}

impl RootedTree {
    /// Builds a tree of `parents.len() + 1` nodes where `parents[i]` is the
    /// parent of node `i + 2`.
    pub fn from_parents(parents: &[NodeId]) -> Result<Self, TreeError> {
        let n = parents.len() + 1;
        let mut parent = vec![NONE; n + 1];
        for (i, &p) in parents.iter().enumerate() {
            let node = i + 2;
            if p == 0 || p > n {
                return Err(TreeError::ParentOutOfRange { node, parent: p, n });
            }
            parent[node] = p;
        }

        let mut child_start = vec![0usize; n + 2];
        for v in 2..=n {
            child_start[parent[v] + 1] += 1;
        }
        for v in 1..=n + 1 {
            child_start[v] += child_start[v - 1];
        }
        let mut fill = child_start.clone();
        let mut child_list = vec![NONE; n - 1];
        for (v, &p) in parent.iter().enumerate().skip(2) {
            child_list[fill[p]] = v;
            fill[p] += 1;
        }

        let mut depth = vec![0u32; n + 1];
        let mut bfs = Vec::with_capacity(n);
        bfs.push(ROOT);
        let mut head = 0;
        while head < bfs.len() {
            let v = bfs[head];
            head += 1;
            for &c in &child_list[child_start[v]..child_start[v + 1]] {
                depth[c] = depth[v] + 1;
                bfs.push(c);
            }
        }
        if bfs.len() != n {
            return Err(TreeError::NotConnected {
                reached: bfs.len(),
                n,
            });
        }
        Ok(Self {
            parent,
            child_start,
            child_list,
            depth,
            bfs,
        })
    }

    /// A tree of depth `counts.len()` in which every node at depth `i`
    /// has exactly `counts[i]` children. Ids are assigned level by level.
    pub fn from_level_counts(counts: &[usize]) -> Result<Self, TreeError> {
        let mut parents = Vec::new();
        let mut level: Vec<NodeId> = vec![ROOT];
        let mut next_id = 2;
        for &c in counts {
            let mut next_level = Vec::with_capacity(level.len() * c);
            for &p in &level {
                for _ in 0..c {
                    parents.push(p);
                    next_level.push(next_id);
                    next_id += 1;
                }
            }
            level = next_level;
        }
        Self::from_parents(&parents)
    }

    /// Parses `n p_2 p_3 … p_n` (whitespace separated).
    pub fn parse(text: &str) -> Result<Self, TreeError> {
        let mut tokens = text.split_ascii_whitespace();
        let n: usize = match tokens.next() {
            None => return Err(TreeError::Empty),
            Some(tok) => tok.parse().map_err(|_| TreeError::Malformed(tok.to_string()))?,
        };
        if n == 0 {
            return Err(TreeError::Empty);
        }
        let parents = tokens
            .map(|tok| tok.parse::<NodeId>().map_err(|_| TreeError::Malformed(tok.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        if parents.len() != n - 1 {
            return Err(TreeError::WrongCount {
                expected: n - 1,
                found: parents.len(),
            });
        }
        Self::from_parents(&parents)
    }

    /// Renders the tree file: `n` on the first line, parents of `2..=n` on the second.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n());
        for v in 2..=self.n() {
            if v > 2 {
                out.push(' ');
            }
            let _ = write!(out, "{}", self.parent[v]);
        }
        out.push('\n');
        out
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.parent.len() - 1
    }

    pub fn nodes(&self) -> std::ops::RangeInclusive<NodeId> {
        1..=self.n()
    }

    #[inline]
    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        match self.parent[v] {
            NONE => None,
            p => Some(p),
        }
    }

    #[inline]
    pub fn children(&self, v: NodeId) -> &[NodeId] {
        &self.child_list[self.child_start[v]..self.child_start[v + 1]]
    }

    #[inline]
    pub fn depth(&self, v: NodeId) -> usize {
        self.depth[v] as usize
    }

    /// Nodes in breadth-first order from the root; parents precede children.
    pub fn bfs_order(&self) -> &[NodeId] {
        &self.bfs
    }

    pub fn is_leaf(&self, v: NodeId) -> bool {
        self.children(v).is_empty()
    }

    pub fn max_children(&self) -> usize {
        self.nodes().map(|v| self.children(v).len()).max().unwrap_or(0)
    }

    pub fn is_binary(&self) -> bool {
        self.max_children() <= 2
    }

    /// Every node has at most one non-leaf child: removing the leaves leaves
    /// a path that starts at the root.
    pub fn is_caterpillar(&self) -> bool {
        self.nodes()
            .all(|v| self.children(v).iter().filter(|&&c| !self.is_leaf(c)).count() <= 1)
    }

    pub fn check_node(&self, id: NodeId) -> Result<(), TreeError> {
        if id == 0 || id > self.n() {
            Err(TreeError::NodeOutOfRange { id, n: self.n() })
        } else {
            Ok(())
        }
    }

    /// NCA by walking parent links after equalizing depths.
    pub fn nca_oracle(&self, u: NodeId, v: NodeId) -> Result<NodeId, TreeError> {
        self.check_node(u)?;
        self.check_node(v)?;
        let (mut a, mut b) = (u, v);
        while self.depth[a] > self.depth[b] {
            a = self.parent[a];
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b];
        }
        while a != b {
            a = self.parent[a];
            b = self.parent[b];
        }
        Ok(a)
    }
}

/// Per-node heavy-light data. Heavy children are chosen by maximal subtree
/// size, ties going to the smallest id.
#[derive(Debug, Clone)]
pub struct HeavyLight {
    size: Vec<u64>,
    lsize: Vec<u64>,
    heavy: Vec<NodeId>,
    apex: Vec<NodeId>,
    ldepth: Vec<u32>,
}

impl HeavyLight {
    pub fn decompose(tree: &RootedTree) -> Self {
        let n = tree.n();
        let mut size = vec![1u64; n + 1];
        size[0] = 0;
        for &v in tree.bfs_order().iter().rev() {
            if let Some(p) = tree.parent(v) {
                size[p] += size[v];
            }
        }

        let mut heavy = vec![NONE; n + 1];
        let mut lsize = vec![1u64; n + 1];
        lsize[0] = 0;
        for v in tree.nodes() {
            let mut best = NONE;
            for &c in tree.children(v) {
                if best == NONE || size[c] > size[best] {
                    best = c;
                }
            }
            if best != NONE {
                heavy[v] = best;
                lsize[v] = size[v] - size[best];
            }
        }

        let mut apex = vec![NONE; n + 1];
        let mut ldepth = vec![0u32; n + 1];
        apex[ROOT] = ROOT;
        for &v in &tree.bfs_order()[1..] {
            let p = tree.parent[v];
            if heavy[p] == v {
                apex[v] = apex[p];
                ldepth[v] = ldepth[p];
            } else {
                apex[v] = v;
                ldepth[v] = ldepth[p] + 1;
            }
        }
        Self {
            size,
            lsize,
            heavy,
            apex,
            ldepth,
        }
    }

    #[inline]
    pub fn size(&self, v: NodeId) -> u64 {
        self.size[v]
    }

    #[inline]
    pub fn lsize(&self, v: NodeId) -> u64 {
        self.lsize[v]
    }

    #[inline]
    pub fn heavy_child(&self, v: NodeId) -> Option<NodeId> {
        match self.heavy[v] {
            NONE => None,
            c => Some(c),
        }
    }

    #[inline]
    pub fn apex(&self, v: NodeId) -> NodeId {
        self.apex[v]
    }

    #[inline]
    pub fn ldepth(&self, v: NodeId) -> usize {
        self.ldepth[v] as usize
    }

    #[inline]
    pub fn is_light(&self, v: NodeId) -> bool {
        self.apex[v] == v
    }

    /// The heavy path starting at `top`, in increasing depth.
    pub fn heavy_path(&self, top: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        std::iter::successors(Some(top), move |&v| self.heavy_child(v))
    }

    pub fn max_ldepth(&self) -> usize {
        self.ldepth.iter().copied().max().unwrap_or(0) as usize
    }
}

/// Random tree families understood by [`generate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Node `i` picks a uniform parent in `1..i`.
    Random,
    /// As `Random`, rejecting parents that already have two children.
    Binary,
    /// A main path from the root with pendant leaves hung off path nodes.
    Caterpillar,
    /// The 3-2 tree of a uniformly shuffled sequence of `k` 2s and `k` 3s.
    ThreeTwo,
}

impl std::str::FromStr for Family {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random" => Ok(Family::Random),
            "binary" => Ok(Family::Binary),
            "caterpillar" => Ok(Family::Caterpillar),
            "threetwo" | "three_two" => Ok(Family::ThreeTwo),
            other => Err(TreeError::UnknownFamily(other.to_string())),
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::Random => "random",
            Family::Binary => "binary",
            Family::Caterpillar => "caterpillar",
            Family::ThreeTwo => "threetwo",
        })
    }
}

/// The PRNG behind every generator: ChaCha8 seeded with `seed_from_u64`.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generates a tree. `size` is the node count, or `k` for [`Family::ThreeTwo`].
pub fn generate(family: Family, size: usize, seed: u64) -> Result<RootedTree, TreeError> {
    if size == 0 {
        return Err(TreeError::InvalidSize(size));
    }
    let mut rng = rng_from_seed(seed);
    match family {
        Family::Random => {
            let parents: Vec<NodeId> = (2..=size).map(|i| rng.gen_range(1..i)).collect();
            RootedTree::from_parents(&parents)
        }
        Family::Binary => {
            let mut kids = vec![0u8; size + 1];
            let mut parents = Vec::with_capacity(size.saturating_sub(1));
            for i in 2..=size {
                let p = loop {
                    let p = rng.gen_range(1..i);
                    if kids[p] < 2 {
                        break p;
                    }
                };
                kids[p] += 1;
                parents.push(p);
            }
            RootedTree::from_parents(&parents)
        }
        Family::Caterpillar => {
            let mut spine = vec![ROOT];
            let mut parents = Vec::with_capacity(size.saturating_sub(1));
            for i in 2..=size {
                if rng.gen_bool(0.5) {
                    parents.push(*spine.last().unwrap());
                    spine.push(i);
                } else {
                    parents.push(spine[rng.gen_range(0..spine.len())]);
                }
            }
            RootedTree::from_parents(&parents)
        }
        Family::ThreeTwo => {
            let seq = random_three_two(size, &mut rng);
            let counts: Vec<usize> = seq.iter().map(|&x| x as usize).collect();
            RootedTree::from_level_counts(&counts)
        }
    }
}

/// A uniformly shuffled sequence of `k` 2s and `k` 3s.
pub fn random_three_two<R: Rng>(k: usize, rng: &mut R) -> Vec<u8> {
    let mut seq: Vec<u8> = std::iter::repeat_n(2, k).chain(std::iter::repeat_n(3, k)).collect();
    seq.shuffle(rng);
    seq
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordered_codes::floor_log2;
    use proptest::prelude::*;

    fn path(n: usize) -> RootedTree {
        let parents: Vec<NodeId> = (1..n).collect();
        RootedTree::from_parents(&parents).unwrap()
    }

    #[test]
    fn parse_examples() {
        let star = RootedTree::parse("3 1 1").unwrap();
        assert_eq!(star.n(), 3);
        assert_eq!(star.children(1), &[2, 3]);
        let single = RootedTree::parse("1").unwrap();
        assert_eq!(single.n(), 1);
        assert!(single.is_leaf(ROOT));
        assert_eq!(
            RootedTree::parse("3 1 5"),
            Err(TreeError::ParentOutOfRange { node: 3, parent: 5, n: 3 })
        );
    }

    #[test]
    fn parse_errors() {
        assert_eq!(RootedTree::parse(""), Err(TreeError::Empty));
        assert_eq!(RootedTree::parse("0"), Err(TreeError::Empty));
        assert!(matches!(RootedTree::parse("3 1 x"), Err(TreeError::Malformed(_))));
        assert!(matches!(RootedTree::parse("3 1"), Err(TreeError::WrongCount { .. })));
        assert!(matches!(RootedTree::parse("3 1 1 1"), Err(TreeError::WrongCount { .. })));
        // 2 -> 3 -> 2 never reaches the root
        assert!(matches!(
            RootedTree::parse("3 3 2"),
            Err(TreeError::NotConnected { reached: 1, n: 3 })
        ));
        assert!(matches!(RootedTree::parse("2 2"), Err(TreeError::NotConnected { .. })));
    }

    #[test]
    fn children_sorted_and_text_round_trip() {
        let t = RootedTree::parse("6 1 1 2 1 2").unwrap();
        assert_eq!(t.children(1), &[2, 3, 5]);
        assert_eq!(t.children(2), &[4, 6]);
        assert_eq!(RootedTree::parse(&t.to_text()).unwrap(), t);
        assert_eq!(RootedTree::parse(&path(1).to_text()).unwrap(), path(1));
    }

    #[test]
    fn decompose_path() {
        let t = path(4);
        let hl = HeavyLight::decompose(&t);
        assert_eq!(hl.heavy_path(ROOT).collect::<Vec<_>>(), vec![1, 2, 3, 4]);
        assert!(t.nodes().all(|v| hl.ldepth(v) == 0));
        assert_eq!(hl.lsize(2), 1);
    }

    #[test]
    fn decompose_star_tie_break() {
        let t = RootedTree::parse("5 1 1 1 1").unwrap();
        let hl = HeavyLight::decompose(&t);
        assert_eq!(hl.heavy_child(ROOT), Some(2));
        assert_eq!(hl.lsize(ROOT), 4);
        assert_eq!(hl.size(ROOT), 5);
        assert!(hl.is_light(3) && !hl.is_light(2));
    }

    #[test]
    fn decompose_complete_binary() {
        let t = RootedTree::from_level_counts(&[2, 2]).unwrap();
        assert_eq!(t.n(), 7);
        let hl = HeavyLight::decompose(&t);
        assert_eq!(hl.max_ldepth(), 2);
        assert!(hl.max_ldepth() <= floor_log2(7));
    }

    #[test]
    fn nca_examples() {
        let p = path(3);
        assert_eq!(p.nca_oracle(3, 2), Ok(2));
        let star = RootedTree::parse("3 1 1").unwrap();
        assert_eq!(star.nca_oracle(2, 3), Ok(1));
        for v in star.nodes() {
            assert_eq!(star.nca_oracle(v, v), Ok(v));
            assert_eq!(star.nca_oracle(ROOT, v), Ok(ROOT));
        }
        assert!(star.nca_oracle(0, 1).is_err());
        assert!(star.nca_oracle(1, 4).is_err());
    }

    #[test]
    fn generator_examples() {
        let t = RootedTree::from_level_counts(&[2, 3]).unwrap();
        assert_eq!(t.n(), 9);
        assert_eq!(t.nodes().filter(|&v| t.is_leaf(v)).count(), 6);

        let cat = generate(Family::Caterpillar, 2, 7).unwrap();
        assert_eq!(cat.n(), 2);
        assert_eq!(cat.parent(2), Some(1));

        for family in [Family::Random, Family::Binary, Family::Caterpillar, Family::ThreeTwo] {
            let size = if family == Family::ThreeTwo { 3 } else { 500 };
            assert_eq!(generate(family, size, 99).unwrap(), generate(family, size, 99).unwrap());
        }
        assert_eq!(generate(Family::Random, 0, 1), Err(TreeError::InvalidSize(0)));
        assert!("octopus".parse::<Family>().is_err());
    }

    #[test]
    fn generated_families_have_their_shape() {
        for seed in 0..20 {
            assert!(generate(Family::Binary, 300, seed).unwrap().is_binary());
            assert!(generate(Family::Caterpillar, 300, seed).unwrap().is_caterpillar());
            let tt = generate(Family::ThreeTwo, 2, seed).unwrap();
            let leaves = tt.nodes().filter(|&v| tt.is_leaf(v)).count();
            assert_eq!(leaves, 36);
            assert!(tt.nodes().filter(|&v| tt.is_leaf(v)).all(|v| tt.depth(v) == 4));
        }
        assert!(!RootedTree::parse("5 1 1 2 3").unwrap().is_caterpillar());
    }

    fn check_annotation(t: &RootedTree) -> Result<(), TestCaseError> {
        let hl = HeavyLight::decompose(t);
        let n = t.n();
        prop_assert_eq!(hl.size(ROOT), n as u64);
        prop_assert!(hl.is_light(ROOT));
        let mut light = 0;
        let mut paths = 0;
        for v in t.nodes() {
            let kids = t.children(v);
            prop_assert_eq!(hl.size(v), 1 + kids.iter().map(|&c| hl.size(c)).sum::<u64>());
            match hl.heavy_child(v) {
                None => {
                    prop_assert!(kids.is_empty());
                    prop_assert_eq!(hl.lsize(v), 1);
                }
                Some(h) => {
                    prop_assert!(kids.iter().all(|&c| hl.size(c) <= hl.size(h)));
                    prop_assert_eq!(hl.lsize(v), hl.size(v) - hl.size(h));
                }
            }
            prop_assert!(hl.ldepth(v) <= floor_log2(n as u64));
            // apex = nearest light ancestor (inclusive)
            let mut a = v;
            while !hl.is_light(a) {
                a = t.parent(a).unwrap();
            }
            prop_assert_eq!(hl.apex(v), a);
            if hl.is_light(v) {
                light += 1;
                paths += 1;
                for w in hl.heavy_path(v).skip(1) {
                    prop_assert!(!hl.is_light(w));
                    prop_assert_eq!(hl.apex(w), v);
                }
            }
        }
        prop_assert_eq!(light, paths);
        Ok(())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn annotation_invariants(n in 1usize..=2000, seed: u64, fam in 0usize..3) {
            let family = [Family::Random, Family::Binary, Family::Caterpillar][fam];
            check_annotation(&generate(family, n, seed).unwrap())?;
        }

        #[test]
        fn nca_oracle_laws(n in 1usize..=300, seed: u64, picks in prop::collection::vec((any::<u32>(), any::<u32>()), 50)) {
            let t = generate(Family::Random, n, seed).unwrap();
            for (a, b) in picks {
                let u = a as usize % n + 1;
                let v = b as usize % n + 1;
                let w = t.nca_oracle(u, v).unwrap();
                prop_assert_eq!(w, t.nca_oracle(v, u).unwrap());
                prop_assert_eq!(t.nca_oracle(u, w).unwrap(), w);
                // w is an ancestor of both
                prop_assert_eq!(t.nca_oracle(w, v).unwrap(), w);
            }
        }
    }
}
