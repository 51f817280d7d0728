//! Heavy and light sub-labels and the per-node sub-label lists built from them.
//!
//! Heavy sub-labels are `≺`-ordered codes for the light sizes along each
//! heavy path; light sub-labels are distinct codes for the sizes of each set
//! of light siblings. A node's list `(h0, l1, h1, …, lk, hk)` records the
//! heavy sub-label where its root path leaves each heavy path and the light
//! sub-label of each light node it passes through.

use std::fmt;

use thiserror::Error;

use crate::bits::BitString;
use crate::ordered_codes::WeightSequence;
use crate::tree::{HeavyLight, NodeId, RootedTree, ROOT};

/// Which construction to use for sub-labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Ordered codes everywhere.
    Plain,
    /// Light children of a node with an empty heavy sub-label get nonempty
    /// light sub-labels.
    LightNonempty,
    /// A heavy path whose apex has an empty light sub-label below a parent
    /// with an empty heavy sub-label gets nonempty heavy sub-labels.
    HeavyNonempty,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("sub-label list must have odd length, got {0}")]
pub struct EvenListError(pub usize);

/// The alternating list `(h0, l1, h1, …, lk, hk)`; even positions are heavy
/// sub-labels, odd positions light ones.
///
/// Lists compare lexicographically with `≺` on the items. For lists of one
/// tree this is a depth-first preorder: ancestors first, and light subtrees
/// of a heavy-path node before the rest of the path below it.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubLabelList(Vec<BitString>);

impl SubLabelList {
    pub fn new(items: Vec<BitString>) -> Result<Self, EvenListError> {
        if items.len().is_multiple_of(2) {
            return Err(EvenListError(items.len()));
        }
        Ok(Self(items))
    }

    /// The list of the root of any tree, `(ε)`.
    pub fn root() -> Self {
        Self(vec![BitString::new()])
    }

    pub fn items(&self) -> &[BitString] {
        &self.0
    }

    pub fn into_items(self) -> Vec<BitString> {
        self.0
    }

    /// Number of light sub-labels, i.e. the light depth of the node.
    pub fn light_depth(&self) -> usize {
        self.0.len() / 2
    }

    pub fn heavy(&self, i: usize) -> &BitString {
        &self.0[2 * i]
    }

    pub fn light(&self, i: usize) -> &BitString {
        assert!(i >= 1, "light sub-labels are numbered from 1");
        &self.0[2 * i - 1]
    }

    /// `|h0 ∘ l1 ∘ … ∘ hk|`.
    pub fn concat_len(&self) -> usize {
        self.0.iter().map(BitString::len).sum()
    }

    pub fn is_prefix_of(&self, other: &SubLabelList) -> bool {
        other.0.starts_with(&self.0)
    }

    pub(crate) fn from_vec_unchecked(items: Vec<BitString>) -> Self {
        debug_assert!(items.len() % 2 == 1);
        Self(items)
    }
}

impl fmt::Debug for SubLabelList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("SubLabelList").field(&self.0).finish()
    }
}

impl fmt::Display for SubLabelList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str(")")
    }
}

/// Heavy and light sub-labels of every node of one tree.
#[derive(Debug, Clone)]
pub struct SubLabelAssignment {
    variant: Variant,
    hlabel: Vec<BitString>,
    llabel: Vec<BitString>,
    apex: Vec<NodeId>,
    apex_parent: Vec<NodeId>,
    ldepth: Vec<u32>,
}

impl SubLabelAssignment {
    pub fn assign(tree: &RootedTree, hl: &HeavyLight, variant: Variant) -> Self {
        let n = tree.n();
        let mut hlabel = vec![BitString::new(); n + 1];
        let mut llabel = vec![BitString::new(); n + 1];
        let mut apex = vec![0; n + 1];
        let mut apex_parent = vec![0; n + 1];
        let mut ldepth = vec![0u32; n + 1];
        for v in tree.nodes() {
            apex[v] = hl.apex(v);
            apex_parent[v] = tree.parent(apex[v]).unwrap_or(0);
            ldepth[v] = hl.ldepth(v) as u32;
        }

        let mut path: Vec<NodeId> = Vec::new();
        let mut light_kids: Vec<NodeId> = Vec::new();
        // Parents come before children in BFS order, so the heavy and light
        // sub-labels a path depends on are final by the time we reach it.
        for &top in tree.bfs_order() {
            if !hl.is_light(top) {
                continue;
            }
            path.clear();
            path.extend(hl.heavy_path(top));
            let weights = WeightSequence::new(path.iter().map(|&v| hl.lsize(v)).collect())
                .expect("light sizes are positive");
            let nonempty = variant == Variant::HeavyNonempty
                && top != ROOT
                && llabel[top].is_empty()
                && tree.parent(top).is_some_and(|p| hlabel[p].is_empty());
            let codes = if nonempty {
                weights.nonempty_ordered_codes()
            } else {
                weights.ordered_codes()
            };
            for (&v, code) in path.iter().zip(codes) {
                hlabel[v] = code;
            }

            for &u in &path {
                light_kids.clear();
                light_kids.extend(tree.children(u).iter().copied().filter(|&c| hl.is_light(c)));
                if light_kids.is_empty() {
                    continue;
                }
                light_kids.sort_by(|&a, &b| hl.size(b).cmp(&hl.size(a)).then(a.cmp(&b)));
                let weights =
                    WeightSequence::new(light_kids.iter().map(|&c| hl.size(c)).collect())
                        .expect("subtree sizes are positive");
                let codes = if variant == Variant::LightNonempty && hlabel[u].is_empty() {
                    weights.nonempty_ordered_codes()
                } else {
                    weights.ordered_codes()
                };
                for (&c, code) in light_kids.iter().zip(codes) {
                    llabel[c] = code;
                }
            }
        }

        Self {
            variant,
            hlabel,
            llabel,
            apex,
            apex_parent,
            ldepth,
        }
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn n(&self) -> usize {
        self.hlabel.len() - 1
    }

    pub fn hlabel(&self, v: NodeId) -> &BitString {
        &self.hlabel[v]
    }

    /// The light sub-label of a light non-root node, `None` otherwise.
    pub fn llabel(&self, v: NodeId) -> Option<&BitString> {
        (v != ROOT && self.apex[v] == v).then(|| &self.llabel[v])
    }

    pub fn ldepth(&self, v: NodeId) -> usize {
        self.ldepth[v] as usize
    }

    /// `parent(u_i)` for the light ancestors `u_1, …, u_k` of `v`, in root-to-node order.
    pub fn light_parents(&self, v: NodeId) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.ldepth(v));
        let mut cur = v;
        while self.apex_parent[cur] != 0 {
            cur = self.apex_parent[cur];
            out.push(cur);
        }
        out.reverse();
        out
    }

    /// `l(v) = (h0, l1, h1, …, lk, hk)`.
    pub fn label_list(&self, v: NodeId) -> SubLabelList {
        let mut items = Vec::with_capacity(2 * self.ldepth(v) + 1);
        let mut cur = v;
        loop {
            items.push(self.hlabel[cur].clone());
            let top = self.apex[cur];
            if top == ROOT {
                break;
            }
            items.push(self.llabel[top].clone());
            cur = self.apex_parent[cur];
        }
        items.reverse();
        SubLabelList::from_vec_unchecked(items)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::ordered_codes::{floor_log2, floor_log_ratio};
    use crate::tree::{generate, Family};
    use proptest::prelude::*;
    use std::collections::HashSet;

    /// The tree drawn in the original figure: 23 nodes, root heavy path
    /// root → e → f → g → h. Ids are chosen so the smallest-id tie-break
    /// picks `e` (size 10) over `a` (also size 10) as in the drawing.
    fn figure_tree() -> RootedTree {
        // 1 root; 2 e; 3 a; 4 d
        // e: 5 leaf, 6 f, 7 leaf     f: 8 leaf, 9 g, 10 leaf
        // g: 11 h, 12 leaf, 13 leaf  a: 14 a1, 15 leaf
        // a1: 16 x, 17 b, 18 y       x: 19   b: 20 c, 21   y: 22   d: 23
        let parents = [
            1, 1, 1, // 2..4
            2, 2, 2, // 5..7
            6, 6, 6, // 8..10
            9, 9, 9, // 11..13
            3, 3, // 14..15
            14, 14, 14, // 16..18
            16, 17, 17, 18, // 19..22
            4, // 23
        ];
        RootedTree::from_parents(&parents).unwrap()
    }

    #[test]
    fn figure_root_heavy_path() {
        let t = figure_tree();
        let hl = HeavyLight::decompose(&t);
        assert_eq!(hl.heavy_path(ROOT).collect::<Vec<_>>(), vec![1, 2, 6, 9, 11]);
        let sub = SubLabelAssignment::assign(&t, &hl, Variant::Plain);
        let got: Vec<BitString> = hl.heavy_path(ROOT).map(|v| sub.hlabel(v).clone()).collect();
        // The drawing ends the path with 111; the greedy takes the ≺-least
        // admissible string, 1110 (bound ⌊log 23⌋ = 4).
        assert_eq!(got, vec![bits("-"), bits("10"), bits("1"), bits("11"), bits("1110")]);
        assert!(got.windows(2).all(|w| w[0] < w[1]));
        let drawn = [bits("-"), bits("10"), bits("1"), bits("11"), bits("111")];
        assert!(drawn.windows(2).all(|w| w[0] < w[1]));
        for (v, d) in hl.heavy_path(ROOT).zip(&drawn) {
            assert!(d.len() <= floor_log_ratio(hl.size(ROOT), hl.lsize(v)));
        }
    }

    #[test]
    fn single_node() {
        let t = RootedTree::parse("1").unwrap();
        let hl = HeavyLight::decompose(&t);
        for variant in [Variant::Plain, Variant::LightNonempty, Variant::HeavyNonempty] {
            let sub = SubLabelAssignment::assign(&t, &hl, variant);
            assert!(sub.hlabel(ROOT).is_empty());
            assert_eq!(sub.llabel(ROOT), None);
            assert_eq!(sub.label_list(ROOT), SubLabelList::root());
        }
    }

    #[test]
    fn list_shape() {
        assert_eq!(SubLabelList::new(vec![]), Err(EvenListError(0)));
        let l = SubLabelList::new(vec![bits("1"), bits("0"), bits("-")]).unwrap();
        assert_eq!(l.light_depth(), 1);
        assert_eq!(l.heavy(0), &bits("1"));
        assert_eq!(l.light(1), &bits("0"));
        assert_eq!(l.concat_len(), 2);
        assert_eq!(l.to_string(), "(1, 0, -)");
    }

    #[test]
    fn light_parents_follow_apex_chain() {
        let t = figure_tree();
        let hl = HeavyLight::decompose(&t);
        let sub = SubLabelAssignment::assign(&t, &hl, Variant::Plain);
        // 19 is light under 16, which is light under 14 (a1) on a's path.
        assert_eq!(sub.light_parents(19), vec![1, 14]);
        assert_eq!(sub.light_parents(ROOT), Vec::<NodeId>::new());
        assert_eq!(sub.light_parents(11), Vec::<NodeId>::new());
    }

    /// Checks every node-level inequality for the given variant.
    pub(crate) fn check_assignment(t: &RootedTree, variant: Variant) -> Result<(), TestCaseError> {
        let hl = HeavyLight::decompose(t);
        let sub = SubLabelAssignment::assign(t, &hl, variant);
        let n = t.n();
        let log_n = floor_log2(n as u64);
        let mut seen = HashSet::new();
        for v in t.nodes() {
            let h = sub.hlabel(v);
            if let Some(hc) = hl.heavy_child(v) {
                prop_assert!(h < sub.hlabel(hc), "heavy order at {}", v);
            }
            let parent = t.parent(hl.apex(v));
            let heavy_relaxed = variant == Variant::HeavyNonempty
                && parent.is_some_and(|u| sub.hlabel(u).is_empty())
                && sub.llabel(hl.apex(v)).is_some_and(BitString::is_empty);
            if heavy_relaxed {
                let u = parent.unwrap();
                prop_assert!(!h.is_empty());
                prop_assert!(h.len() <= floor_log_ratio(hl.size(hl.apex(u)), hl.lsize(v)));
            } else {
                prop_assert!(h.len() <= floor_log_ratio(hl.size(hl.apex(v)), hl.lsize(v)));
            }
            if let Some(l) = sub.llabel(v) {
                let u = t.parent(v).unwrap();
                if variant == Variant::LightNonempty && sub.hlabel(u).is_empty() {
                    prop_assert!(!l.is_empty());
                    prop_assert!(l.len() <= floor_log_ratio(hl.size(hl.apex(u)), hl.size(v)));
                } else {
                    prop_assert!(l.len() <= floor_log_ratio(hl.lsize(u), hl.size(v)));
                }
                for &w in t.children(u) {
                    if w != v && hl.is_light(w) {
                        prop_assert!(sub.llabel(w) != Some(l));
                    }
                }
            }
            let list = sub.label_list(v);
            prop_assert_eq!(list.light_depth(), hl.ldepth(v));
            prop_assert!(list.concat_len() <= log_n, "concat {} > {}", list.concat_len(), log_n);
            prop_assert!(seen.insert(list.clone()), "duplicate list at {}", v);
            if variant == Variant::HeavyNonempty && t.is_binary() {
                let items = list.items();
                for i in 0..list.light_depth() {
                    prop_assert!(items[2 * i + 1].is_empty());
                    prop_assert!(!(items[2 * i].is_empty() && items[2 * i + 2].is_empty()));
                }
            }
            if variant == Variant::LightNonempty {
                let items = list.items();
                for i in 0..list.light_depth() {
                    prop_assert!(!(items[2 * i].is_empty() && items[2 * i + 1].is_empty()));
                }
            }
            if let Some(hc) = hl.heavy_child(v) {
                let below = sub.label_list(hc);
                let (a, b) = (list.items(), below.items());
                prop_assert_eq!(a.len(), b.len());
                prop_assert_eq!(&a[..a.len() - 1], &b[..b.len() - 1]);
            }
        }
        Ok(())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn variants_satisfy_their_bounds(n in 1usize..=2000, seed: u64, fam in 0usize..3, var in 0usize..3) {
            let family = [Family::Random, Family::Binary, Family::Caterpillar][fam];
            let variant = [Variant::Plain, Variant::LightNonempty, Variant::HeavyNonempty][var];
            check_assignment(&generate(family, n, seed).unwrap(), variant)?;
        }

        #[test]
        fn binary_heavy_nonempty(n in 1usize..=500, seed: u64) {
            check_assignment(&generate(Family::Binary, n, seed).unwrap(), Variant::HeavyNonempty)?;
        }
    }

    #[test]
    fn three_two_trees_all_variants() {
        for seed in 0..4 {
            let t = generate(Family::ThreeTwo, 3, seed).unwrap();
            for variant in [Variant::Plain, Variant::LightNonempty, Variant::HeavyNonempty] {
                check_assignment(&t, variant).unwrap();
            }
        }
    }
}
