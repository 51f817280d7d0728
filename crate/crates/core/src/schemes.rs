//! End-to-end labeling schemes: tree in, labels out; two labels in, NCA
//! label out.
//!
//! | scheme        | sub-labels      | codec                                   |
//! |---------------|-----------------|-----------------------------------------|
//! | `general3t`   | light-nonempty  | [`encode_alt_3t`]                       |
//! | `generalopt`  | light-nonempty  | [`encode_alt_opt`]                      |
//! | `binary`      | heavy-nonempty  | [`encode_consecutive`] of heavy items   |
//! | `caterpillar` | plain           | `0 ∘ h0` or `1 ∘` [`encode_pair`]`(h0, l1)` |
//! | `payload(k)`  | light-nonempty  | padded `general3t` label + payload table |
//!
//! The decoder never sees the tree. Payload labels carry `Λ = ⌊log₂ n⌋`
//! implicitly through their fixed length.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::bits::{BitString, ParseBitsError};
use crate::codecs::{
    consecutive_len, decode_alt_3t, decode_alt_opt, decode_consecutive, decode_pair,
    encode_alt_3t, encode_alt_opt, encode_consecutive, encode_pair, opt_len, CodecError,
};
use crate::decoder::nca_of_lists;
use crate::ordered_codes::{ceil_log2, floor_log2};
use crate::sublabels::{SubLabelAssignment, SubLabelList, Variant};
use crate::tree::{HeavyLight, NodeId, RootedTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeId {
    General3t,
    GeneralOpt,
    Binary,
    Caterpillar,
    /// Labels that also return a `k`-bit payload of the NCA.
    Payload(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error("unknown scheme {0:?}")]
    UnknownScheme(String),
    #[error("payload scheme needs a width k >= 1")]
    PayloadWidth,
    #[error("binary scheme needs every node to have at most two children")]
    NotBinary,
    #[error("caterpillar scheme needs every node to have at most one non-leaf child")]
    NotCaterpillar,
    #[error("expected {expected} payloads, got {found}")]
    PayloadCount { expected: usize, found: usize },
    #[error("payload of node {node} has {found} bits, expected {expected}")]
    PayloadSize { node: NodeId, expected: usize, found: usize },
    #[error("list {0} cannot be encoded by this scheme")]
    Unencodable(String),
    #[error("label {0} is not a valid label of this scheme")]
    BadLabel(String),
    #[error("labels have different lengths {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error(transparent)]
    Codec(#[from] CodecError),
}

impl SchemeId {
    /// Name without the payload width, as used on the command line.
    pub fn name(self) -> &'static str {
        match self {
            SchemeId::General3t => "general3t",
            SchemeId::GeneralOpt => "generalopt",
            SchemeId::Binary => "binary",
            SchemeId::Caterpillar => "caterpillar",
            SchemeId::Payload(_) => "payload",
        }
    }

    /// Looks up a scheme by name; `k` is only used (and required) for `payload`.
    pub fn from_name(name: &str, k: Option<usize>) -> Result<Self, SchemeError> {
        Ok(match name.to_ascii_lowercase().replace(['_', '-'], "").as_str() {
            "general3t" => SchemeId::General3t,
            "generalopt" => SchemeId::GeneralOpt,
            "binary" => SchemeId::Binary,
            "caterpillar" => SchemeId::Caterpillar,
            "payload" => match k {
                Some(k) if k >= 1 => SchemeId::Payload(k),
                _ => return Err(SchemeError::PayloadWidth),
            },
            _ => return Err(SchemeError::UnknownScheme(name.to_string())),
        })
    }

    pub fn variant(self) -> Variant {
        match self {
            SchemeId::General3t | SchemeId::GeneralOpt | SchemeId::Payload(_) => {
                Variant::LightNonempty
            }
            SchemeId::Binary => Variant::HeavyNonempty,
            SchemeId::Caterpillar => Variant::Plain,
        }
    }

    pub fn payload_width(self) -> Option<usize> {
        match self {
            SchemeId::Payload(k) => Some(k),
            _ => None,
        }
    }

    /// Whether the scheme can label `tree`.
    pub fn check_tree(self, tree: &RootedTree) -> Result<(), SchemeError> {
        match self {
            SchemeId::Binary if !tree.is_binary() => Err(SchemeError::NotBinary),
            SchemeId::Caterpillar if !tree.is_caterpillar() => Err(SchemeError::NotCaterpillar),
            SchemeId::Payload(0) => Err(SchemeError::PayloadWidth),
            _ => Ok(()),
        }
    }

    /// Worst-case label length on trees with `n` nodes. For `payload` this is
    /// the exact length of every label.
    pub fn bound(self, n: usize) -> usize {
        let lambda = floor_log2(n.max(1) as u64);
        match self {
            SchemeId::General3t => 3 * lambda,
            SchemeId::GeneralOpt => opt_len(lambda),
            SchemeId::Binary => consecutive_len(lambda),
            SchemeId::Caterpillar => lambda + ceil_log2(lambda as u64 + 1) + 1,
            SchemeId::Payload(k) => (3 + k) * lambda + k + 1,
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemeId::Payload(k) => write!(f, "payload({k})"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for SchemeId {
    type Err = SchemeError;

    /// Accepts the names of [`SchemeId::name`] and `payload(k)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(rest) = s.strip_prefix("payload(").and_then(|r| r.strip_suffix(')')) {
            let k = rest.parse().map_err(|_| SchemeError::PayloadWidth)?;
            return SchemeId::from_name("payload", Some(k));
        }
        SchemeId::from_name(s, None)
    }
}

// ---------------------------------------------------------------------------
// Lists <-> labels

/// Encodes a sub-label list under a scheme without payloads.
pub fn encode_list(scheme: SchemeId, list: &SubLabelList) -> Result<BitString, SchemeError> {
    let items = list.items();
    match scheme {
        SchemeId::General3t => Ok(encode_alt_3t(items)?),
        SchemeId::GeneralOpt => Ok(encode_alt_opt(items)?),
        SchemeId::Binary => {
            if items.iter().skip(1).step_by(2).any(|l| !l.is_empty()) {
                return Err(SchemeError::Unencodable(list.to_string()));
            }
            let heavy: Vec<BitString> = items.iter().step_by(2).cloned().collect();
            Ok(encode_consecutive(&heavy)?)
        }
        SchemeId::Caterpillar => {
            let mut out = BitString::new();
            match items {
                [h0] => {
                    out.push(false);
                    out.extend_from(h0);
                }
                [h0, l1, h1] if h1.is_empty() => {
                    out.push(true);
                    out.extend_from(&encode_pair(h0, l1));
                }
                _ => return Err(SchemeError::Unencodable(list.to_string())),
            }
            Ok(out)
        }
        SchemeId::Payload(_) => Err(SchemeError::Unencodable(list.to_string())),
    }
}

/// Recovers the sub-label list from a label.
pub fn decode_list(scheme: SchemeId, label: &BitString) -> Result<SubLabelList, SchemeError> {
    let items = match scheme {
        SchemeId::General3t => decode_alt_3t(label)?,
        SchemeId::GeneralOpt => decode_alt_opt(label)?,
        SchemeId::Binary => {
            let heavy = decode_consecutive(label)?;
            let mut items = Vec::with_capacity(2 * heavy.len() - 1);
            for (i, h) in heavy.into_iter().enumerate() {
                if i > 0 {
                    items.push(BitString::new());
                }
                items.push(h);
            }
            items
        }
        SchemeId::Caterpillar => {
            if label.is_empty() {
                return Err(SchemeError::BadLabel(label.to_string()));
            }
            let rest = label.slice(1..label.len());
            if label.get(0) {
                let (h0, l1) = decode_pair(&rest)?;
                vec![h0, l1, BitString::new()]
            } else {
                vec![rest]
            }
        }
        SchemeId::Payload(k) => return Ok(PayloadLabel::parse(k, label)?.list),
    };
    SubLabelList::new(items).map_err(|_| SchemeError::BadLabel(label.to_string()))
}

// ---------------------------------------------------------------------------
// Payload labels

/// A payload label split into its parts.
struct PayloadLabel<'a> {
    label: &'a BitString,
    lambda: usize,
    k: usize,
    list: SubLabelList,
}

impl<'a> PayloadLabel<'a> {
    fn parse(k: usize, label: &'a BitString) -> Result<Self, SchemeError> {
        let bad = || SchemeError::BadLabel(label.to_string());
        let body = label.len().checked_sub(k + 1).ok_or_else(bad)?;
        if body % (3 + k) != 0 {
            return Err(bad());
        }
        let lambda = body / (3 + k);
        let prefix = 3 * lambda + 1;
        let start = (0..prefix).find(|&i| label.get(i)).ok_or_else(bad)? + 1;
        let items = decode_alt_3t(&label.slice(start..prefix))?;
        let list = SubLabelList::new(items).map_err(|_| bad())?;
        if list.light_depth() > lambda {
            return Err(bad());
        }
        Ok(Self { label, lambda, k, list })
    }

    fn slot_start(&self, i: usize) -> usize {
        3 * self.lambda + 1 + i * self.k
    }

    fn slot(&self, i: usize) -> BitString {
        let s = self.slot_start(i);
        self.label.slice(s..s + self.k)
    }
}

fn payload_label(
    lambda: usize,
    k: usize,
    list: &SubLabelList,
    own: &BitString,
    table: impl FnOnce(&mut BitString),
) -> Result<BitString, SchemeError> {
    let code = encode_alt_3t(list.items())?;
    let total = (3 + k) * lambda + k + 1;
    let mut out = BitString::with_capacity(total);
    out.push_zeros(3 * lambda - code.len());
    out.push(true);
    out.extend_from(&code);
    out.extend_from(own);
    table(&mut out);
    out.push_zeros(total - out.len());
    Ok(out)
}

/// For the NCA list `nca` of two payload labels, the input and slot that
/// hold the NCA's own payload.
fn nca_payload_source<'p, 'a>(
    nca: &SubLabelList,
    inputs: [&'p PayloadLabel<'a>; 2],
) -> Option<(&'p PayloadLabel<'a>, usize)> {
    for p in inputs {
        if p.list == *nca {
            return Some((p, 0));
        }
    }
    // Otherwise the NCA is the parent of the next light ancestor of an input
    // that runs through it.
    let n = nca.items();
    for p in inputs {
        let x = p.list.items();
        if x.len() > n.len() && x[..n.len()] == *n {
            return Some((p, n.len().div_ceil(2)));
        }
    }
    None
}

fn parse_pair<'a>(
    k: usize,
    a: &'a BitString,
    b: &'a BitString,
) -> Result<[PayloadLabel<'a>; 2], SchemeError> {
    if a.len() != b.len() {
        return Err(SchemeError::LengthMismatch(a.len(), b.len()));
    }
    Ok([PayloadLabel::parse(k, a)?, PayloadLabel::parse(k, b)?])
}

/// The `k`-bit payload of the NCA of the nodes labeled `a` and `b`.
pub fn payload_of_nca(
    scheme: SchemeId,
    a: &BitString,
    b: &BitString,
) -> Result<BitString, SchemeError> {
    let k = scheme.payload_width().ok_or(SchemeError::PayloadWidth)?;
    let [pa, pb] = parse_pair(k, a, b)?;
    let nca = nca_of_lists(&pa.list, &pb.list);
    let (src, slot) =
        nca_payload_source(&nca, [&pa, &pb]).ok_or_else(|| SchemeError::BadLabel(a.to_string()))?;
    Ok(src.slot(slot))
}

// ---------------------------------------------------------------------------
// Labeling and decoding

/// Labels of every node of one tree under one scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    scheme: SchemeId,
    labels: Vec<BitString>,
}

impl Labeling {
    pub fn new(scheme: SchemeId, labels: Vec<BitString>) -> Self {
        Self { scheme, labels }
    }

    pub fn scheme(&self) -> SchemeId {
        self.scheme
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, v: NodeId) -> &BitString {
        &self.labels[v - 1]
    }

    /// Labels in node order, node 1 first.
    pub fn labels(&self) -> &[BitString] {
        &self.labels
    }

    pub fn max_bits(&self) -> usize {
        self.labels.iter().map(BitString::len).max().unwrap_or(0)
    }

    /// Header line, then `<id> <bits>` per node; empty labels render as `-`.
    pub fn to_text(&self) -> String {
        let mut out = format!("scheme={} n={}", self.scheme.name(), self.n());
        if let Some(k) = self.scheme.payload_width() {
            out.push_str(&format!(" k={k}"));
        }
        out.push('\n');
        for (i, l) in self.labels.iter().enumerate() {
            out.push_str(&format!("{} {}\n", i + 1, l));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, LabelFileError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(LabelFileError::MissingHeader)?;
        let (mut name, mut n, mut k) = (None, None, None);
        for field in header.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| LabelFileError::Header(field.to_string()))?;
            let num = || value.parse::<usize>().map_err(|_| LabelFileError::Header(field.to_string()));
            match key {
                "scheme" => name = Some(value),
                "n" => n = Some(num()?),
                "k" => k = Some(num()?),
                _ => return Err(LabelFileError::Header(field.to_string())),
            }
        }
        let name = name.ok_or_else(|| LabelFileError::Header(header.to_string()))?;
        let n = n.ok_or_else(|| LabelFileError::Header(header.to_string()))?;
        let scheme = SchemeId::from_name(name, k)?;

        let mut labels = Vec::with_capacity(n);
        for (lineno, line) in lines {
            let mut parts = line.split_whitespace();
            let (id, bits) = match (parts.next(), parts.next(), parts.next()) {
                (Some(id), Some(bits), None) => (id, bits),
                _ => return Err(LabelFileError::Line(lineno + 1)),
            };
            let id: usize = id.parse().map_err(|_| LabelFileError::Line(lineno + 1))?;
            if id != labels.len() + 1 {
                return Err(LabelFileError::Line(lineno + 1));
            }
            let bits = bits
                .parse()
                .map_err(|e| LabelFileError::Bits { line: lineno + 1, source: e })?;
            labels.push(bits);
        }
        if labels.len() != n {
            return Err(LabelFileError::Count { expected: n, found: labels.len() });
        }
        Ok(Self { scheme, labels })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelFileError {
    #[error("label file is empty")]
    MissingHeader,
    #[error("bad header field {0:?}")]
    Header(String),
    #[error("malformed label line {0}")]
    Line(usize),
    #[error("bad bit string on line {line}: {source}")]
    Bits { line: usize, source: ParseBitsError },
    #[error("header says {expected} labels, file has {found}")]
    Count { expected: usize, found: usize },
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

/// Labels every node of `tree`. `payloads[v - 1]` is the payload of node
/// `v` and is required exactly for the payload scheme.
pub fn label_tree(
    tree: &RootedTree,
    scheme: SchemeId,
    payloads: Option<&[BitString]>,
) -> Result<Labeling, SchemeError> {
    scheme.check_tree(tree)?;
    let n = tree.n();
    let hl = HeavyLight::decompose(tree);
    let subs = SubLabelAssignment::assign(tree, &hl, scheme.variant());
    let mut labels = Vec::with_capacity(n);

    let SchemeId::Payload(k) = scheme else {
        for v in tree.nodes() {
            labels.push(encode_list(scheme, &subs.label_list(v))?);
        }
        return Ok(Labeling { scheme, labels });
    };

    let payloads = payloads.ok_or(SchemeError::PayloadCount { expected: n, found: 0 })?;
    if payloads.len() != n {
        return Err(SchemeError::PayloadCount { expected: n, found: payloads.len() });
    }
    if let Some(i) = payloads.iter().position(|p| p.len() != k) {
        return Err(SchemeError::PayloadSize { node: i + 1, expected: k, found: payloads[i].len() });
    }
    let lambda = floor_log2(n as u64);
    for v in tree.nodes() {
        let list = subs.label_list(v);
        let label = payload_label(lambda, k, &list, &payloads[v - 1], |out| {
            for p in subs.light_parents(v) {
                out.extend_from(&payloads[p - 1]);
            }
        })?;
        labels.push(label);
    }
    Ok(Labeling { scheme, labels })
}

/// The label of the NCA of the nodes labeled `a` and `b`, computed from the
/// two labels alone.
pub fn nca_from_labels(
    scheme: SchemeId,
    a: &BitString,
    b: &BitString,
) -> Result<BitString, SchemeError> {
    let SchemeId::Payload(k) = scheme else {
        let nca = nca_of_lists(&decode_list(scheme, a)?, &decode_list(scheme, b)?);
        return encode_list(scheme, &nca);
    };
    let [pa, pb] = parse_pair(k, a, b)?;
    let nca = nca_of_lists(&pa.list, &pb.list);
    let (src, slot) =
        nca_payload_source(&nca, [&pa, &pb]).ok_or_else(|| SchemeError::BadLabel(a.to_string()))?;
    if slot == 0 {
        return Ok(src.label.clone());
    }
    // The NCA's light ancestors are the first `slot - 1` of the source's.
    payload_label(pa.lambda, k, &nca, &src.slot(slot), |out| {
        let from = src.slot_start(1);
        out.extend_from_range(src.label, from..from + (slot - 1) * k);
    })
}
