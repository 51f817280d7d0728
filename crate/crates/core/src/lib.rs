//! Nearest-common-ancestor labeling schemes.
//!
//! Every node of a rooted tree gets a short bit-string label such that the
//! label of the NCA of two nodes can be computed from their two labels
//! alone. Labels are built from a heavy-light decomposition: each node's
//! root path is described by a list of heavy and light sub-labels, and the
//! list is packed into one self-delimiting bit string by one of several
//! codecs.

pub mod adversary;
pub mod bits;
pub mod codecs;
pub mod decoder;
pub mod ordered_codes;
pub mod schemes;
pub mod sublabels;
pub mod tree;
