//! Bundled hyperedge lists.

use crate::hypergraph::Hypergraph;

/// Les Misérables scene co-appearance: one hyperedge per scene, deduplicated,
/// largest connected component.
pub const LESMIS: &str = include_str!("../data/lesmis.txt");

/// UCI Zoo: animals grouped by shared attribute values. Loaded without deduplication,
/// since distinct attributes can select the same animals.
pub const ZOO: &str = include_str!("../data/zoo.txt");

pub fn lesmis() -> Hypergraph {
    Hypergraph::parse(LESMIS, true).expect("bundled lesmis data parses")
}

pub fn zoo() -> Hypergraph {
    Hypergraph::parse(ZOO, false).expect("bundled zoo data parses")
}
