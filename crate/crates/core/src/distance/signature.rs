//! Hop-level structural signatures and the composed distances built on DTW.

use std::cmp::Reverse;
use std::collections::BTreeMap;

use crate::distance::degree::{CollapsedHyperDegree, HyperDegree};
use crate::distance::dtw::dtw;
use crate::distance::element::{cmpd, mpd_elements};
use crate::error::Result;
use crate::scalar::Scalar;

/// 0-hop distance between two collapsed hyper-degrees: DTW under CMPD, with each
/// node's biases taken against its own largest edge size.
pub fn d0<S: Scalar>(u: &CollapsedHyperDegree, v: &CollapsedHyperDegree, exponent: u32) -> Result<S> {
    let eu = u.elements::<S>();
    let ev = v.elements::<S>();
    dtw(&eu, &ev, |a, b| cmpd(a, b, exponent))
}

/// Uncollapsed 0-hop distance: DTW under plain MPD over raw hyper-degrees.
pub fn d0_uncollapsed<S: Scalar>(u: &HyperDegree, v: &HyperDegree, exponent: u32) -> Result<S> {
    let eu = u.elements::<S>();
    let ev = v.elements::<S>();
    dtw(&eu, &ev, |a, b| mpd_elements(a, b, exponent))
}

/// Distance between two frequency-weighted CHDs of a neighborhood signature.
pub fn cncmpd<S: Scalar>(
    a: (&CollapsedHyperDegree, usize),
    b: (&CollapsedHyperDegree, usize),
    exponent: u32,
) -> Result<S> {
    Ok(S::from_usize_lossy(a.1.max(b.1)) * d0::<S>(a.0, b.0, exponent)?)
}

/// Collapsed multiset of the CHDs of a node's exact k-hop neighbors.
///
/// Entries are kept in canonical order: CHDs descending-lexicographically by their
/// `(size, freq)` lists. Identical CHDs are merged, so that order is total.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NeighborhoodSignature(Vec<(CollapsedHyperDegree, usize)>);

impl NeighborhoodSignature {
    pub fn from_chds<I: IntoIterator<Item = CollapsedHyperDegree>>(chds: I) -> Self {
        let mut counts: BTreeMap<Reverse<CollapsedHyperDegree>, usize> = BTreeMap::new();
        for chd in chds {
            *counts.entry(Reverse(chd)).or_default() += 1;
        }
        NeighborhoodSignature(counts.into_iter().map(|(Reverse(c), f)| (c, f)).collect())
    }

    pub fn entries(&self) -> &[(CollapsedHyperDegree, usize)] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of neighbors summarized.
    pub fn total(&self) -> usize {
        self.0.iter().map(|(_, f)| f).sum()
    }
}

/// k-hop distance between two neighborhood signatures; `None` when either is empty
/// (the pair is undefined at this hop).
pub fn dk<S: Scalar>(
    u: &NeighborhoodSignature,
    v: &NeighborhoodSignature,
    exponent: u32,
) -> Result<Option<S>> {
    if u.is_empty() || v.is_empty() {
        return Ok(None);
    }
    let (eu, ev) = (u.entries(), v.entries());
    let mut cost = Vec::with_capacity(eu.len() * ev.len());
    for a in eu {
        for b in ev {
            cost.push(cncmpd::<S>((&a.0, a.1), (&b.0, b.1), exponent)?);
        }
    }
    let rows: Vec<usize> = (0..eu.len()).collect();
    let cols: Vec<usize> = (0..ev.len()).collect();
    dtw(&rows, &cols, |&i, &j| cost[i * ev.len() + j]).map(Some)
}
