use std::cmp::Reverse;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::scalar::Scalar;

/// Descending list of the sizes of a node's incident hyperedges.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HyperDegree(Vec<usize>);

impl HyperDegree {
    pub fn of(g: &Hypergraph, v: usize) -> Result<Self> {
        g.node_degree(v)?;
        Ok(Self::from_sizes(g.incident_edges(v).iter().map(|&j| g.edge(j).len()).collect()))
    }

    /// Sorts `sizes` into descending order.
    pub fn from_sizes(mut sizes: Vec<usize>) -> Self {
        sizes.sort_unstable_by_key(|&s| Reverse(s));
        HyperDegree(sizes)
    }

    pub fn sizes(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_size(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn collapse(&self) -> CollapsedHyperDegree {
        let mut entries: Vec<(usize, usize)> = Vec::new();
        for &s in &self.0 {
            match entries.last_mut() {
                Some((size, freq)) if *size == s => *freq += 1,
                _ => entries.push((s, 1)),
            }
        }
        CollapsedHyperDegree(entries)
    }

    /// Elements with their positional bias, relative to this list's own maximum.
    pub fn elements<S: Scalar>(&self) -> Vec<HdElement<S>> {
        let Some(max) = self.max_size() else { return Vec::new() };
        self.0.iter().map(|&size| HdElement { size, bias: bias_against(max, size) }).collect()
    }
}

/// Hyper-degree compressed to `(size, frequency)` pairs with strictly decreasing sizes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CollapsedHyperDegree(Vec<(usize, usize)>);

impl CollapsedHyperDegree {
    pub fn of(g: &Hypergraph, v: usize) -> Result<Self> {
        Ok(HyperDegree::of(g, v)?.collapse())
    }

    /// Validates that sizes strictly decrease and every frequency is positive.
    pub fn from_entries(entries: Vec<(usize, usize)>) -> Result<Self> {
        if entries.iter().any(|&(_, f)| f == 0) {
            return Err(Error::InvalidParameter("CHD frequencies must be >= 1".into()));
        }
        if entries.windows(2).any(|w| w[0].0 <= w[1].0) {
            return Err(Error::InvalidParameter("CHD sizes must strictly decrease".into()));
        }
        Ok(CollapsedHyperDegree(entries))
    }

    pub fn entries(&self) -> &[(usize, usize)] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_size(&self) -> Option<usize> {
        self.0.first().map(|&(s, _)| s)
    }

    pub fn expand(&self) -> HyperDegree {
        HyperDegree(self.0.iter().flat_map(|&(s, f)| std::iter::repeat_n(s, f)).collect())
    }

    pub fn elements<S: Scalar>(&self) -> Vec<ChdElement<S>> {
        let Some(max) = self.max_size() else { return Vec::new() };
        self.0
            .iter()
            .map(|&(size, freq)| ChdElement { size, freq, bias: bias_against(max, size) })
            .collect()
    }
}

/// One hyper-degree entry with its positional bias.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HdElement<S> {
    pub size: usize,
    pub bias: S,
}

/// One collapsed hyper-degree entry with its positional bias (not yet divided by `freq`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChdElement<S> {
    pub size: usize,
    pub freq: usize,
    pub bias: S,
}

/// Bias `1 / (max(sizes) - s + 1)` of size `s` within `sizes`.
pub fn positional_bias<S: Scalar>(sizes: &[usize], s: usize) -> Result<S> {
    if !sizes.contains(&s) {
        return Err(Error::InvalidParameter(format!("size {s} does not occur in the hyper-degree")));
    }
    Ok(bias_against(*sizes.iter().max().unwrap(), s))
}

pub(crate) fn bias_against<S: Scalar>(max: usize, s: usize) -> S {
    debug_assert!(s <= max);
    S::one() / S::from_usize_lossy(max - s + 1)
}
