//! Multi-layer similarity graph: one complete weighted layer per hop, linked node-wise
//! by up/down transition weights.

use rayon::prelude::*;

use crate::distance::LayerDistances;
use crate::scalar::Scalar;

/// A node's view of one layer.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeLayer<S> {
    position: usize,
    /// `dis^k(u, v)` for every member `v` of the layer, aligned with
    /// [`SimilarityLayer::members`]; the node's own slot holds zero.
    pub distances: Vec<S>,
    /// Number of this node's edges whose weight exceeds the layer mean.
    pub gamma: usize,
    /// `ln(gamma + e)`, or `None` when there is no layer above containing this node.
    pub up: Option<S>,
    /// `1` on every layer but the bottom one.
    pub down: Option<S>,
}

impl<S: Scalar> NodeLayer<S> {
    /// Intra-layer weights `exp(-dis)` aligned with the layer members; zero at the node itself.
    pub fn weights(&self) -> impl Iterator<Item = S> + '_ {
        self.distances
            .iter()
            .enumerate()
            .map(move |(q, &d)| if q == self.position { S::zero() } else { (-d).exp() })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityLayer<S> {
    pub hop: usize,
    /// Nodes present in this layer, ascending.
    pub members: Vec<usize>,
    position: Vec<Option<usize>>,
    pub mean_weight: S,
    nodes: Vec<NodeLayer<S>>,
}

impl<S: Scalar> SimilarityLayer<S> {
    pub fn contains(&self, v: usize) -> bool {
        self.position.get(v).is_some_and(Option::is_some)
    }

    pub fn position(&self, v: usize) -> Option<usize> {
        self.position.get(v).copied().flatten()
    }

    pub fn node(&self, v: usize) -> Option<&NodeLayer<S>> {
        self.position(v).map(|p| &self.nodes[p])
    }

    pub fn edge_count(&self) -> usize {
        let m = self.members.len();
        m * m.saturating_sub(1) / 2
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultilayerGraph<S> {
    node_count: usize,
    layers: Vec<SimilarityLayer<S>>,
}

impl<S: Scalar> MultilayerGraph<S> {
    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[SimilarityLayer<S>] {
        &self.layers
    }

    pub fn layer(&self, k: usize) -> &SimilarityLayer<S> {
        &self.layers[k]
    }

    /// Intra-layer weight `w^k(u, v)`; `None` if either node is absent from layer `k`.
    pub fn weight(&self, k: usize, u: usize, v: usize) -> Option<S> {
        let layer = self.layers.get(k)?;
        let pv = layer.position(v)?;
        let node = layer.node(u)?;
        Some(if layer.position(u) == Some(pv) { S::zero() } else { (-node.distances[pv]).exp() })
    }

    /// CSV of per-layer weight histograms: `layer,bin_lo,bin_hi,count` over `bins`
    /// equal-width bins of `(0, 1]`.
    pub fn weight_histogram_csv(&self, bins: usize) -> String {
        let mut out = String::from("layer,bin_lo,bin_hi,count\n");
        for layer in &self.layers {
            let mut counts = vec![0usize; bins];
            for (p, node) in layer.nodes.iter().enumerate() {
                for w in node.weights().skip(p + 1) {
                    let b = ((w.as_f64() * bins as f64).ceil() as usize).clamp(1, bins) - 1;
                    counts[b] += 1;
                }
            }
            for (b, c) in counts.iter().enumerate() {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    layer.hop,
                    b as f64 / bins as f64,
                    (b + 1) as f64 / bins as f64,
                    c
                ));
            }
        }
        out
    }
}

/// Builds the multi-layer graph from cumulative distances. Layers without any edge
/// (fewer than two valid nodes) are dropped together with every layer above them.
pub fn build_multilayer<S: Scalar>(ld: &LayerDistances<S>) -> MultilayerGraph<S> {
    let n = ld.node_count();
    let mut layers: Vec<SimilarityLayer<S>> = Vec::new();
    for k in 0..ld.layer_count() {
        let members = ld.valid_nodes(k);
        if members.len() < 2 {
            log::info!("layer {k} has no edges; dropping it and every layer above");
            break;
        }
        let mut position = vec![None; n];
        for (p, &v) in members.iter().enumerate() {
            position[v] = Some(p);
        }
        let distances: Vec<Vec<S>> =
            members.par_iter().map(|&u| members.iter().map(|&v| ld.get(k, u, v).unwrap()).collect()).collect();
        let edge_total: S = distances
            .iter()
            .enumerate()
            .map(|(p, row)| row[p + 1..].iter().map(|&d| (-d).exp()).sum::<S>())
            .sum();
        let m = members.len();
        let mean_weight = edge_total / S::from_usize_lossy(m * (m - 1) / 2);
        let nodes = distances
            .into_iter()
            .enumerate()
            .map(|(position, distances)| {
                let mut node = NodeLayer { position, distances, gamma: 0, up: None, down: (k > 0).then(S::one) };
                node.gamma = node.weights().enumerate().filter(|&(q, w)| q != position && w > mean_weight).count();
                node
            })
            .collect();
        layers.push(SimilarityLayer { hop: k, members, position, mean_weight, nodes });
    }
    let e = S::lit(std::f64::consts::E);
    for k in 0..layers.len().saturating_sub(1) {
        let (lower, upper) = layers.split_at_mut(k + 1);
        let (lower, upper) = (&mut lower[k], &upper[0]);
        for (p, &v) in lower.members.iter().enumerate() {
            if upper.contains(v) {
                let node = &mut lower.nodes[p];
                node.up = Some((S::from_usize_lossy(node.gamma) + e).ln());
            }
        }
    }
    MultilayerGraph { node_count: n, layers }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::{cumulative_distances, DistanceConfig};
    use crate::hypergraph::Hypergraph;
    use approx::assert_relative_eq;

    fn graph() -> (Hypergraph, MultilayerGraph<f64>) {
        let g = Hypergraph::parse("a b c d\nb c\nc d e\ne f\nf g h\na h\ng i\n", false).unwrap();
        let ld = cumulative_distances::<f64>(&g, &DistanceConfig::default()).unwrap();
        let mg = build_multilayer(&ld);
        (g, mg)
    }

    #[test]
    fn weights_follow_distances() {
        let g = Hypergraph::parse("a x\na y\nb p\nb q\nb r\n", false).unwrap();
        let ld = cumulative_distances::<f64>(&g, &DistanceConfig { k_max: 0, ..Default::default() }).unwrap();
        let mg = build_multilayer(&ld);
        let a = g.labels().id("a").unwrap();
        let b = g.labels().id("b").unwrap();
        let x = g.labels().id("x").unwrap();
        let p = g.labels().id("p").unwrap();
        // degree-1 leaves share a CHD
        assert_eq!(mg.weight(0, x, p), Some(1.0));
        assert_relative_eq!(mg.weight(0, a, b).unwrap(), 0.580_374_764_393_980_7, max_relative = 1e-12);
    }

    #[test]
    fn transition_weight_invariants() {
        let (_, mg) = graph();
        let top = mg.layer_count() - 1;
        for (k, layer) in mg.layers().iter().enumerate() {
            for &v in &layer.members {
                let node = layer.node(v).unwrap();
                assert!(node.gamma <= layer.members.len() - 1);
                assert_eq!(node.down, if k == 0 { None } else { Some(1.0) });
                if k == top {
                    assert!(node.up.is_none());
                }
                if let Some(up) = node.up {
                    assert!(up >= 1.0);
                    assert_relative_eq!(up, (node.gamma as f64 + std::f64::consts::E).ln());
                }
                for w in node.weights() {
                    assert!((0.0..=1.0).contains(&w));
                }
            }
        }
    }

    #[test]
    fn uniform_layer_has_zero_gamma() {
        // every node structurally identical: all weights 1, none exceed the mean
        let g = Hypergraph::parse("a b c\n", false).unwrap();
        let ld = cumulative_distances::<f64>(&g, &DistanceConfig { k_max: 0, ..Default::default() }).unwrap();
        let mg = build_multilayer(&ld);
        assert_eq!(mg.layer_count(), 1);
        for v in 0..3 {
            assert_eq!(mg.layer(0).node(v).unwrap().gamma, 0);
        }
    }

    #[test]
    fn empty_layers_are_dropped() {
        let g = Hypergraph::parse("a b c\n", false).unwrap();
        let ld = cumulative_distances::<f64>(&g, &DistanceConfig::default()).unwrap();
        let mg = build_multilayer(&ld);
        // hop 1 exists (everyone is adjacent), hop 2 has no members
        assert_eq!(mg.layer_count(), 2);
        assert!(mg.layer(0).node(0).unwrap().up.is_some());
    }

    #[test]
    fn histogram_counts_every_edge() {
        let (_, mg) = graph();
        let csv = mg.weight_histogram_csv(10);
        let total: usize = csv.lines().skip(1).map(|l| l.rsplit(',').next().unwrap().parse::<usize>().unwrap()).sum();
        assert_eq!(total, mg.layers().iter().map(|l| l.edge_count()).sum::<usize>());
    }
}
