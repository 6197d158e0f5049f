//! Biased random walks over the multi-layer similarity graph.

use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::Distribution;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hypergraph::NodeLabelMap;
use crate::multilayer::MultilayerGraph;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkConfig {
    pub walks_per_node: usize,
    /// Maximum number of tokens per walk; layer changes do not emit tokens.
    pub walk_length: usize,
    /// Probability `q` of moving inside the current layer at each step.
    pub stay_probability: f64,
    pub seed: u64,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig { walks_per_node: 100, walk_length: 80, stay_probability: 0.3, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkMeta {
    pub start: usize,
    pub walk_index: usize,
    /// Seed of this walk's private RNG stream.
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkCorpus {
    pub walks: Vec<Vec<u32>>,
    pub meta: Vec<WalkMeta>,
}

impl WalkCorpus {
    pub fn token_count(&self) -> usize {
        self.walks.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.token_count() == 0
    }

    /// One walk per line, space-separated node labels.
    pub fn to_text(&self, labels: &NodeLabelMap) -> String {
        let mut out = String::new();
        for walk in &self.walks {
            let mut first = true;
            for &t in walk {
                if !first {
                    out.push(' ');
                }
                first = false;
                out.push_str(labels.label(t as usize).unwrap_or("?"));
            }
            out.push('\n');
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>, labels: &NodeLabelMap) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text(labels)).map_err(|e| Error::io(path, e))
    }

    /// Parses the text format back into node ids (metadata is not stored in the file).
    pub fn parse(text: &str, labels: &NodeLabelMap) -> Result<Self> {
        let mut walks = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let walk = line
                .split_whitespace()
                .map(|l| {
                    labels.id(l).map(|v| v as u32).ok_or_else(|| Error::Parse {
                        line: i + 1,
                        message: format!("unknown node label '{l}'"),
                    })
                })
                .collect::<Result<Vec<u32>>>()?;
            walks.push(walk);
        }
        Ok(WalkCorpus { walks, meta: Vec::new() })
    }
}

/// SplitMix64 finalizer; used to derive independent per-walk seeds.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn walk_seed(seed: u64, start: usize, walk_index: usize) -> u64 {
    mix(mix(mix(seed) ^ start as u64) ^ (walk_index as u64).rotate_left(32))
}

/// What a single walker step did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    /// Moved inside the layer to this node (emits a token).
    Move(usize),
    Up,
    Down,
    /// A layer change was drawn but no adjacent layer contains the node.
    Stay,
}

/// Walker position: current layer index and node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkState {
    pub layer: usize,
    pub node: usize,
}

/// Sampling tables for every (layer, node): an alias table over the layer's members
/// with probabilities proportional to `exp(-dis^k(u, v))`.
pub struct Walker<'a, S> {
    graph: &'a MultilayerGraph<S>,
    tables: Vec<Vec<Option<WeightedAliasIndex<f64>>>>,
    stay_probability: f64,
}

impl<'a, S: Scalar> Walker<'a, S> {
    pub fn new(graph: &'a MultilayerGraph<S>, stay_probability: f64) -> Result<Self> {
        if !(stay_probability > 0.0 && stay_probability < 1.0) {
            return Err(Error::InvalidParameter(format!("stay probability must lie in (0, 1), got {stay_probability}")));
        }
        let tables = graph
            .layers()
            .iter()
            .map(|layer| {
                layer
                    .members
                    .par_iter()
                    .map(|&u| {
                        let node = layer.node(u).unwrap();
                        let p = layer.position(u).unwrap();
                        // shift by the closest distance so that far-apart layers do not underflow
                        let nearest = node
                            .distances
                            .iter()
                            .enumerate()
                            .filter(|&(q, _)| q != p)
                            .map(|(_, d)| d.as_f64())
                            .fold(f64::INFINITY, f64::min);
                        let weights: Vec<f64> = node
                            .distances
                            .iter()
                            .enumerate()
                            .map(|(q, d)| if q == p { 0.0 } else { (nearest - d.as_f64()).exp() })
                            .collect();
                        WeightedAliasIndex::new(weights).ok()
                    })
                    .collect()
            })
            .collect();
        Ok(Walker { graph, tables, stay_probability })
    }

    /// Probability of moving up when a layer change is drawn at `state`.
    pub fn up_probability(&self, state: WalkState) -> f64 {
        let node = self.graph.layer(state.layer).node(state.node).expect("walker on a node absent from its layer");
        match (node.up, node.down) {
            (Some(u), Some(d)) => {
                let (u, d) = (u.as_f64(), d.as_f64());
                u / (u + d)
            }
            (Some(_), None) => 1.0,
            _ => 0.0,
        }
    }

    pub fn step<R: Rng>(&self, state: &mut WalkState, rng: &mut R) -> Step {
        let layer = self.graph.layer(state.layer);
        let p = layer.position(state.node).expect("walker on a node absent from its layer");
        if rng.random::<f64>() < self.stay_probability {
            if let Some(table) = &self.tables[state.layer][p] {
                state.node = layer.members[table.sample(rng)];
                return Step::Move(state.node);
            }
            return Step::Stay;
        }
        let node = layer.node(state.node).unwrap();
        match (node.up.is_some(), node.down.is_some()) {
            (false, false) => Step::Stay,
            _ => {
                if rng.random::<f64>() < self.up_probability(*state) {
                    state.layer += 1;
                    Step::Up
                } else {
                    state.layer -= 1;
                    Step::Down
                }
            }
        }
    }

    /// One walk from `start` at layer 0, at most `length` tokens including the start.
    pub fn walk<R: Rng>(&self, start: usize, length: usize, rng: &mut R) -> Vec<u32> {
        let mut tokens = Vec::with_capacity(length);
        if length == 0 {
            return tokens;
        }
        tokens.push(start as u32);
        if self.graph.layer_count() == 0 || !self.graph.layer(0).contains(start) {
            return tokens;
        }
        let mut state = WalkState { layer: 0, node: start };
        let mut idle = 0usize;
        while tokens.len() < length {
            match self.step(&mut state, rng) {
                Step::Move(v) => {
                    tokens.push(v as u32);
                    idle = 0;
                }
                Step::Stay => {
                    idle += 1;
                    // a node with no in-layer candidates and no adjacent layer can never move
                    if idle > 10_000 {
                        break;
                    }
                }
                _ => {}
            }
        }
        tokens
    }
}

/// Generates `walks_per_node` walks from every node. Walk `i` of node `v` draws from its
/// own RNG stream seeded by `(seed, v, i)`; within each round the start nodes are visited
/// in a seed-determined shuffled order. Output is identical for any thread count.
pub fn generate_walks<S: Scalar>(graph: &MultilayerGraph<S>, config: &WalkConfig) -> Result<WalkCorpus> {
    let walker = Walker::new(graph, config.stay_probability)?;
    let n = graph.node_count();
    let mut tasks = Vec::with_capacity(n * config.walks_per_node);
    for round in 0..config.walks_per_node {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(mix(config.seed ^ 0xA5A5_5A5A) ^ round as u64));
        tasks.extend(order.into_iter().map(|v| (v, round)));
    }
    let (walks, meta): (Vec<Vec<u32>>, Vec<WalkMeta>) = tasks
        .into_par_iter()
        .map(|(start, walk_index)| {
            let seed = walk_seed(config.seed, start, walk_index);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (walker.walk(start, config.walk_length, &mut rng), WalkMeta { start, walk_index, seed })
        })
        .unzip();
    Ok(WalkCorpus { walks, meta })
}
