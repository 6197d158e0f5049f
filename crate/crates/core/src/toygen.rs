//! Small synthetic hypergraphs with known structural-equivalence classes, and a
//! larger co-authorship-style generator.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automorphism::node_orbits;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// Toy topologies. Every variant's fields are size parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ToySpec {
    /// `hubs` hubs, each sharing `arms` hyperedges of `arm_size` nodes with otherwise
    /// distinct leaves. With more than one hub, one extra hyperedge joins all hubs.
    Star { hubs: usize, arms: usize, arm_size: usize },
    /// A ring of `length` hyperedges of `edge_size` nodes, consecutive edges sharing one node.
    Circle { length: usize, edge_size: usize },
    /// Grid vertices of a `rows × cols` board, one size-4 hyperedge per face.
    Mesh { rows: usize, cols: usize },
    /// A ladder of `floors` size-4 faces capped by a size-3 roof.
    Tower { floors: usize },
    /// Two disjoint copies of a small asymmetric star-like motif with `arms` size-3 arms.
    Twin { arms: usize },
}

pub const TOPOLOGIES: [&str; 5] = ["star", "circle", "mesh", "tower", "twin"];

impl ToySpec {
    /// The shipped preset for a topology name.
    pub fn preset(name: &str) -> Result<Self> {
        Ok(match name {
            "star" => ToySpec::Star { hubs: 3, arms: 3, arm_size: 3 },
            "circle" => ToySpec::Circle { length: 8, edge_size: 4 },
            "mesh" => ToySpec::Mesh { rows: 3, cols: 3 },
            "tower" => ToySpec::Tower { floors: 4 },
            "twin" => ToySpec::Twin { arms: 3 },
            other => return Err(Error::InvalidParameter(format!("unknown toy topology '{other}'"))),
        })
    }

    pub fn presets() -> Vec<(&'static str, ToySpec)> {
        TOPOLOGIES.iter().map(|&t| (t, ToySpec::preset(t).unwrap())).collect()
    }

    pub fn name(&self) -> &'static str {
        match self {
            ToySpec::Star { .. } => "star",
            ToySpec::Circle { .. } => "circle",
            ToySpec::Mesh { .. } => "mesh",
            ToySpec::Tower { .. } => "tower",
            ToySpec::Twin { .. } => "twin",
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            ToySpec::Star { hubs, arms, arm_size } => {
                (1..=64).contains(&hubs) && (1..=64).contains(&arms) && (2..=16).contains(&arm_size)
            }
            ToySpec::Circle { length, edge_size } => (3..=256).contains(&length) && (2..=16).contains(&edge_size),
            ToySpec::Mesh { rows, cols } => (1..=32).contains(&rows) && (1..=32).contains(&cols),
            ToySpec::Tower { floors } => (1..=64).contains(&floors),
            ToySpec::Twin { arms } => (1..=16).contains(&arms),
        };
        if ok { Ok(()) } else { Err(Error::InvalidParameter(format!("toy parameters out of range: {self}"))) }
    }

    /// Hyperedges over node ids in construction order.
    fn edges(&self) -> Vec<Vec<usize>> {
        match *self {
            ToySpec::Star { hubs, arms, arm_size } => {
                let mut out = Vec::new();
                if hubs > 1 {
                    out.push((0..hubs).collect());
                }
                let mut next = hubs;
                for hub in 0..hubs {
                    for _ in 0..arms {
                        let mut e = vec![hub];
                        e.extend(next..next + arm_size - 1);
                        next += arm_size - 1;
                        out.push(e);
                    }
                }
                out
            }
            ToySpec::Circle { length, edge_size } => {
                // joint i sits between edge i-1 and edge i; interiors follow the joints
                let interior = edge_size - 2;
                (0..length)
                    .map(|i| {
                        let mut e = vec![i, (i + 1) % length];
                        let base = length + i * interior;
                        e.extend(base..base + interior);
                        e
                    })
                    .collect()
            }
            ToySpec::Mesh { rows, cols } => {
                let id = |r: usize, c: usize| r * (cols + 1) + c;
                let mut out = Vec::new();
                for r in 0..rows {
                    for c in 0..cols {
                        out.push(vec![id(r, c), id(r, c + 1), id(r + 1, c), id(r + 1, c + 1)]);
                    }
                }
                out
            }
            ToySpec::Tower { floors } => {
                let mut out: Vec<Vec<usize>> =
                    (0..floors).map(|f| vec![2 * f, 2 * f + 1, 2 * f + 2, 2 * f + 3]).collect();
                out.push(vec![2 * floors, 2 * floors + 1, 2 * floors + 2]);
                out
            }
            ToySpec::Twin { arms } => {
                // motif: hub in `arms` size-3 arms, one arm extended by a size-2 tail,
                // and one size-4 edge on the hub
                let mut motif: Vec<Vec<usize>> = (0..arms).map(|a| vec![0, 1 + 2 * a, 2 + 2 * a]).collect();
                let next = 1 + 2 * arms;
                motif.push(vec![2, next]);
                motif.push(vec![0, next + 1, next + 2, next + 3]);
                let width = next + 4;
                let mut out = motif.clone();
                out.extend(motif.iter().map(|e| e.iter().map(|v| v + width).collect()));
                out
            }
        }
    }
}

impl fmt::Display for ToySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ToySpec::Star { hubs, arms, arm_size } => write!(f, "star(hubs={hubs}, arms={arms}, arm_size={arm_size})"),
            ToySpec::Circle { length, edge_size } => write!(f, "circle(length={length}, edge_size={edge_size})"),
            ToySpec::Mesh { rows, cols } => write!(f, "mesh(rows={rows}, cols={cols})"),
            ToySpec::Tower { floors } => write!(f, "tower(floors={floors})"),
            ToySpec::Twin { arms } => write!(f, "twin(arms={arms})"),
        }
    }
}

impl FromStr for ToySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ToySpec::preset(s)
    }
}

/// Builds the toy with node ids and edge order shuffled by `seed`. Returns the graph and
/// a colour per node id, computed by the automorphism oracle.
pub fn generate_toy(spec: ToySpec, seed: u64) -> Result<(Hypergraph, Vec<usize>)> {
    spec.validate()?;
    let mut edges = spec.edges();
    let n = edges.iter().flatten().max().map_or(0, |&m| m + 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    for e in &mut edges {
        e.iter_mut().for_each(|v| *v = perm[*v]);
    }
    edges.shuffle(&mut rng);
    let prefix = &spec.name()[..1];
    let labeled: Vec<Vec<String>> =
        edges.iter().map(|e| e.iter().map(|v| format!("{prefix}{v}")).collect()).collect();
    let g = Hypergraph::from_labeled_edges(labeled, false)?;
    let colors = node_orbits(&g);
    Ok((g, colors))
}

/// Colour sidecar text: `label class_id` per node, in node-id order.
pub fn colors_to_text(g: &Hypergraph, colors: &[usize]) -> String {
    g.labels().labels().iter().zip(colors).map(|(l, c)| format!("{l} {c}\n")).collect()
}

pub fn save_colors(path: impl AsRef<Path>, g: &Hypergraph, colors: &[usize]) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, colors_to_text(g, colors)).map_err(|e| Error::io(path, e))
}

/// Parameters of the co-authorship-style generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoauthorConfig {
    pub authors: usize,
    pub papers: usize,
    /// Probability that a co-author slot goes to a newcomer rather than an existing author.
    pub newcomer: f64,
    pub seed: u64,
}

impl Default for CoauthorConfig {
    fn default() -> Self {
        CoauthorConfig { authors: 1000, papers: 900, newcomer: 0.35, seed: 0 }
    }
}

/// Papers as hyperedges over authors. Each paper has a lead drawn by preferential
/// attachment on paper count; the other authors are newcomers or the lead's earlier
/// collaborators, falling back to preferential picks. Sizes are 2 to 5, skewed small.
/// The largest connected component is returned.
pub fn coauthorship(config: &CoauthorConfig) -> Result<Hypergraph> {
    if config.authors < 10 || config.papers < 5 || !(0.0..=1.0).contains(&config.newcomer) {
        return Err(Error::InvalidParameter("coauthorship: need authors >= 10, papers >= 5, newcomer in [0, 1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let sizes = [(2, 0.35), (3, 0.35), (4, 0.2), (5, 0.1)];
    let mut slots: Vec<usize> = Vec::new(); // one entry per authorship, for preferential draws
    let mut coauthors: Vec<Vec<usize>> = Vec::new();
    let mut joined = 0usize;
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let newcomer = |joined: &mut usize, coauthors: &mut Vec<Vec<usize>>| {
        coauthors.push(Vec::new());
        *joined += 1;
        *joined - 1
    };
    for _ in 0..config.papers {
        let mut draw = rng.random::<f64>();
        let size = sizes.iter().find(|&&(_, p)| {
            draw -= p;
            draw < 0.0
        });
        let size = size.map_or(2, |&(s, _)| s);
        let lead = if slots.is_empty() || (joined < config.authors && rng.random::<f64>() < config.newcomer / 2.0) {
            newcomer(&mut joined, &mut coauthors)
        } else {
            slots[rng.random_range(0..slots.len())]
        };
        let mut paper = vec![lead];
        let mut guard = 0;
        while paper.len() < size && guard < 100 {
            guard += 1;
            let roll = rng.random::<f64>();
            let pick = if joined < config.authors && roll < config.newcomer {
                newcomer(&mut joined, &mut coauthors)
            } else if roll < 0.8 && !coauthors[lead].is_empty() {
                coauthors[lead][rng.random_range(0..coauthors[lead].len())]
            } else if !slots.is_empty() {
                slots[rng.random_range(0..slots.len())]
            } else {
                newcomer(&mut joined, &mut coauthors)
            };
            if !paper.contains(&pick) {
                paper.push(pick);
            }
        }
        if paper.len() < 2 {
            continue;
        }
        for &a in &paper {
            slots.push(a);
            for &b in &paper {
                if a != b && !coauthors[a].contains(&b) {
                    coauthors[a].push(b);
                }
            }
        }
        edges.push(paper);
    }
    let labeled: Vec<Vec<String>> = edges.iter().map(|e| e.iter().map(|v| format!("a{v}")).collect()).collect();
    Ok(Hypergraph::from_labeled_edges(labeled, true)?.largest_component())
}
