//! Node orbits of a hypergraph under its automorphism group.
//!
//! Works on the incidence graph (nodes and hyperedges as two vertex kinds) with colour
//! refinement plus individualisation and backtracking. Intended as a ground-truth
//! oracle for small graphs, not as a fast canonical labeller.

use std::collections::{BTreeMap, HashSet};

use crate::hypergraph::Hypergraph;

/// Two disjoint copies of the incidence graph.
struct Doubled {
    nodes: usize,
    half: usize,
    adj: Vec<Vec<usize>>,
}

impl Doubled {
    fn new(g: &Hypergraph) -> Self {
        let n = g.node_count();
        let half = n + g.edge_count();
        let mut adj = vec![Vec::new(); 2 * half];
        for copy in 0..2 {
            let off = copy * half;
            for (j, e) in g.edges().iter().enumerate() {
                for &v in e {
                    adj[off + v].push(off + n + j);
                    adj[off + n + j].push(off + v);
                }
            }
        }
        Doubled { nodes: n, half, adj }
    }

    fn initial_colors(&self) -> Vec<usize> {
        (0..2 * self.half).map(|x| usize::from(x % self.half >= self.nodes)).collect()
    }

    /// Refines jointly until the partition is stable. New colours are ranks of
    /// `(old colour, sorted neighbour colours)`, so both copies are treated alike.
    fn refine(&self, colors: &mut Vec<usize>) {
        let mut classes = count_classes(colors);
        loop {
            let keys: Vec<(usize, Vec<usize>)> = (0..colors.len())
                .map(|x| {
                    let mut nb: Vec<usize> = self.adj[x].iter().map(|&y| colors[y]).collect();
                    nb.sort_unstable();
                    (colors[x], nb)
                })
                .collect();
            let ranks: BTreeMap<&(usize, Vec<usize>), usize> = {
                let mut sorted: Vec<&(usize, Vec<usize>)> = keys.iter().collect();
                sorted.sort();
                sorted.dedup();
                sorted.into_iter().enumerate().map(|(i, k)| (k, i)).collect()
            };
            *colors = keys.iter().map(|k| ranks[k]).collect();
            let next = count_classes(colors);
            if next == classes {
                return;
            }
            classes = next;
        }
    }

    fn balanced(&self, colors: &[usize]) -> bool {
        let mut balance: BTreeMap<usize, isize> = BTreeMap::new();
        for (x, &c) in colors.iter().enumerate() {
            *balance.entry(c).or_default() += if x < self.half { 1 } else { -1 };
        }
        balance.values().all(|&b| b == 0)
    }

    /// Searches for an isomorphism between the copies respecting `colors`.
    fn search(&self, mut colors: Vec<usize>, g: &Hypergraph) -> Option<Vec<usize>> {
        self.refine(&mut colors);
        if !self.balanced(&colors) {
            return None;
        }
        let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (x, &c) in colors.iter().enumerate() {
            members.entry(c).or_default().push(x);
        }
        let target = members.iter().filter(|(_, m)| m.len() > 2).min_by_key(|(_, m)| m.len());
        let Some((_, cell)) = target else {
            return self.mapping(&colors, g);
        };
        let x = cell[0];
        let fresh = colors.len() + 1;
        for &y in cell.iter().filter(|&&y| y >= self.half) {
            let mut next = colors.clone();
            next[x] = fresh;
            next[y] = fresh;
            if let Some(found) = self.search(next, g) {
                return Some(found);
            }
        }
        None
    }

    /// Reads off the node map from a discrete balanced colouring and verifies it.
    fn mapping(&self, colors: &[usize], g: &Hypergraph) -> Option<Vec<usize>> {
        let mut partner: BTreeMap<usize, usize> = BTreeMap::new();
        for x in self.half..2 * self.half {
            partner.insert(colors[x], x - self.half);
        }
        let perm: Vec<usize> = (0..self.nodes).map(|v| partner[&colors[v]]).collect();
        is_automorphism(g, &perm).then_some(perm)
    }
}

fn count_classes(colors: &[usize]) -> usize {
    colors.iter().collect::<HashSet<_>>().len()
}

/// True if `perm` (node id → node id) maps the hyperedge set onto itself.
pub fn is_automorphism(g: &Hypergraph, perm: &[usize]) -> bool {
    if perm.len() != g.node_count() {
        return false;
    }
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
            return false;
        }
    }
    let mut original: Vec<Vec<usize>> = g.edges().to_vec();
    let mut mapped: Vec<Vec<usize>> = g
        .edges()
        .iter()
        .map(|e| {
            let mut m: Vec<usize> = e.iter().map(|&v| perm[v]).collect();
            m.sort_unstable();
            m
        })
        .collect();
    original.sort();
    mapped.sort();
    original == mapped
}

/// An automorphism sending `u` to `v`, if one exists.
pub fn find_automorphism(g: &Hypergraph, u: usize, v: usize) -> Option<Vec<usize>> {
    let d = Doubled::new(g);
    let mut colors = d.initial_colors();
    let fresh = 2;
    colors[u] = fresh;
    colors[d.half + v] = fresh;
    d.search(colors, g)
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut x = x;
    while parent[x] != r {
        x = std::mem::replace(&mut parent[x], r);
    }
    r
}

/// Orbit id per node, numbered by first appearance in node-id order.
pub fn node_orbits(g: &Hypergraph) -> Vec<usize> {
    let n = g.node_count();
    let d = Doubled::new(g);
    let mut refined = d.initial_colors();
    d.refine(&mut refined);
    let mut parent: Vec<usize> = (0..n).collect();
    for u in 0..n {
        for v in u + 1..n {
            if refined[u] != refined[v] || find(&mut parent, u) == find(&mut parent, v) {
                continue;
            }
            if let Some(perm) = find_automorphism(g, u, v) {
                for (a, &b) in perm.iter().enumerate() {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    let mut ids: BTreeMap<usize, usize> = BTreeMap::new();
    (0..n)
        .map(|v| {
            let root = find(&mut parent, v);
            let next = ids.len();
            *ids.entry(root).or_insert(next)
        })
        .collect()
}
