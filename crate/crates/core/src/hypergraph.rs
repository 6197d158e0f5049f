//! Hypergraph data model, neighborhood queries and the hyperedge-list text format.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Bidirectional mapping between external string labels and dense node ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodeLabelMap {
    labels: Vec<String>,
    ids: HashMap<String, usize>,
}

impl NodeLabelMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the id for `label`, assigning the next dense id on first sight.
    pub fn intern(&mut self, label: &str) -> usize {
        if let Some(&id) = self.ids.get(label) {
            return id;
        }
        let id = self.labels.len();
        self.labels.push(label.to_string());
        self.ids.insert(label.to_string(), id);
        id
    }

    pub fn id(&self, label: &str) -> Option<usize> {
        self.ids.get(label).copied()
    }

    pub fn label(&self, id: usize) -> Option<&str> {
        self.labels.get(id).map(String::as_str)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

impl<S: AsRef<str>> FromIterator<S> for NodeLabelMap {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        let mut map = NodeLabelMap::new();
        for label in iter {
            map.intern(label.as_ref());
        }
        map
    }
}

/// Immutable hypergraph over dense node ids `0..n`.
///
/// Hyperedges are stored as sorted id lists of length at least two; `node_edges`
/// is the transpose of the edge list (the incidence matrix read by rows).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    labels: NodeLabelMap,
    edges: Vec<Vec<usize>>,
    node_edges: Vec<Vec<usize>>,
}

/// Undirected simple graph produced by clique expansion; adjacency lists are sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    adjacency: Vec<Vec<usize>>,
}

impl SimpleGraph {
    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// All edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, adj)| adj.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// BFS distances from `source`; `None` for unreachable nodes.
    pub fn bfs_distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.node_count()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &w in &self.adjacency[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}

impl Hypergraph {
    /// Builds a hypergraph from labelled hyperedges. Repeated labels within one edge
    /// are merged; edges with fewer than two distinct members are rejected.
    pub fn from_labeled_edges<E, S>(edges: E, dedupe: bool) -> Result<Self>
    where
        E: IntoIterator,
        E::Item: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut labels = NodeLabelMap::new();
        let mut ids = Vec::new();
        for (i, edge) in edges.into_iter().enumerate() {
            let members: Vec<usize> = edge.into_iter().map(|l| labels.intern(l.as_ref())).collect();
            let members = canonical_edge(members);
            if members.len() < 2 {
                return Err(Error::Validation(format!(
                    "hyperedge {i} has {} distinct node(s); at least 2 required",
                    members.len()
                )));
            }
            ids.push(members);
        }
        Self::assemble(labels, ids, dedupe)
    }

    /// Builds a hypergraph over `n` unlabeled nodes (labels are the decimal ids).
    pub fn from_id_edges(n: usize, edges: Vec<Vec<usize>>, dedupe: bool) -> Result<Self> {
        let labels: NodeLabelMap = (0..n).map(|i| i.to_string()).collect();
        let mut canon = Vec::with_capacity(edges.len());
        for (i, e) in edges.into_iter().enumerate() {
            if let Some(&bad) = e.iter().find(|&&v| v >= n) {
                return Err(Error::NodeOutOfRange { id: bad, len: n });
            }
            let e = canonical_edge(e);
            if e.len() < 2 {
                return Err(Error::Validation(format!("hyperedge {i} has fewer than 2 distinct nodes")));
            }
            canon.push(e);
        }
        let g = Self::assemble(labels, canon, dedupe)?;
        if let Some(v) = (0..n).find(|&v| g.node_edges[v].is_empty()) {
            return Err(Error::Validation(format!("node {v} is not in any hyperedge")));
        }
        Ok(g)
    }

    fn assemble(labels: NodeLabelMap, edges: Vec<Vec<usize>>, dedupe: bool) -> Result<Self> {
        let edges = if dedupe {
            let mut seen = HashSet::new();
            edges.into_iter().filter(|e| seen.insert(e.clone())).collect()
        } else {
            edges
        };
        let mut node_edges = vec![Vec::new(); labels.len()];
        for (j, e) in edges.iter().enumerate() {
            for &v in e {
                node_edges[v].push(j);
            }
        }
        Ok(Hypergraph { labels, edges, node_edges })
    }

    /// Parses the hyperedge-list text format: one hyperedge per line, whitespace-separated
    /// labels, `#` comment lines and blank lines ignored.
    pub fn parse(text: &str, dedupe: bool) -> Result<Self> {
        let mut edges = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let members: Vec<&str> = line.split_whitespace().collect();
            let distinct: HashSet<&str> = members.iter().copied().collect();
            if distinct.len() < 2 {
                return Err(Error::Parse {
                    line: lineno + 1,
                    message: format!("hyperedge needs at least 2 distinct nodes, found {}", distinct.len()),
                });
            }
            edges.push(members);
        }
        Self::from_labeled_edges(edges, dedupe)
    }

    pub fn load(path: impl AsRef<Path>, dedupe: bool) -> Result<Self> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        let text = String::from_utf8(bytes)
            .map_err(|e| Error::Format(format!("{} is not valid UTF-8: {e}", path.display())))?;
        Self::parse(&text, dedupe)
    }

    /// Serializes in the hyperedge-list format, members in id order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.edges {
            let line: Vec<&str> = e.iter().map(|&v| self.labels.label(v).unwrap()).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &NodeLabelMap {
        &self.labels
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge(&self, j: usize) -> &[usize] {
        &self.edges[j]
    }

    /// Ids of the hyperedges incident to `v`.
    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.node_edges[v]
    }

    fn check_node(&self, v: usize) -> Result<()> {
        if v < self.node_count() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange { id: v, len: self.node_count() })
        }
    }

    /// Number of hyperedges containing `v`.
    pub fn node_degree(&self, v: usize) -> Result<usize> {
        self.check_node(v)?;
        Ok(self.node_edges[v].len())
    }

    pub fn max_degree(&self) -> usize {
        self.node_edges.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn max_edge_size(&self) -> usize {
        self.edges.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn clique_expansion(&self) -> SimpleGraph {
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); self.node_count()];
        for e in &self.edges {
            for &u in e {
                adjacency[u].extend(e.iter().copied().filter(|&w| w != u));
            }
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
            adj.dedup();
        }
        SimpleGraph { adjacency }
    }

    /// Nodes at shortest-path distance exactly `k` from `v` under co-membership adjacency.
    pub fn k_hop_neighbors(&self, v: usize, k: usize) -> Result<Vec<usize>> {
        self.check_node(v)?;
        if k == 0 {
            return Err(Error::InvalidParameter("k_hop_neighbors requires k >= 1".into()));
        }
        let shells = hop_shells(&self.clique_expansion(), v, k);
        Ok(shells.into_iter().nth(k).unwrap_or_default())
    }

    /// Hyperedge-list text of the clique expansion: one `u v` pair per line, `u < v` by id,
    /// written with node labels.
    pub fn clique_expansion_text(&self) -> String {
        let mut out = String::new();
        for (u, v) in self.clique_expansion().edges() {
            let _ = writeln!(out, "{} {}", self.labels.label(u).unwrap(), self.labels.label(v).unwrap());
        }
        out
    }

    /// Restricts to the connected component with the most nodes (ties: lowest first id).
    /// Node ids are reassigned in first-seen order of the surviving edges.
    pub fn largest_component(&self) -> Hypergraph {
        let expansion = self.clique_expansion();
        let mut component = vec![usize::MAX; self.node_count()];
        let mut sizes = Vec::new();
        for s in 0..self.node_count() {
            if component[s] != usize::MAX {
                continue;
            }
            let c = sizes.len();
            let reach: Vec<usize> = expansion
                .bfs_distances(s)
                .iter()
                .enumerate()
                .filter_map(|(v, d)| d.map(|_| v))
                .collect();
            for &v in &reach {
                component[v] = c;
            }
            sizes.push(reach.len());
        }
        let Some(best) = (0..sizes.len()).max_by_key(|&c| (sizes[c], std::cmp::Reverse(c))) else {
            return self.clone();
        };
        let kept = self
            .edges
            .iter()
            .filter(|e| component[e[0]] == best)
            .map(|e| e.iter().map(|&v| self.labels.label(v).unwrap()).collect::<Vec<_>>());
        Hypergraph::from_labeled_edges(kept, false).expect("subgraph of a valid hypergraph is valid")
    }

    /// Same hypergraph with nodes renumbered: node `v` becomes `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Hypergraph> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidParameter("relabeling must be a permutation of node ids".into()));
        }
        let mut labels = vec![String::new(); n];
        for v in 0..n {
            labels[perm[v]] = self.labels.label(v).unwrap().to_string();
        }
        let labels: NodeLabelMap = labels.into_iter().collect();
        let edges = self.edges.iter().map(|e| canonical_edge(e.iter().map(|&v| perm[v]).collect())).collect();
        Self::assemble(labels, edges, false)
    }
}

fn canonical_edge(mut members: Vec<usize>) -> Vec<usize> {
    members.sort_unstable();
    members.dedup();
    members
}

/// BFS shells around `v`: `shells[d]` holds the nodes at distance exactly `d`, for
/// `d = 0..=max_hop`, truncated after the last non-empty shell.
pub fn hop_shells(expansion: &SimpleGraph, v: usize, max_hop: usize) -> Vec<Vec<usize>> {
    let mut shells = vec![vec![v]];
    let mut visited = vec![false; expansion.node_count()];
    visited[v] = true;
    while shells.len() <= max_hop {
        let mut next = Vec::new();
        for &u in shells.last().unwrap() {
            for &w in expansion.neighbors(u) {
                if !visited[w] {
                    visited[w] = true;
                    next.push(w);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort_unstable();
        shells.push(next);
    }
    shells
}
