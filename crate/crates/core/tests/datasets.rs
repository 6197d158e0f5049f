mod common;

use common::clique_edges_brute_force;
use hypers2v::datasets::{lesmis, zoo};
use hypers2v::Hypergraph;

#[test]
fn lesmis_statistics() {
    let g = lesmis();
    assert_eq!(g.node_count(), 77);
    assert_eq!(g.edge_count(), 157);
    assert_eq!(g.max_degree(), 39);
    assert_eq!(g.max_edge_size(), 9);
    assert!(g.clique_expansion().bfs_distances(0).iter().all(Option::is_some));
}

#[test]
fn zoo_statistics() {
    let g = zoo();
    assert_eq!(g.node_count(), 101);
    // one attribute value occurs for a single animal and cannot form a hyperedge
    assert_eq!(g.edge_count(), 42);
    assert_eq!(g.max_degree(), 17);
}

#[test]
fn lesmis_clique_expansion_matches_pairwise_oracle() {
    let g = lesmis();
    let expansion = g.clique_expansion();
    assert_eq!(expansion.edge_count(), clique_edges_brute_force(g.edges(), g.node_count()));
    // frozen from the oracle
    assert_eq!(expansion.edge_count(), 254);
    assert_eq!(g.clique_expansion_text().lines().count(), 254);
}

#[test]
fn bundled_files_load_from_disk() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/lesmis.txt");
    let g = Hypergraph::load(path, false).unwrap();
    assert_eq!(g.to_text(), lesmis().to_text());
}

#[test]
fn k_hop_shells_match_bfs_on_lesmis() {
    let g = lesmis();
    let expansion = g.clique_expansion();
    for v in 0..g.node_count() {
        let dist = expansion.bfs_distances(v);
        for k in 1..=4 {
            let expected: Vec<usize> = (0..g.node_count()).filter(|&w| dist[w] == Some(k)).collect();
            assert_eq!(g.k_hop_neighbors(v, k).unwrap(), expected);
        }
    }
}
