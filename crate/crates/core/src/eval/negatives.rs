use std::collections::{BTreeMap, HashSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::hypergraph::Hypergraph;

/// `C(n, k)` saturating at `u128::MAX`.
fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// For every hyperedge size `s` with `m` existing edges, samples `m` distinct node sets of
/// size `s` that are not hyperedges. Sizes whose candidate space cannot supply `m`
/// non-edges, or where sampling exhausts its retry budget, are skipped with a warning.
/// Returned sets are sorted id lists, grouped by ascending size.
pub fn sample_negative_hyperedges(g: &Hypergraph, seed: u64) -> Vec<Vec<usize>> {
    let n = g.node_count();
    let existing: HashSet<&[usize]> = g.edges().iter().map(Vec::as_slice).collect();
    let mut per_size: BTreeMap<usize, usize> = BTreeMap::new();
    for e in g.edges() {
        *per_size.entry(e.len()).or_default() += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (&size, &count) in &per_size {
        let existing_of_size = existing.iter().filter(|e| e.len() == size).count();
        let available = binomial(n, size).saturating_sub(existing_of_size as u128);
        if available < count as u128 {
            log::warn!("size {size}: only {available} non-edges for {count} positives; skipping");
            continue;
        }
        let mut chosen: HashSet<Vec<usize>> = HashSet::with_capacity(count);
        let mut batch = Vec::with_capacity(count);
        let budget = 100 * count + 1_000;
        let mut attempts = 0;
        while batch.len() < count && attempts < budget {
            attempts += 1;
            let mut candidate = rand::seq::index::sample(&mut rng, n, size).into_vec();
            candidate.sort_unstable();
            if existing.contains(candidate.as_slice()) || chosen.contains(&candidate) {
                continue;
            }
            chosen.insert(candidate.clone());
            batch.push(candidate);
        }
        if batch.len() < count {
            log::warn!("size {size}: negative sampling exhausted after {attempts} attempts; skipping");
            continue;
        }
        out.extend(batch);
    }
    out
}
