use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

/// Train/test index split that keeps each stratum's train share close to `train_frac`.
///
/// Every stratum contributes `floor((1 - train_frac) * len)` test items; the remaining
/// test quota (rounded overall) goes to the strata with the largest fractional
/// remainders, ties broken in random order. Returns `(train, test)`, each ascending.
pub fn stratified_split<R: Rng>(strata: &[usize], train_frac: f64, rng: &mut R) -> (Vec<usize>, Vec<usize>) {
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &s) in strata.iter().enumerate() {
        groups.entry(s).or_default().push(i);
    }
    let test_frac = (1.0 - train_frac).clamp(0.0, 1.0);
    let target_total = (test_frac * strata.len() as f64).round() as usize;
    let mut groups: Vec<(Vec<usize>, usize, f64)> = groups
        .into_values()
        .map(|mut members| {
            members.shuffle(rng);
            let exact = test_frac * members.len() as f64;
            let base = exact.floor() as usize;
            (members, base, exact - base as f64)
        })
        .collect();
    let assigned: usize = groups.iter().map(|g| g.1).sum();
    groups.shuffle(rng);
    groups.sort_by(|a, b| b.2.total_cmp(&a.2));
    let mut extra = target_total.saturating_sub(assigned);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (members, base, _) in groups {
        let mut take = base;
        if extra > 0 && take < members.len() {
            take += 1;
            extra -= 1;
        }
        test.extend_from_slice(&members[..take]);
        train.extend_from_slice(&members[take..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    (train, test)
}
