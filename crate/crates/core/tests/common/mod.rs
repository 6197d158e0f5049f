#![allow(dead_code)]

use rand::Rng;

/// Minimum warping-path cost by enumerating every monotone alignment explicitly.
/// Steps are (1,0), (0,1) and (1,1); each visited cell adds its cost.
pub fn dtw_brute_force(n: usize, m: usize, cost: &dyn Fn(usize, usize) -> f64) -> f64 {
    fn walk(i: usize, j: usize, n: usize, m: usize, acc: f64, cost: &dyn Fn(usize, usize) -> f64, best: &mut f64) {
        let acc = acc + cost(i, j);
        if i + 1 == n && j + 1 == m {
            *best = best.min(acc);
            return;
        }
        if i + 1 < n {
            walk(i + 1, j, n, m, acc, cost, best);
        }
        if j + 1 < m {
            walk(i, j + 1, n, m, acc, cost, best);
        }
        if i + 1 < n && j + 1 < m {
            walk(i + 1, j + 1, n, m, acc, cost, best);
        }
    }
    let mut best = f64::INFINITY;
    walk(0, 0, n, m, 0.0, cost, &mut best);
    best
}

/// `(size, freq)` pairs of a random collapsed hyper-degree: distinct sizes, descending.
pub fn random_chd<R: Rng>(rng: &mut R, max_len: usize) -> Vec<(usize, usize)> {
    let len = rng.random_range(1..=max_len);
    let mut sizes: Vec<usize> = (2..=12).collect();
    for i in 0..sizes.len() {
        let j = rng.random_range(i..sizes.len());
        sizes.swap(i, j);
    }
    let mut picked: Vec<usize> = sizes[..len].to_vec();
    picked.sort_unstable_by(|a, b| b.cmp(a));
    picked.into_iter().map(|s| (s, rng.random_range(1..=5))).collect()
}

/// Element distance straight from its definition: for size/bias pairs scaled by frequency,
/// `max(f) * (exp(sqrt((1 - min/max)^2 + (b_u/f_u - b_v/f_v)^2)) - 1)`.
pub fn cmpd_reference(u: (usize, usize, usize), v: (usize, usize, usize)) -> f64 {
    // (size, freq, largest size of its own sequence)
    let bias = |s: usize, top: usize| 1.0 / (top as f64 - s as f64 + 1.0);
    let (su, fu, tu) = u;
    let (sv, fv, tv) = v;
    let magnitude = 1.0 - su.min(sv) as f64 / su.max(sv) as f64;
    let position = bias(su, tu) / fu as f64 - bias(sv, tv) / fv as f64;
    fu.max(fv) as f64 * ((magnitude * magnitude + position * position).sqrt().exp() - 1.0)
}

/// SGNS loss written out independently of the library.
pub fn sgns_loss_reference(center: &[f64], context: &[f64], negatives: &[Vec<f64>]) -> f64 {
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let sigma = |x: f64| 1.0 / (1.0 + (-x).exp());
    -sigma(dot(center, context)).ln() - negatives.iter().map(|n| sigma(-dot(center, n)).ln()).sum::<f64>()
}

/// Edge count of the clique expansion by testing every node pair against every hyperedge.
pub fn clique_edges_brute_force(edges: &[Vec<usize>], n: usize) -> usize {
    let mut count = 0;
    for u in 0..n {
        for v in u + 1..n {
            if edges.iter().any(|e| e.contains(&u) && e.contains(&v)) {
                count += 1;
            }
        }
    }
    count
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// For each colour class: largest distance inside the class over the smallest distance
/// from a class member to any node of another class. Single-member classes give 0.
pub fn separation_ratios(points: &[Vec<f64>], colors: &[usize]) -> Vec<f64> {
    let k = colors.iter().max().map_or(0, |&m| m + 1);
    (0..k)
        .map(|c| {
            let members: Vec<usize> = (0..points.len()).filter(|&v| colors[v] == c).collect();
            let mut intra: f64 = 0.0;
            let mut inter = f64::INFINITY;
            for &u in &members {
                for v in 0..points.len() {
                    let d = euclidean(&points[u], &points[v]);
                    if colors[v] == c {
                        intra = intra.max(d);
                    } else {
                        inter = inter.min(d);
                    }
                }
            }
            intra / inter
        })
        .collect()
}

pub fn median(mut values: Vec<f64>) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 { values[n / 2] } else { (values[n / 2 - 1] + values[n / 2]) / 2.0 }
}
