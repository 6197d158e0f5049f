use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansResult {
    pub assignments: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    /// Within-cluster sum of squares after each Lloyd iteration.
    pub inertia_history: Vec<f64>,
    pub iterations: usize,
}

impl KMeansResult {
    pub fn inertia(&self) -> f64 {
        self.inertia_history.last().copied().unwrap_or(0.0)
    }
}

pub const MAX_ITERATIONS: usize = 300;
pub const SHIFT_TOLERANCE: f64 = 1e-8;

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(point: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    centroids
        .iter()
        .enumerate()
        .map(|(c, m)| (c, sq_dist(point, m)))
        .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
}

fn plus_plus_init<R: Rng>(points: &[Vec<f64>], k: usize, rng: &mut R) -> Vec<Vec<f64>> {
    let mut centroids = vec![points[rng.random_range(0..points.len())].clone()];
    let mut d2: Vec<f64> = points.iter().map(|p| sq_dist(p, &centroids[0])).collect();
    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut pick = points.len() - 1;
            for (i, &w) in d2.iter().enumerate() {
                if target < w {
                    pick = i;
                    break;
                }
                target -= w;
            }
            pick
        } else {
            rng.random_range(0..points.len())
        };
        centroids.push(points[next].clone());
        for (d, p) in d2.iter_mut().zip(points) {
            *d = d.min(sq_dist(p, &centroids[centroids.len() - 1]));
        }
    }
    centroids
}

/// Lloyd's algorithm from a k-means++ start. Stops when no centroid moves by more than
/// [`SHIFT_TOLERANCE`] or after [`MAX_ITERATIONS`]. An emptied cluster keeps its centroid.
pub fn kmeans(points: &[Vec<f64>], k: usize, seed: u64) -> Result<KMeansResult> {
    if k == 0 || k > points.len() {
        return Err(Error::InvalidParameter(format!("k = {k} must lie in 1..={}", points.len())));
    }
    let dim = points[0].len();
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::InvalidParameter("points must share one dimension".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids = plus_plus_init(points, k, &mut rng);
    let mut assignments = vec![0; points.len()];
    let mut inertia_history = Vec::new();
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        for (a, p) in assignments.iter_mut().zip(points) {
            *a = nearest(p, &centroids).0;
        }
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (&a, p) in assignments.iter().zip(points) {
            counts[a] += 1;
            for (s, x) in sums[a].iter_mut().zip(p) {
                *s += x;
            }
        }
        let mut shift: f64 = 0.0;
        for c in 0..k {
            if counts[c] == 0 {
                continue;
            }
            let updated: Vec<f64> = sums[c].iter().map(|s| s / counts[c] as f64).collect();
            shift = shift.max(sq_dist(&updated, &centroids[c]).sqrt());
            centroids[c] = updated;
        }
        inertia_history.push(assignments.iter().zip(points).map(|(&a, p)| sq_dist(p, &centroids[a])).sum());
        if shift < SHIFT_TOLERANCE {
            break;
        }
    }
    Ok(KMeansResult { assignments, centroids, inertia_history, iterations })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blobs(k: usize, per: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<usize>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut points = Vec::new();
        let mut truth = Vec::new();
        for c in 0..k {
            let center = [100.0 * c as f64, -50.0 * (c % 2) as f64];
            for _ in 0..per {
                points.push(vec![center[0] + rng.random_range(-1.0..1.0), center[1] + rng.random_range(-1.0..1.0)]);
                truth.push(c);
            }
        }
        (points, truth)
    }

    /// Adjusted Rand index from the contingency table.
    fn adjusted_rand(a: &[usize], b: &[usize]) -> f64 {
        let ka = a.iter().max().unwrap() + 1;
        let kb = b.iter().max().unwrap() + 1;
        let mut table = vec![vec![0f64; kb]; ka];
        for (&x, &y) in a.iter().zip(b) {
            table[x][y] += 1.0;
        }
        let c2 = |x: f64| x * (x - 1.0) / 2.0;
        let sum_ij: f64 = table.iter().flatten().map(|&v| c2(v)).sum();
        let sum_a: f64 = table.iter().map(|r| c2(r.iter().sum())).sum();
        let sum_b: f64 = (0..kb).map(|j| c2(table.iter().map(|r| r[j]).sum())).sum();
        let expected = sum_a * sum_b / c2(a.len() as f64);
        (sum_ij - expected) / ((sum_a + sum_b) / 2.0 - expected)
    }

    #[test]
    fn recovers_six_blobs() {
        let (points, truth) = blobs(6, 20, 3);
        let result = kmeans(&points, 6, 11).unwrap();
        assert!((adjusted_rand(&result.assignments, &truth) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn duplicates_share_a_cluster() {
        let mut points = blobs(3, 10, 1).0;
        points.push(points[4].clone());
        let result = kmeans(&points, 3, 2).unwrap();
        assert_eq!(result.assignments[4], result.assignments[points.len() - 1]);
    }

    #[test]
    fn inertia_never_increases() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let points: Vec<Vec<f64>> = (0..200).map(|_| vec![rng.random::<f64>(), rng.random::<f64>()]).collect();
        for seed in 0..5 {
            let r = kmeans(&points, 6, seed).unwrap();
            for w in r.inertia_history.windows(2) {
                assert!(w[1] <= w[0] + 1e-12);
            }
        }
    }

    #[test]
    fn k_bounds() {
        let points = vec![vec![0.0], vec![1.0]];
        assert!(kmeans(&points, 3, 0).is_err());
        assert!(kmeans(&points, 0, 0).is_err());
        assert_eq!(kmeans(&points, 2, 0).unwrap().inertia(), 0.0);
    }
}
