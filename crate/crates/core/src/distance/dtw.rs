use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Exact dynamic time warping cost between `a` and `b` under `dist`.
///
/// Alignments start at `(0, 0)`, end at `(a.len()-1, b.len()-1)` and advance by match,
/// insertion or deletion steps; the cost is the sum of element distances along the
/// cheapest such path. Uses two rolling rows, so memory is `O(b.len())`.
pub fn dtw<A, B, S, F>(a: &[A], b: &[B], mut dist: F) -> Result<S>
where
    S: Scalar,
    F: FnMut(&A, &B) -> S,
{
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySequence);
    }
    let mut prev = vec![S::infinity(); b.len()];
    let mut curr = vec![S::infinity(); b.len()];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            let best = match (i, j) {
                (0, 0) => S::zero(),
                (0, _) => curr[j - 1],
                (_, 0) => prev[0],
                _ => prev[j - 1].min(prev[j]).min(curr[j - 1]),
            };
            curr[j] = best + dist(x, y);
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    Ok(prev[b.len() - 1])
}
