//! Per-hop cumulative structural distances over all node pairs.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;

use crate::distance::degree::{CollapsedHyperDegree, HyperDegree};
use crate::distance::signature::{d0, d0_uncollapsed};
use crate::error::{Error, Result};
use crate::hypergraph::{hop_shells, Hypergraph};
use crate::scalar::Scalar;

/// Whether hyper-degrees are frequency-collapsed before comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DistanceMode {
    #[default]
    Collapsed,
    /// Raw hyper-degrees under MPD and raw neighbor lists (ablation variant).
    Uncollapsed,
}

impl fmt::Display for DistanceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DistanceMode::Collapsed => "collapsed",
            DistanceMode::Uncollapsed => "uncollapsed",
        })
    }
}

impl FromStr for DistanceMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "collapsed" => Ok(DistanceMode::Collapsed),
            "uncollapsed" => Ok(DistanceMode::Uncollapsed),
            other => Err(Error::InvalidParameter(format!("unknown distance mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DistanceConfig {
    /// Largest hop considered; layers `0..=k_max` are computed.
    pub k_max: usize,
    pub mode: DistanceMode,
    /// Exponent `n` of the magnitude/position norm.
    pub exponent: u32,
}

impl Default for DistanceConfig {
    fn default() -> Self {
        DistanceConfig { k_max: 5, mode: DistanceMode::Collapsed, exponent: 2 }
    }
}

/// One hop's distances: a per-node validity flag and the upper triangle of the pair table.
/// A pair is defined iff both nodes are valid (have at least one neighbor at this hop).
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceLayer<S> {
    valid: Vec<bool>,
    values: Vec<S>,
}

/// Cumulative distances `dis^k(u, v)` for `k = 0..=k_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerDistances<S> {
    node_count: usize,
    layers: Vec<DistanceLayer<S>>,
}

#[inline]
fn tri_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

impl<S: Scalar> LayerDistances<S> {
    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn is_valid(&self, k: usize, v: usize) -> bool {
        self.layers.get(k).is_some_and(|l| l.valid[v])
    }

    pub fn valid_nodes(&self, k: usize) -> Vec<usize> {
        match self.layers.get(k) {
            Some(l) => (0..self.node_count).filter(|&v| l.valid[v]).collect(),
            None => Vec::new(),
        }
    }

    /// `dis^k(u, v)`, or `None` when the pair is undefined at hop `k`.
    pub fn get(&self, k: usize, u: usize, v: usize) -> Option<S> {
        let layer = self.layers.get(k)?;
        if !(layer.valid[u] && layer.valid[v]) {
            return None;
        }
        Some(match u.cmp(&v) {
            std::cmp::Ordering::Equal => S::zero(),
            std::cmp::Ordering::Less => layer.values[tri_index(self.node_count, u, v)],
            std::cmp::Ordering::Greater => layer.values[tri_index(self.node_count, v, u)],
        })
    }

    const MAGIC: &'static [u8; 8] = b"HS2VDIST";
    const VERSION: u32 = 1;

    /// Binary cache layout (little-endian): magic, version `u32`, scalar width `u32`,
    /// node count `u64`, layer count `u32`; then per layer a validity bitmap of
    /// `ceil(n/8)` bytes (LSB first) followed by the `n(n-1)/2` upper-triangle values.
    pub fn write_binary<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let width = std::mem::size_of::<S>() as u32;
        w.write_all(Self::MAGIC)?;
        w.write_all(&Self::VERSION.to_le_bytes())?;
        w.write_all(&width.to_le_bytes())?;
        w.write_all(&(self.node_count as u64).to_le_bytes())?;
        w.write_all(&(self.layers.len() as u32).to_le_bytes())?;
        for layer in &self.layers {
            let mut bitmap = vec![0u8; self.node_count.div_ceil(8)];
            for (v, &ok) in layer.valid.iter().enumerate() {
                if ok {
                    bitmap[v / 8] |= 1 << (v % 8);
                }
            }
            w.write_all(&bitmap)?;
            for &x in &layer.values {
                if width == 4 {
                    w.write_all(&(x.as_f64() as f32).to_le_bytes())?;
                } else {
                    w.write_all(&x.as_f64().to_le_bytes())?;
                }
            }
        }
        w.flush()
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let fmt_err = |m: &str| Error::Format(format!("distance cache: {m}"));
        let mut read = |n: usize| -> Result<Vec<u8>> {
            let mut buf = vec![0u8; n];
            r.read_exact(&mut buf).map_err(|_| fmt_err("truncated"))?;
            Ok(buf)
        };
        if read(8)?.as_slice() != Self::MAGIC {
            return Err(fmt_err("bad magic"));
        }
        let u32_at = |b: Vec<u8>| u32::from_le_bytes(b.try_into().unwrap());
        if u32_at(read(4)?) != Self::VERSION {
            return Err(fmt_err("unsupported version"));
        }
        let width = u32_at(read(4)?);
        if width != 4 && width != 8 {
            return Err(fmt_err("scalar width must be 4 or 8"));
        }
        let n = u64::from_le_bytes(read(8)?.try_into().unwrap()) as usize;
        let layer_count = u32_at(read(4)?) as usize;
        let pairs = n * n.saturating_sub(1) / 2;
        let mut layers = Vec::with_capacity(layer_count);
        for _ in 0..layer_count {
            let bitmap = read(n.div_ceil(8))?;
            let valid = (0..n).map(|v| bitmap[v / 8] & (1 << (v % 8)) != 0).collect();
            let raw = read(pairs * width as usize)?;
            let values = if width == 4 {
                raw.chunks_exact(4).map(|c| S::lit(f32::from_le_bytes(c.try_into().unwrap()) as f64)).collect()
            } else {
                raw.chunks_exact(8).map(|c| S::lit(f64::from_le_bytes(c.try_into().unwrap()))).collect()
            };
            layers.push(DistanceLayer { valid, values });
        }
        Ok(LayerDistances { node_count: n, layers })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_binary(std::io::BufWriter::new(file)).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_binary(std::io::BufReader::new(file))
    }
}

/// Interns `keys`, assigning ids in descending order of the key, and tabulates
/// `dist` over all distinct pairs (full symmetric matrix).
fn intern_with_table<K, S, F>(keys: &[K], dist: F) -> Result<(Vec<usize>, Vec<S>, usize)>
where
    K: Ord + Clone + Sync,
    S: Scalar,
    F: Fn(&K, &K) -> Result<S> + Sync,
{
    let distinct: Vec<K> = keys.iter().cloned().collect::<BTreeSet<K>>().into_iter().rev().collect();
    let ids = keys.iter().map(|k| distinct.binary_search_by(|p| k.cmp(p)).unwrap()).collect();
    let m = distinct.len();
    let rows: Vec<Vec<S>> = (0..m)
        .into_par_iter()
        .map(|i| (0..m).map(|j| if j <= i { Ok(S::zero()) } else { dist(&distinct[i], &distinct[j]) }).collect())
        .collect::<Result<_>>()?;
    let mut table = rows.concat();
    // symmetrize from the upper triangle so the table is exactly symmetric
    for i in 0..m {
        for j in 0..i {
            table[i * m + j] = table[j * m + i];
        }
    }
    Ok((ids, table, m))
}

/// A node's k-hop signature as `(degree-class id, frequency)` entries sorted by id.
type Signature = Vec<(u32, u32)>;

fn signature_distance<S: Scalar>(a: &Signature, b: &Signature, base: &[S], m: usize) -> S {
    let mut prev = vec![S::infinity(); b.len()];
    let mut curr = vec![S::infinity(); b.len()];
    for (i, &(ka, fa)) in a.iter().enumerate() {
        let row = &base[ka as usize * m..(ka as usize + 1) * m];
        for (j, &(kb, fb)) in b.iter().enumerate() {
            let cost = S::from_u32(fa.max(fb)).unwrap() * row[kb as usize];
            let best = match (i, j) {
                (0, 0) => S::zero(),
                (0, _) => curr[j - 1],
                (_, 0) => prev[0],
                _ => prev[j - 1].min(prev[j]).min(curr[j - 1]),
            };
            curr[j] = best + cost;
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    prev[b.len() - 1]
}

/// Computes `dis^k(u, v) = dis^{k-1}(u, v) + D^k(u, v)` for every pair and every hop up to
/// `config.k_max`, where `D^0` compares (collapsed) hyper-degrees and `D^k` compares the
/// multisets of the k-hop neighbors' (collapsed) hyper-degrees.
///
/// Distances are first tabulated over distinct degree classes and distinct signatures,
/// then spread over node pairs; results do not depend on the rayon schedule.
pub fn cumulative_distances<S: Scalar>(g: &Hypergraph, config: &DistanceConfig) -> Result<LayerDistances<S>> {
    if config.exponent == 0 {
        return Err(Error::InvalidParameter("distance exponent must be >= 1".into()));
    }
    let n = g.node_count();
    let exponent = config.exponent;
    let (class_of, base, m) = match config.mode {
        DistanceMode::Collapsed => {
            let chds = (0..n).map(|v| CollapsedHyperDegree::of(g, v)).collect::<Result<Vec<_>>>()?;
            intern_with_table(&chds, |a, b| d0::<S>(a, b, exponent))?
        }
        DistanceMode::Uncollapsed => {
            let hds = (0..n).map(|v| HyperDegree::of(g, v)).collect::<Result<Vec<_>>>()?;
            intern_with_table(&hds, |a, b| d0_uncollapsed::<S>(a, b, exponent))?
        }
    };
    log::debug!("{m} distinct degree classes over {n} nodes");

    let expansion = g.clique_expansion();
    let shells: Vec<Vec<Vec<usize>>> =
        (0..n).into_par_iter().map(|v| hop_shells(&expansion, v, config.k_max)).collect();

    let pairs = n * n.saturating_sub(1) / 2;
    let mut layers: Vec<DistanceLayer<S>> = Vec::with_capacity(config.k_max + 1);

    // layer 0: every node is valid
    let mut values = Vec::with_capacity(pairs);
    for i in 0..n {
        let row = &base[class_of[i] * m..(class_of[i] + 1) * m];
        values.extend(((i + 1)..n).map(|j| row[class_of[j]]));
    }
    layers.push(DistanceLayer { valid: vec![true; n], values });

    for k in 1..=config.k_max {
        let signatures: Vec<Option<Signature>> = shells
            .iter()
            .map(|s| {
                s.get(k).map(|shell| {
                    let mut ids: Vec<u32> = shell.iter().map(|&w| class_of[w] as u32).collect();
                    ids.sort_unstable();
                    match config.mode {
                        DistanceMode::Collapsed => {
                            let mut sig: Signature = Vec::new();
                            for id in ids {
                                match sig.last_mut() {
                                    Some((last, f)) if *last == id => *f += 1,
                                    _ => sig.push((id, 1)),
                                }
                            }
                            sig
                        }
                        DistanceMode::Uncollapsed => ids.into_iter().map(|id| (id, 1)).collect(),
                    }
                })
            })
            .collect();
        let valid: Vec<bool> = signatures.iter().map(Option::is_some).collect();
        let valid_count = valid.iter().filter(|&&b| b).count();
        if valid_count == 0 {
            log::debug!("hop {k}: no node has neighbors this far; stopping");
            layers.push(DistanceLayer { valid, values: vec![S::zero(); pairs] });
            continue;
        }

        let mut sig_index: HashMap<&Signature, usize> = HashMap::new();
        let mut distinct: Vec<&Signature> = Vec::new();
        let sig_of: Vec<usize> = signatures
            .iter()
            .map(|s| match s {
                Some(sig) => *sig_index.entry(sig).or_insert_with(|| {
                    distinct.push(sig);
                    distinct.len() - 1
                }),
                None => usize::MAX,
            })
            .collect();
        let ms = distinct.len();
        log::debug!("hop {k}: {valid_count} valid nodes, {ms} distinct signatures");
        let sig_rows: Vec<Vec<S>> = (0..ms)
            .into_par_iter()
            .map(|a| ((a + 1)..ms).map(|b| signature_distance(distinct[a], distinct[b], &base, m)).collect())
            .collect();
        let sig_dist = |a: usize, b: usize| -> S {
            match a.cmp(&b) {
                std::cmp::Ordering::Equal => S::zero(),
                std::cmp::Ordering::Less => sig_rows[a][b - a - 1],
                std::cmp::Ordering::Greater => sig_rows[b][a - b - 1],
            }
        };

        let prev = &layers[k - 1];
        let mut values = Vec::with_capacity(pairs);
        for i in 0..n {
            for j in (i + 1)..n {
                values.push(if valid[i] && valid[j] {
                    prev.values[tri_index(n, i, j)] + sig_dist(sig_of[i], sig_of[j])
                } else {
                    S::zero()
                });
            }
        }
        layers.push(DistanceLayer { valid, values });
    }
    Ok(LayerDistances { node_count: n, layers })
}
