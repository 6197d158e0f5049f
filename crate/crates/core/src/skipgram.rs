//! Skip-gram with negative sampling over walk corpora.

use std::fmt::Write as _;
use std::marker::PhantomData;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::Distribution;

use crate::error::{Error, Result};
use crate::hypergraph::NodeLabelMap;
use crate::scalar::Scalar;
use crate::walk::WalkCorpus;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkipGramConfig {
    pub dim: usize,
    pub window: usize,
    pub epochs: usize,
    pub negative: usize,
    pub lr_start: f64,
    pub lr_end: f64,
    pub seed: u64,
    /// `1` trains deterministically; more workers update shared vectors without locks.
    pub workers: usize,
}

impl Default for SkipGramConfig {
    fn default() -> Self {
        SkipGramConfig { dim: 64, window: 5, epochs: 5, negative: 5, lr_start: 0.025, lr_end: 0.0001, seed: 0, workers: 1 }
    }
}

/// `|V| x dim` node vectors with the label map of the graph they embed.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingMatrix<S> {
    dim: usize,
    data: Vec<S>,
    labels: NodeLabelMap,
}

impl<S: Scalar> EmbeddingMatrix<S> {
    pub fn from_rows(labels: NodeLabelMap, rows: Vec<Vec<S>>) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(Error::InvalidParameter(format!("{} rows for {} labels", rows.len(), labels.len())));
        }
        let dim = rows.first().map_or(0, Vec::len);
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidParameter("embedding rows must share a positive dimension".into()));
        }
        Ok(EmbeddingMatrix { dim, data: rows.concat(), labels })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &NodeLabelMap {
        &self.labels
    }

    pub fn row(&self, v: usize) -> &[S] {
        &self.data[v * self.dim..(v + 1) * self.dim]
    }

    pub fn row_by_label(&self, label: &str) -> Option<&[S]> {
        self.labels.id(label).map(|v| self.row(v))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn euclidean(&self, u: usize, v: usize) -> S {
        self.row(u).iter().zip(self.row(v)).map(|(&a, &b)| (a - b) * (a - b)).sum::<S>().sqrt()
    }

    pub fn cosine(&self, u: usize, v: usize) -> S {
        let (a, b) = (self.row(u), self.row(v));
        let dot: S = a.iter().zip(b).map(|(&x, &y)| x * y).sum();
        let na: S = a.iter().map(|&x| x * x).sum::<S>().sqrt();
        let nb: S = b.iter().map(|&x| x * x).sum::<S>().sqrt();
        dot / (na * nb)
    }

    /// word2vec text layout: `n dim` header, then `label v1 .. v_dim` per node.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.node_count(), self.dim);
        for v in 0..self.node_count() {
            out.push_str(self.labels.label(v).unwrap());
            for x in self.row(v) {
                let _ = write!(out, " {x}");
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| Error::Format("empty embedding file".into()))?;
        let head: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse { line: 1, message: "header must be 'count dim'".into() }))
            .collect::<Result<_>>()?;
        let [count, dim] = head[..] else {
            return Err(Error::Parse { line: 1, message: "header must be 'count dim'".into() });
        };
        let mut labels = NodeLabelMap::new();
        let mut rows = Vec::with_capacity(count);
        for (i, line) in lines {
            let mut parts = line.split_whitespace();
            let label = parts.next().unwrap();
            let row = parts
                .map(|t| {
                    t.parse::<f64>().map(S::lit).map_err(|_| Error::Parse { line: i + 1, message: format!("bad number '{t}'") })
                })
                .collect::<Result<Vec<S>>>()?;
            if row.len() != dim {
                return Err(Error::Parse { line: i + 1, message: format!("expected {dim} values, found {}", row.len()) });
            }
            if labels.id(label).is_some() {
                return Err(Error::Parse { line: i + 1, message: format!("duplicate label '{label}'") });
            }
            labels.intern(label);
            rows.push(row);
        }
        if rows.len() != count {
            return Err(Error::Format(format!("header announces {count} rows, found {}", rows.len())));
        }
        Self::from_rows(labels, rows)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }
}

fn sigmoid<S: Scalar>(x: S) -> S {
    S::one() / (S::one() + (-x).exp())
}

/// `-ln(sigmoid(x))`, stable for large `|x|`.
fn neg_log_sigmoid<S: Scalar>(x: S) -> S {
    if x > S::zero() {
        (-x).exp().ln_1p()
    } else {
        -x + x.exp().ln_1p()
    }
}

/// Dot product with eight independent accumulators so the sum is not one long
/// dependency chain.
fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    let n = a.len().min(b.len());
    let (a, b) = (&a[..n], &b[..n]);
    let mut acc = [S::zero(); 8];
    let (ca, cb) = (a.chunks_exact(8), b.chunks_exact(8));
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        for k in 0..8 {
            acc[k] += x[k] * y[k];
        }
    }
    let tail: S = ra.iter().zip(rb).map(|(&x, &y)| x * y).sum();
    acc.iter().copied().sum::<S>() + tail
}

/// Coefficient `label - sigmoid(score)`: the negative derivative of the SGNS loss with
/// respect to the score of one (center, target) pair.
fn pair_coefficient<S: Scalar>(score: S, positive: bool) -> S {
    (if positive { S::one() } else { S::zero() }) - sigmoid(score)
}

/// SGNS loss of one center vector against one positive context vector and a set of
/// negative vectors: `-ln s(c.o) - sum ln s(-c.n)`.
pub fn sgns_loss<S: Scalar>(center: &[S], context: &[S], negatives: &[&[S]]) -> S {
    neg_log_sigmoid(dot(center, context)) + negatives.iter().map(|n| neg_log_sigmoid(-dot(center, n))).sum::<S>()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SgnsGradient<S> {
    pub loss: S,
    pub center: Vec<S>,
    pub context: Vec<S>,
    pub negatives: Vec<Vec<S>>,
}

/// Analytic gradient of [`sgns_loss`] with respect to every vector involved.
pub fn sgns_gradient<S: Scalar>(center: &[S], context: &[S], negatives: &[&[S]]) -> SgnsGradient<S> {
    let mut g_center = vec![S::zero(); center.len()];
    let mut target_grad = |target: &[S], positive: bool| -> Vec<S> {
        let coef = pair_coefficient(dot(center, target), positive);
        for (gc, &t) in g_center.iter_mut().zip(target) {
            *gc -= coef * t;
        }
        center.iter().map(|&c| -coef * c).collect()
    };
    let context_grad = target_grad(context, true);
    let negative_grads = negatives.iter().map(|n| target_grad(n, false)).collect();
    SgnsGradient { loss: sgns_loss(center, context, negatives), center: g_center, context: context_grad, negatives: negative_grads }
}

/// Row storage for multi-worker epochs.
///
/// Values are kept as `f64` bit patterns in relaxed atomics. Workers read and write rows
/// without locks (Hogwild-style SGD), so updates from different workers may interleave
/// but never tear a value.
struct SharedRows<S> {
    dim: usize,
    cells: Box<[AtomicU64]>,
    _scalar: PhantomData<S>,
}

impl<S: Scalar> SharedRows<S> {
    fn new(dim: usize, data: &[S]) -> Self {
        let cells = data.iter().map(|x| AtomicU64::new(x.as_f64().to_bits())).collect();
        SharedRows { dim, cells, _scalar: PhantomData }
    }

    fn cells(&self, v: usize) -> &[AtomicU64] {
        &self.cells[v * self.dim..(v + 1) * self.dim]
    }

    fn load(&self, v: usize, out: &mut [S]) {
        for (o, c) in out.iter_mut().zip(self.cells(v)) {
            *o = S::lit(f64::from_bits(c.load(Ordering::Relaxed)));
        }
    }

    fn store(&self, v: usize, values: &[S]) {
        for (c, x) in self.cells(v).iter().zip(values) {
            c.store(x.as_f64().to_bits(), Ordering::Relaxed);
        }
    }

    fn write_back(self, out: &mut [S]) {
        for (o, c) in out.iter_mut().zip(self.cells.into_vec()) {
            *o = S::lit(f64::from_bits(c.into_inner()));
        }
    }
}

/// One SGD step of `v` (center) against `u` (target): accumulates the center's update
/// into `grad` and applies the target's update in place.
fn sgd_step<S: Scalar>(v: &[S], u: &mut [S], grad: &mut [S], positive: bool, lr: S) {
    let g = pair_coefficient(dot(v, u), positive) * lr;
    let n = v.len();
    let (u, grad) = (&mut u[..n], &mut grad[..n]);
    for i in 0..n {
        grad[i] += g * u[i];
        u[i] += g * v[i];
    }
}

fn add_into<S: Scalar>(v: &mut [S], grad: &[S]) {
    for (vi, &s) in v.iter_mut().zip(grad) {
        *vi += s;
    }
}

/// One (center, context, negatives) training example.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Example {
    pub center: u32,
    pub context: u32,
    pub negatives: Vec<u32>,
}

/// Everything but the vectors: schedule, window and noise distribution.
struct Schedule {
    config: SkipGramConfig,
    noise: WeightedAliasIndex<f64>,
    total_tokens: usize,
}

impl Schedule {
    fn draw_negatives<R: Rng>(&self, context: u32, rng: &mut R, out: &mut Vec<u32>) {
        out.clear();
        let mut tries = 0;
        while out.len() < self.config.negative && tries < 10 * self.config.negative.max(1) {
            tries += 1;
            let t = self.noise.sample(rng) as u32;
            if t != context {
                out.push(t);
            }
        }
    }

    fn learning_rate(&self, processed: usize) -> f64 {
        let total = (self.config.epochs.max(1) * self.total_tokens) as f64;
        let progress = (processed as f64 / total).min(1.0);
        (self.config.lr_start - (self.config.lr_start - self.config.lr_end) * progress).max(self.config.lr_end)
    }

    /// Visits every (center, context, negatives) triple of `walks` in order, starting at
    /// global token offset `processed`, with the full window on both sides.
    fn for_each_pair<F: FnMut(u32, u32, &[u32], f64)>(
        &self,
        walks: &[&Vec<u32>],
        mut processed: usize,
        rng: &mut ChaCha8Rng,
        mut apply: F,
    ) {
        let window = self.config.window;
        let mut negatives = Vec::with_capacity(self.config.negative);
        for walk in walks {
            let lr = self.learning_rate(processed);
            for (i, &center) in walk.iter().enumerate() {
                let lo = i.saturating_sub(window);
                let hi = (i + window + 1).min(walk.len());
                for (j, &context) in walk.iter().enumerate().take(hi).skip(lo) {
                    if j == i {
                        continue;
                    }
                    self.draw_negatives(context, rng, &mut negatives);
                    apply(center, context, &negatives, lr);
                }
            }
            processed += walk.len();
        }
    }
}

/// SGNS trainer holding input (node) and output (context) vectors.
pub struct Trainer<S> {
    schedule: Schedule,
    node_count: usize,
    input: Vec<S>,
    output: Vec<S>,
}

impl<S: Scalar> Trainer<S> {
    pub fn new(corpus: &WalkCorpus, node_count: usize, config: SkipGramConfig) -> Result<Self> {
        if config.dim == 0 {
            return Err(Error::InvalidParameter("embedding dimension must be >= 1".into()));
        }
        if config.workers == 0 {
            return Err(Error::InvalidParameter("worker count must be >= 1".into()));
        }
        let mut counts = vec![0usize; node_count];
        for &t in corpus.walks.iter().flatten() {
            let t = t as usize;
            if t >= node_count {
                return Err(Error::NodeOutOfRange { id: t, len: node_count });
            }
            counts[t] += 1;
        }
        let total_tokens: usize = counts.iter().sum();
        if total_tokens == 0 {
            return Err(Error::InvalidParameter("cannot train on an empty corpus".into()));
        }
        let noise = WeightedAliasIndex::new(counts.iter().map(|&c| (c as f64).powf(0.75)).collect())
            .map_err(|e| Error::Internal(format!("noise distribution: {e}")))?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let half = 0.5 / config.dim as f64;
        let input = (0..node_count * config.dim).map(|_| S::lit(rng.random_range(-half..half))).collect();
        let output = vec![S::zero(); node_count * config.dim];
        Ok(Trainer { schedule: Schedule { config, noise, total_tokens }, node_count, input, output })
    }

    fn config(&self) -> &SkipGramConfig {
        &self.schedule.config
    }

    fn row(&self, v: u32) -> std::ops::Range<usize> {
        let d = self.config().dim;
        v as usize * d..(v as usize + 1) * d
    }

    /// Runs epoch `epoch` (0-based) over `corpus`. Walk order is reshuffled every epoch
    /// from the seed.
    pub fn train_epoch(&mut self, corpus: &WalkCorpus, epoch: usize) {
        let config = *self.config();
        let dim = config.dim;
        let mut order: Vec<&Vec<u32>> = corpus.walks.iter().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ (epoch as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        order.shuffle(&mut rng);
        let base = epoch * self.schedule.total_tokens;
        if config.workers == 1 {
            let Trainer { schedule, input, output, .. } = self;
            let mut grad = vec![S::zero(); dim];
            schedule.for_each_pair(&order, base, &mut rng, |center, context, negatives, lr| {
                let lr = S::lit(lr);
                let c = center as usize * dim;
                let v = &mut input[c..c + dim];
                grad.fill(S::zero());
                for (t, positive) in std::iter::once((context, true)).chain(negatives.iter().map(|&n| (n, false))) {
                    let o = t as usize * dim;
                    sgd_step(v, &mut output[o..o + dim], &mut grad, positive, lr);
                }
                add_into(v, &grad);
            });
            return;
        }
        let shared_in = SharedRows::new(dim, &self.input);
        let shared_out = SharedRows::new(dim, &self.output);
        let chunk = order.len().div_ceil(config.workers).max(1);
        let schedule = &self.schedule;
        std::thread::scope(|scope| {
            let mut offset = base;
            for (w, part) in order.chunks(chunk).enumerate() {
                let start = offset;
                offset += part.iter().map(|walk| walk.len()).sum::<usize>();
                let mut worker_rng = ChaCha8Rng::seed_from_u64(rng.random::<u64>() ^ w as u64);
                let (shared_in, shared_out) = (&shared_in, &shared_out);
                scope.spawn(move || {
                    let (mut v, mut u, mut grad) = (vec![S::zero(); dim], vec![S::zero(); dim], vec![S::zero(); dim]);
                    schedule.for_each_pair(part, start, &mut worker_rng, |center, context, negatives, lr| {
                        let lr = S::lit(lr);
                        shared_in.load(center as usize, &mut v);
                        grad.fill(S::zero());
                        for (t, positive) in
                            std::iter::once((context, true)).chain(negatives.iter().map(|&n| (n, false)))
                        {
                            shared_out.load(t as usize, &mut u);
                            sgd_step(&v, &mut u, &mut grad, positive, lr);
                            shared_out.store(t as usize, &u);
                        }
                        add_into(&mut v, &grad);
                        shared_in.store(center as usize, &v);
                    });
                });
            }
        });
        shared_in.write_back(&mut self.input);
        shared_out.write_back(&mut self.output);
    }

    /// Mean SGNS loss over fixed examples under the current vectors.
    pub fn loss(&self, batch: &[Example]) -> S {
        let total: S = batch
            .iter()
            .map(|ex| {
                let negs: Vec<&[S]> =
                    ex.negatives.iter().map(|&n| &self.output[self.row(n)]).collect();
                sgns_loss(&self.input[self.row(ex.center)], &self.output[self.row(ex.context)], &negs)
            })
            .sum();
        total / S::from_usize_lossy(batch.len().max(1))
    }

    /// Draws `size` training examples from `corpus` with frozen negatives.
    pub fn sample_batch(&self, corpus: &WalkCorpus, size: usize, seed: u64) -> Vec<Example> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let window = self.config().window;
        let walks: Vec<&Vec<u32>> = corpus.walks.iter().filter(|w| w.len() >= 2).collect();
        let mut out = Vec::with_capacity(size);
        if walks.is_empty() {
            return out;
        }
        while out.len() < size {
            let walk = walks[rng.random_range(0..walks.len())];
            let i = rng.random_range(0..walk.len());
            let lo = i.saturating_sub(window);
            let hi = (i + window).min(walk.len() - 1);
            let j = rng.random_range(lo..=hi);
            if j == i {
                continue;
            }
            let mut negatives = Vec::new();
            self.schedule.draw_negatives(walk[j], &mut rng, &mut negatives);
            out.push(Example { center: walk[i], context: walk[j], negatives });
        }
        out
    }

    pub fn into_embedding(self, labels: NodeLabelMap) -> Result<EmbeddingMatrix<S>> {
        if labels.len() != self.node_count {
            return Err(Error::InvalidParameter(format!("{} labels for {} nodes", labels.len(), self.node_count)));
        }
        let emb = EmbeddingMatrix { dim: self.config().dim, data: self.input, labels };
        if !emb.is_finite() {
            return Err(Error::Internal("training produced non-finite vectors".into()));
        }
        Ok(emb)
    }
}

/// Trains SGNS embeddings for every node in `labels` over `corpus`.
pub fn train<S: Scalar>(corpus: &WalkCorpus, labels: &NodeLabelMap, config: &SkipGramConfig) -> Result<EmbeddingMatrix<S>> {
    let mut trainer = Trainer::<S>::new(corpus, labels.len(), *config)?;
    for epoch in 0..config.epochs {
        trainer.train_epoch(corpus, epoch);
        log::debug!("skip-gram epoch {}/{} done", epoch + 1, config.epochs);
    }
    trainer.into_embedding(labels.clone())
}
