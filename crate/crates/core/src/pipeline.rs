//! End-to-end embedding runs: configuration, stage wiring and output files.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::distance::{cumulative_distances, DistanceConfig, DistanceMode, LayerDistances};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::multilayer::build_multilayer;
use crate::scalar::Scalar;
use crate::skipgram::{train, EmbeddingMatrix, SkipGramConfig};
use crate::walk::{generate_walks, WalkConfig, WalkCorpus};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    F32,
    F64,
}

/// Every knob of an embedding run. Serializes to and from flat `key=value` text.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbedConfig {
    pub k_max: usize,
    pub walks: usize,
    pub length: usize,
    pub window: usize,
    pub q: f64,
    pub n: u32,
    pub mode: DistanceMode,
    pub dim: usize,
    pub seed: u64,
    pub epochs: usize,
    pub negative: usize,
    pub lr_start: f64,
    pub lr_end: f64,
    pub threads: usize,
    pub deterministic: bool,
    pub dedupe: bool,
    pub precision: Precision,
}

impl Default for EmbedConfig {
    fn default() -> Self {
        EmbedConfig {
            k_max: 5,
            walks: 100,
            length: 80,
            window: 5,
            q: 0.3,
            n: 2,
            mode: DistanceMode::Collapsed,
            dim: 64,
            seed: 0,
            epochs: 5,
            negative: 5,
            lr_start: 0.025,
            lr_end: 0.0001,
            threads: 1,
            deterministic: true,
            dedupe: false,
            precision: Precision::F64,
        }
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| Error::InvalidParameter(format!("{key}: cannot parse '{value}'")))
}

impl EmbedConfig {
    pub const KEYS: [&'static str; 17] = [
        "k_max", "walks", "length", "window", "q", "n", "mode", "dim", "seed", "epochs", "negative", "lr_start",
        "lr_end", "threads", "deterministic", "dedupe", "precision",
    ];

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim() {
            "k_max" => self.k_max = parse_value(key, value)?,
            "walks" => self.walks = parse_value(key, value)?,
            "length" => self.length = parse_value(key, value)?,
            "window" => self.window = parse_value(key, value)?,
            "q" => self.q = parse_value(key, value)?,
            "n" => self.n = parse_value(key, value)?,
            "mode" => self.mode = parse_value(key, value)?,
            "dim" => self.dim = parse_value(key, value)?,
            "seed" => self.seed = parse_value(key, value)?,
            "epochs" => self.epochs = parse_value(key, value)?,
            "negative" => self.negative = parse_value(key, value)?,
            "lr_start" => self.lr_start = parse_value(key, value)?,
            "lr_end" => self.lr_end = parse_value(key, value)?,
            "threads" => self.threads = parse_value(key, value)?,
            "deterministic" => self.deterministic = parse_value(key, value)?,
            "dedupe" => self.dedupe = parse_value(key, value)?,
            "precision" => {
                self.precision = match value {
                    "f32" => Precision::F32,
                    "f64" => Precision::F64,
                    _ => return Err(Error::InvalidParameter(format!("precision: expected f32 or f64, got '{value}'"))),
                }
            }
            other => return Err(Error::InvalidParameter(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    /// Applies `key=value` lines over the current values. `#` starts a comment line;
    /// keys outside [`Self::KEYS`] are ignored when `lenient` (manifests carry extras).
    pub fn apply_text(&mut self, text: &str, lenient: bool) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse { line: i + 1, message: "expected key=value".into() })?;
            if lenient && !Self::KEYS.contains(&key.trim()) {
                continue;
            }
            self.set(key, value).map_err(|e| Error::Parse { line: i + 1, message: e.to_string() })?;
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = EmbedConfig::default();
        cfg.apply_text(text, false)?;
        Ok(cfg)
    }

    pub fn to_pairs(&self) -> Vec<(&'static str, String)> {
        vec![
            ("k_max", self.k_max.to_string()),
            ("walks", self.walks.to_string()),
            ("length", self.length.to_string()),
            ("window", self.window.to_string()),
            ("q", self.q.to_string()),
            ("n", self.n.to_string()),
            ("mode", self.mode.to_string()),
            ("dim", self.dim.to_string()),
            ("seed", self.seed.to_string()),
            ("epochs", self.epochs.to_string()),
            ("negative", self.negative.to_string()),
            ("lr_start", self.lr_start.to_string()),
            ("lr_end", self.lr_end.to_string()),
            ("threads", self.threads.to_string()),
            ("deterministic", self.deterministic.to_string()),
            ("dedupe", self.dedupe.to_string()),
            ("precision", match self.precision { Precision::F32 => "f32", Precision::F64 => "f64" }.to_string()),
        ]
    }

    pub fn to_text(&self) -> String {
        self.to_pairs().into_iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    pub fn distance_config(&self) -> DistanceConfig {
        DistanceConfig { k_max: self.k_max, mode: self.mode, exponent: self.n }
    }

    pub fn walk_config(&self) -> WalkConfig {
        WalkConfig { walks_per_node: self.walks, walk_length: self.length, stay_probability: self.q, seed: self.seed }
    }

    pub fn skipgram_config(&self) -> SkipGramConfig {
        SkipGramConfig {
            dim: self.dim,
            window: self.window,
            epochs: self.epochs,
            negative: self.negative,
            lr_start: self.lr_start,
            lr_end: self.lr_end,
            seed: self.seed,
            workers: if self.deterministic { 1 } else { self.threads.max(1) },
        }
    }
}

/// Everything an in-memory run produces.
#[derive(Debug, Clone)]
pub struct Embedded<S> {
    pub distances: LayerDistances<S>,
    pub corpus: WalkCorpus,
    pub embedding: EmbeddingMatrix<S>,
}

fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Runs distances → multilayer graph → walks → skip-gram on `g`. Errors name their stage.
pub fn embed_graph<S: Scalar>(g: &Hypergraph, config: &EmbedConfig) -> Result<Embedded<S>> {
    with_threads(config.threads, || {
        let distances =
            cumulative_distances::<S>(g, &config.distance_config()).map_err(|e| e.in_stage("distances"))?;
        log::info!("distances: {} layers over {} nodes", distances.layer_count(), g.node_count());
        let graph = build_multilayer(&distances);
        log::info!("multilayer graph: {} layers", graph.layer_count());
        let corpus = generate_walks(&graph, &config.walk_config()).map_err(|e| e.in_stage("walks"))?;
        log::info!("walks: {} walks, {} tokens", corpus.walks.len(), corpus.token_count());
        let embedding =
            train::<S>(&corpus, g.labels(), &config.skipgram_config()).map_err(|e| e.in_stage("skipgram"))?;
        Ok(Embedded { distances, corpus, embedding })
    })?
}

/// Output locations of a file-based run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbedOutputs {
    pub embedding: PathBuf,
    pub corpus: Option<PathBuf>,
    pub distances: Option<PathBuf>,
}

impl EmbedOutputs {
    pub fn new(embedding: impl Into<PathBuf>) -> Self {
        EmbedOutputs { embedding: embedding.into(), corpus: None, distances: None }
    }

    /// The manifest sits next to the embedding: `<embedding>.manifest`.
    pub fn manifest(&self) -> PathBuf {
        let mut name = self.embedding.as_os_str().to_owned();
        name.push(".manifest");
        PathBuf::from(name)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn temp_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".partial");
    PathBuf::from(name)
}

/// Writes each file to a temporary sibling, then renames all into place. On failure
/// every temporary and every already-renamed file is removed.
fn commit(files: Vec<(PathBuf, Vec<u8>)>) -> Result<()> {
    let mut written: Vec<PathBuf> = Vec::new();
    let mut renamed: Vec<PathBuf> = Vec::new();
    let outcome = (|| {
        for (path, bytes) in &files {
            let tmp = temp_path(path);
            std::fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
            written.push(tmp);
        }
        for (path, _) in &files {
            std::fs::rename(temp_path(path), path).map_err(|e| Error::io(path, e))?;
            renamed.push(path.clone());
        }
        Ok(())
    })();
    if outcome.is_err() {
        for p in written.iter().chain(&renamed) {
            let _ = std::fs::remove_file(p);
        }
    }
    outcome.map_err(|e: Error| e.in_stage("write"))
}

/// Summary of a file-based run.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbedRun {
    pub manifest: PathBuf,
    pub input_digest: String,
    pub node_count: usize,
    pub edge_count: usize,
}

fn render<S: Scalar>(
    g: &Hypergraph,
    config: &EmbedConfig,
    outputs: &EmbedOutputs,
    input: &Path,
    digest: &str,
) -> Result<Vec<(PathBuf, Vec<u8>)>> {
    let run = embed_graph::<S>(g, config)?;
    let manifest = outputs.manifest();
    let mut files = vec![(outputs.embedding.clone(), run.embedding.to_text().into_bytes())];
    if let Some(path) = &outputs.corpus {
        files.push((path.clone(), run.corpus.to_text(g.labels()).into_bytes()));
    }
    if let Some(path) = &outputs.distances {
        let mut bytes = Vec::new();
        run.distances.write_binary(&mut bytes).map_err(|e| Error::io(path, e))?;
        files.push((path.clone(), bytes));
    }
    let mut text = String::from("# embedding run manifest\n");
    for (k, v) in config.to_pairs() {
        let _ = writeln!(text, "{k}={v}");
    }
    let _ = writeln!(text, "input={}", input.display());
    let _ = writeln!(text, "input_sha256={digest}");
    let _ = writeln!(text, "nodes={}", g.node_count());
    let _ = writeln!(text, "edges={}", g.edge_count());
    let _ = writeln!(text, "output.embedding={}", outputs.embedding.display());
    if let Some(p) = &outputs.corpus {
        let _ = writeln!(text, "output.corpus={}", p.display());
    }
    if let Some(p) = &outputs.distances {
        let _ = writeln!(text, "output.distances={}", p.display());
    }
    files.push((manifest, text.into_bytes()));
    Ok(files)
}

/// Loads `input`, embeds it and writes the requested outputs plus a manifest of all
/// effective parameters and the input's SHA-256.
pub fn run_embed(input: &Path, config: &EmbedConfig, outputs: &EmbedOutputs) -> Result<EmbedRun> {
    let bytes = std::fs::read(input).map_err(|e| Error::io(input, e).in_stage("load"))?;
    let digest = sha256_hex(&bytes);
    let text = String::from_utf8(bytes)
        .map_err(|_| Error::Format(format!("{} is not UTF-8", input.display())).in_stage("load"))?;
    let g = Hypergraph::parse(&text, config.dedupe).map_err(|e| e.in_stage("load"))?;
    let files = match config.precision {
        Precision::F64 => render::<f64>(&g, config, outputs, input, &digest)?,
        Precision::F32 => render::<f32>(&g, config, outputs, input, &digest)?,
    };
    commit(files)?;
    Ok(EmbedRun {
        manifest: outputs.manifest(),
        input_digest: digest,
        node_count: g.node_count(),
        edge_count: g.edge_count(),
    })
}

/// Two-dimensional points for plotting: `label x y [class]` per node.
pub fn points_text<S: Scalar>(emb: &EmbeddingMatrix<S>, classes: Option<&BTreeMap<String, String>>) -> Result<String> {
    if emb.dim() != 2 {
        return Err(Error::InvalidParameter(format!("points export needs dim 2, embedding has dim {}", emb.dim())));
    }
    let mut out = String::new();
    for (v, label) in emb.labels().labels().iter().enumerate() {
        let row = emb.row(v);
        let _ = write!(out, "{label} {} {}", row[0], row[1]);
        if let Some(c) = classes.and_then(|m| m.get(label)) {
            let _ = write!(out, " {c}");
        }
        out.push('\n');
    }
    Ok(out)
}
