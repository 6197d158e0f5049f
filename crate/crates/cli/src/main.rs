//! Command-line front end for hypergraph structural embeddings.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hypers2v::eval::{
    hyperedge_prediction, kmeans_cluster, median, sample_negative_hyperedges, size_regression, ClassifierConfig,
    EvalReport, LogisticConfig, SizeRegressionConfig,
};
use hypers2v::pipeline::{points_text, run_embed, EmbedConfig, EmbedOutputs};
use hypers2v::toygen::{coauthorship, generate_toy, save_colors, CoauthorConfig, ToySpec};
use hypers2v::{EmbeddingMatrix, Error, Hypergraph};

#[derive(Parser)]
#[command(name = "hypers2v", version, about = "Structural node embeddings for hypergraphs")]
struct Cli {
    /// Worker threads for parallel stages.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Embed the nodes of a hyperedge-list file.
    Embed(EmbedArgs),
    /// Hyperedge-size regression (RMSE) over one or more split seeds.
    EvalSize(EvalSizeArgs),
    /// Hyperedge prediction (AUC) against sampled non-edges.
    EvalLink(EvalLinkArgs),
    /// k-means clustering of node embeddings.
    Cluster(ClusterArgs),
    /// Write a toy hypergraph and its colour sidecar.
    Toygen(ToygenArgs),
    /// Write the clique expansion as an edge list.
    ExportExpansion(ExportArgs),
    /// Write `label x y [class]` rows from a 2-D embedding.
    Points(PointsArgs),
}

#[derive(Args)]
struct EmbedArgs {
    input: PathBuf,
    /// Embedding output path; the manifest goes to `<output>.manifest`.
    #[arg(short, long)]
    output: PathBuf,
    /// Flat key=value config; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Binary cache of the per-hop distance tables.
    #[arg(long)]
    distances: Option<PathBuf>,
    #[arg(long)]
    k_max: Option<usize>,
    #[arg(long)]
    walks: Option<usize>,
    #[arg(long)]
    length: Option<usize>,
    #[arg(long)]
    window: Option<usize>,
    /// Probability of moving within the current layer.
    #[arg(long)]
    q: Option<f64>,
    /// Exponent of the magnitude/position norm.
    #[arg(long)]
    n: Option<u32>,
    /// collapsed or uncollapsed
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    negative: Option<usize>,
    /// f32 or f64
    #[arg(long)]
    precision: Option<String>,
    /// true forces single-worker training.
    #[arg(long)]
    deterministic: Option<bool>,
    /// Drop repeated hyperedges on load.
    #[arg(long)]
    dedupe: Option<bool>,
}

#[derive(Args)]
struct SeedArgs {
    /// Split seeds, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0,1,2,3,4")]
    seeds: Vec<u64>,
    #[arg(long, default_value_t = 0.8)]
    train_frac: f64,
    /// Drop repeated hyperedges on load; match the setting used for embedding.
    #[arg(long)]
    dedupe: bool,
    /// CSV report path; stdout when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Also write key=value report blocks here.
    #[arg(long)]
    kv: Option<PathBuf>,
}

#[derive(Args)]
struct EvalSizeArgs {
    #[arg(long)]
    embedding: PathBuf,
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    #[command(flatten)]
    seeds: SeedArgs,
}

#[derive(Args)]
struct EvalLinkArgs {
    #[arg(long)]
    embedding: PathBuf,
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = 1e-4)]
    l2: f64,
    #[arg(long, default_value_t = 500)]
    epochs: usize,
    #[arg(long, default_value_t = 0.1)]
    learning_rate: f64,
    /// Use only the existing hyperedges (no negatives); always a single-class error.
    #[arg(long)]
    positives_only: bool,
    #[command(flatten)]
    seeds: SeedArgs,
}

#[derive(Args)]
struct ClusterArgs {
    #[arg(long)]
    embedding: PathBuf,
    #[arg(short, default_value_t = 6)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `label cluster` rows; stdout when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    kv: Option<PathBuf>,
}

#[derive(Args)]
struct ToygenArgs {
    /// star, circle, mesh, tower, twin or coauthor
    topology: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: PathBuf,
    /// Colour sidecar path; defaults to `<output>.colors`.
    #[arg(long)]
    colors: Option<PathBuf>,
    /// Author count for the coauthor generator.
    #[arg(long, default_value_t = 1000)]
    authors: usize,
    #[arg(long, default_value_t = 900)]
    papers: usize,
}

#[derive(Args)]
struct ExportArgs {
    graph: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct PointsArgs {
    #[arg(long)]
    embedding: PathBuf,
    /// `label class` sidecar, e.g. from toygen.
    #[arg(long)]
    colors: Option<PathBuf>,
    #[arg(short, long)]
    output: PathBuf,
}

fn write(path: &Path, text: &str) -> hypers2v::Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn emit(path: Option<&Path>, text: &str) -> hypers2v::Result<()> {
    match path {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn embed(args: EmbedArgs, threads: usize) -> hypers2v::Result<()> {
    let mut cfg = EmbedConfig { threads, ..EmbedConfig::default() };
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        cfg.apply_text(&text, true)?;
        cfg.threads = threads;
    }
    let flags: [(&str, Option<String>); 12] = [
        ("k_max", args.k_max.map(|v| v.to_string())),
        ("walks", args.walks.map(|v| v.to_string())),
        ("length", args.length.map(|v| v.to_string())),
        ("window", args.window.map(|v| v.to_string())),
        ("q", args.q.map(|v| v.to_string())),
        ("n", args.n.map(|v| v.to_string())),
        ("mode", args.mode),
        ("dim", args.dim.map(|v| v.to_string())),
        ("seed", args.seed.map(|v| v.to_string())),
        ("epochs", args.epochs.map(|v| v.to_string())),
        ("negative", args.negative.map(|v| v.to_string())),
        ("precision", args.precision),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            cfg.set(key, &v)?;
        }
    }
    if let Some(d) = args.deterministic {
        cfg.deterministic = d;
    }
    if let Some(d) = args.dedupe {
        cfg.dedupe = d;
    }
    let outputs = EmbedOutputs { embedding: args.output, corpus: args.corpus, distances: args.distances };
    let run = run_embed(&args.input, &cfg, &outputs)?;
    log::info!("embedded {} nodes; manifest {}", run.node_count, run.manifest.display());
    Ok(())
}

fn load_pair(embedding: &Path, graph: &Path, dedupe: bool) -> hypers2v::Result<(EmbeddingMatrix, Hypergraph)> {
    Ok((EmbeddingMatrix::load(embedding)?, Hypergraph::load(graph, dedupe)?))
}

fn report_out(reports: &[EvalReport], args: &SeedArgs) -> hypers2v::Result<()> {
    let mut csv = format!("{}\n", EvalReport::csv_header());
    for r in reports {
        let _ = writeln!(csv, "{}", r.csv_row());
    }
    let values: Vec<f64> = reports.iter().map(|r| r.value).collect();
    if let (Some(m), Some(first)) = (median(&values), reports.first()) {
        let _ = writeln!(csv, "{},median,{},{},,,{},", first.task, first.metric, m, args.train_frac);
    }
    emit(args.output.as_deref(), &csv)?;
    if let Some(path) = &args.kv {
        let blocks: Vec<String> = reports.iter().map(EvalReport::to_kv).collect();
        write(path, &blocks.join("\n"))?;
    }
    Ok(())
}

fn eval_size(args: EvalSizeArgs) -> hypers2v::Result<()> {
    let (emb, g) = load_pair(&args.embedding, &args.graph, args.seeds.dedupe)?;
    let reports = args
        .seeds
        .seeds
        .iter()
        .map(|&seed| {
            let cfg = SizeRegressionConfig { train_fraction: args.seeds.train_frac, lambda: args.lambda, seed };
            size_regression(&emb, &g, &cfg)
        })
        .collect::<hypers2v::Result<Vec<_>>>()?;
    report_out(&reports, &args.seeds)
}

fn eval_link(args: EvalLinkArgs) -> hypers2v::Result<()> {
    let (emb, g) = load_pair(&args.embedding, &args.graph, args.seeds.dedupe)?;
    let logistic = LogisticConfig { l2: args.l2, epochs: args.epochs, learning_rate: args.learning_rate };
    let reports = args
        .seeds
        .seeds
        .iter()
        .map(|&seed| {
            let negatives = if args.positives_only { Vec::new() } else { sample_negative_hyperedges(&g, seed) };
            let cfg = ClassifierConfig { train_fraction: args.seeds.train_frac, seed, logistic };
            hyperedge_prediction(&emb, &g, &negatives, &cfg)
        })
        .collect::<hypers2v::Result<Vec<_>>>()?;
    report_out(&reports, &args.seeds)
}

fn cluster(args: ClusterArgs) -> hypers2v::Result<()> {
    let emb = EmbeddingMatrix::load(&args.embedding)?;
    let report = kmeans_cluster(&emb, args.k, args.seed)?;
    let mut text = String::new();
    if let Some(assignments) = &report.assignments {
        for (label, c) in emb.labels().labels().iter().zip(assignments) {
            let _ = writeln!(text, "{label} {c}");
        }
    }
    emit(args.output.as_deref(), &text)?;
    if let Some(path) = &args.kv {
        write(path, &report.to_kv())?;
    }
    Ok(())
}

fn toygen(args: ToygenArgs) -> hypers2v::Result<()> {
    if args.topology == "coauthor" {
        let cfg = CoauthorConfig { authors: args.authors, papers: args.papers, seed: args.seed, ..Default::default() };
        return coauthorship(&cfg)?.save(&args.output);
    }
    let (g, colors) = generate_toy(args.topology.parse::<ToySpec>()?, args.seed)?;
    g.save(&args.output)?;
    let sidecar = args.colors.unwrap_or_else(|| {
        let mut name = args.output.as_os_str().to_owned();
        name.push(".colors");
        PathBuf::from(name)
    });
    save_colors(sidecar, &g, &colors)
}

fn points(args: PointsArgs) -> hypers2v::Result<()> {
    let emb = EmbeddingMatrix::load(&args.embedding)?;
    let classes = match &args.colors {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            let mut map = BTreeMap::new();
            for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
                let mut parts = line.split_whitespace();
                match (parts.next(), parts.next()) {
                    (Some(l), Some(c)) => map.insert(l.to_string(), c.to_string()),
                    _ => return Err(Error::Parse { line: i + 1, message: "expected 'label class'".into() }),
                };
            }
            Some(map)
        }
        None => None,
    };
    write(&args.output, &points_text(&emb, classes.as_ref())?)
}

fn run(cli: Cli) -> hypers2v::Result<()> {
    let threads = cli.threads.max(1);
    match cli.command {
        Command::Embed(a) => embed(a, threads),
        Command::EvalSize(a) => eval_size(a),
        Command::EvalLink(a) => eval_link(a),
        Command::Cluster(a) => cluster(a),
        Command::Toygen(a) => toygen(a),
        Command::ExportExpansion(a) => write(&a.output, &Hypergraph::load(&a.graph, false)?.clique_expansion_text()),
        Command::Points(a) => points(a),
    }
}

/// 2 for bad parameters, 3 for bad inputs, 4 for internal failures.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidParameter(_) => 2,
        Error::Stage { source, .. } => exit_code(source),
        _ if e.is_data_error() => 3,
        _ => 4,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
