//! Downstream tasks on learned embeddings: hyperedge-size regression, hyperedge
//! prediction and k-means clustering.

mod kmeans;
mod metrics;
mod negatives;
mod regression;
mod report;
mod split;

pub use kmeans::{kmeans, KMeansResult, MAX_ITERATIONS, SHIFT_TOLERANCE};
pub use metrics::{auc, median, rmse};
pub use negatives::sample_negative_hyperedges;
pub use regression::{LogisticConfig, LogisticModel, RidgeModel};
pub use report::EvalReport;
pub use split::stratified_split;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::scalar::Scalar;
use crate::skipgram::EmbeddingMatrix;

/// Mean of the given vectors.
pub fn pool(vectors: &[&[f64]]) -> Vec<f64> {
    let mut out = vec![0.0; vectors.first().map_or(0, |v| v.len())];
    for v in vectors {
        for (o, x) in out.iter_mut().zip(v.iter()) {
            *o += x;
        }
    }
    let n = vectors.len().max(1) as f64;
    out.iter_mut().for_each(|o| *o /= n);
    out
}

/// Mean-pooled vector of a hyperedge or candidate node set, with its label.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperedgeEmbedding {
    pub nodes: Vec<usize>,
    pub vector: Vec<f64>,
    pub label: f64,
}

/// Embedding rows indexed by the graph's node ids. Fails listing every graph label
/// the embedding lacks.
pub fn node_rows<S: Scalar>(emb: &EmbeddingMatrix<S>, g: &Hypergraph) -> Result<Vec<Vec<f64>>> {
    let mut missing = Vec::new();
    let mut rows = Vec::with_capacity(g.node_count());
    for label in g.labels().labels() {
        match emb.row_by_label(label) {
            Some(r) => rows.push(r.iter().map(|x| x.as_f64()).collect()),
            None => missing.push(label.clone()),
        }
    }
    if missing.is_empty() { Ok(rows) } else { Err(Error::MissingLabels(missing)) }
}

fn pool_sets(rows: &[Vec<f64>], sets: &[Vec<usize>], label: f64) -> Vec<HyperedgeEmbedding> {
    sets.iter()
        .map(|s| {
            let members: Vec<&[f64]> = s.iter().map(|&v| rows[v].as_slice()).collect();
            HyperedgeEmbedding { nodes: s.clone(), vector: pool(&members), label }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SizeRegressionConfig {
    pub train_fraction: f64,
    pub lambda: f64,
    pub seed: u64,
}

impl Default for SizeRegressionConfig {
    fn default() -> Self {
        SizeRegressionConfig { train_fraction: 0.8, lambda: 1.0, seed: 0 }
    }
}

fn check_fraction(f: f64) -> Result<()> {
    if f > 0.0 && f < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("train fraction {f} must lie in (0, 1)")))
    }
}

/// Ridge regression of hyperedge size on mean-pooled member embeddings, scored by RMSE
/// on a size-stratified held-out split.
pub fn size_regression<S: Scalar>(
    emb: &EmbeddingMatrix<S>,
    g: &Hypergraph,
    config: &SizeRegressionConfig,
) -> Result<EvalReport> {
    check_fraction(config.train_fraction)?;
    if g.edge_count() < 5 {
        return Err(Error::Validation(format!("size regression needs at least 5 hyperedges, got {}", g.edge_count())));
    }
    let rows = node_rows(emb, g)?;
    let samples: Vec<HyperedgeEmbedding> =
        g.edges().iter().flat_map(|e| pool_sets(&rows, std::slice::from_ref(e), e.len() as f64)).collect();
    let strata: Vec<usize> = g.edges().iter().map(Vec::len).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (train, test) = stratified_split(&strata, config.train_fraction, &mut rng);
    if train.is_empty() || test.is_empty() {
        return Err(Error::Validation("size regression split left an empty side".into()));
    }
    let x: Vec<Vec<f64>> = train.iter().map(|&i| samples[i].vector.clone()).collect();
    let y: Vec<f64> = train.iter().map(|&i| samples[i].label).collect();
    let model = RidgeModel::fit(&x, &y, config.lambda)?;
    let pred: Vec<f64> = test.iter().map(|&i| model.predict(&samples[i].vector)).collect();
    let truth: Vec<f64> = test.iter().map(|&i| samples[i].label).collect();
    let value = rmse(&pred, &truth)?;
    let mut report = EvalReport::new("size", config.seed, "rmse", value).with_param("lambda", config.lambda);
    report.train_count = train.len();
    report.test_count = test.len();
    report.train_fraction = config.train_fraction;
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifierConfig {
    pub train_fraction: f64,
    pub seed: u64,
    pub logistic: LogisticConfig,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        ClassifierConfig { train_fraction: 0.8, seed: 0, logistic: LogisticConfig::default() }
    }
}

/// Fits logistic regression on a stratified split and reports held-out AUC.
/// Strata are combined with the class label, so both sides see each class in proportion.
pub fn evaluate_classifier(
    features: &[Vec<f64>],
    labels: &[bool],
    strata: &[usize],
    config: &ClassifierConfig,
) -> Result<EvalReport> {
    check_fraction(config.train_fraction)?;
    if features.len() != labels.len() || labels.len() != strata.len() {
        return Err(Error::InvalidParameter("features, labels and strata must align".into()));
    }
    let combined: Vec<usize> = strata.iter().zip(labels).map(|(&s, &l)| 2 * s + usize::from(l)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (train, test) = stratified_split(&combined, config.train_fraction, &mut rng);
    let x: Vec<Vec<f64>> = train.iter().map(|&i| features[i].clone()).collect();
    let y: Vec<bool> = train.iter().map(|&i| labels[i]).collect();
    let model = LogisticModel::fit(&x, &y, &config.logistic)?;
    let scores: Vec<f64> = test.iter().map(|&i| model.decision(&features[i])).collect();
    let truth: Vec<bool> = test.iter().map(|&i| labels[i]).collect();
    let value = auc(&scores, &truth)?;
    let mut report = EvalReport::new("link", config.seed, "auc", value)
        .with_param("l2", config.logistic.l2)
        .with_param("epochs", config.logistic.epochs)
        .with_param("learning_rate", config.logistic.learning_rate);
    report.train_count = train.len();
    report.test_count = test.len();
    report.train_fraction = config.train_fraction;
    Ok(report)
}

/// Hyperedge prediction: existing hyperedges against sampled non-edges, each
/// represented by its mean-pooled member embedding.
pub fn hyperedge_prediction<S: Scalar>(
    emb: &EmbeddingMatrix<S>,
    g: &Hypergraph,
    negatives: &[Vec<usize>],
    config: &ClassifierConfig,
) -> Result<EvalReport> {
    let rows = node_rows(emb, g)?;
    let positives: std::collections::HashSet<&[usize]> = g.edges().iter().map(Vec::as_slice).collect();
    for neg in negatives {
        if let Some(&v) = neg.iter().find(|&&v| v >= g.node_count()) {
            return Err(Error::NodeOutOfRange { id: v, len: g.node_count() });
        }
        let mut sorted = neg.clone();
        sorted.sort_unstable();
        if positives.contains(sorted.as_slice()) {
            return Err(Error::Validation(format!("negative set {neg:?} is an existing hyperedge")));
        }
    }
    let mut samples = pool_sets(&rows, g.edges(), 1.0);
    samples.extend(pool_sets(&rows, negatives, 0.0));
    let features: Vec<Vec<f64>> = samples.iter().map(|s| s.vector.clone()).collect();
    let labels: Vec<bool> = samples.iter().map(|s| s.label > 0.5).collect();
    let strata: Vec<usize> = samples.iter().map(|s| s.nodes.len()).collect();
    let mut report = evaluate_classifier(&features, &labels, &strata, config)?;
    report.params.insert("negatives".into(), negatives.len().to_string());
    Ok(report)
}

/// k-means over node embeddings. The report's value is the final inertia and its
/// assignments follow the embedding's row order.
pub fn kmeans_cluster<S: Scalar>(emb: &EmbeddingMatrix<S>, k: usize, seed: u64) -> Result<EvalReport> {
    let points: Vec<Vec<f64>> =
        (0..emb.node_count()).map(|v| emb.row(v).iter().map(|x| x.as_f64()).collect()).collect();
    let result = kmeans(&points, k, seed)?;
    let mut report = EvalReport::new("cluster", seed, "inertia", result.inertia())
        .with_param("k", k)
        .with_param("iterations", result.iterations);
    report.train_count = points.len();
    report.train_fraction = 1.0;
    report.assignments = Some(result.assignments);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::NodeLabelMap;
    use rand::Rng;

    fn embedding_for(g: &Hypergraph, rows: Vec<Vec<f64>>) -> EmbeddingMatrix<f64> {
        let labels: NodeLabelMap = g.labels().labels().iter().collect();
        EmbeddingMatrix::from_rows(labels, rows).unwrap()
    }

    #[test]
    fn pooling_a_repeated_node_returns_it() {
        let v = [0.25, -1.0, 3.0];
        assert_eq!(pool(&[&v, &v]), v.to_vec());
        assert_eq!(pool(&[&[1.0, 2.0], &[3.0, 6.0]]), vec![2.0, 4.0]);
    }

    #[test]
    fn missing_labels_are_listed() {
        let g = Hypergraph::parse("a b\nb c\n", false).unwrap();
        let labels: NodeLabelMap = ["a", "b"].into_iter().collect();
        let emb = EmbeddingMatrix::from_rows(labels, vec![vec![0.0], vec![1.0]]).unwrap();
        match node_rows(&emb, &g) {
            Err(Error::MissingLabels(m)) => assert_eq!(m, vec!["c".to_string()]),
            other => panic!("unexpected {other:?}"),
        }
    }

    fn fixture() -> (Hypergraph, EmbeddingMatrix<f64>) {
        let mut text = String::new();
        for i in 0..40 {
            let s = 2 + i % 3;
            let members: Vec<String> = (0..s).map(|j| format!("n{}", (i * 5 + j * 7) % 50)).collect();
            text.push_str(&members.join(" "));
            text.push('\n');
        }
        let g = Hypergraph::parse(&text, true).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let rows = (0..g.node_count()).map(|_| (0..3).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
        let emb = embedding_for(&g, rows);
        (g, emb)
    }

    #[test]
    fn ridge_shrinkage_never_beats_best_lambda() {
        let (g, emb) = fixture();
        let rmse_at = |lambda: f64| {
            size_regression(&emb, &g, &SizeRegressionConfig { lambda, ..Default::default() }).unwrap().value
        };
        let best = [1e-6, 1e-3, 1e-1, 1.0, 10.0].into_iter().map(rmse_at).fold(f64::INFINITY, f64::min);
        assert!(rmse_at(1e6) >= best);
    }

    #[test]
    fn size_regression_needs_five_edges() {
        let g = Hypergraph::parse("a b\nb c\nc d\nd e\n", false).unwrap();
        let emb = embedding_for(&g, vec![vec![0.0]; 5]);
        assert!(size_regression(&emb, &g, &SizeRegressionConfig::default()).is_err());
    }

    #[test]
    fn report_is_seeded() {
        let (g, emb) = fixture();
        let cfg = SizeRegressionConfig { seed: 9, ..Default::default() };
        let a = size_regression(&emb, &g, &cfg).unwrap();
        assert_eq!(a, size_regression(&emb, &g, &cfg).unwrap());
        assert_eq!(a.seed, 9);
        assert_eq!(a.train_count + a.test_count, g.edge_count());
        assert!(a.value.is_finite());
    }

    #[test]
    fn separable_classifier_scores_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut features = Vec::new();
        let mut labels = Vec::new();
        for i in 0..200 {
            let positive = i % 2 == 0;
            let offset = if positive { 2.0 } else { -2.0 };
            features.push(vec![offset + rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]);
            labels.push(positive);
        }
        let strata = vec![0; features.len()];
        let r = evaluate_classifier(&features, &labels, &strata, &ClassifierConfig::default()).unwrap();
        assert_eq!(r.value, 1.0);
    }

    #[test]
    fn all_positive_is_single_class() {
        let features = vec![vec![0.0]; 10];
        let labels = vec![true; 10];
        let strata = vec![2; 10];
        assert!(matches!(
            evaluate_classifier(&features, &labels, &strata, &ClassifierConfig::default()),
            Err(Error::SingleClass)
        ));
    }

    #[test]
    fn prediction_rejects_positive_negatives() {
        let (g, emb) = fixture();
        let negatives = vec![g.edges()[0].clone()];
        assert!(hyperedge_prediction(&emb, &g, &negatives, &ClassifierConfig::default()).is_err());
        let negatives = sample_negative_hyperedges(&g, 1);
        let r = hyperedge_prediction(&emb, &g, &negatives, &ClassifierConfig::default()).unwrap();
        assert!((0.0..=1.0).contains(&r.value));
    }

    #[test]
    fn cluster_report_has_assignments() {
        let (_, emb) = fixture();
        let r = kmeans_cluster(&emb, 6, 0).unwrap();
        let a = r.assignments.unwrap();
        assert_eq!(a.len(), emb.node_count());
        assert!(a.iter().all(|&c| c < 6));
        assert!(kmeans_cluster(&emb, emb.node_count() + 1, 0).is_err());
    }
}
