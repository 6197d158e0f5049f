//! Structure-based node embeddings for hypergraphs.
//!
//! Pipeline: [`hypergraph`] → [`distance`] (hyper-degree distances per hop) →
//! [`multilayer`] (similarity layers) → [`walk`] (biased multi-layer walks) →
//! [`skipgram`] (SGNS training), with downstream tasks in [`eval`].
//!
//! The numeric core is generic over [`Scalar`]; the aliases below fix it to `f64`
//! or `f32`.

pub mod automorphism;
pub mod datasets;
pub mod distance;
pub mod error;
pub mod eval;
pub mod hypergraph;
pub mod multilayer;
pub mod pipeline;
pub mod scalar;
pub mod skipgram;
pub mod toygen;
pub mod walk;

pub use error::{Error, Result};
pub use hypergraph::{Hypergraph, NodeLabelMap, SimpleGraph};
pub use scalar::Scalar;

pub type LayerDistances = distance::LayerDistances<f64>;
pub type LayerDistancesF32 = distance::LayerDistances<f32>;
pub type MultilayerGraph = multilayer::MultilayerGraph<f64>;
pub type MultilayerGraphF32 = multilayer::MultilayerGraph<f32>;
pub type EmbeddingMatrix = skipgram::EmbeddingMatrix<f64>;
pub type EmbeddingMatrixF32 = skipgram::EmbeddingMatrix<f32>;
