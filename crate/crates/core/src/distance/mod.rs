//! Hyper-degrees and the structural distance family built on them.

pub mod degree;
pub mod dtw;
pub mod element;
pub mod layers;
pub mod signature;

pub use degree::{positional_bias, ChdElement, CollapsedHyperDegree, HdElement, HyperDegree};
pub use dtw::dtw;
pub use element::{cmpd, mpd};
pub use layers::{cumulative_distances, DistanceConfig, DistanceLayer, DistanceMode, LayerDistances};
pub use signature::{cncmpd, d0, d0_uncollapsed, dk, NeighborhoodSignature};
