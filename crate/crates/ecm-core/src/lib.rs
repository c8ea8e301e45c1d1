//! Entropy c-means: fuzzy center-based clustering posed as a two-objective
//! optimization problem (cluster compactness against membership entropy) and
//! solved with evolutionary multi-objective engines.
//!
//! The crate provides:
//!
//! - [`fuzzy`]: the objective pair, the entropy membership formula, the sigma
//!   heuristic, and chromosome evaluation;
//! - [`nsga2`] and [`moead`]: generic two-objective engines over real-vector
//!   chromosomes with a pluggable evaluator;
//! - [`ao`]: alternating-optimization baselines (fuzzy c-means and maximum
//!   entropy inference);
//! - [`moga`]: a comparison formulation minimizing the squared-membership
//!   cost together with the Xie-Beni index, run on the NSGA-II engine;
//! - [`metrics`]: adjusted Rand index, Schott spacing, epsilon indicator;
//! - [`select`]: knee-based trade-off selection from a front;
//! - [`datagen`]: seeded Gaussian-mixture generators for the built-in
//!   synthetic benchmark family.
//!
//! All numerics are generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases at the crate root fix the common double-precision choice.

pub mod ao;
pub mod data;
pub mod datagen;
pub mod error;
pub mod fuzzy;
pub mod metrics;
pub mod moead;
pub mod moga;
pub mod nsga2;
pub mod scalar;
pub mod select;

pub use data::{Clustering, Dataset, LabeledDataset};
pub use error::{EcmError, Result};
pub use fuzzy::{EcmProblem, ExponentForm};
pub use moead::MoeadParams;
pub use nsga2::Nsga2Params;
pub use scalar::Scalar;
pub use select::{SelectionReason, SelectionReport};

/// Double-precision dataset.
pub type Dataset64 = data::Dataset<f64>;
/// Double-precision labeled dataset.
pub type LabeledDataset64 = data::LabeledDataset<f64>;
/// Double-precision clustering result.
pub type Clustering64 = data::Clustering<f64>;
/// Double-precision entropy c-means problem.
pub type EcmProblem64 = fuzzy::EcmProblem<f64>;
/// Double-precision engine result.
pub type EngineResult64 = nsga2::EngineResult<f64>;
/// Double-precision front member.
pub type Solution64 = nsga2::Solution<f64>;
