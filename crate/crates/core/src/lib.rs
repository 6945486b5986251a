//! Uniform random caterpillars: growth, exact topological indices,
//! closed-form moments and the oracles and Monte Carlo machinery that check
//! them against each other.

pub mod caterpillar;
pub mod error;
pub mod experiments;
pub mod indices;
pub mod oracle;
pub mod stats;
pub mod theory;

pub use caterpillar::{sample_direct, simulate, AdjacencyGraph, Caterpillar, NodeLabel, RngSeed};
pub use error::{Error, Result};
pub use experiments::{run_mc, ExperimentConfig, ExperimentSummary, Sampler};
pub use indices::{IndexKind, IndexValue};
pub use oracle::ExactMoments;
pub use theory::{TheoryValue, Validity};
