//! Sparse super-resolution of nonnegative signals and images through
//! entropic optimal transport.
//!
//! The crate minimizes a transport distance to a measured distribution plus
//! an entropy penalty over the probability simplex. The entropy term drives
//! mass onto few sites, so a blurred or noisy measurement collapses back to a
//! sparse set of sources. On pixel grids the sparse approximation feeds a
//! peak counter (threshold at a fraction of the maximum, count connected
//! components) that classifies patches as single-source or multi-source.
//!
//! Module map:
//! - [`simplex`] and [`cost`]: probability vectors, entropy, ground costs.
//! - [`sinkhorn`]: entropic transport distances, plans and dual potentials.
//! - [`solver`]: projected gradient descent for the sparsified objective.
//! - [`topology`]: superlevel thresholding and connected-component counts.
//! - [`pipeline`]: multi-band patch classification and batch runs.
//! - [`oracle`]: exact LP and closed-form oracles, Monte Carlo harnesses.
//! - [`synth`]: synthetic blob patches for fixtures and benchmarks.
//! - [`cli`]: the command-line entry points.

pub mod cli;
pub mod cost;
pub mod error;
pub mod oracle;
pub mod pipeline;
pub mod simplex;
pub mod sinkhorn;
pub mod solver;
pub mod synth;
pub mod topology;

pub use cost::{CostMatrix, Geometry, Metric};
pub use error::{Error, Result};
pub use pipeline::{
    classify, classify_band, classify_band_naive, classify_naive, run_batch, BatchSummary,
    ClassificationRecord, Method, MultiBandImage,
};
pub use simplex::ProbVec;
pub use sinkhorn::{grad_wrt_first, sinkhorn, SinkhornConfig, SinkhornResult, TransportPlan};
pub use solver::{
    objective, project_tangent, sparse_approx, SolverConfig, SparseSolveTrace, StopReason,
};
pub use topology::{count_peaks, threshold_superlevel, BinaryImage, Connectivity};
