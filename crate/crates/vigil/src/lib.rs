//! Pool-based active learning with Vendi information gain acquisition.
//!
//! The library simulates the classic pool-based loop: a dropout neural
//! classifier is trained on a small labeled set, an acquisition policy picks
//! the next batch of points to label from the unlabeled pool, an oracle
//! reveals their classes, and the model is retrained. Six policies are
//! provided: `random`, `max_entropy`, `mean_std`, `bald`, `batchbald`, and
//! `vig`. The last scores a candidate by how much labeling it is expected to
//! shrink the Vendi entropy of the model's predictions over the whole pool,
//! which rewards points that are informative about everything else, not just
//! uncertain in isolation.
//!
//! Modules map onto the moving parts:
//!
//! - [`data`] — datasets, pool partitions, prediction sample sets
//! - [`vendi`] — kernels, kernel spectra, Vendi score/entropy, information gain
//! - [`classifier`] — a from-scratch dropout MLP with MC-dropout sampling
//! - [`policies`] — the six acquisition policies
//! - [`simulator`] — the active-learning loop and its metrics
//! - [`dataio`] — synthetic generators, CSV ingestion, splitting
//! - [`manifest`] — experiment sweeps over policies, batch sizes, orders, seeds
//! - [`report`] — aggregation of run logs into plot-ready tables
//!
//! The `vigil` binary exposes all of this as `run`, `sweep`, `score`, and
//! `report` subcommands.

pub mod classifier;
pub mod data;
pub mod dataio;
pub mod manifest;
pub mod policies;
pub mod report;
pub mod seed;
pub mod simulator;
pub mod vendi;

use thiserror::Error;

/// Probabilities are clamped to `[PROB_EPS, 1]` before any logarithm.
pub const PROB_EPS: f64 = 1e-12;

/// Eigenvalues in `(PSD_CLIP_TOL, 0)` are treated as floating-point noise and
/// clipped to zero; anything below is a hard error.
pub const PSD_CLIP_TOL: f64 = -1e-8;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty label set")]
    EmptyLabelSet,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("degenerate embedding: zero-norm vector")]
    DegenerateEmbedding,

    #[error("kernel not PSD: eigenvalue {0} below tolerance")]
    KernelNotPsd(f64),

    #[error("matrix is not symmetric with unit diagonal: {0}")]
    BadKernelMatrix(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("training diverged: loss is not finite")]
    TrainingDiverged,

    #[error("pool exhausted: requested {requested} from {available} unlabeled points")]
    PoolExhausted { requested: usize, available: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("{path}: {msg}")]
    CsvFormat { path: String, msg: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
