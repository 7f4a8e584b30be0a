//! Quantum k-means on a statevector simulator.
//!
//! The crate estimates Euclidean-style distances between real vectors by
//! building swap-test circuits over amplitude or angle embeddings,
//! running them on an internal simulator (exactly or shot-sampled under
//! a noise model), and recovering distances from ancilla statistics.
//! On top of that sit a blockwise subspace metric for narrow devices,
//! a batch-execution backend emulation with per-job limits, Lloyd
//! k-means in classical and swap-test flavors, dataset utilities, and
//! label-permutation-aware scoring.
//!
//! The `qkmeans` binary exposes the pipelines (generate, cluster,
//! classify, sweep, PCA, elbow, resources, report) on the command line.

pub mod backend;
pub mod cluster;
pub mod data;
pub mod dist;
pub mod embed;
pub mod error;
pub mod manifest;
pub mod metrics;
pub mod qsim;

pub use error::{Error, Result};
