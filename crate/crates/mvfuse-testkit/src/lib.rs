//! Test support for the `mvfuse` library: brute-force reference oracles for
//! proximal maps and clustering metrics, exhaustive partition enumeration,
//! and deterministic planted-signal datasets with known ground truth.
//!
//! Everything here is correctness infrastructure for tests and benchmarks —
//! it trades speed for independence from the production implementations, so
//! an agreement between the two is meaningful evidence.

pub mod oracles;
pub mod planted;
pub mod rng;

pub use oracles::{
    all_partitions, jaccard, metric_oracles, nmi_oracle, prox_oracle_group, prox_oracle_scalar,
    OracleError, ScalarPiece,
};
pub use planted::{make_planted, make_planted_with_noise, PlantedInstance};
pub use rng::{poisson, standard_normal, uniform01, ChaCha8Rng, SeedableRng};
