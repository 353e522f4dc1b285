//! Numerical core for 3PL item-response assessment with fuzzy inference.
//!
//! Everything here is `no_std` + `alloc`: item response theory primitives,
//! Bayesian and Gauss-Seidel estimation, (1+1)-ES form assembly, a Mamdani
//! fuzzy engine with its assessment knowledge base, swarm/genetic tuning of
//! that knowledge base, evaluation metrics, and synthetic cohort generation.
//! File formats and the command line live in the `pfml` crate.

#![no_std]

extern crate alloc;

pub mod assembly;
pub mod cohort;
pub mod error;
pub mod estimation;
pub mod evaluation;
pub mod fuzzy;
pub mod irt;
pub mod pfml;

mod math;

pub use error::{Error, Result};
pub use irt::{Ability, ItemParams, PerformanceLevel};

/// Seeded generator used for every stochastic routine in the crate.
pub type SeededRng = rand_chacha::ChaCha8Rng;

/// Builds the crate's RNG from a 64-bit seed.
pub fn seeded_rng(seed: u64) -> SeededRng {
    use rand::SeedableRng;
    SeededRng::seed_from_u64(seed)
}
