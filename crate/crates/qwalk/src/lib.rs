//! Simulator for discrete-time coined quantum walks and their optical cavity
//! realizations.
//!
//! The crate has three layers:
//!
//! * [`coin`] and [`walk`]: the abstract walk. A two-component amplitude pair
//!   per lattice site evolves under a conditional shift followed (or preceded)
//!   by a 2x2 unitary coin, on the infinite line or on a ring of `2M + 1`
//!   sites.
//! * [`optics`]: lossless element-level models of cavity setups that realize
//!   the same dynamics on a frequency lattice. The two-level degree of
//!   freedom (the "cebit") is polarization, path, or a hybrid of both, and
//!   the coin is built from wave plates, beam splitters, or electro-optic
//!   modulators.
//! * [`analysis`]: probability distributions, moments, asymptotic moment
//!   predictions for the Konno coin family, the classical random-walk
//!   baseline, and total-variation comparisons.
//!
//! With the default `parallel` feature the per-step site update runs on
//! rayon for wide states; disabling default features gives a dependency-free
//! sequential build with identical results.

pub mod analysis;
pub mod coin;
pub mod error;
pub mod optics;
pub mod walk;

pub use coin::{CoinDiagnostics, CoinOperator, CoinState};
pub use error::{Error, Result};
pub use walk::{StepOrdering, WalkState, WalkTopology};

/// Complex amplitude type used throughout the crate.
pub type C64 = num_complex::Complex64;
