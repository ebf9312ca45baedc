//! Population-based solving of two-player zero-sum games.
//!
//! The crate grows a population of best responses per player against the
//! Nash equilibrium of the restricted ("meta") game, and initializes each new
//! best response by a Nash-weighted average of the parameters of every
//! policy already in the population.
//!
//! Layout:
//!
//! - [`games`]: the extensive-form game abstraction, the benchmark games, and
//!   exact evaluation (expected value, best response, exploitability).
//! - [`policies`]: tabular, parametric and point policies, parameter fusion,
//!   scratch initializers, ensembles, KL diagnostics and distillation.
//! - [`meta`]: the restricted game and its meta-strategy solvers.
//! - [`oracles`]: best-response oracles (exact, Q-learning, DQN, gradient).
//! - [`psro`]: the outer loop, initialization menu and approximate
//!   exploitability.
//! - [`experiment`]: configuration files, run outputs, sweeps and SVG plots.
//!
//! Runnable walkthroughs live in this crate's `examples/` directory.

pub mod error;
pub mod experiment;
pub mod games;
pub mod meta;
pub mod oracles;
pub mod policies;
pub mod psro;
pub mod rng;

pub use error::{Error, Result};
