//! Jacob's ladder from Hardy's Z-function.
//!
//! The crate evaluates `Z(t)`, integrates `Z²` over arbitrary intervals,
//! keeps the cumulative Hardy–Littlewood integral `I(T) = ∫₀ᵀ Z²(t) dt`
//! in a resumable checkpoint store, and constructs the ladder `φ(T)` as the
//! root of `Φ(φ) = I(T)` where `Φ(y) = ∫₀^{μ(y)} Z²(t) e^{-2t/y} dt`.
//! On top of that the [`harness`] module checks the exact identities and the
//! asymptotic formulas for short and microscopic parts of `∫ Z²` at
//! desk-scale heights.
//!
//! Most operations hang off an [`Engine`], which owns the configured
//! thread pool and the shared caches (the `Z²` moment table, the
//! checkpoint store and the prime sieve).

pub mod cli;
mod engine;
mod error;
pub mod harness;
pub mod ladder;
pub mod quadrature;
pub mod zeta;

pub use engine::{Config, Engine};
pub use error::{Error, Result};
