//! Generation of colossally abundant numbers.
//!
//! `n` is colossally abundant when, for some `ε > 0`, it maximises
//! `σ(k)/k^(1+ε)` over all `k`. As `ε` decreases the maximiser changes only
//! at critical values where the optimal exponent of one prime rises by one,
//! so the sequence is produced by a priority queue of pending exponent
//! increments keyed by their critical `ε`.

mod engine;
mod event;
mod factored;
mod step;

pub use engine::{CaEngine, Checkpoint, EngineConfig};
pub use event::{critical_epsilon, CriticalEvent};
pub use factored::{recompute_logs, sigma_prime_power, FactoredCA, Run, Snapshot};
pub use step::{verify_step, CAStep, QuotientPrime, StepKind};

use thiserror::Error;

use crate::numeric::NumericError;
use crate::primes::PrimeError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Prime(#[from] PrimeError),
    #[error("invalid engine configuration: {0}")]
    Config(String),
    #[error("engine invariant violated: {0}")]
    Invariant(String),
}
