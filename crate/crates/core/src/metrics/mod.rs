//! Quantities evaluated along the colossally abundant sequence: Robin's
//! function, certified verdicts against `e^γ`, exact abundancy-ratio laws,
//! double-logarithm and decay diagnostics, and band margins.

mod band;
mod lemmas;
mod ratio;
mod robin;

pub use band::{band_margin, classify_band, BandClass, BandParams, BandReading, MarginReport};
pub use lemmas::{
    aek7_ratio, growth_decomposition, lemma1_ratio, lemma2_value, lemma3_pair, Growth,
    Lemma1Reading, Lemma3Pair,
};
pub use ratio::{
    abundancy_ratio_exact, single_prime_ratio, verify_lemma45, CheckMode, Lemma45Check, RatioCase,
    RatioKind,
};
pub use robin::{g_value, robin_check, RobinStatus, RobinVerdict, ROBIN_THRESHOLD};

use thiserror::Error;

use crate::ca::EngineError;
use crate::numeric::NumericError;

/// Largest `n` for which σ-dependent quantities are evaluated exactly.
pub const DEFAULT_EXACT_BOUND: u64 = 1_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("inconsistent input: {0}")]
    Contract(String),
}
