//! Certified high-precision interval arithmetic.
//!
//! Every quantity that feeds an inequality verdict (logarithms, `log log n`,
//! critical exponents, `G(n)`, `e^γ`) is carried as an [`HPInterval`] whose
//! endpoints are rounded outward, so the exact value is always enclosed.

mod constants;
mod dyadic;
mod elementary;
mod format;
mod interval;

pub use constants::{euler_gamma, exp_gamma, ln2};
pub use dyadic::{Dyadic, Round};
pub use elementary::{ln_rational, ln_u64};
pub use format::Decimal;
pub use interval::{compare, HPInterval, Verdict};

use thiserror::Error;

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 128;
/// Default ceiling for automatic precision escalation.
pub const DEFAULT_PRECISION_CAP: u32 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("division by an interval containing zero")]
    DivisionByZero,
    #[error("lower bound exceeds upper bound")]
    InvertedBounds,
    #[error("non-finite input")]
    NonFinite,
    #[error("overflow: {0}")]
    Overflow(String),
}
