use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::MetricsError;
use crate::ca::FactoredCA;
use crate::numeric::{compare, exp_gamma, HPInterval, Verdict};

/// Robin's inequality is only claimed above this value.
pub const ROBIN_THRESHOLD: u64 = 5040;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RobinStatus {
    Satisfies,
    Violates,
    /// `n <= 5040`, outside the range of the inequality.
    Boundary,
    /// Intervals still overlap at the precision cap.
    Undecided,
}

impl RobinStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            RobinStatus::Satisfies => "satisfies",
            RobinStatus::Violates => "violates",
            RobinStatus::Boundary => "boundary",
            RobinStatus::Undecided => "undecided",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RobinVerdict {
    pub status: RobinStatus,
    /// `G(n)`; absent for `n <= 2` where `log log n <= 0`.
    pub g_value: Option<HPInterval>,
    /// `e^γ - G(n)`.
    pub margin: Option<HPInterval>,
    /// Precision at which the verdict was reached.
    pub precision: u32,
}

/// `G(n) = σ(n) / (n log log n) = exp(log_abundancy) / ln(log_n)`.
pub fn g_value(state: &FactoredCA, precision: u32) -> Result<HPInterval, MetricsError> {
    let state = state.at_precision(precision)?;
    let log_n = state.log_n();
    if compare(log_n, &HPInterval::one(precision)) != Verdict::Greater {
        return Err(MetricsError::Domain(format!(
            "log log n is not positive at step {}",
            state.step_index()
        )));
    }
    let abundancy = state.log_abundancy().exp()?;
    Ok(abundancy.div(&log_n.ln()?)?)
}

/// Certified comparison of `G(n)` with `e^γ`, doubling the precision from
/// the state's own until the intervals separate or `precision_cap` is hit.
pub fn robin_check(state: &FactoredCA, precision_cap: u32) -> Result<RobinVerdict, MetricsError> {
    let mut precision = state.precision();
    let small = state
        .value_if_at_most(&BigUint::from(ROBIN_THRESHOLD))
        .is_some();
    loop {
        let (g, margin) = if state.log_n().hi() <= HPInterval::one(precision).lo() {
            (None, None)
        } else {
            let g = g_value(state, precision)?;
            let margin = exp_gamma(precision).sub(&g);
            (Some(g), Some(margin))
        };
        if small {
            return Ok(RobinVerdict {
                status: RobinStatus::Boundary,
                g_value: g,
                margin,
                precision,
            });
        }
        let g = g.ok_or_else(|| MetricsError::Domain("n > 5040 with log log n <= 0".into()))?;
        let status = match compare(&g, &exp_gamma(precision)) {
            Verdict::Less => Some(RobinStatus::Satisfies),
            Verdict::Greater => Some(RobinStatus::Violates),
            Verdict::Overlap if precision >= precision_cap => Some(RobinStatus::Undecided),
            Verdict::Overlap => None,
        };
        if let Some(status) = status {
            return Ok(RobinVerdict {
                status,
                g_value: Some(g),
                margin,
                precision,
            });
        }
        precision = (precision * 2).min(precision_cap);
    }
}
