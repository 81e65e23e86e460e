use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

use crate::numeric::{ln_rational, ln_u64, HPInterval, NumericError};

/// Pending exponent increment `p^(a-1) -> p^a` and the ε at which it happens.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalEvent {
    pub prime: u64,
    /// Target exponent `a >= 1`.
    pub exponent: u32,
    pub epsilon: HPInterval,
    /// `ln p`, reused when the event fires.
    pub ln_p: HPInterval,
    /// `ln(σ(p^a)/p^a) - ln(σ(p^(a-1))/p^(a-1))`, the log-abundancy gain.
    pub log_gain: HPInterval,
}

/// Critical exponent for raising `p` from `a - 1` to `a`:
///
/// the local factor `σ(p^a)/p^(a(1+ε))` beats `σ(p^(a-1))/p^((a-1)(1+ε))`
/// exactly when `σ(p^a)/σ(p^(a-1)) = (p^(a+1)-1)/(p^a-1) >= p^(1+ε)`, so the
/// threshold is `ln((p^(a+1)-1)/(p^a-1))/ln p - 1`. It is evaluated as
/// `ln((p^(a+1)-1)/(p^(a+1)-p)) / ln p`, which avoids the cancellation.
pub fn critical_epsilon(p: u64, a: u32, precision: u32) -> Result<HPInterval, NumericError> {
    let ln_p = ln_u64(p, precision + 8)?;
    epsilon_with_ln(p, a, &ln_p, precision)
}

fn epsilon_with_ln(
    p: u64,
    a: u32,
    ln_p: &HPInterval,
    precision: u32,
) -> Result<HPInterval, NumericError> {
    Ok(epsilon_and_gain(p, a, ln_p, precision)?.0)
}

/// `(ε(p, a), ln((p^(a+1)-1)/(p^(a+1)-p)))`; the second value is both the
/// numerator of ε and the log-abundancy gain of the increment.
fn epsilon_and_gain(
    p: u64,
    a: u32,
    ln_p: &HPInterval,
    precision: u32,
) -> Result<(HPInterval, HPInterval), NumericError> {
    if p < 2 || a == 0 {
        return Err(NumericError::Domain(format!(
            "critical ε needs p >= 2, a >= 1 (got {p}, {a})"
        )));
    }
    let pa1: BigUint = num_traits::pow(BigUint::from(p), a as usize + 1);
    let num = BigInt::from(&pa1 - 1u32);
    let den = BigInt::from(pa1 - p);
    let gain = ln_rational(&num, &den, precision + 8)?;
    let eps = gain.div(ln_p)?.with_precision(precision);
    Ok((eps, gain.with_precision(precision)))
}

impl CriticalEvent {
    pub fn new(prime: u64, exponent: u32, precision: u32) -> Result<Self, NumericError> {
        let ln_p = ln_u64(prime, precision + 8)?;
        CriticalEvent::with_ln(prime, exponent, ln_p, precision)
    }

    pub(crate) fn with_ln(
        prime: u64,
        exponent: u32,
        ln_p: HPInterval,
        precision: u32,
    ) -> Result<Self, NumericError> {
        let (epsilon, log_gain) = epsilon_and_gain(prime, exponent, &ln_p, precision)?;
        Ok(CriticalEvent {
            prime,
            exponent,
            epsilon,
            ln_p,
            log_gain,
        })
    }

    /// The same event recomputed at another precision.
    pub fn refined(&self, precision: u32) -> Result<Self, NumericError> {
        CriticalEvent::new(self.prime, self.exponent, precision)
    }

    /// The successor event for the same prime.
    pub(crate) fn successor(&self, precision: u32) -> Result<Self, NumericError> {
        CriticalEvent::with_ln(self.prime, self.exponent + 1, self.ln_p.clone(), precision)
    }
}

/// Max-heap key: upper bound of ε, then lower bound, then smaller prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct QueueEntry(pub CriticalEvent);

impl Ord for QueueEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .epsilon
            .hi()
            .cmp(other.0.epsilon.hi())
            .then_with(|| self.0.epsilon.lo().cmp(other.0.epsilon.lo()))
            .then_with(|| other.0.prime.cmp(&self.0.prime))
    }
}

impl PartialOrd for QueueEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
