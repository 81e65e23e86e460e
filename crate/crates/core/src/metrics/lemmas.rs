use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::ratio::abundancy_ratio_exact;
use super::MetricsError;
use crate::ca::{sigma_prime_power, CAStep, FactoredCA};
use crate::numeric::{compare, HPInterval, Verdict};

/// `ln(log_n)` for a state with `log_n > 1`.
fn loglog(state: &FactoredCA) -> Result<HPInterval, MetricsError> {
    let log_n = state.log_n();
    if compare(log_n, &HPInterval::one(log_n.precision())) != Verdict::Greater {
        return Err(MetricsError::Domain(format!(
            "log log n is not positive at step {}",
            state.step_index()
        )));
    }
    Ok(log_n.ln()?)
}

fn check_b(b: f64) -> Result<(), MetricsError> {
    if b > 0.0 && b < 0.5 {
        Ok(())
    } else {
        Err(MetricsError::Domain(format!("b = {b} is outside (0, 1/2)")))
    }
}

fn largest_prime(state: &FactoredCA) -> Result<u64, MetricsError> {
    state
        .largest_prime()
        .ok_or_else(|| MetricsError::Domain("n = 1 has no prime factor".into()))
}

/// Double-logarithm ratio for consecutive `m -> n` with `n = mQ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma1Reading {
    /// `log log m / log log n`.
    pub ratio: HPInterval,
    /// `|ratio - 1|`.
    pub deviation: HPInterval,
    /// `ln Q / (log n log log n)`, the leading term of the deviation.
    pub envelope: HPInterval,
    /// `x/ln L + x^2/(2(1-x) ln L)` with `L = log n` and `x = ln Q / L`,
    /// an upper bound for the deviation.
    pub envelope2: HPInterval,
}

pub fn lemma1_ratio(m: &FactoredCA, n: &FactoredCA) -> Result<Lemma1Reading, MetricsError> {
    let ll_n = loglog(n)?;
    let w = ll_n.precision();
    if m.log_n() == n.log_n() {
        let zero = HPInterval::zero(w);
        return Ok(Lemma1Reading {
            ratio: HPInterval::one(w),
            deviation: zero.clone(),
            envelope: zero.clone(),
            envelope2: zero,
        });
    }
    let ll_m = loglog(m)?;
    let ratio = ll_m.div(&ll_n)?;
    let deviation = ratio.sub(&HPInterval::one(w)).abs();
    let big_l = n.log_n();
    let ln_q = big_l.sub(m.log_n());
    let x = ln_q.div(big_l)?;
    let envelope = x.div(&ll_n)?;
    let second = x
        .square()
        .div(&HPInterval::one(w).sub(&x).mul_int(2))?
        .div(&ll_n)?;
    Ok(Lemma1Reading {
        ratio,
        deviation,
        envelope: envelope.clone(),
        envelope2: envelope.add(&second),
    })
}

/// `(log n)^b / p_max`.
pub fn lemma2_value(n: &FactoredCA, b: f64) -> Result<HPInterval, MetricsError> {
    check_b(b)?;
    let p = largest_prime(n)?;
    let w = n.precision();
    let b = HPInterval::from_f64(b, w)?;
    let power = b.mul(&n.log_n().ln()?).exp()?;
    Ok(power.div_int(p as i64))
}

/// `(1/(p σ(p^a)), 1/p)` for the largest prime `p` of `n` and its exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma3Pair {
    pub prime: u64,
    pub exponent: u32,
    pub damped: HPInterval,
    pub plain: HPInterval,
    /// `damped / plain = 1/σ(p^a)`.
    pub exact_ratio: BigRational,
}

pub fn lemma3_pair(n: &FactoredCA) -> Result<Lemma3Pair, MetricsError> {
    let p = largest_prime(n)?;
    let a = n.exponent_of(p);
    let w = n.precision();
    let sigma = BigInt::from(sigma_prime_power(p, a));
    let one = BigInt::from(1);
    let damped = HPInterval::from_ratio(&one, &(&sigma * p), w)?;
    let plain = HPInterval::from_ratio(&one, &BigInt::from(p), w)?;
    Ok(Lemma3Pair {
        prime: p,
        exponent: a,
        damped,
        plain,
        exact_ratio: BigRational::new(one, sigma),
    })
}

/// `p_max / log n`.
pub fn aek7_ratio(n: &FactoredCA) -> Result<HPInterval, MetricsError> {
    let p = largest_prime(n)?;
    let w = n.precision();
    Ok(HPInterval::from_u64(p, w).div(n.log_n())?)
}

/// `G(n)/G(m)` split into the abundancy ratio and the double-log ratio.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Growth {
    pub abundancy_ratio: HPInterval,
    pub loglog_ratio: HPInterval,
    pub product: HPInterval,
}

/// With a step, the abundancy ratio is the exact rational of the ratio law;
/// without one it comes from the log-abundancy accumulators.
pub fn growth_decomposition(
    m: &FactoredCA,
    n: &FactoredCA,
    step: Option<&CAStep>,
) -> Result<Growth, MetricsError> {
    let w = n.precision();
    if step.is_none() && m == n {
        let one = HPInterval::one(w);
        return Ok(Growth {
            abundancy_ratio: one.clone(),
            loglog_ratio: one.clone(),
            product: one,
        });
    }
    let abundancy_ratio = match step {
        Some(step) => {
            let case = abundancy_ratio_exact(step, |p| m.exponent_of(p))?;
            HPInterval::from_rational(&case.exact_ratio, w)
        }
        None => n.log_abundancy().sub(m.log_abundancy()).exp()?,
    };
    let loglog_ratio = lemma1_ratio(m, n)?.ratio;
    let product = abundancy_ratio.mul(&loglog_ratio);
    Ok(Growth {
        abundancy_ratio,
        loglog_ratio,
        product,
    })
}
