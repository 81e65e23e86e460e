use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::MetricsError;
use crate::ca::{sigma_prime_power, CAStep, FactoredCA, QuotientPrime};

/// Which abundancy-ratio law a step falls under. For two primes `p < q`
/// the name lists `p` first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RatioKind {
    PrimeNew,
    PrimeExisting,
    BothNew,
    NewExisting,
    ExistingNew,
    BothExisting,
}

/// `σ(n) m / (σ(m) n)` for consecutive `m -> n`, as an exact rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioCase {
    pub kind: RatioKind,
    pub exact_ratio: BigRational,
}

/// Factor by which one prime raises the abundancy index: `1 + 1/p` when the
/// prime is new, `1 + 1/(p σ(p^a))` when its exponent goes from `a` to `a+1`.
pub fn single_prime_ratio(p: u64, prior_exponent: u32) -> BigRational {
    let denom = if prior_exponent == 0 {
        BigUint::from(p)
    } else {
        BigUint::from(p) * sigma_prime_power(p, prior_exponent)
    };
    let denom = BigInt::from(denom);
    BigRational::new(&denom + 1, denom)
}

/// Exact abundancy ratio for `step`, checking its recorded prior exponents
/// against `prior_exponent(p)` (the exponent of `p` in `m`).
pub fn abundancy_ratio_exact(
    step: &CAStep,
    prior_exponent: impl Fn(u64) -> u32,
) -> Result<RatioCase, MetricsError> {
    for q in &step.quotient {
        let expected = prior_exponent(q.prime);
        if expected != q.prior_exponent {
            return Err(MetricsError::Contract(format!(
                "step {} records exponent {} for {} but m has {expected}",
                step.step_index, q.prior_exponent, q.prime
            )));
        }
    }
    let new = |q: &QuotientPrime| q.is_new();
    let kind = match step.quotient.as_slice() {
        [a] if new(a) => RatioKind::PrimeNew,
        [_] => RatioKind::PrimeExisting,
        [a, b] if a.prime == b.prime => {
            return Err(MetricsError::Contract(format!(
                "step {} repeats the prime {}",
                step.step_index, a.prime
            )))
        }
        [a, b] => match (new(a), new(b)) {
            (true, true) => RatioKind::BothNew,
            (true, false) => RatioKind::NewExisting,
            (false, true) => RatioKind::ExistingNew,
            (false, false) => RatioKind::BothExisting,
        },
        other => {
            return Err(MetricsError::Contract(format!(
                "step {} has {} quotient primes",
                step.step_index,
                other.len()
            )))
        }
    };
    let exact_ratio = step
        .quotient
        .iter()
        .map(|q| single_prime_ratio(q.prime, q.prior_exponent))
        .fold(BigRational::one(), |acc, r| acc * r);
    Ok(RatioCase { kind, exact_ratio })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckMode {
    /// Exact σ on both sides.
    Exact,
    /// `exp(log_abundancy(n) - log_abundancy(m))` must contain the ratio.
    Interval,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma45Check {
    pub mode: CheckMode,
    pub case: RatioCase,
    pub holds: bool,
}

/// Check the abundancy-ratio law for `m -> n`: exactly when `n` is at most
/// `exact_bound`, otherwise by interval containment.
pub fn verify_lemma45(
    step: &CAStep,
    m: &FactoredCA,
    n: &FactoredCA,
    exact_bound: u64,
) -> Result<Lemma45Check, MetricsError> {
    let case = abundancy_ratio_exact(step, |p| m.exponent_of(p))?;
    if let Some(n_value) = n.value_if_at_most(&BigUint::from(exact_bound)) {
        let m_value = m.value();
        let lhs = BigRational::new(
            BigInt::from(n.sigma() * m_value),
            BigInt::from(m.sigma() * n_value),
        );
        let holds = lhs == case.exact_ratio;
        return Ok(Lemma45Check {
            mode: CheckMode::Exact,
            case,
            holds,
        });
    }
    let precision = n.precision().max(m.precision());
    let diff = n
        .log_abundancy()
        .with_precision(precision)
        .sub(&m.log_abundancy().with_precision(precision));
    let holds = diff.exp()?.contains_rational(&case.exact_ratio);
    Ok(Lemma45Check {
        mode: CheckMode::Interval,
        case,
        holds,
    })
}
