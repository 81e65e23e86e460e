use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::numeric::HPInterval;
use crate::primes::is_prime;

/// One prime of the quotient `Q = n/m` and its exponent in `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientPrime {
    pub prime: u64,
    /// Exponent of `prime` in `m`; zero when the prime is new.
    pub prior_exponent: u32,
}

impl QuotientPrime {
    pub fn is_new(&self) -> bool {
        self.prior_exponent == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepKind {
    Prime,
    Semiprime,
}

impl StepKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            StepKind::Prime => "prime",
            StepKind::Semiprime => "semiprime",
        }
    }
}

/// Transition `m -> n` between consecutive colossally abundant numbers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CAStep {
    /// Index of `n` in the sequence (the step producing 2 has index 1).
    pub step_index: u64,
    pub quotient: Vec<QuotientPrime>,
    pub kind: StepKind,
    pub epsilon: HPInterval,
    /// Set when two critical exponents could not be separated at the
    /// precision cap and were applied together.
    pub tie: bool,
}

impl CAStep {
    pub fn primes(&self) -> Vec<u64> {
        self.quotient.iter().map(|q| q.prime).collect()
    }

    /// `Q = n / m`.
    pub fn quotient_value(&self) -> BigUint {
        self.quotient
            .iter()
            .map(|q| BigUint::from(q.prime))
            .product()
    }
}

/// The quotient is one prime, or two distinct primes.
pub fn verify_step(step: &CAStep) -> bool {
    let primes = step.primes();
    let kind_ok = match primes.len() {
        1 => step.kind == StepKind::Prime,
        2 => step.kind == StepKind::Semiprime && primes[0] != primes[1],
        _ => false,
    };
    kind_ok
        && primes
            .iter()
            .all(|&p| p >= 2 && is_prime(&BigUint::from(p)).unwrap_or(false))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step(primes: &[u64]) -> CAStep {
        CAStep {
            step_index: 1,
            quotient: primes
                .iter()
                .map(|&p| QuotientPrime {
                    prime: p,
                    prior_exponent: 0,
                })
                .collect(),
            kind: if primes.len() == 2 {
                StepKind::Semiprime
            } else {
                StepKind::Prime
            },
            epsilon: HPInterval::zero(64),
            tie: primes.len() == 2,
        }
    }

    #[test]
    fn quotient_law_examples() {
        assert!(verify_step(&step(&[2])));
        assert!(verify_step(&step(&[11])));
        assert!(verify_step(&step(&[2, 3])));
        assert!(!verify_step(&step(&[2, 2])));
        assert!(!verify_step(&step(&[4])));
        assert!(!verify_step(&step(&[2, 3, 5])));
        assert!(!verify_step(&step(&[])));
    }

    #[test]
    fn kind_must_match_count() {
        let mut s = step(&[2]);
        s.kind = StepKind::Semiprime;
        assert!(!verify_step(&s));
    }
}
