use num_bigint::{BigInt, BigUint};
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::EngineError;
use crate::numeric::{ln_rational, Decimal, HPInterval, NumericError};
use crate::primes::{is_prime_u64, next_prime_after, primes_in_range};

/// Consecutive primes `first..=last` sharing one exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Run {
    pub first: u64,
    pub last: u64,
    pub exponent: u32,
}

/// A colossally abundant number in run-length-encoded factored form.
///
/// The prime support is always an initial segment of the primes and the
/// exponents never increase with `p`, so a handful of runs describe the whole
/// factorisation. `log_n = Σ a_p ln p` and
/// `log_abundancy = ln(σ(n)/n) = Σ ln(σ(p^a)/p^a)` are maintained
/// incrementally by the engine.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoredCA {
    runs: Vec<Run>,
    log_n: HPInterval,
    log_abundancy: HPInterval,
    step_index: u64,
}

/// Human-readable state record: RLE factorisation and decimal logs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snapshot {
    pub step_index: u64,
    pub runs: Vec<Run>,
    pub log_n: Decimal,
    pub log_abundancy: Decimal,
}

/// `σ(p^a) = (p^(a+1) - 1) / (p - 1)`.
pub fn sigma_prime_power(p: u64, a: u32) -> BigUint {
    let pb = BigUint::from(p);
    (num_traits::pow(pb.clone(), a as usize + 1) - 1u32) / (pb - 1u32)
}

fn product(values: &[BigUint]) -> BigUint {
    match values.len() {
        0 => BigUint::one(),
        1 => values[0].clone(),
        n => product(&values[..n / 2]) * product(&values[n / 2..]),
    }
}

impl FactoredCA {
    /// The empty product `n = 1`.
    pub fn one(precision: u32) -> Self {
        FactoredCA {
            runs: Vec::new(),
            log_n: HPInterval::zero(precision),
            log_abundancy: HPInterval::zero(precision),
            step_index: 0,
        }
    }

    /// Build a state from an explicit factorisation, computing both logs
    /// from scratch. The factorisation must have the colossally abundant
    /// shape (initial segment of primes, non-increasing exponents).
    pub fn from_factors(
        factors: &[(u64, u32)],
        step_index: u64,
        precision: u32,
    ) -> Result<Self, EngineError> {
        let mut runs: Vec<Run> = Vec::new();
        let mut expected = 2u64;
        for &(p, a) in factors {
            if p != expected || a == 0 {
                return Err(EngineError::Invariant(format!(
                    "factor {p}^{a} breaks the initial-segment shape"
                )));
            }
            match runs.last_mut() {
                Some(r) if r.exponent == a => r.last = p,
                Some(r) if r.exponent < a => {
                    return Err(EngineError::Invariant(format!(
                        "exponent of {p} exceeds that of a smaller prime"
                    )))
                }
                _ => runs.push(Run {
                    first: p,
                    last: p,
                    exponent: a,
                }),
            }
            expected = next_prime_after(p);
        }
        let mut state = FactoredCA {
            runs,
            log_n: HPInterval::zero(precision),
            log_abundancy: HPInterval::zero(precision),
            step_index,
        };
        let (log_n, log_abundancy) = recompute_logs(&state, precision)?;
        state.log_n = log_n;
        state.log_abundancy = log_abundancy;
        Ok(state)
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    pub fn log_n(&self) -> &HPInterval {
        &self.log_n
    }

    pub fn log_abundancy(&self) -> &HPInterval {
        &self.log_abundancy
    }

    pub fn step_index(&self) -> u64 {
        self.step_index
    }

    pub fn precision(&self) -> u32 {
        self.log_n.precision()
    }

    pub fn largest_prime(&self) -> Option<u64> {
        self.runs.last().map(|r| r.last)
    }

    /// Exponent of the prime `p` (zero outside the support).
    pub fn exponent_of(&self, p: u64) -> u32 {
        self.runs
            .iter()
            .find(|r| r.first <= p && p <= r.last)
            .map_or(0, |r| r.exponent)
    }

    /// Expanded `(p, a_p)` list. Linear in the support size.
    pub fn factors(&self) -> Vec<(u64, u32)> {
        self.runs
            .iter()
            .flat_map(|r| {
                primes_in_range(r.first, r.last)
                    .into_iter()
                    .map(move |p| (p, r.exponent))
            })
            .collect()
    }

    /// `n` as an integer. Only sensible at oracle scale.
    pub fn value(&self) -> BigUint {
        let powers: Vec<BigUint> = self
            .factors()
            .into_iter()
            .map(|(p, a)| num_traits::pow(BigUint::from(p), a as usize))
            .collect();
        product(&powers)
    }

    /// `n` if `n <= bound`, decided without expanding large states.
    pub fn value_if_at_most(&self, bound: &BigUint) -> Option<BigUint> {
        let limit_log = (bound.bits() as f64 + 1.0) * std::f64::consts::LN_2;
        if self.log_n.lo().to_f64() > limit_log {
            return None;
        }
        let v = self.value();
        (v <= *bound).then_some(v)
    }

    /// `σ(n)` as an integer. Only sensible at oracle scale.
    pub fn sigma(&self) -> BigUint {
        let parts: Vec<BigUint> = self
            .factors()
            .into_iter()
            .map(|(p, a)| sigma_prime_power(p, a))
            .collect();
        product(&parts)
    }

    /// `log10 n = log n / ln 10`.
    pub fn log10_n(&self) -> HPInterval {
        let ln10 = ln_rational(&BigInt::from(10), &BigInt::one(), self.precision())
            .expect("positive argument");
        self.log_n.div(&ln10).expect("ln 10 > 0")
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot {
            step_index: self.step_index,
            runs: self.runs.clone(),
            log_n: Decimal::from_interval(&self.log_n),
            log_abundancy: Decimal::from_interval(&self.log_abundancy),
        }
    }

    /// Check the structural invariants: strictly decreasing run exponents,
    /// contiguous prime support starting at 2.
    pub fn validate(&self) -> Result<(), EngineError> {
        let mut expected = 2u64;
        let mut prev_exp = u32::MAX;
        for r in &self.runs {
            if r.first != expected || r.first > r.last || !is_prime_u64(r.last) {
                return Err(EngineError::Invariant(format!(
                    "run {r:?} breaks the prime support"
                )));
            }
            if r.exponent == 0 || r.exponent >= prev_exp {
                return Err(EngineError::Invariant(format!(
                    "run {r:?} breaks exponent monotonicity"
                )));
            }
            prev_exp = r.exponent;
            expected = next_prime_after(r.last);
        }
        Ok(())
    }

    /// Raise the exponent of `p` to `new_exponent` (append when it is 1).
    pub(crate) fn raise(&mut self, p: u64, new_exponent: u32) -> Result<(), EngineError> {
        if new_exponent == 1 {
            match self.runs.last_mut() {
                Some(r) if r.exponent == 1 => r.last = p,
                _ => self.runs.push(Run {
                    first: p,
                    last: p,
                    exponent: 1,
                }),
            }
            return Ok(());
        }
        let i = self
            .runs
            .iter()
            .position(|r| r.first <= p && p <= r.last)
            .ok_or_else(|| EngineError::Invariant(format!("{p} is not in the support")))?;
        let run = self.runs[i];
        if run.first != p || run.exponent + 1 != new_exponent {
            return Err(EngineError::Invariant(format!(
                "cannot raise {p} to {new_exponent} inside run {run:?}"
            )));
        }
        if i > 0 && self.runs[i - 1].exponent < new_exponent {
            return Err(EngineError::Invariant(format!(
                "raising {p} to {new_exponent} would break exponent monotonicity"
            )));
        }
        if run.first == run.last {
            self.runs.remove(i);
        } else {
            self.runs[i].first = next_prime_after(p);
        }
        if i > 0 && self.runs[i - 1].exponent == new_exponent {
            self.runs[i - 1].last = p;
        } else {
            self.runs.insert(
                i,
                Run {
                    first: p,
                    last: p,
                    exponent: new_exponent,
                },
            );
        }
        Ok(())
    }

    pub(crate) fn add_logs(&mut self, d_log_n: &HPInterval, d_log_abundancy: &HPInterval) {
        self.log_n = self.log_n.add(d_log_n);
        self.log_abundancy = self.log_abundancy.add(d_log_abundancy);
    }

    pub(crate) fn set_step_index(&mut self, index: u64) {
        self.step_index = index;
    }

    /// A copy whose logs are recomputed from scratch at `precision`.
    pub fn at_precision(&self, precision: u32) -> Result<FactoredCA, NumericError> {
        if precision == self.precision() {
            return Ok(self.clone());
        }
        let (log_n, log_abundancy) = recompute_logs(self, precision).map_err(|e| match e {
            EngineError::Numeric(n) => n,
            other => NumericError::Domain(other.to_string()),
        })?;
        Ok(FactoredCA {
            runs: self.runs.clone(),
            log_n,
            log_abundancy,
            step_index: self.step_index,
        })
    }
}

/// From-scratch `(log_n, log_abundancy)` at `precision`.
///
/// Each run contributes `a · ln Π p` and `ln(Π σ(p^a) / Π p^a)`; the products
/// are exact integers built by a product tree, so only two logarithms per run
/// are evaluated regardless of how many primes the run holds.
pub fn recompute_logs(
    state: &FactoredCA,
    precision: u32,
) -> Result<(HPInterval, HPInterval), EngineError> {
    let w = precision + 16;
    let mut log_n = HPInterval::zero(w);
    let mut log_abundancy = HPInterval::zero(w);
    for run in &state.runs {
        let primes = primes_in_range(run.first, run.last);
        let a = run.exponent;
        let prime_values: Vec<BigUint> = primes.iter().map(|&p| BigUint::from(p)).collect();
        let radical = BigInt::from(product(&prime_values));
        let ln_radical = ln_rational(&radical, &BigInt::one(), w)?;
        log_n = log_n.add(&ln_radical.mul_int(a as i64));

        let sigma_nums: Vec<BigUint> = primes
            .iter()
            .map(|&p| num_traits::pow(BigUint::from(p), a as usize + 1) - 1u32)
            .collect();
        let sigma_dens: Vec<BigUint> = primes.iter().map(|&p| BigUint::from(p - 1)).collect();
        let num = BigInt::from(product(&sigma_nums));
        let den = BigInt::from(product(&sigma_dens)) * num_traits::pow(radical, a as usize);
        log_abundancy = log_abundancy.add(&ln_rational(&num, &den, w)?);
    }
    Ok((
        log_n.with_precision(precision),
        log_abundancy.with_precision(precision),
    ))
}
