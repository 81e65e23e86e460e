use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::event::{CriticalEvent, QueueEntry};
use super::factored::{recompute_logs, FactoredCA};
use super::step::{CAStep, QuotientPrime, StepKind};
use super::EngineError;
use crate::numeric::{compare, HPInterval, Verdict, DEFAULT_PRECISION, DEFAULT_PRECISION_CAP};
use crate::primes::PrimeStream;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineConfig {
    /// Working precision for ε and the log accumulators.
    pub precision: u32,
    /// Ceiling for the doubling refinement of overlapping ε intervals.
    pub precision_cap: u32,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            precision: DEFAULT_PRECISION,
            precision_cap: DEFAULT_PRECISION_CAP,
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<(), EngineError> {
        if self.precision < 53 || self.precision > self.precision_cap {
            return Err(EngineError::Config(format!(
                "need 53 <= precision <= cap, got {} and {}",
                self.precision, self.precision_cap
            )));
        }
        Ok(())
    }
}

/// Everything needed to continue a run: the factored state, the pending
/// events and the position of the prime stream.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub config: EngineConfig,
    pub state: FactoredCA,
    /// Pending events in pop order.
    pub queue: Vec<CriticalEvent>,
    /// Prime of the pending new-prime event.
    pub frontier: u64,
}

/// Generator of consecutive colossally abundant numbers.
///
/// The queue holds one event per support prime (its next exponent) and one
/// for the first unused prime. Each step pops the event with the largest
/// critical ε and applies it.
#[derive(Debug)]
pub struct CaEngine {
    config: EngineConfig,
    state: FactoredCA,
    queue: BinaryHeap<QueueEntry>,
    stream: PrimeStream,
    frontier: u64,
}

impl CaEngine {
    /// Engine positioned at `n = 1`; the first step yields 2.
    pub fn new(config: EngineConfig) -> Result<Self, EngineError> {
        config.validate()?;
        let mut stream = PrimeStream::new();
        let first = stream.next_prime()?;
        let mut queue = BinaryHeap::new();
        queue.push(QueueEntry(CriticalEvent::new(first, 1, config.precision)?));
        Ok(CaEngine {
            config,
            state: FactoredCA::one(config.precision),
            queue,
            stream,
            frontier: first,
        })
    }

    pub fn with_precision(precision: u32) -> Result<Self, EngineError> {
        CaEngine::new(EngineConfig {
            precision,
            precision_cap: DEFAULT_PRECISION_CAP.max(precision),
        })
    }

    pub fn config(&self) -> EngineConfig {
        self.config
    }

    /// The most recently generated number.
    pub fn state(&self) -> &FactoredCA {
        &self.state
    }

    /// Pending events in pop order.
    pub fn pending(&self) -> Vec<CriticalEvent> {
        let mut entries: Vec<QueueEntry> = self.queue.iter().cloned().collect();
        entries.sort_by(|a, b| b.cmp(a));
        entries.into_iter().map(|e| e.0).collect()
    }

    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint {
            config: self.config,
            state: self.state.clone(),
            queue: self.pending(),
            frontier: self.frontier,
        }
    }

    pub fn resume(checkpoint: Checkpoint) -> Result<Self, EngineError> {
        checkpoint.config.validate()?;
        checkpoint.state.validate()?;
        let engine = CaEngine {
            config: checkpoint.config,
            state: checkpoint.state,
            queue: checkpoint.queue.into_iter().map(QueueEntry).collect(),
            stream: PrimeStream::starting_after(checkpoint.frontier),
            frontier: checkpoint.frontier,
        };
        engine.check_queue()?;
        Ok(engine)
    }

    /// Queue shape: one event per support prime at exponent `a_p + 1`, and
    /// exactly one new-prime event at the frontier.
    pub fn check_queue(&self) -> Result<(), EngineError> {
        let support = self.state.largest_prime().unwrap_or(1);
        let mut fresh = 0;
        for QueueEntry(ev) in self.queue.iter() {
            let a = self.state.exponent_of(ev.prime);
            if ev.exponent != a + 1 {
                return Err(EngineError::Invariant(format!(
                    "event ({}, {}) does not follow exponent {a}",
                    ev.prime, ev.exponent
                )));
            }
            if a == 0 {
                fresh += 1;
                if ev.prime != self.frontier || ev.prime <= support {
                    return Err(EngineError::Invariant(format!(
                        "new-prime event for {} but frontier is {}",
                        ev.prime, self.frontier
                    )));
                }
            }
        }
        if fresh != 1 || self.queue.len() != self.state.factors().len() + 1 {
            return Err(EngineError::Invariant(
                "queue does not cover the support".into(),
            ));
        }
        Ok(())
    }

    /// Advance to the next colossally abundant number.
    pub fn next_step(&mut self) -> Result<CAStep, EngineError> {
        let top = self
            .queue
            .pop()
            .ok_or_else(|| EngineError::Invariant("empty event queue".into()))?
            .0;
        let mut contenders = vec![top];
        while let Some(next) = self.queue.peek() {
            if compare(&next.0.epsilon, &contenders[0].epsilon) == Verdict::Less {
                break;
            }
            contenders.push(self.queue.pop().expect("peeked").0);
        }

        let (mut chosen, tie) = if contenders.len() == 1 {
            (contenders, false)
        } else {
            self.separate(contenders)?
        };

        // smaller primes first keeps the exponents non-increasing mid-step
        chosen.sort_by_key(|ev| ev.prime);
        let epsilon = chosen
            .iter()
            .skip(1)
            .fold(chosen[0].epsilon.clone(), |acc, ev| acc.hull(&ev.epsilon));
        let mut quotient = Vec::with_capacity(chosen.len());
        for ev in &chosen {
            quotient.push(QuotientPrime {
                prime: ev.prime,
                prior_exponent: ev.exponent - 1,
            });
            self.apply(ev)?;
        }
        let step_index = self.state.step_index() + 1;
        self.state.set_step_index(step_index);
        Ok(CAStep {
            step_index,
            kind: if quotient.len() == 1 {
                StepKind::Prime
            } else {
                StepKind::Semiprime
            },
            quotient,
            epsilon,
            tie,
        })
    }

    /// Order overlapping events by refining their ε at doubling precision.
    /// Returns the winner alone, or the two leading events when the cap is
    /// reached without separating them. Losers go back on the queue.
    fn separate(
        &mut self,
        contenders: Vec<CriticalEvent>,
    ) -> Result<(Vec<CriticalEvent>, bool), EngineError> {
        let mut precision = self.config.precision;
        let mut refined: Vec<HPInterval> = contenders.iter().map(|e| e.epsilon.clone()).collect();
        loop {
            let leader = (0..refined.len())
                .max_by(|&i, &j| refined[i].hi().cmp(refined[j].hi()))
                .expect("non-empty");
            let rivals: Vec<usize> = (0..refined.len())
                .filter(|&j| j != leader && compare(&refined[j], &refined[leader]) != Verdict::Less)
                .collect();
            if rivals.is_empty() || precision >= self.config.precision_cap {
                let mut picked = vec![leader];
                let tie = !rivals.is_empty();
                if tie {
                    let runner = *rivals
                        .iter()
                        .max_by(|&&i, &&j| refined[i].hi().cmp(refined[j].hi()))
                        .expect("non-empty");
                    picked.push(runner);
                }
                let mut chosen = Vec::new();
                for (i, ev) in contenders.into_iter().enumerate() {
                    if picked.contains(&i) {
                        chosen.push(ev);
                    } else {
                        self.queue.push(QueueEntry(ev));
                    }
                }
                return Ok((chosen, tie));
            }
            precision = (precision * 2).min(self.config.precision_cap);
            for (slot, ev) in refined.iter_mut().zip(&contenders) {
                *slot = ev.refined(precision)?.epsilon;
            }
        }
    }

    fn apply(&mut self, ev: &CriticalEvent) -> Result<(), EngineError> {
        let precision = self.config.precision;
        let d_log_n = ev.ln_p.with_precision(precision);
        self.state.add_logs(&d_log_n, &ev.log_gain);
        self.state.raise(ev.prime, ev.exponent)?;
        self.queue.push(QueueEntry(ev.successor(precision)?));
        if ev.exponent == 1 {
            let next = self.stream.next_prime()?;
            self.frontier = next;
            self.queue
                .push(QueueEntry(CriticalEvent::new(next, 1, precision)?));
        }
        Ok(())
    }

    /// Structural invariants plus agreement of the incremental logs with a
    /// from-scratch recomputation at higher precision.
    pub fn audit(&self) -> Result<(), EngineError> {
        self.state.validate()?;
        let (log_n, log_abundancy) = recompute_logs(&self.state, self.config.precision + 32)?;
        if !log_n.intersects(self.state.log_n())
            || !log_abundancy.intersects(self.state.log_abundancy())
        {
            return Err(EngineError::Invariant(format!(
                "incremental logs drifted at step {}",
                self.state.step_index()
            )));
        }
        Ok(())
    }
}

impl Iterator for CaEngine {
    type Item = Result<CAStep, EngineError>;

    fn next(&mut self) -> Option<Self::Item> {
        Some(self.next_step())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_quotients() {
        let mut engine = CaEngine::with_precision(128).unwrap();
        let primes: Vec<u64> = (0..14)
            .map(|_| engine.next_step().unwrap())
            .map(|s| {
                assert_eq!(s.kind, StepKind::Prime);
                s.quotient[0].prime
            })
            .collect();
        assert_eq!(primes, vec![2, 3, 2, 5, 2, 3, 7, 2, 11, 13, 2, 3, 5, 17]);
        assert_eq!(engine.state().value(), 367_567_200u64.into());
        engine.audit().unwrap();
        engine.check_queue().unwrap();
    }

    #[test]
    fn step_2520_to_5040() {
        let mut engine = CaEngine::with_precision(128).unwrap();
        for _ in 0..7 {
            engine.next_step().unwrap();
        }
        assert_eq!(engine.state().value(), 2520u32.into());
        let step = engine.next_step().unwrap();
        assert_eq!(
            step.quotient,
            vec![QuotientPrime {
                prime: 2,
                prior_exponent: 3
            }]
        );
        assert!(step.epsilon.within(0.0473057147783, 1e-12));
    }

    #[test]
    fn checkpoint_round_trip() {
        let mut a = CaEngine::with_precision(96).unwrap();
        for _ in 0..50 {
            a.next_step().unwrap();
        }
        let mut b = CaEngine::resume(a.checkpoint()).unwrap();
        for _ in 0..50 {
            assert_eq!(a.next_step().unwrap(), b.next_step().unwrap());
        }
        assert_eq!(a.state(), b.state());
    }

    #[test]
    fn forced_tie_becomes_semiprime() {
        // a cap equal to the working precision leaves no room to refine
        let mut engine = CaEngine::new(EngineConfig {
            precision: 64,
            precision_cap: 64,
        })
        .unwrap();
        engine.next_step().unwrap();
        let p = engine.config().precision;
        let wide = |x: f64| {
            HPInterval::from_f64(x, p)
                .unwrap()
                .hull(&HPInterval::from_f64(0.3, p).unwrap())
        };
        let mut events = engine.pending();
        events[0].epsilon = wide(0.2);
        events[1].epsilon = wide(0.25);
        engine.queue = events.into_iter().map(QueueEntry).collect();
        let step = engine.next_step().unwrap();
        assert!(step.tie);
        assert_eq!(step.kind, StepKind::Semiprime);
        assert_eq!(
            step.quotient,
            vec![
                QuotientPrime {
                    prime: 2,
                    prior_exponent: 1
                },
                QuotientPrime {
                    prime: 3,
                    prior_exponent: 0
                }
            ]
        );
        assert_eq!(engine.state().value(), 12u32.into());
        engine.check_queue().unwrap();
    }
}
