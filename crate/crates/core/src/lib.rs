//! Colossally abundant numbers, Robin's function `G(n) = σ(n) / (n log log n)`,
//! and certified diagnostics along the colossally abundant sequence.
//!
//! The crate is organised bottom-up:
//!
//! - [`numeric`]: outward-rounded interval arithmetic at arbitrary precision.
//! - [`primes`]: an unbounded segmented prime stream and primality tests.
//! - [`ca`]: the critical-exponent event queue that generates consecutive
//!   colossally abundant numbers in factored form.
//! - [`metrics`]: `G(n)`, certified Robin verdicts, abundancy-ratio laws,
//!   double-logarithm and decay diagnostics, and band margins.
//! - [`oracle`]: brute-force ground truth by divisor sums and direct
//!   maximisation, using exact integer arithmetic only.
//! - [`cli`]: the `robin-forge` command set and its output formats.

pub mod ca;
pub mod cli;
pub mod metrics;
pub mod numeric;
pub mod oracle;
pub mod primes;
