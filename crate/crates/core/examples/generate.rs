//! Walk the colossally abundant sequence and print each quotient.
//!
//! `cargo run --release --example generate -- 30`

use robin_forge::ca::CaEngine;
use robin_forge::numeric::Decimal;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let steps: u64 = std::env::args().nth(1).map_or(Ok(20), |s| s.parse())?;
    let mut engine = CaEngine::with_precision(128)?;
    println!(
        "{:>6}  {:>12}  {:>8}  {:>24}",
        "step", "quotient", "a_prior", "log10 n"
    );
    for _ in 0..steps {
        let step = engine.next_step()?;
        let log10 = Decimal::from_interval(&engine.state().log10_n());
        let primes: Vec<String> = step.quotient.iter().map(|q| q.prime.to_string()).collect();
        let prior: Vec<String> = step
            .quotient
            .iter()
            .map(|q| q.prior_exponent.to_string())
            .collect();
        println!(
            "{:>6}  {:>12}  {:>8}  {:>24}",
            step.step_index,
            primes.join("*"),
            prior.join(","),
            &log10.value[..log10.value.len().min(24)]
        );
    }
    if let Some(n) = engine.state().value_if_at_most(&(1u64 << 63).into()) {
        println!("n = {n}");
    }
    Ok(())
}
