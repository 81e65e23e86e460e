//! Exact abundancy ratios `σ(n) m / (σ(m) n)` for consecutive colossally
//! abundant `m -> n`, checked against exact σ while `n` is small and by
//! interval containment afterwards.
//!
//! `cargo run --release --example ratio_laws -- 40`

use robin_forge::ca::CaEngine;
use robin_forge::metrics::{verify_lemma45, CheckMode, DEFAULT_EXACT_BOUND};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let steps: u64 = std::env::args().nth(1).map_or(Ok(40), |s| s.parse())?;
    let mut engine = CaEngine::with_precision(128)?;
    let mut previous = engine.state().clone();
    for _ in 0..steps {
        let step = engine.next_step()?;
        let check = verify_lemma45(&step, &previous, engine.state(), DEFAULT_EXACT_BOUND)?;
        let mode = match check.mode {
            CheckMode::Exact => "exact",
            CheckMode::Interval => "interval",
        };
        println!(
            "{:>4}  Q = {:<8} {:<14} ratio = {:<24} {mode:<8} {}",
            step.step_index,
            step.quotient_value(),
            format!("{:?}", check.case.kind),
            check.case.exact_ratio.to_string(),
            if check.holds { "ok" } else { "FAILED" }
        );
        previous = engine.state().clone();
    }
    Ok(())
}
