//! Certified comparison of `G(n) = σ(n)/(n log log n)` with `e^γ` along the
//! colossally abundant sequence.
//!
//! `cargo run --release --example robin_verdicts -- 2000`

use robin_forge::ca::CaEngine;
use robin_forge::metrics::{robin_check, RobinStatus};
use robin_forge::numeric::{Decimal, DEFAULT_PRECISION_CAP};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let steps: u64 = std::env::args().nth(1).map_or(Ok(2000), |s| s.parse())?;
    let mut engine = CaEngine::with_precision(128)?;
    let mut tightest: Option<(u64, f64)> = None;
    let mut counts = [0u64; 4];
    for _ in 0..steps {
        let step = engine.next_step()?;
        let verdict = robin_check(engine.state(), DEFAULT_PRECISION_CAP)?;
        counts[verdict.status as usize] += 1;
        let Some(margin) = &verdict.margin else {
            continue;
        };
        if step.step_index <= 12 || step.step_index % 500 == 0 {
            let g = Decimal::from_interval(verdict.g_value.as_ref().unwrap());
            println!(
                "{:>6}  {:<9}  G = {:.22}  (+- {})",
                step.step_index,
                verdict.status.as_str(),
                g.value,
                g.bound
            );
        }
        if verdict.status == RobinStatus::Satisfies {
            let m = margin.mid_f64();
            if tightest.is_none_or(|(_, t)| m < t) {
                tightest = Some((step.step_index, m));
            }
        }
    }
    println!(
        "satisfies {}, violates {}, boundary {}, undecided {}",
        counts[0], counts[1], counts[2], counts[3]
    );
    if let Some((i, m)) = tightest {
        println!("smallest margin e^γ - G(n) = {m:.3e} at step {i}");
    }
    Ok(())
}
