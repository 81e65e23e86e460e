//! Decay diagnostics at log-spaced steps: the double-log ratio of
//! consecutive terms, `(log n)^b / p_max`, `1/σ(p^a)` for the largest prime,
//! and `p_max / log n`.
//!
//! `cargo run --release --example diagnostics -- 20000`

use robin_forge::ca::CaEngine;
use robin_forge::metrics::{aek7_ratio, lemma1_ratio, lemma2_value, lemma3_pair};

fn is_checkpoint(i: u64) -> bool {
    let mut scale = 1;
    while scale <= i {
        if [1, 2, 5].iter().any(|m| m * scale == i) {
            return true;
        }
        scale *= 10;
    }
    false
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let steps: u64 = std::env::args().nth(1).map_or(Ok(20_000), |s| s.parse())?;
    let mut engine = CaEngine::with_precision(128)?;
    println!(
        "{:>7} {:>10} {:>9} {:>12} {:>12} {:>12} {:>10} {:>8}",
        "step", "log n", "p_max", "|ratio-1|", "envelope", "(log n)^b/p", "1/σ(p^a)", "p/log n"
    );
    let mut previous = engine.state().clone();
    for _ in 0..steps {
        let step = engine.next_step()?;
        let n = engine.state();
        if is_checkpoint(step.step_index) && n.log_n().mid_f64() > 1.0 {
            let (dev, env) = if previous.log_n().mid_f64() > 1.0 {
                let r = lemma1_ratio(&previous, n)?;
                (r.deviation.mid_f64(), r.envelope.mid_f64())
            } else {
                (f64::NAN, f64::NAN)
            };
            let pair = lemma3_pair(n)?;
            println!(
                "{:>7} {:>10.3} {:>9} {:>12.3e} {:>12.3e} {:>12.3e} {:>10} {:>8.5}",
                step.step_index,
                n.log_n().mid_f64(),
                pair.prime,
                dev,
                env,
                lemma2_value(n, 0.25)?.mid_f64(),
                pair.exact_ratio.to_string(),
                aek7_ratio(n)?.mid_f64()
            );
        }
        previous = n.clone();
    }
    Ok(())
}
