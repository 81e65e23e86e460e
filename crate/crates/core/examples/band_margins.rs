//! Where `G(n)` sits relative to the band `e^γ < G < e^γ (1 + c/(log n)^b)`,
//! decided from the normalised excess and from a direct comparison.
//!
//! `cargo run --release --example band_margins -- 0.25 1.0 5000`

use robin_forge::ca::CaEngine;
use robin_forge::metrics::{band_margin, BandParams};
use robin_forge::numeric::DEFAULT_PRECISION_CAP;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let b: f64 = args.next().map_or(Ok(0.25), |s| s.parse())?;
    let c: f64 = args.next().map_or(Ok(1.0), |s| s.parse())?;
    let steps: u64 = args.next().map_or(Ok(5000), |s| s.parse())?;
    let params = BandParams::new(b, c)?;
    let mut engine = CaEngine::with_precision(128)?;
    let mut largest = f64::NEG_INFINITY;
    for _ in 0..steps {
        let step = engine.next_step()?;
        let n = engine.state();
        if n.log_n().mid_f64() <= 1.0 {
            continue;
        }
        let report = band_margin(n, &params, None, DEFAULT_PRECISION_CAP)?;
        let excess = report.normalized_excess.mid_f64();
        if step.step_index > 8 {
            largest = largest.max(excess);
        }
        if step.step_index <= 10 || step.step_index % 1000 == 0 {
            println!(
                "{:>6}  excess {:>+.6e}  {:<6} {:<6}",
                step.step_index,
                excess,
                report.band.as_str(),
                report.band_direct.as_str()
            );
        }
    }
    println!("largest normalised excess past 5040: {largest:+.6e}");
    Ok(())
}
