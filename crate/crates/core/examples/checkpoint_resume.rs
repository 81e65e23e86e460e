//! Stop the generator, serialise its state, and continue from the saved
//! copy; both continuations produce the same steps.
//!
//! `cargo run --release --example checkpoint_resume -- 3000`

use robin_forge::ca::{CaEngine, Checkpoint};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let steps: usize = std::env::args().nth(1).map_or(Ok(3000), |s| s.parse())?;
    let mut engine = CaEngine::with_precision(128)?;
    for _ in 0..steps {
        engine.next_step()?;
    }
    let path = std::env::temp_dir().join("robin-forge-example.ckpt");
    std::fs::write(&path, serde_json::to_vec(&engine.checkpoint())?)?;
    println!(
        "saved step {} ({} pending events, {} bytes) to {}",
        engine.state().step_index(),
        engine.pending().len(),
        std::fs::metadata(&path)?.len(),
        path.display()
    );

    let saved: Checkpoint = serde_json::from_slice(&std::fs::read(&path)?)?;
    let mut resumed = CaEngine::resume(saved)?;
    for _ in 0..steps {
        assert_eq!(engine.next_step()?, resumed.next_step()?);
    }
    resumed.audit()?;
    println!(
        "continued both to step {}: identical, largest prime {:?}",
        resumed.state().step_index(),
        resumed.state().largest_prime()
    );
    std::fs::remove_file(path)?;
    Ok(())
}
