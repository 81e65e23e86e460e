//! Brute-force colossally abundant and superabundant numbers from a σ table,
//! compared with the generator.
//!
//! `cargo run --release --example oracle -- 10000000`

use robin_forge::oracle::{ca_bruteforce, is_subsequence, superabundant_bruteforce};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let bound: u64 = std::env::args()
        .nth(1)
        .map_or(Ok(10_000_000), |s| s.parse())?;
    let ca = ca_bruteforce(bound)?;
    let sa = superabundant_bruteforce(bound)?;
    println!("colossally abundant <= {bound}: {ca:?}");
    println!(
        "superabundant <= {bound}: {} numbers, largest {:?}",
        sa.len(),
        sa.last()
    );
    println!(
        "every colossally abundant number is superabundant: {}",
        is_subsequence(&ca, &sa)
    );
    let generated = robin_forge::cli::generated_up_to(bound, Default::default())?;
    println!("generator agrees: {}", generated == ca);
    Ok(())
}
