//! Outward-rounded interval arithmetic: the same expression at growing
//! precision, and a comparison that only resolves once the intervals
//! separate.

use num_bigint::BigInt;
use robin_forge::numeric::{compare, exp_gamma, ln_rational, Decimal, HPInterval};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for precision in [53, 128, 256] {
        let x = exp_gamma(precision);
        let d = Decimal::from_interval(&x);
        println!("e^γ at {precision:>3} bits: {} +- {}", d.value, d.bound);
    }

    // G(5040) = 19344 / (5040 ln ln 5040), just above e^γ
    for precision in [16, 24, 32, 64] {
        let ln_n = ln_rational(&BigInt::from(5040), &BigInt::from(1), precision)?;
        let g = HPInterval::from_ratio(&BigInt::from(19344), &BigInt::from(5040), precision)?
            .div(&ln_n.ln()?)?;
        println!(
            "G(5040) at {precision:>2} bits: [{:.12}, {:.12}]  vs e^γ: {:?}",
            g.lo().to_f64(),
            g.hi().to_f64(),
            compare(&g, &exp_gamma(precision))
        );
    }

    let third = HPInterval::from_ratio(&BigInt::from(1), &BigInt::from(3), 128)?;
    let back = third.mul_int(3).sub(&HPInterval::one(128));
    println!(
        "3 * (1/3) - 1 lies in [{:e}, {:e}]",
        back.lo().to_f64(),
        back.hi().to_f64()
    );
    Ok(())
}
