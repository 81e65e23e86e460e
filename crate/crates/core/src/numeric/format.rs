//! Decimal rendering of intervals: a truncated midpoint plus an upward-rounded
//! bound that covers both the interval radius and the truncation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::interval::HPInterval;

/// Most fractional digits ever printed.
const MAX_DIGITS: i64 = 60;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decimal {
    /// Midpoint truncated toward zero.
    pub value: String,
    /// `|exact - value| <= bound` for every point of the interval.
    pub bound: String,
}

fn pow10(k: u32) -> BigInt {
    num_traits::pow(BigInt::from(10u32), k as usize)
}

/// `num / den` scaled by `10^e`, as a fraction with integer parts.
fn scaled(num: &BigInt, den: &BigInt, e: i64) -> (BigInt, BigInt) {
    if e >= 0 {
        (num * pow10(e as u32), den.clone())
    } else {
        (num.clone(), den * pow10((-e) as u32))
    }
}

/// Smallest `m.d × 10^e` (two significant digits) not below `num/den > 0`.
fn sci_upper(num: &BigInt, den: &BigInt) -> String {
    if num.is_zero() {
        return "0".to_string();
    }
    let bits = num.bits() as i64 - den.bits() as i64;
    let mut e = (bits as f64 * std::f64::consts::LOG10_2).floor() as i64;
    // normalize so that 10^e <= x < 10^(e+1), i.e. num >= den 10^e
    let below = |e: i64| {
        let (n, d) = scaled(num, den, -e);
        n < d
    };
    while below(e) {
        e -= 1;
    }
    while !below(e + 1) {
        e += 1;
    }
    let (n, d) = scaled(num, den, 1 - e);
    let (q, r) = n.div_rem(&d);
    let mut m = q.to_i64().expect("two digits") + i64::from(!r.is_zero());
    if m >= 100 {
        m = 10;
        e += 1;
    }
    format!("{}.{}e{}", m / 10, m % 10, e)
}

impl Decimal {
    pub fn from_interval(x: &HPInterval) -> Decimal {
        // lo = a 2^e, hi = b 2^e; midpoint (a + b) / 2^(1-e), radius (b - a) / 2^(1-e)
        let e = x.lo().exponent().min(x.hi().exponent());
        let lift = |d: &crate::numeric::Dyadic| d.mantissa() << (d.exponent() - e) as u64;
        let (a, b) = (lift(x.lo()), lift(x.hi()));
        let (mut sum, mut diff) = (&a + &b, &b - &a);
        let den = if e >= 1 {
            sum <<= (e - 1) as u64;
            diff <<= (e - 1) as u64;
            BigInt::one()
        } else {
            BigInt::one() << (1 - e) as u64
        };

        let digits = if diff.is_zero() {
            MAX_DIGITS.min(40)
        } else {
            let w = x.width_f64().max(f64::MIN_POSITIVE);
            ((-w.log10()).floor() as i64 + 2).clamp(1, MAX_DIGITS)
        };
        let scale = pow10(digits as u32);
        let (truncated, rem) = (&sum * &scale).div_rem(&den);
        // |mid - shown| = |rem| / (den 10^digits)
        let bound_num = diff * &scale + rem.abs();
        let bound_den = den * &scale;

        let negative = sum.is_negative();
        let (int_part, frac_part) = truncated.abs().div_rem(&scale);
        let mut value = String::new();
        if negative {
            value.push('-');
        }
        value.push_str(&int_part.to_string());
        value.push('.');
        value.push_str(&format!(
            "{:0>width$}",
            frac_part.to_string(),
            width = digits as usize
        ));
        Decimal {
            value,
            bound: sci_upper(&bound_num, &bound_den),
        }
    }
}
