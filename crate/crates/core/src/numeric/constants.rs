//! Per-precision caches for ln 2, Euler's constant and `e^γ`.
//!
//! Values are keyed by the exact requested precision so a result never depends
//! on which precisions were requested earlier in the process.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::One;

use super::dyadic::Dyadic;
use super::elementary::{atanh_series, ln_rational, GUARD_BITS};
use super::interval::HPInterval;

type Cache = OnceLock<Mutex<HashMap<u32, HPInterval>>>;

static LN2: Cache = OnceLock::new();
static GAMMA: Cache = OnceLock::new();
static EXP_GAMMA: Cache = OnceLock::new();

fn cached(cache: &Cache, precision: u32, compute: impl FnOnce() -> HPInterval) -> HPInterval {
    let map = cache.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = map.lock().expect("constant cache poisoned").get(&precision) {
        return v.clone();
    }
    let value = compute();
    map.lock()
        .expect("constant cache poisoned")
        .entry(precision)
        .or_insert(value)
        .clone()
}

fn atanh_recip(k: i64, w: u32) -> HPInterval {
    let t = HPInterval::from_ratio(&BigInt::one(), &BigInt::from(k), w).expect("nonzero");
    atanh_series(&t)
}

/// ln 2 = 18 atanh(1/26) - 2 atanh(1/4801) + 8 atanh(1/8749).
pub fn ln2(precision: u32) -> HPInterval {
    cached(&LN2, precision, || {
        let w = precision + 16;
        atanh_recip(26, w)
            .mul_int(18)
            .sub(&atanh_recip(4801, w).mul_int(2))
            .add(&atanh_recip(8749, w).mul_int(8))
            .with_precision(precision)
    })
}

/// Euler–Mascheroni constant by the Brent–McMillan Bessel-function series:
/// with `A = Σ (N^k/k!)^2 (H_k - ln N)` and `B = Σ (N^k/k!)^2`,
/// `0 < A/B - γ < π e^(-4N)`.
fn euler_gamma_uncached(precision: u32) -> HPInterval {
    // 4N log2(e) >= 5.77 N; make π e^(-4N) < 2^-(precision + 8)
    let n = ((precision as f64 + 10.0) / 5.77).ceil() as i64 + 1;
    let extra = 64 - (5 * n as u64).leading_zeros();
    let w = precision + GUARD_BITS + 2 * extra;
    let ln_n = ln_rational(&BigInt::from(n), &BigInt::one(), w).expect("positive");
    let n2 = HPInterval::from_i64(n * n, w);

    let mut a_k = HPInterval::one(w);
    let mut harmonic = HPInterval::zero(w);
    let mut a_sum = ln_n.neg();
    let mut b_sum = HPInterval::one(w);
    let mut k: i64 = 0;
    loop {
        k += 1;
        a_k = a_k.mul(&n2).div_int(k * k);
        harmonic = harmonic
            .add(&HPInterval::from_ratio(&BigInt::one(), &BigInt::from(k), w).expect("k>0"));
        a_sum = a_sum.add(&a_k.mul(&harmonic.sub(&ln_n)));
        b_sum = b_sum.add(&a_k);
        if k + 1 < 2 * n {
            continue;
        }
        // ratio (N/(k+1))^2 <= 1/4 from here, so
        // tail_A <= a_k (H_k + ln N + 1), tail_B <= a_k
        let weight = harmonic.add(&ln_n).add(&HPInterval::one(w));
        let tail_a = a_k.mul(&weight).mag();
        if tail_a.top() < b_sum.lo().top() - w as i64 - 4 {
            let tail_b = a_k.mag();
            a_sum = a_sum.add(&HPInterval::new(tail_a.neg(), tail_a, w).expect("tail"));
            b_sum = b_sum.add(&HPInterval::new(Dyadic::zero(), tail_b, w).expect("tail"));
            break;
        }
    }
    let ratio = a_sum.div(&b_sum).expect("B >= 1");
    // 4 e^(-4N) <= 2^(2 - floor(5.77 N))
    let correction = Dyadic::pow2(2 - (5.77 * n as f64).floor() as i64);
    let lo = Dyadic::sub_round(ratio.lo(), &correction, w, super::dyadic::Round::Down);
    HPInterval::new(lo, ratio.hi().clone(), w)
        .expect("ordered")
        .with_precision(precision)
}

pub fn euler_gamma(precision: u32) -> HPInterval {
    cached(&GAMMA, precision, || euler_gamma_uncached(precision))
}

/// `e^γ`, the Robin threshold.
pub fn exp_gamma(precision: u32) -> HPInterval {
    cached(&EXP_GAMMA, precision, || {
        euler_gamma(precision + 16)
            .exp()
            .expect("small argument")
            .with_precision(precision)
    })
}
