//! Certified logarithm and exponential.
//!
//! Both functions reduce their argument by powers of two and then sum a short
//! series in interval arithmetic at a few dozen guard bits; the truncated tail
//! is folded into the result as an explicit symmetric bound.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive};

use super::constants::ln2;
use super::dyadic::{Dyadic, Round};
use super::interval::HPInterval;
use super::NumericError;

pub(crate) const GUARD_BITS: u32 = 32;

/// Largest argument magnitude accepted by `exp`.
const EXP_ARG_LIMIT: f64 = 1.0e15;

/// Halvings applied to the reduced exponential argument before the Taylor sum.
const EXP_HALVINGS: i64 = 16;

/// `atanh(t)` for an interval with `|t| <= 1/4`, at precision `t.precision()`.
pub(crate) fn atanh_series(t: &HPInterval) -> HPInterval {
    let w = t.precision();
    if t.is_point() && t.lo().is_zero() {
        return HPInterval::zero(w);
    }
    debug_assert!(t.mag() <= Dyadic::pow2(-2));
    let t2 = t.square();
    let mut pow = t.clone();
    let mut sum = t.clone();
    let mut j: i64 = 0;
    loop {
        j += 1;
        pow = pow.mul(&t2);
        let m = pow.mag();
        if m.is_zero() {
            break;
        }
        if m.top() < sum.mag().top() - w as i64 - 2 {
            // sum_{i>=j} |t|^(2i+1)/(2i+1) <= |t|^(2j+1) / ((2j+1)(1-t^2)) <= m
            let tail = HPInterval::new(m.neg(), m, w).expect("symmetric tail");
            sum = sum.add(&tail);
            break;
        }
        sum = sum.add(&pow.div_int(2 * j + 1));
    }
    sum
}

fn approx_log2(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        (x.to_u64().expect("fits") as f64).log2()
    } else {
        let top = (x >> (bits - 64)).to_u64().expect("fits");
        (top as f64).log2() + (bits - 64) as f64
    }
}

/// `ln(num / den * 2^shift)` at working precision `w`; `num, den > 0`.
pub(crate) fn ln_ratio_shifted(num: &BigUint, den: &BigUint, shift: i64, w: u32) -> HPInterval {
    // a/c lands within a hair of [1/sqrt2, sqrt2]
    let b = (approx_log2(num) - approx_log2(den)).round() as i64;
    let a = if b < 0 {
        num << (-b) as u64
    } else {
        num.clone()
    };
    let c = if b > 0 { den << b as u64 } else { den.clone() };
    let k = b + shift;
    // divide by (64 + j)/64 close to a/c, leaving |t| < 1/200
    let ratio = 2f64.powf(approx_log2(&a) - approx_log2(&c));
    let j = ((ratio - 1.0) * TABLE_STEPS as f64).round() as i64;
    let a64 = BigInt::from(a) * TABLE_STEPS;
    let cj = BigInt::from(c) * (TABLE_STEPS + j);
    let t = HPInterval::from_ratio(&(&a64 - &cj), &(a64 + cj), w).expect("positive denominator");
    let mut series = atanh_series(&t).mul_pow2(1);
    if j != 0 {
        series = series.add(&ln_table(j, w));
    }
    if k == 0 {
        series
    } else {
        ln2(w).mul_int(k).add(&series)
    }
}

/// Table spacing for the logarithm's argument reduction.
const TABLE_STEPS: i64 = 64;

/// `ln((64 + j)/64)` at working precision `w`, cached.
fn ln_table(j: i64, w: u32) -> HPInterval {
    type Table = OnceLock<Mutex<HashMap<(u32, i64), HPInterval>>>;
    static TABLE: Table = OnceLock::new();
    let map = TABLE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = map.lock().expect("ln table poisoned").get(&(w, j)) {
        return v.clone();
    }
    let num = BigInt::from(TABLE_STEPS + j);
    let den = BigInt::from(TABLE_STEPS);
    let t = HPInterval::from_ratio(&(&num - &den), &(num + den), w).expect("positive denominator");
    let value = atanh_series(&t).mul_pow2(1);
    map.lock()
        .expect("ln table poisoned")
        .entry((w, j))
        .or_insert(value)
        .clone()
}

fn ln_dyadic(x: &Dyadic, w: u32) -> HPInterval {
    debug_assert!(x.is_positive());
    let m = x.mantissa().magnitude();
    ln_ratio_shifted(m, &BigUint::one(), x.exponent(), w)
}

/// Enclosure of `ln(num/den)` for positive integers.
pub fn ln_rational(num: &BigInt, den: &BigInt, precision: u32) -> Result<HPInterval, NumericError> {
    if num.sign() != Sign::Plus || den.sign() != Sign::Plus {
        return Err(NumericError::Domain(format!(
            "ln_rational needs positive arguments, got {num}/{den}"
        )));
    }
    let w = precision + GUARD_BITS;
    Ok(ln_ratio_shifted(num.magnitude(), den.magnitude(), 0, w).with_precision(precision))
}

/// `ln(p)` for a positive machine integer.
pub fn ln_u64(v: u64, precision: u32) -> Result<HPInterval, NumericError> {
    ln_rational(&BigInt::from(v), &BigInt::one(), precision)
}

fn exp_dyadic(x: &Dyadic, w: u32) -> Result<HPInterval, NumericError> {
    if x.is_zero() {
        return Ok(HPInterval::one(w));
    }
    let xf = x.to_f64();
    if !xf.is_finite() || xf.abs() > EXP_ARG_LIMIT {
        return Err(NumericError::Overflow(format!("exp argument {xf:e}")));
    }
    let k = (xf / std::f64::consts::LN_2).round() as i64;
    let k_bits = 64 - k.unsigned_abs().leading_zeros();
    let wk = w + k_bits + 2 * EXP_HALVINGS as u32 + 16;
    let reduced = HPInterval::point(x.clone(), wk).sub(&ln2(wk).mul_int(k));
    let r = reduced.mul_pow2(-EXP_HALVINGS);
    let mut sum = HPInterval::one(wk);
    let mut term = HPInterval::one(wk);
    let mut j = 0i64;
    loop {
        j += 1;
        term = term.mul(&r).div_int(j);
        let m = term.mag();
        if m.is_zero() {
            break;
        }
        if m.top() < -(wk as i64) - 4 {
            // terms shrink by at least half from here on
            let bound = m.mul_pow2(1);
            sum = sum.add(&HPInterval::new(bound.neg(), bound, wk).expect("symmetric tail"));
            break;
        }
        sum = sum.add(&term);
    }
    for _ in 0..EXP_HALVINGS {
        sum = sum.square();
    }
    Ok(sum.mul_pow2(k))
}

impl HPInterval {
    /// Natural logarithm; the interval must be certified positive.
    pub fn ln(&self) -> Result<HPInterval, NumericError> {
        if !self.is_positive() {
            return Err(NumericError::Domain(format!(
                "ln of non-positive interval {self}"
            )));
        }
        let w = self.precision() + GUARD_BITS;
        let lo = ln_dyadic(self.lo(), w);
        if self.is_point() {
            return Ok(lo.with_precision(self.precision()));
        }
        // ln(hi) <= ln(lo) + (hi - lo)/lo
        let d = Dyadic::sub_round(self.hi(), self.lo(), w, Round::Up);
        let slope = Dyadic::div_round(&d, self.lo(), w, Round::Up);
        let hi = Dyadic::add_round(lo.hi(), &slope, w, Round::Up);
        Ok(HPInterval::from_bounds(
            lo.lo().clone(),
            hi,
            self.precision(),
        ))
    }

    pub fn exp(&self) -> Result<HPInterval, NumericError> {
        let w = self.precision() + GUARD_BITS;
        let lo = exp_dyadic(self.lo(), w)?;
        if self.is_point() {
            return Ok(lo.with_precision(self.precision()));
        }
        let d = Dyadic::sub_round(self.hi(), self.lo(), w, Round::Up);
        if d <= Dyadic::one() {
            // exp(hi) = exp(lo) e^d <= exp(lo) (1 + 2d) for 0 <= d <= 1
            let factor = Dyadic::add_round(&Dyadic::one(), &d.mul_pow2(1), w, Round::Up);
            let hi = Dyadic::mul_round(lo.hi(), &factor, w, Round::Up);
            return Ok(HPInterval::from_bounds(
                lo.lo().clone(),
                hi,
                self.precision(),
            ));
        }
        let hi = exp_dyadic(self.hi(), w)?;
        Ok(HPInterval::from_bounds(
            lo.lo().clone(),
            hi.hi().clone(),
            self.precision(),
        ))
    }

    /// `self^e = exp(e ln self)` for a positive base.
    pub fn powf(&self, e: &HPInterval) -> Result<HPInterval, NumericError> {
        let w = self.precision().max(e.precision());
        let base = self.with_precision(w + GUARD_BITS);
        let expo = e.with_precision(w + GUARD_BITS);
        Ok(expo.mul(&base.ln()?).exp()?.with_precision(w))
    }
}
