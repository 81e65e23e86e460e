//! Binary floating-point numbers with an unbounded mantissa and directed rounding.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Rounding direction for a single endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

/// `mant * 2^exp`, kept normalized (odd mantissa, or zero with `exp == 0`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

fn mag_bits(m: &BigUint) -> i64 {
    m.bits() as i64
}

/// Shift a magnitude right by `s` bits, rounding toward zero or away from it.
fn shr_mag(m: &BigUint, s: u64, away: bool) -> BigUint {
    let q = m >> s;
    let inexact = m.trailing_zeros().is_some_and(|tz| tz < s);
    if away && inexact {
        q + 1u32
    } else {
        q
    }
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Dyadic::zero();
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        if tz == 0 {
            Dyadic { mant, exp }
        } else {
            Dyadic {
                mant: mant >> tz,
                exp: exp + tz as i64,
            }
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: 0,
        }
    }

    pub fn from_i64(v: i64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    pub fn from_u64(v: u64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Dyadic::new(v, 0)
    }

    /// Exact conversion; `None` for non-finite input.
    pub fn from_f64(v: f64) -> Option<Self> {
        if !v.is_finite() {
            return None;
        }
        if v == 0.0 {
            return Some(Dyadic::zero());
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & 0x000f_ffff_ffff_ffff;
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1 << 52), raw_exp - 1075)
        };
        Some(Dyadic::new(BigInt::from(m) * sign, e))
    }

    pub fn pow2(k: i64) -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: k,
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    /// Smallest `t` with `|self| < 2^t`. Meaningless for zero (returns `i64::MIN`).
    pub fn top(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exp + mag_bits(self.mant.magnitude())
        }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    fn from_parts(negative: bool, mag: BigUint, exp: i64) -> Dyadic {
        let sign = if negative { Sign::Minus } else { Sign::Plus };
        Dyadic::new(BigInt::from_biguint(sign, mag), exp)
    }

    /// Round a signed magnitude to `prec` significant bits in direction `dir`.
    fn round_parts(negative: bool, mag: BigUint, exp: i64, prec: u32, dir: Round) -> Dyadic {
        let bits = mag_bits(&mag);
        let prec = prec.max(2) as i64;
        if bits <= prec {
            return Dyadic::from_parts(negative, mag, exp);
        }
        let s = (bits - prec) as u64;
        let away = (dir == Round::Up) != negative;
        Dyadic::from_parts(negative, shr_mag(&mag, s, away), exp + s as i64)
    }

    pub fn round(&self, prec: u32, dir: Round) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        if mag_bits(self.mant.magnitude()) <= prec.max(2) as i64 {
            return self.clone();
        }
        Dyadic::round_parts(
            self.is_negative(),
            self.mant.magnitude().clone(),
            self.exp,
            prec,
            dir,
        )
    }

    fn add_exact(a: &Dyadic, b: &Dyadic) -> Dyadic {
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        let e = a.exp.min(b.exp);
        let am = &a.mant << (a.exp - e) as u64;
        let bm = &b.mant << (b.exp - e) as u64;
        Dyadic::new(am + bm, e)
    }

    pub fn add_round(a: &Dyadic, b: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        if a.is_zero() {
            return b.round(prec, dir);
        }
        if b.is_zero() {
            return a.round(prec, dir);
        }
        let (big, small) = if a.top() >= b.top() { (a, b) } else { (b, a) };
        // A tiny addend only decides the rounding direction; replace it by a
        // power-of-two bound so the exact sum stays short.
        let cutoff = big.exp.min(big.top() - prec as i64 - 4);
        if small.top() <= cutoff {
            let replacement = match (dir, small.is_negative()) {
                (Round::Down, false) | (Round::Up, true) => Dyadic::zero(),
                (Round::Down, true) => Dyadic::pow2(cutoff).neg(),
                (Round::Up, false) => Dyadic::pow2(cutoff),
            };
            return Dyadic::add_exact(big, &replacement).round(prec, dir);
        }
        Dyadic::add_exact(a, b).round(prec, dir)
    }

    pub fn sub_round(a: &Dyadic, b: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        Dyadic::add_round(a, &b.neg(), prec, dir)
    }

    pub fn mul_round(a: &Dyadic, b: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        if a.is_zero() || b.is_zero() {
            return Dyadic::zero();
        }
        Dyadic::new(&a.mant * &b.mant, a.exp + b.exp).round(prec, dir)
    }

    /// `a / b` rounded in direction `dir`. Panics if `b` is zero.
    pub fn div_round(a: &Dyadic, b: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        assert!(!b.is_zero(), "division by zero dyadic");
        if a.is_zero() {
            return Dyadic::zero();
        }
        let negative = a.is_negative() != b.is_negative();
        let am = a.mant.magnitude();
        let bm = b.mant.magnitude();
        let s = (prec as i64 + 2 + mag_bits(bm) - mag_bits(am)).max(0) as u64;
        let (mut q, r) = (am << s).div_rem(bm);
        let away = (dir == Round::Up) != negative;
        if away && !r.is_zero() {
            q += 1u32;
        }
        Dyadic::round_parts(negative, q, a.exp - b.exp - s as i64, prec, dir)
    }

    /// `num / den` for integers, rounded in direction `dir`.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32, dir: Round) -> Dyadic {
        Dyadic::div_round(
            &Dyadic::from_bigint(num.clone()),
            &Dyadic::from_bigint(den.clone()),
            prec,
            dir,
        )
    }

    /// Integer floor of the value.
    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            self.mant.div_floor(&(BigInt::one() << (-self.exp) as u64))
        }
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Nearest-ish `f64` approximation (truncated mantissa). For display and
    /// heuristics only, never for certified decisions.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let mag = self.mant.magnitude();
        let bits = mag_bits(mag);
        let (m, e) = if bits > 64 {
            let s = (bits - 64) as u64;
            ((mag >> s).to_u64().unwrap_or(u64::MAX), self.exp + s as i64)
        } else {
            (mag.to_u64().unwrap_or(u64::MAX), self.exp)
        };
        let scaled = ldexp(m as f64, e);
        if self.is_negative() {
            -scaled
        } else {
            scaled
        }
    }
}

fn ldexp(x: f64, e: i64) -> f64 {
    let mut x = x;
    let mut e = e;
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let sa = self.mant.sign();
        let sb = other.mant.sign();
        let rank = |s: Sign| match s {
            Sign::Minus => 0,
            Sign::NoSign => 1,
            Sign::Plus => 2,
        };
        match rank(sa).cmp(&rank(sb)) {
            Ordering::Equal => {}
            ord => return ord,
        }
        if sa == Sign::NoSign {
            return Ordering::Equal;
        }
        let mag_order = match self.top().cmp(&other.top()) {
            Ordering::Equal => {
                let e = self.exp.min(other.exp);
                let am = self.mant.magnitude() << (self.exp - e) as u64;
                let bm = other.mant.magnitude() << (other.exp - e) as u64;
                am.cmp(&bm)
            }
            ord => ord,
        };
        if sa == Sign::Minus {
            mag_order.reverse()
        } else {
            mag_order
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mant, self.exp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(m: i64, e: i64) -> Dyadic {
        Dyadic::new(BigInt::from(m), e)
    }

    #[test]
    fn normalizes_trailing_zeros() {
        assert_eq!(d(12, 0), d(3, 2));
        assert_eq!(d(0, 17), Dyadic::zero());
    }

    #[test]
    fn rounding_negative_values() {
        // -7 at 2 bits: down -> -8, up -> -6
        assert_eq!(d(-7, 0).round(2, Round::Down), d(-8, 0));
        assert_eq!(d(-7, 0).round(2, Round::Up), d(-6, 0));
        assert_eq!(d(7, 0).round(2, Round::Down), d(6, 0));
        assert_eq!(d(7, 0).round(2, Round::Up), d(8, 0));
    }

    #[test]
    fn division_brackets_thirds() {
        let lo = Dyadic::from_ratio(&1.into(), &3.into(), 64, Round::Down);
        let hi = Dyadic::from_ratio(&1.into(), &3.into(), 64, Round::Up);
        let third = BigRational::new(1.into(), 3.into());
        assert!(lo.to_rational() < third && third < hi.to_rational());
        let nlo = Dyadic::from_ratio(&(-1).into(), &3.into(), 64, Round::Down);
        assert!(nlo.to_rational() < -third);
    }

    #[test]
    fn tiny_addend_keeps_direction() {
        let big = Dyadic::one();
        let tiny = Dyadic::pow2(-10_000);
        let up = Dyadic::add_round(&big, &tiny, 64, Round::Up);
        let down = Dyadic::add_round(&big, &tiny, 64, Round::Down);
        assert!(up > big);
        assert_eq!(down, big);
        let down_neg = Dyadic::add_round(&big, &tiny.neg(), 64, Round::Down);
        assert!(down_neg < big);
    }

    #[test]
    fn ordering_across_scales() {
        assert!(d(-1, 100) < d(1, -100));
        assert!(d(3, 0) < d(1, 2));
        assert!(d(-3, 0) > d(-1, 2));
        assert_eq!(d(5, 1).cmp(&d(10, 0)), Ordering::Equal);
    }

    #[test]
    fn f64_round_trip() {
        for v in [1.5, -0.1, 1e-300, 12345.678] {
            assert_eq!(Dyadic::from_f64(v).unwrap().to_f64(), v);
        }
    }
}
