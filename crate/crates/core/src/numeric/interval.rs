use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::dyadic::{Dyadic, Round};
use super::NumericError;

/// A closed interval `[lo, hi]` with dyadic endpoints, rounded outward to
/// `precision` significant bits after every operation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HPInterval {
    lo: Dyadic,
    hi: Dyadic,
    precision: u32,
}

/// Outcome of a certified comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Less,
    Greater,
    Overlap,
}

/// `Less` iff `a.hi < b.lo`, `Greater` iff `a.lo > b.hi`, otherwise `Overlap`.
pub fn compare(a: &HPInterval, b: &HPInterval) -> Verdict {
    if a.hi < b.lo {
        Verdict::Less
    } else if a.lo > b.hi {
        Verdict::Greater
    } else {
        Verdict::Overlap
    }
}

impl HPInterval {
    pub fn new(lo: Dyadic, hi: Dyadic, precision: u32) -> Result<Self, NumericError> {
        if lo > hi {
            return Err(NumericError::InvertedBounds);
        }
        Ok(HPInterval {
            lo: lo.round(precision, Round::Down),
            hi: hi.round(precision, Round::Up),
            precision,
        })
    }

    pub(crate) fn from_bounds(lo: Dyadic, hi: Dyadic, precision: u32) -> Self {
        debug_assert!(lo <= hi);
        HPInterval {
            lo: lo.round(precision, Round::Down),
            hi: hi.round(precision, Round::Up),
            precision,
        }
    }

    pub fn point(value: Dyadic, precision: u32) -> Self {
        HPInterval::from_bounds(value.clone(), value, precision)
    }

    pub fn zero(precision: u32) -> Self {
        HPInterval::point(Dyadic::zero(), precision)
    }

    pub fn one(precision: u32) -> Self {
        HPInterval::point(Dyadic::one(), precision)
    }

    pub fn from_i64(v: i64, precision: u32) -> Self {
        HPInterval::point(Dyadic::from_i64(v), precision)
    }

    pub fn from_u64(v: u64, precision: u32) -> Self {
        HPInterval::point(Dyadic::from_u64(v), precision)
    }

    pub fn from_biguint(v: &BigUint, precision: u32) -> Self {
        HPInterval::point(Dyadic::from_bigint(BigInt::from(v.clone())), precision)
    }

    /// Exact value of a finite `f64`, widened only by rounding to `precision`.
    pub fn from_f64(v: f64, precision: u32) -> Result<Self, NumericError> {
        let d = Dyadic::from_f64(v).ok_or(NumericError::NonFinite)?;
        Ok(HPInterval::point(d, precision))
    }

    /// Enclosure of `num / den`.
    pub fn from_ratio(num: &BigInt, den: &BigInt, precision: u32) -> Result<Self, NumericError> {
        if num.sign() == num_bigint::Sign::NoSign && den.sign() != num_bigint::Sign::NoSign {
            return Ok(HPInterval::zero(precision));
        }
        if den.sign() == num_bigint::Sign::NoSign {
            return Err(NumericError::DivisionByZero);
        }
        Ok(HPInterval {
            lo: Dyadic::from_ratio(num, den, precision, Round::Down),
            hi: Dyadic::from_ratio(num, den, precision, Round::Up),
            precision,
        })
    }

    pub fn from_rational(r: &BigRational, precision: u32) -> Self {
        HPInterval::from_ratio(r.numer(), r.denom(), precision)
            .expect("BigRational denominators are nonzero")
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &HPInterval) -> HPInterval {
        HPInterval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            precision: self.precision.max(other.precision),
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Re-round outward at a different precision.
    pub fn with_precision(&self, precision: u32) -> HPInterval {
        HPInterval::from_bounds(self.lo.clone(), self.hi.clone(), precision)
    }

    /// Upper bound on `hi - lo`.
    pub fn width(&self) -> Dyadic {
        Dyadic::sub_round(&self.hi, &self.lo, 64, Round::Up)
    }

    pub fn width_f64(&self) -> f64 {
        self.width().to_f64()
    }

    pub fn mid_f64(&self) -> f64 {
        Dyadic::add_round(&self.lo, &self.hi, 64, Round::Down)
            .mul_pow2(-1)
            .to_f64()
    }

    /// Largest absolute value over the interval.
    pub fn mag(&self) -> Dyadic {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        &self.lo.to_rational() <= r && r <= &self.hi.to_rational()
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Dyadic::zero())
    }

    /// `other ⊆ self`.
    pub fn encloses(&self, other: &HPInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &HPInterval) -> bool {
        compare(self, other) == Verdict::Overlap
    }

    /// Certified `self > 0`.
    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    /// Certified `self < 0`.
    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// True when `|x - target| <= tol` for every `x` in the interval.
    pub fn within(&self, target: f64, tol: f64) -> bool {
        let t = Dyadic::from_f64(target).expect("finite target");
        let tol = Dyadic::from_f64(tol).expect("finite tolerance");
        let lo_ok = Dyadic::sub_round(&t, &tol, 128, Round::Down) <= self.lo;
        let hi_ok = self.hi <= Dyadic::add_round(&t, &tol, 128, Round::Up);
        lo_ok && hi_ok
    }

    fn prec_with(&self, other: &HPInterval) -> u32 {
        self.precision.max(other.precision)
    }

    pub fn add(&self, other: &HPInterval) -> HPInterval {
        let p = self.prec_with(other);
        HPInterval {
            lo: Dyadic::add_round(&self.lo, &other.lo, p, Round::Down),
            hi: Dyadic::add_round(&self.hi, &other.hi, p, Round::Up),
            precision: p,
        }
    }

    pub fn sub(&self, other: &HPInterval) -> HPInterval {
        let p = self.prec_with(other);
        HPInterval {
            lo: Dyadic::sub_round(&self.lo, &other.hi, p, Round::Down),
            hi: Dyadic::sub_round(&self.hi, &other.lo, p, Round::Up),
            precision: p,
        }
    }

    pub fn neg(&self) -> HPInterval {
        HPInterval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            precision: self.precision,
        }
    }

    pub fn abs(&self) -> HPInterval {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            HPInterval {
                lo: Dyadic::zero(),
                hi: self.mag(),
                precision: self.precision,
            }
        }
    }

    /// Exact scaling by `2^k`.
    pub fn mul_pow2(&self, k: i64) -> HPInterval {
        HPInterval {
            lo: self.lo.mul_pow2(k),
            hi: self.hi.mul_pow2(k),
            precision: self.precision,
        }
    }

    pub fn mul(&self, other: &HPInterval) -> HPInterval {
        let p = self.prec_with(other);
        if !self.lo.is_negative() && !other.lo.is_negative() {
            return HPInterval {
                lo: Dyadic::mul_round(&self.lo, &other.lo, p, Round::Down),
                hi: Dyadic::mul_round(&self.hi, &other.hi, p, Round::Up),
                precision: p,
            };
        }
        let pairs = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let lo = pairs
            .iter()
            .map(|(a, b)| Dyadic::mul_round(a, b, p, Round::Down))
            .min()
            .expect("four candidates");
        let hi = pairs
            .iter()
            .map(|(a, b)| Dyadic::mul_round(a, b, p, Round::Up))
            .max()
            .expect("four candidates");
        HPInterval {
            lo,
            hi,
            precision: p,
        }
    }

    pub fn square(&self) -> HPInterval {
        let a = self.abs();
        HPInterval {
            lo: Dyadic::mul_round(&a.lo, &a.lo, self.precision, Round::Down),
            hi: Dyadic::mul_round(&a.hi, &a.hi, self.precision, Round::Up),
            precision: self.precision,
        }
    }

    pub fn mul_int(&self, k: i64) -> HPInterval {
        self.mul(&HPInterval::from_i64(k, self.precision))
    }

    pub fn div(&self, other: &HPInterval) -> Result<HPInterval, NumericError> {
        if other.contains_zero() {
            return Err(NumericError::DivisionByZero);
        }
        let p = self.prec_with(other);
        if !self.lo.is_negative() && other.lo.is_positive() {
            return Ok(HPInterval {
                lo: Dyadic::div_round(&self.lo, &other.hi, p, Round::Down),
                hi: Dyadic::div_round(&self.hi, &other.lo, p, Round::Up),
                precision: p,
            });
        }
        let pairs = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let lo = pairs
            .iter()
            .map(|(a, b)| Dyadic::div_round(a, b, p, Round::Down))
            .min()
            .expect("four candidates");
        let hi = pairs
            .iter()
            .map(|(a, b)| Dyadic::div_round(a, b, p, Round::Up))
            .max()
            .expect("four candidates");
        Ok(HPInterval {
            lo,
            hi,
            precision: p,
        })
    }

    /// Division by a nonzero machine integer.
    pub fn div_int(&self, k: i64) -> HPInterval {
        assert!(k != 0, "division by zero");
        self.div(&HPInterval::from_i64(k, self.precision))
            .expect("nonzero divisor")
    }

    pub fn recip(&self) -> Result<HPInterval, NumericError> {
        HPInterval::one(self.precision).div(self)
    }

    /// Integer power by repeated squaring.
    pub fn powi(&self, n: u32) -> HPInterval {
        let mut result = HPInterval::one(self.precision);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.square();
            }
        }
        result
    }
}

impl fmt::Display for HPInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = super::format::Decimal::from_interval(self);
        write!(f, "{}±{}", d.value, d.bound)
    }
}
