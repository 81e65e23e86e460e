//! Independent reference values for the integration tests.
//!
//! Everything here is fixed-point integer arithmetic at `SCALE_BITS`
//! fractional bits, written without touching the library's numeric module:
//! logarithms by `2 atanh((x-1)/(x+1))` after halving into `[1, 2)`, ln 2 by
//! `Σ 1/(k 2^k)`, Euler's constant by Euler–Maclaurin with Bernoulli numbers,
//! and `exp` by its Taylor series.

#![allow(dead_code)]

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use robin_forge::numeric::HPInterval;

pub const SCALE_BITS: u64 = 320;

/// Accumulated truncation error of the fixed-point routines stays far below
/// this.
pub const ORACLE_SLACK_BITS: u64 = 280;

/// A real number `value / 2^SCALE_BITS`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixed(pub BigInt);

impl Fixed {
    pub fn from_int(v: i64) -> Fixed {
        Fixed(BigInt::from(v) << SCALE_BITS)
    }

    pub fn from_ratio(num: &BigInt, den: &BigInt) -> Fixed {
        Fixed((num << SCALE_BITS) / den)
    }

    pub fn add(&self, o: &Fixed) -> Fixed {
        Fixed(&self.0 + &o.0)
    }

    pub fn sub(&self, o: &Fixed) -> Fixed {
        Fixed(&self.0 - &o.0)
    }

    pub fn mul(&self, o: &Fixed) -> Fixed {
        Fixed((&self.0 * &o.0) >> SCALE_BITS)
    }

    pub fn div(&self, o: &Fixed) -> Fixed {
        Fixed((&self.0 << SCALE_BITS) / &o.0)
    }

    pub fn div_int(&self, k: i64) -> Fixed {
        Fixed(&self.0 / k)
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.0.clone(), BigInt::one() << SCALE_BITS)
    }

    pub fn to_f64(&self) -> f64 {
        let r = self.to_rational();
        r.numer().to_f64().unwrap() / r.denom().to_f64().unwrap()
    }
}

/// `atanh(num/den)` for `0 <= num/den < 1/2`.
fn atanh(num: &BigInt, den: &BigInt) -> Fixed {
    let mut term = (num << SCALE_BITS) / den;
    let (n2, d2) = (num * num, den * den);
    let mut sum = BigInt::zero();
    let mut k = 0i64;
    while !term.is_zero() {
        sum += &term / (2 * k + 1);
        term = term * &n2 / &d2;
        k += 1;
    }
    Fixed(sum)
}

pub fn ln2() -> Fixed {
    let mut sum = BigInt::zero();
    let mut k = 1u64;
    loop {
        let term = (BigInt::one() << SCALE_BITS) / (BigInt::from(k) << k);
        if term.is_zero() {
            break;
        }
        sum += term;
        k += 1;
    }
    Fixed(sum)
}

/// `ln(num/den)` for positive integers.
pub fn ln(num: &BigInt, den: &BigInt) -> Fixed {
    assert!(num.is_positive() && den.is_positive());
    let (mut a, mut b) = (num.clone(), den.clone());
    let mut k = 0i64;
    while a >= &b << 1u32 {
        b <<= 1u32;
        k += 1;
    }
    while a < b {
        a <<= 1u32;
        k -= 1;
    }
    let series = atanh(&(&a - &b), &(&a + &b));
    Fixed(series.0 * 2 + ln2().0 * k)
}

pub fn ln_u64(v: u64) -> Fixed {
    ln(&BigInt::from(v), &BigInt::one())
}

/// `ln` of a positive fixed-point value.
pub fn ln_fixed(x: &Fixed) -> Fixed {
    ln(&x.0, &(BigInt::one() << SCALE_BITS))
}

pub fn exp(x: &Fixed) -> Fixed {
    // exp(x) = exp(x/2^h)^(2^h) keeps the series short
    let h = 8u32;
    let r = Fixed(&x.0 >> h);
    let mut term = Fixed::from_int(1);
    let mut sum = term.clone();
    let mut k = 1i64;
    while !term.0.is_zero() {
        term = term.mul(&r).div_int(k);
        sum = sum.add(&term);
        k += 1;
    }
    for _ in 0..h {
        sum = sum.mul(&sum);
    }
    sum
}

/// `B_0 .. B_m` from `Σ_{j<=m} C(m+1, j) B_j = 0`.
fn bernoulli(m: usize) -> Vec<BigRational> {
    let mut b = vec![BigRational::one()];
    for n in 1..=m {
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one();
        for (j, bj) in b.iter().enumerate() {
            acc += bj * BigRational::from_integer(binom.clone());
            binom = binom * BigInt::from(n + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(n + 1)));
    }
    b
}

/// Euler's constant: `H_N - ln N - 1/(2N) + Σ_{k<=K} B_2k / (2k N^2k)` with
/// `N = 128`, `K = 40`; the remainder is below `2^-380`.
pub fn euler_gamma() -> Fixed {
    let n: i64 = 128;
    let mut harmonic = Fixed(BigInt::zero());
    for k in 1..=n {
        harmonic = harmonic.add(&Fixed::from_ratio(&BigInt::one(), &BigInt::from(k)));
    }
    let mut g = harmonic
        .sub(&ln_u64(n as u64))
        .sub(&Fixed::from_ratio(&BigInt::one(), &BigInt::from(2 * n)));
    let b = bernoulli(80);
    for k in 1..=40usize {
        let denom = BigInt::from(2 * k) * num_traits::pow(BigInt::from(n), 2 * k);
        let term = &b[2 * k] / BigRational::from_integer(denom);
        g = g.add(&Fixed::from_ratio(term.numer(), term.denom()));
    }
    g
}

pub fn exp_gamma() -> Fixed {
    exp(&euler_gamma())
}

/// `σ(k)` by trial division, independent of the library's tables.
pub fn sigma(k: u64) -> u64 {
    (1..=k).filter(|d| k.is_multiple_of(*d)).sum()
}

pub fn sigma_big(factors: &[(u64, u32)]) -> BigUint {
    factors.iter().fold(BigUint::one(), |acc, &(p, a)| {
        let mut s = BigUint::zero();
        let mut pk = BigUint::one();
        for _ in 0..=a {
            s += &pk;
            pk *= p;
        }
        acc * s
    })
}

pub fn trial_prime(k: u64) -> bool {
    if k < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= k {
        if k.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `G(n) = σ(n) / (n ln ln n)` from an exact factorization.
pub fn g_value(factors: &[(u64, u32)]) -> Fixed {
    let n: BigUint = factors.iter().fold(BigUint::one(), |acc, &(p, a)| {
        acc * num_traits::pow(BigUint::from(p), a as usize)
    });
    let abundancy = Fixed::from_ratio(&BigInt::from(sigma_big(factors)), &BigInt::from(n.clone()));
    let lnln = ln_fixed(&ln(&BigInt::from(n), &BigInt::one()));
    abundancy.div(&lnln)
}

/// `x` lies in the interval up to the oracle's own slack.
pub fn encloses(x: &HPInterval, v: &Fixed) -> bool {
    let slack = BigRational::new(BigInt::one(), BigInt::one() << ORACLE_SLACK_BITS);
    let r = v.to_rational();
    x.lo().to_rational() <= &r + &slack && x.hi().to_rational() >= &r - &slack
}

/// Parse a decimal literal such as `"1.7810724"` exactly.
pub fn decimal(s: &str) -> BigRational {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let digits: BigInt = format!("{int}{frac}").parse().unwrap();
    BigRational::new(digits, num_traits::pow(BigInt::from(10), frac.len()))
}

/// Agreement of `v` with a decimal literal to the literal's last digit.
pub fn matches_digits(v: &Fixed, literal: &str) -> bool {
    let lit = decimal(literal);
    let places = literal.split_once('.').map_or(0, |(_, f)| f.len());
    let ulp = BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10), places));
    (v.to_rational() - lit).abs() < ulp
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}
