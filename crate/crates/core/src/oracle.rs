//! Brute-force ground truth at small scale.
//!
//! Everything here is exact integer arithmetic. Critical exponents are
//! ordered by locating a rational strictly between them on the Stern–Brocot
//! tree, using `u/v < log_p X  <=>  p^u < X^v`.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::primes::simple_sieve;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{k} is outside the table range 1..={max}")]
    OutOfRange { k: u64, max: u64 },
    #[error("oracle bound {0} exceeds the supported maximum {MAX_ORACLE_BOUND}")]
    BoundTooLarge(u64),
}

/// Largest `max` accepted by the brute-force routines (the table extends to
/// twice this).
pub const MAX_ORACLE_BOUND: u64 = 100_000_000;

/// Separating rationals with `u + v` beyond this count as a tie.
const MAX_HEIGHT: u64 = 1 << 12;

/// `σ(k)` for `1 <= k <= max` by a divisor-sum sieve.
#[derive(Clone, Debug)]
pub struct SigmaTable {
    values: Vec<u32>,
}

impl SigmaTable {
    pub fn new(max: u64) -> Result<Self, OracleError> {
        if max > 2 * MAX_ORACLE_BOUND {
            return Err(OracleError::BoundTooLarge(max));
        }
        let n = max as usize;
        // σ(k) < 5k throughout this range, well inside u32
        let mut values = vec![0u32; n + 1];
        for d in 1..=n {
            let mut k = d;
            while k <= n {
                values[k] += d as u32;
                k += d;
            }
        }
        Ok(SigmaTable { values })
    }

    pub fn max(&self) -> u64 {
        (self.values.len() - 1) as u64
    }

    pub fn sigma(&self, k: u64) -> Result<u64, OracleError> {
        if k == 0 || k > self.max() {
            return Err(OracleError::OutOfRange { k, max: self.max() });
        }
        Ok(self.values[k as usize] as u64)
    }

    /// Superabundant numbers `<= limit`: `σ(n)/n > σ(k)/k` for all `k < n`.
    pub fn superabundant(&self, limit: u64) -> Result<Vec<u64>, OracleError> {
        if limit > self.max() {
            return Err(OracleError::OutOfRange {
                k: limit,
                max: self.max(),
            });
        }
        let mut out = Vec::new();
        let (mut best_sigma, mut best_k) = (0u128, 1u128);
        for k in 1..=limit {
            let s = self.values[k as usize] as u128;
            if s * best_k > best_sigma * k as u128 {
                out.push(k);
                best_sigma = s;
                best_k = k as u128;
            }
        }
        Ok(out)
    }
}

/// `Σ_{d | k} d` by trial division.
pub fn sigma_bruteforce(k: u64) -> Result<u64, OracleError> {
    if k == 0 {
        return Err(OracleError::OutOfRange { k, max: u64::MAX });
    }
    let mut total = 0;
    let mut d = 1;
    while d * d <= k {
        if k.is_multiple_of(d) {
            total += d;
            if d * d != k {
                total += k / d;
            }
        }
        d += 1;
    }
    Ok(total)
}

pub fn superabundant_bruteforce(max: u64) -> Result<Vec<u64>, OracleError> {
    if max > MAX_ORACLE_BOUND {
        return Err(OracleError::BoundTooLarge(max));
    }
    SigmaTable::new(max)?.superabundant(max)
}

/// `ε(p, a) = log_p(X)` with `X = (p^(a+1) - 1) / (p^(a+1) - p)`.
#[derive(Clone, Debug)]
struct Critical {
    p: u64,
    num: BigUint,
    den: BigUint,
}

impl Critical {
    fn new(p: u64, a: u32) -> Self {
        let pa1 = num_traits::pow(BigUint::from(p), a as usize + 1);
        Critical {
            p,
            num: &pa1 - 1u32,
            den: pa1 - p,
        }
    }

    /// Is `u/v < ε`?
    fn exceeds(&self, u: u64, v: u64) -> bool {
        let lhs = num_traits::pow(BigUint::from(self.p), u as usize)
            * num_traits::pow(self.den.clone(), v as usize);
        lhs < num_traits::pow(self.num.clone(), v as usize)
    }
}

/// Order two critical values; `Equal` when no separating rational turns up
/// below the height limit. On inequality also returns a rational strictly
/// between them.
fn separate(x: &Critical, y: &Critical) -> (Ordering, Option<(u64, u64)>) {
    let (mut lu, mut lv, mut ru, mut rv) = (0u64, 1u64, 1u64, 0u64);
    loop {
        let (mu, mv) = (lu + ru, lv + rv);
        if mu + mv > MAX_HEIGHT {
            return (Ordering::Equal, None);
        }
        match (x.exceeds(mu, mv), y.exceeds(mu, mv)) {
            (true, false) => return (Ordering::Greater, Some((mu, mv))),
            (false, true) => return (Ordering::Less, Some((mu, mv))),
            (true, true) => (lu, lv) = (mu, mv),
            (false, false) => (ru, rv) = (mu, mv),
        }
    }
}

fn ilog2(x: u64) -> u32 {
    63 - x.max(1).leading_zeros()
}

/// Index of the maximiser of `σ(k)^v / k^(u+v)` among `candidates`.
fn maximiser(table: &SigmaTable, candidates: &[u64], u: u64, v: u64) -> Result<u64, OracleError> {
    let mut best: Option<(u64, BigUint, BigUint)> = None;
    for &k in candidates {
        let num = num_traits::pow(BigUint::from(table.sigma(k)?), v as usize);
        let den = num_traits::pow(BigUint::from(k), (u + v) as usize);
        let better = match &best {
            None => true,
            Some((_, bn, bd)) => &num * bd > bn * &den,
        };
        if better {
            best = Some((k, num, den));
        }
    }
    Ok(best.map_or(1, |b| b.0))
}

/// Colossally abundant numbers `<= max` by direct maximisation.
///
/// Let `q` be the first prime whose primorial exceeds `2 max`. Below
/// `ε(q, 1)` every maximiser is divisible by all primes up to `q`, so only
/// the critical values `ε(p, a) >= ε(q, 1)` with `p <= q`, `a <= log2(max)`
/// and `p^a <= 2 max` matter. Between each pair of consecutive values a
/// rational test point is taken and the maximiser of `σ(k)/k^(1+ε)` is found
/// among superabundant `k <= 2 max`. Maximisers above `max` are dropped.
pub fn ca_bruteforce(max: u64) -> Result<Vec<u64>, OracleError> {
    if max > MAX_ORACLE_BOUND {
        return Err(OracleError::BoundTooLarge(max));
    }
    if max < 2 {
        return Ok(Vec::new());
    }
    let table = SigmaTable::new(2 * max)?;
    ca_with_table(&table, max)
}

/// First prime whose primorial exceeds `bound`.
fn primorial_cutoff(bound: u64) -> u64 {
    let mut primorial = 1u64;
    let mut p = 1u64;
    while primorial <= bound {
        p += 1;
        while (2..p).any(|d| p.is_multiple_of(d)) {
            p += 1;
        }
        primorial = primorial.saturating_mul(p);
    }
    p
}

/// As [`ca_bruteforce`], reusing a table that reaches `2 max`.
pub fn ca_with_table(table: &SigmaTable, max: u64) -> Result<Vec<u64>, OracleError> {
    if table.max() < 2 * max {
        return Err(OracleError::OutOfRange {
            k: 2 * max,
            max: table.max(),
        });
    }
    let candidates = table.superabundant(2 * max)?;
    let bits = ilog2(max).max(1);
    let q = primorial_cutoff(2 * max);
    let floor = Critical::new(q, 1);
    let mut events: Vec<Critical> = Vec::new();
    for p in simple_sieve(q) {
        let mut power = p;
        let mut a = 1;
        while a <= bits && power <= 2 * max {
            let ev = Critical::new(p, a);
            if (p == q && a == 1) || separate(&ev, &floor).0 == Ordering::Greater {
                events.push(ev);
            }
            power = power.saturating_mul(p);
            a += 1;
        }
    }
    events.sort_by(|x, y| separate(y, x).0);

    let mut found: Vec<u64> = Vec::new();
    for pair in events.windows(2) {
        let (hi, lo) = (&pair[0], &pair[1]);
        if let (Ordering::Greater, Some((u, v))) = separate(hi, lo) {
            let n = maximiser(table, &candidates, u, v)?;
            if n > 1 && n <= max && !found.contains(&n) {
                found.push(n);
            }
        }
    }
    found.sort_unstable();
    Ok(found)
}

/// `σ` of a product of prime powers, for spot checks against the table.
pub fn sigma_of_factors(factors: &[(u64, u32)]) -> BigUint {
    factors.iter().fold(BigUint::one(), |acc, &(p, a)| {
        let pb = BigUint::from(p);
        let s = (num_traits::pow(pb.clone(), a as usize + 1) - 1u32) / (pb - 1u32);
        acc * s
    })
}

/// Whether every element of `sub` appears in `sup` (both ascending).
pub fn is_subsequence(sub: &[u64], sup: &[u64]) -> bool {
    let mut it = sup.iter();
    sub.iter().all(|x| it.any(|y| y == x))
}
