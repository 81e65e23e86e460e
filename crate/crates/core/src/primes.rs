//! Prime supply: an unbounded ascending stream backed by a segmented sieve
//! with geometrically growing windows, plus deterministic primality tests.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrimeError {
    #[error("primality is only defined for k >= 2")]
    Domain,
    #[error("prime stream exhausted the 64-bit range")]
    Exhausted,
}

const FIRST_WINDOW: u64 = 1 << 12;
const MAX_WINDOW: u64 = 1 << 22;

/// Every prime exactly once, in increasing order.
#[derive(Debug, Clone)]
pub struct PrimeStream {
    /// Sieving primes, complete up to `base_limit`.
    base: Vec<u64>,
    base_limit: u64,
    /// Primes of the current window not yet handed out.
    buffer: Vec<u64>,
    cursor: usize,
    /// Next window starts here.
    window_lo: u64,
    window_len: u64,
    emitted: u64,
}

impl Default for PrimeStream {
    fn default() -> Self {
        PrimeStream::new()
    }
}

impl PrimeStream {
    pub fn new() -> Self {
        PrimeStream::starting_after(1)
    }

    /// Stream whose first element is the smallest prime greater than `x`.
    pub fn starting_after(x: u64) -> Self {
        PrimeStream {
            base: Vec::new(),
            base_limit: 1,
            buffer: Vec::new(),
            cursor: 0,
            window_lo: x.saturating_add(1).max(2),
            window_len: FIRST_WINDOW,
            emitted: 0,
        }
    }

    /// How many primes this stream has returned so far.
    pub fn emitted(&self) -> u64 {
        self.emitted
    }

    pub fn next_prime(&mut self) -> Result<u64, PrimeError> {
        while self.cursor >= self.buffer.len() {
            self.fill_window()?;
        }
        let p = self.buffer[self.cursor];
        self.cursor += 1;
        self.emitted += 1;
        Ok(p)
    }

    fn fill_window(&mut self) -> Result<(), PrimeError> {
        let lo = self.window_lo;
        let hi = lo
            .checked_add(self.window_len)
            .ok_or(PrimeError::Exhausted)?;
        let root = isqrt(hi - 1) + 1;
        if root > self.base_limit {
            let limit = root.max(self.base_limit.saturating_mul(2));
            self.base = simple_sieve(limit);
            self.base_limit = limit;
        }
        self.buffer = sieve_segment(lo, hi, &self.base);
        self.cursor = 0;
        self.window_lo = hi;
        self.window_len = (self.window_len * 2).min(MAX_WINDOW);
        Ok(())
    }
}

impl Iterator for PrimeStream {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        self.next_prime().ok()
    }
}

fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.saturating_mul(x) > n {
        x -= 1;
    }
    while (x + 1).saturating_mul(x + 1) <= n {
        x += 1;
    }
    x
}

/// All primes `<= limit` by the sieve of Eratosthenes.
pub fn simple_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// Primes in `[lo, hi)`; `base` must hold every prime up to `sqrt(hi)`.
fn sieve_segment(lo: u64, hi: u64, base: &[u64]) -> Vec<u64> {
    let len = (hi - lo) as usize;
    let mut composite = vec![false; len];
    for &p in base {
        if p.saturating_mul(p) >= hi {
            break;
        }
        let first = (p * p).max(lo.div_ceil(p) * p);
        let mut m = first;
        while m < hi {
            composite[(m - lo) as usize] = true;
            m += p;
        }
    }
    (0..len)
        .filter(|&i| !composite[i])
        .map(|i| lo + i as u64)
        .filter(|&v| v >= 2)
        .collect()
}

/// Primes in the closed range `[lo, hi]`.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    if hi < lo || hi < 2 {
        return Vec::new();
    }
    let base = simple_sieve(isqrt(hi) + 1);
    let mut out = Vec::new();
    let mut start = lo.max(2);
    while start <= hi {
        let end = hi.saturating_add(1).min(start.saturating_add(MAX_WINDOW));
        out.extend(sieve_segment(start, end, &base));
        if end == u64::MAX {
            break;
        }
        start = end;
    }
    out
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller–Rabin; the first twelve prime bases are exact for all
/// 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn is_probable_prime_big(n: &BigUint) -> bool {
    let one = BigUint::from(1u32);
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    for &p in &WITNESSES {
        if (n % p) == BigUint::from(0u32) {
            return false;
        }
    }
    'witness: for &a in &WITNESSES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primality of `k >= 2`. Exact below 2^64; above that a twelve-base
/// Miller–Rabin test (quotient primes never get near that size).
pub fn is_prime(k: &BigUint) -> Result<bool, PrimeError> {
    if *k < BigUint::from(2u32) {
        return Err(PrimeError::Domain);
    }
    Ok(match k.to_u64() {
        Some(v) => is_prime_u64(v),
        None => is_probable_prime_big(k),
    })
}

/// Smallest prime strictly greater than `p`.
pub fn next_prime_after(p: u64) -> u64 {
    let mut q = p + 1;
    while !is_prime_u64(q) {
        q += 1;
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        n >= 2
            && (2..)
                .take_while(|d| d * d <= n)
                .all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn first_primes() {
        let first: Vec<u64> = PrimeStream::new().take(5).collect();
        assert_eq!(first, vec![2, 3, 5, 7, 11]);
        assert_eq!(PrimeStream::new().nth(24), Some(97));
    }

    #[test]
    fn is_prime_examples() {
        assert_eq!(is_prime(&BigUint::from(2u32)), Ok(true));
        assert_eq!(is_prime(&BigUint::from(91u32)), Ok(false));
        assert_eq!(is_prime(&BigUint::from(104_729u32)), Ok(true));
        assert_eq!(is_prime(&BigUint::from(1u32)), Err(PrimeError::Domain));
    }

    #[test]
    fn big_primes() {
        // 2^89 - 1 is a Mersenne prime, 2^67 - 1 is not
        let m89 = (BigUint::from(1u32) << 89u32) - 1u32;
        let m67 = (BigUint::from(1u32) << 67u32) - 1u32;
        assert_eq!(is_prime(&m89), Ok(true));
        assert_eq!(is_prime(&m67), Ok(false));
        assert!(is_prime_u64(18_446_744_073_709_551_557));
    }

    #[test]
    fn resumes_after_value() {
        let mut s = PrimeStream::starting_after(100);
        assert_eq!(s.next_prime(), Ok(101));
        let mut s = PrimeStream::starting_after(97);
        assert_eq!(s.next_prime(), Ok(101));
    }

    #[test]
    fn ranges_agree_with_trial_division() {
        let got = primes_in_range(1000, 1200);
        let want: Vec<u64> = (1000..=1200).filter(|&n| trial_division(n)).collect();
        assert_eq!(got, want);
        assert_eq!(next_prime_after(13), 17);
    }
}
