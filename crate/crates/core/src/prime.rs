//! Deterministic 64-bit primality and random prime sampling.

use crate::error::{Error, Result};
use crate::rng::Rng;

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Miller-Rabin with a witness set that is exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 325, 9375, 28178, 450775, 9780504, 1795265022] {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Width below which the interval is enumerated instead of rejection sampled.
const ENUMERATE_WIDTH: u64 = 4096;

/// Uniformly random prime in `[lo, hi)`.
pub fn sample_prime(lo: u64, hi: u64, rng: &mut Rng) -> Result<u64> {
    let lo = lo.max(2);
    if lo >= hi {
        return Err(Error::NoPrimeInRange { lo, hi });
    }
    if hi - lo <= ENUMERATE_WIDTH {
        let primes: Vec<u64> = (lo..hi).filter(|&x| is_prime(x)).collect();
        if primes.is_empty() {
            return Err(Error::NoPrimeInRange { lo, hi });
        }
        return Ok(primes[rng.below(primes.len() as u64) as usize]);
    }
    // Prime density near x is about 1/ln x, so this budget essentially never runs out.
    let bits = 64 - hi.leading_zeros() as u64;
    let attempts = 200 * bits.max(8);
    for _ in 0..attempts {
        let c = rng.range(lo, hi);
        if is_prime(c) {
            return Ok(c);
        }
    }
    let start = rng.range(lo, hi);
    (start..hi)
        .chain(lo..start)
        .find(|&x| is_prime(x))
        .ok_or(Error::NoPrimeInRange { lo, hi })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn matches_trial_division_below_100k() {
        for n in 0..100_000u64 {
            assert_eq!(is_prime(n), trial_division(n), "n = {n}");
        }
    }

    #[test]
    fn large_known_values() {
        assert!(is_prime((1 << 61) - 1));
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(18_446_744_073_709_551_557u64 - 2));
        // Strong pseudoprimes to several small bases.
        assert!(!is_prime(3_215_031_751));
        assert!(!is_prime(3_825_123_056_546_413_051));
    }

    #[test]
    fn unique_prime_ranges() {
        let mut r = Rng::new(0);
        assert_eq!(sample_prime(10, 12, &mut r).unwrap(), 11);
        assert_eq!(sample_prime(2, 3, &mut r).unwrap(), 2);
        assert_eq!(
            sample_prime(24, 29, &mut r),
            Err(Error::NoPrimeInRange { lo: 24, hi: 29 })
        );
    }

    #[test]
    fn wide_range_samples_are_prime() {
        let mut r = Rng::new(5);
        for _ in 0..200 {
            let p = sample_prime(1_000_000, 2_000_000, &mut r).unwrap();
            assert!((1_000_000..2_000_000).contains(&p));
            assert!(trial_division(p));
        }
    }
}
