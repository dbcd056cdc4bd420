//! Karp-Rabin fingerprints and {0,1}-valued universal hashing.

use crate::error::{Error, Result};
use crate::prime::is_prime;
use crate::rng::Rng;

pub const MERSENNE_61: u64 = (1 << 61) - 1;

#[inline]
fn mul_m61(a: u64, b: u64) -> u64 {
    let prod = a as u128 * b as u128;
    let lo = (prod as u64) & MERSENNE_61;
    let hi = (prod >> 61) as u64;
    let s = lo + hi;
    if s >= MERSENNE_61 {
        s - MERSENNE_61
    } else {
        s
    }
}

/// `F(S) = sum S[i] x^i mod q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FingerprintFn {
    q: u64,
    x: u64,
}

impl FingerprintFn {
    pub fn new(q: u64, x: u64) -> Result<Self> {
        if q >= 1 << 62 || !is_prime(q) {
            return Err(Error::InvalidParameter(format!(
                "fingerprint modulus {q} must be a prime below 2^62"
            )));
        }
        if x >= q {
            return Err(Error::InvalidParameter(format!(
                "evaluation point {x} must be below {q}"
            )));
        }
        Ok(FingerprintFn { q, x })
    }

    /// Modulus `2^61 - 1` with a uniformly random nonzero evaluation point.
    pub fn random(rng: &mut Rng) -> Self {
        FingerprintFn {
            q: MERSENNE_61,
            x: rng.range(1, MERSENNE_61),
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.q == MERSENNE_61 {
            mul_m61(a, b)
        } else {
            ((a as u128 * b as u128) % self.q as u128) as u64
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn reduce(&self, sym: u64) -> u64 {
        sym % self.q
    }

    pub fn pow(&self, mut e: u64) -> u64 {
        let mut b = self.x;
        let mut r = 1 % self.q;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    /// `x^{-1} mod q`. The evaluation point must be nonzero.
    pub fn inv_x(&self) -> u64 {
        let mut b = self.x;
        let mut e = self.q - 2;
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    pub fn fingerprint(&self, s: &[u8]) -> u64 {
        s.iter()
            .rev()
            .fold(0, |acc, &c| self.add(self.mul(acc, self.x), self.reduce(c as u64)))
    }

    pub fn append(&self, fp: u64, len: u64, sym: u64) -> u64 {
        self.add(fp, self.mul(self.reduce(sym), self.pow(len)))
    }

    pub fn drop_front(&self, fp: u64, front_sym: u64, inv_x: u64) -> u64 {
        self.mul(self.sub(fp, self.reduce(front_sym)), inv_x)
    }
}

/// A fingerprint of a sliding sequence supporting O(1) append and drop-front.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rolling {
    pub fp: u64,
    /// `x^len` for the current length.
    pub top: u64,
}

impl Rolling {
    pub fn empty() -> Self {
        Rolling { fp: 0, top: 1 }
    }

    #[inline]
    pub fn push(&mut self, f: &FingerprintFn, sym: u8) {
        self.fp = f.add(self.fp, f.mul(sym as u64, self.top));
        self.top = f.mul(self.top, f.x);
    }

    #[inline]
    pub fn pop_front(&mut self, f: &FingerprintFn, inv_x: u64, sym: u8) {
        self.fp = f.mul(f.sub(self.fp, sym as u64), inv_x);
        self.top = f.mul(self.top, inv_x);
    }
}

/// `h(a) = parity(a & x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BitHashFn {
    u: u64,
    x: u64,
}

impl BitHashFn {
    pub fn new(u: u64, x: u64) -> Self {
        BitHashFn { u, x }
    }

    /// Random mask over `ceil(log2 u)` bits.
    pub fn random(u: u64, rng: &mut Rng) -> Self {
        let bits = if u <= 1 { 0 } else { 64 - (u - 1).leading_zeros() };
        let mask = if bits >= 64 { u64::MAX } else { (1u64 << bits) - 1 };
        BitHashFn {
            u,
            x: rng.next_u64() & mask,
        }
    }

    pub fn domain(&self) -> u64 {
        self.u
    }

    pub fn mask(&self) -> u64 {
        self.x
    }

    #[inline]
    pub fn bit(&self, a: u64) -> u64 {
        ((a & self.x).count_ones() & 1) as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_modulus_examples() {
        let f = FingerprintFn::new(5, 3).unwrap();
        assert_eq!(f.fingerprint(&[1, 0]), 1);
        assert_eq!(f.fingerprint(&[]), 0);
        assert_eq!(f.append(1, 2, 2), 4);
        assert_eq!(f.fingerprint(&[1, 2]), 2);
        assert_eq!(f.inv_x(), 2);
        assert_eq!(f.drop_front(2, 1, 2), 2);
        assert_eq!(f.fingerprint(&[2]), 2);
        let g = FingerprintFn::new(7, 1).unwrap();
        assert_eq!(g.fingerprint(&[2, 3, 4]), 2);
        assert_eq!(g.append(0, 0, 0), 0);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(FingerprintFn::new(6, 1).is_err());
        assert!(FingerprintFn::new(7, 7).is_err());
    }

    #[test]
    fn mersenne_mul_matches_generic() {
        let mut r = Rng::new(9);
        let f = FingerprintFn::random(&mut r);
        for _ in 0..10_000 {
            let a = r.below(MERSENNE_61);
            let b = r.below(MERSENNE_61);
            let want = ((a as u128 * b as u128) % MERSENNE_61 as u128) as u64;
            assert_eq!(f.mul(a, b), want);
        }
        assert_eq!(f.mul(f.x(), f.inv_x()), 1);
    }

    #[test]
    fn rolling_tracks_fingerprint() {
        let mut r = Rng::new(11);
        let f = FingerprintFn::random(&mut r);
        let inv = f.inv_x();
        let s: Vec<u8> = (0..300).map(|_| r.below(256) as u8).collect();
        let mut roll = Rolling::empty();
        let mut lo = 0;
        for hi in 0..s.len() {
            roll.push(&f, s[hi]);
            if hi - lo >= 17 {
                roll.pop_front(&f, inv, s[lo]);
                lo += 1;
            }
            assert_eq!(roll.fp, f.fingerprint(&s[lo..=hi]));
            assert_eq!(roll.top, f.pow((hi + 1 - lo) as u64));
        }
    }

    #[test]
    fn bit_hash_examples() {
        assert_eq!(BitHashFn::new(16, 0).bit(13), 0);
        assert_eq!(BitHashFn::new(16, 3).bit(2), 1);
        assert_eq!(BitHashFn::new(16, 3).bit(3), 0);
        let mut r = Rng::new(1);
        for _ in 0..100 {
            let h = BitHashFn::random(256, &mut r);
            assert!(h.mask() < 256);
        }
    }
}
