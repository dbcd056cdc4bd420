//! Brute-force reference implementations.

use crate::error::{Error, Result};
use crate::sparse::SparseFunc;

/// Exact distances `d_i` for every alignment `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceVector(pub Vec<usize>);

impl std::ops::Deref for DistanceVector {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.0
    }
}

pub fn hamming(a: &[u8], b: &[u8]) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(a.iter().zip(b).filter(|(x, y)| x != y).count())
}

pub fn all_distances_naive(p: &[u8], t: &[u8]) -> Result<DistanceVector> {
    let (m, n) = (p.len(), t.len());
    if m > n {
        return Err(Error::PatternLongerThanText { m, n });
    }
    Ok(DistanceVector(
        (0..=n - m)
            .map(|i| p.iter().zip(&t[i..i + m]).filter(|(a, b)| a != b).count())
            .collect(),
    ))
}

/// `X ⊗ Y = sum_a X_a * Y_a^R`, evaluated from the definition.
pub fn cross_correlation_naive(x: &[u8], y: &[u8]) -> SparseFunc {
    let ylen = y.len() as i64;
    let mut pairs = Vec::new();
    for (j, &a) in x.iter().enumerate() {
        for (r, &b) in y.iter().enumerate() {
            // Y^R(l) = Y(|Y|-1-l); the term X_a(j) Y^R_a(i-j) with l = |Y|-1-r.
            if a == b {
                pairs.push((j as i64 + ylen - 1 - r as i64, 1));
            }
        }
    }
    SparseFunc::from_pairs(pairs)
}

/// Whether `x_tilde` is an (eps, k)-estimation of `x`.
pub fn validate_estimation(x: usize, x_tilde: f64, k: usize, eps: f64) -> bool {
    let x = x as f64;
    let k = k as f64;
    let lo = (1.0 - eps) * k;
    let hi = 2.0 * (1.0 + eps) * k;
    if x_tilde < lo {
        x < k
    } else if x_tilde > hi {
        x > 2.0 * k
    } else {
        (1.0 - eps) * x <= x_tilde && x_tilde <= (1.0 + eps) * x
    }
}

/// Whether `x_tilde` lies in the `(1 ± eps)` bracket around `x`.
pub fn within_bracket(x: usize, x_tilde: f64, eps: f64) -> bool {
    let x = x as f64;
    (1.0 - eps) * x <= x_tilde && x_tilde <= (1.0 + eps) * x
}
