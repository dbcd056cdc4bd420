//! Exact k-mismatch: approximate filtering, kangaroo jumps and, for
//! approximately periodic inputs, sparse second differences of the
//! cross-correlation.

pub mod conv;
pub mod lce;

use crate::error::{Error, Result};
use crate::generic::check_inputs;
use crate::oracle::hamming;
use crate::rng::Rng;
use crate::small_m::{solve_filter_with, FilterParams};

pub use conv::{convolution_summation, forward_difference, Strategy};
pub use lce::{kangaroo_count, lce_build, Kangaroo, LceIndex};

use conv::{characteristic, convolution_summation_with, reconstruct_dense, symbol_differences};

/// `Some(d_i)` when `d_i <= k`, `None` otherwise.
pub type BoundedDistances = Vec<Option<usize>>;

/// `ρ` together with the mismatch budget it was certified against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PeriodCertificate {
    pub rho: usize,
    pub d_bound: usize,
}

/// `Ham(X[0..len-ρ], X[ρ..len])`.
pub fn self_shift_mismatches(x: &[u8], rho: usize) -> usize {
    if rho >= x.len() {
        return 0;
    }
    hamming(&x[..x.len() - rho], &x[rho..]).unwrap()
}

impl PeriodCertificate {
    /// Checks that `rho` is a `d_bound`-period of both strings.
    pub fn verify(p: &[u8], t: &[u8], rho: usize, d_bound: usize) -> Result<Self> {
        for x in [p, t] {
            let found = self_shift_mismatches(x, rho);
            if found > d_bound {
                return Err(Error::PeriodViolation { rho, bound: d_bound, found });
            }
        }
        Ok(PeriodCertificate { rho, d_bound })
    }
}

/// Exact distances at every alignment when `rho` is a `d_bound`-period of both inputs.
pub fn periodic_all(p: &[u8], t: &[u8], rho: usize, d_bound: usize) -> Result<Vec<usize>> {
    check_inputs(p.len(), t.len(), 1.0 / 3.0)?;
    if rho == 0 {
        return Err(Error::InvalidParameter("rho must be positive".into()));
    }
    PeriodCertificate::verify(p, t, rho, d_bound)?;
    let (m, n) = (p.len(), t.len());
    let rev: Vec<u8> = p.iter().rev().copied().collect();
    let f = symbol_differences(t, rho);
    let g = symbol_differences(&rev, rho);
    let d2 = convolution_summation(&f, &g, n + m);
    let hi = (n + m - 2) as i64;
    let corr = reconstruct_dense(&d2.to_dense(0, hi), rho);
    Ok((0..=n - m).map(|i| (m as i64 - corr[i + m - 1]) as usize).collect())
}

pub fn solve_periodic(p: &[u8], t: &[u8], rho: usize, d_bound: usize, k: usize) -> Result<BoundedDistances> {
    Ok(periodic_all(p, t, rho, d_bound)?
        .into_iter()
        .map(|d| (d <= k).then_some(d))
        .collect())
}

/// Exact distances at every alignment through per-symbol dense convolutions.
pub fn cross_correlation_all(p: &[u8], t: &[u8]) -> Vec<usize> {
    let (m, n) = (p.len(), t.len());
    let f = characteristic(t, false);
    let g = characteristic(p, true);
    let corr = convolution_summation_with(&f, &g, n + m, Strategy::Fft);
    (0..=n - m).map(|i| (m as i64 - corr.get((i + m - 1) as i64)) as usize).collect()
}

/// Occurrences of `p` in `t` (prefix-function matcher).
pub fn exact_occurrences(p: &[u8], t: &[u8]) -> Vec<usize> {
    let m = p.len();
    let mut fail = vec![0usize; m];
    let mut q = 0;
    for i in 1..m {
        while q > 0 && p[i] != p[q] {
            q = fail[q - 1];
        }
        if p[i] == p[q] {
            q += 1;
        }
        fail[i] = q;
    }
    let mut out = Vec::new();
    q = 0;
    for (i, &c) in t.iter().enumerate() {
        while q > 0 && (q == m || c != p[q]) {
            q = fail[q - 1];
        }
        if c == p[q] {
            q += 1;
        }
        if q == m {
            out.push(i + 1 - m);
        }
    }
    out
}

/// Which route `solve_exact` took, for diagnostics and tests.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExactStats {
    pub candidates: usize,
    pub kangaroo_chunks: usize,
    pub periodic_chunks: usize,
    pub certificate_failures: usize,
    pub dense_fallback: bool,
    pub kangaroo_everywhere: bool,
    pub filtered: bool,
}

/// Filter threshold used in place of `k` when `k` is below `3 sqrt(m)`.
fn effective_threshold(k: usize, m: usize) -> usize {
    k.max((3.0 * (m as f64).sqrt()).ceil() as usize)
}

fn kangaroo_positions(idx: &LceIndex, positions: impl Iterator<Item = usize>, offset: usize, k: usize, out: &mut BoundedDistances) {
    for i in positions {
        if let Kangaroo::Count(d) = kangaroo_count(idx, i - offset, k + 1) {
            out[i] = Some(d);
        }
    }
}

fn symbols_in(p: &[u8]) -> usize {
    let mut seen = [false; 256];
    p.iter().for_each(|&c| seen[c as usize] = true);
    seen.iter().filter(|&&b| b).count()
}

pub fn solve_exact(p: &[u8], t: &[u8], k: usize, rng: &mut Rng) -> Result<BoundedDistances> {
    solve_exact_with_stats(p, t, k, rng).map(|(d, _)| d)
}

pub fn solve_exact_with_stats(p: &[u8], t: &[u8], k: usize, rng: &mut Rng) -> Result<(BoundedDistances, ExactStats)> {
    check_inputs(p.len(), t.len(), 1.0 / 3.0)?;
    let (m, n) = (p.len(), t.len());
    let positions = n - m + 1;
    let mut stats = ExactStats::default();
    let mut out: BoundedDistances = vec![None; positions];

    if k == 0 {
        for i in exact_occurrences(p, t) {
            out[i] = Some(0);
        }
        return Ok((out, stats));
    }

    let k_eff = effective_threshold(k, m);
    if 4 * k_eff >= m {
        // No sparsity to exploit: answer every alignment directly.
        let size = (n + m).next_power_of_two() as f64;
        let dense_cost = 3.0 * symbols_in(p) as f64 * size * size.log2();
        let kangaroo_cost = positions as f64 * (k.min(m) + 1) as f64 * 4.0;
        if dense_cost < kangaroo_cost {
            stats.dense_fallback = true;
            for (slot, d) in out.iter_mut().zip(cross_correlation_all(p, t)) {
                *slot = (d <= k).then_some(d);
            }
        } else {
            stats.kangaroo_everywhere = true;
            let idx = LceIndex::build(t, p);
            kangaroo_positions(&idx, 0..positions, 0, k, &mut out);
        }
        return Ok((out, stats));
    }

    stats.filtered = true;
    let params = FilterParams {
        delta: 0.5,
        reps: 3,
        min_s: 1024.0,
        ..FilterParams::default()
    };
    let est = solve_filter_with(p, t, k_eff, 1.0 / 3.0, &params, rng)?;
    let bound = 4.0 * k_eff as f64 / 3.0;
    let cand: Vec<usize> = (0..positions).filter(|&i| est[i] <= bound).collect();
    stats.candidates = cand.len();

    // Chunks of m/2 alignments span at most 3m/2 - 1 text symbols.
    let h = (m / 2).max(1);
    let mut ci = 0;
    while ci < cand.len() {
        let chunk = cand[ci] / h;
        let mut cj = ci;
        while cj < cand.len() && cand[cj] / h == chunk {
            cj += 1;
        }
        let group = &cand[ci..cj];
        ci = cj;
        let (lo, hi) = (group[0], group[group.len() - 1]);
        let seg = &t[lo..hi + m];

        let mut rho = usize::MAX;
        for w in group.windows(2) {
            rho = rho.min(w[1] - w[0]);
        }
        if rho <= k_eff / 2 {
            match PeriodCertificate::verify(p, seg, rho, 16 * k_eff) {
                Ok(_) if self_shift_mismatches(p, rho) <= 4 * k_eff => {
                    stats.periodic_chunks += 1;
                    let d = periodic_all(p, seg, rho, 16 * k_eff)?;
                    for (off, d) in d.into_iter().enumerate() {
                        if d <= k {
                            out[lo + off] = Some(d);
                        }
                    }
                    continue;
                }
                _ => stats.certificate_failures += 1,
            }
        }
        stats.kangaroo_chunks += 1;
        let idx = LceIndex::build(seg, p);
        kangaroo_positions(&idx, group.iter().copied(), lo, k, &mut out);
    }
    Ok((out, stats))
}
