//! Three-way dispatcher over the small-pattern sampler, the exact matcher
//! and the generic sampler.

use rayon::prelude::*;

use crate::error::Result;
use crate::estimate::EstimateRow;
use crate::exact::solve_exact;
use crate::generic::{adaptive_level_search, check_inputs, check_queries, log2_ceil, powers_of_two_upto, GenericSampler, DEFAULT_C_L};
use crate::rng::Rng;
use crate::small_m::small_m_median;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Case {
    /// `m <= ceil(log2 n)^2`: position-hash sampler.
    SmallPattern,
    /// `k <= sqrt(m) / eps`: exact distances up to `2k`.
    SmallThreshold,
    /// Everything else: generic sampler with `s = n^(1/4)`.
    LargeThreshold,
}

fn small_pattern(m: usize, n: usize) -> bool {
    let lg = log2_ceil(n);
    m <= lg * lg
}

/// `floor(sqrt(m) / eps)`, the largest threshold the exact matcher handles.
pub fn exact_cutoff(m: usize, eps: f64) -> usize {
    ((m as f64).sqrt() / eps).floor() as usize
}

pub fn combined_case(m: usize, n: usize, k: usize, eps: f64) -> Case {
    if small_pattern(m, n) {
        Case::SmallPattern
    } else if k <= exact_cutoff(m, eps) {
        Case::SmallThreshold
    } else {
        Case::LargeThreshold
    }
}

/// Median count used for the randomized branches.
pub fn combined_reps(n: usize) -> usize {
    log2_ceil(n).clamp(1, 12)
}

fn sampler_s(n: usize) -> f64 {
    (n as f64).powf(0.25).max(2.0)
}

fn sampled_estimates(case: Case, p: &[u8], t: &[u8], q: &[usize], k: usize, eps: f64, rng: &mut Rng) -> Result<Vec<f64>> {
    let n = t.len();
    let (s, reps) = (sampler_s(n), combined_reps(n));
    match case {
        Case::SmallPattern => small_m_median(p, t, q, k, eps, s, DEFAULT_C_L, reps, rng),
        _ => GenericSampler::default().median_estimates(p, t, q, k, eps, s, reps, rng),
    }
}

fn exact_estimates(p: &[u8], t: &[u8], q: &[usize], k: usize, rng: &mut Rng) -> Result<Vec<f64>> {
    let d = solve_exact(p, t, k, rng)?;
    Ok(q.iter()
        .map(|&i| d[i].map_or(f64::INFINITY, |d| d as f64))
        .collect())
}

pub fn solve_combined_fixed(p: &[u8], t: &[u8], q: &[usize], k: usize, eps: f64, rng: &mut Rng) -> Result<Vec<EstimateRow>> {
    check_inputs(p.len(), t.len(), eps)?;
    check_queries(q, t.len() - p.len())?;
    let est = match combined_case(p.len(), t.len(), k, eps) {
        // Exact up to 2k; anything larger is reported as infinite, which
        // classifies as above the band.
        Case::SmallThreshold => exact_estimates(p, t, q, 2 * k, rng)?,
        case => sampled_estimates(case, p, t, q, k, eps, rng)?,
    };
    Ok(q.iter().zip(est).map(|(&i, e)| EstimateRow::new(i, e, k, eps)).collect())
}

/// Largest `2^j - 1` at most `m` that reaches `cutoff`. Distances the exact
/// matcher leaves open are then at least `2^j`, so no threshold below the
/// cutoff is ever consulted.
pub fn exact_reach(m: usize, cutoff: usize) -> usize {
    ((cutoff + 1).next_power_of_two() - 1).min(m)
}

/// Power-of-two thresholds consulted for distances above `cutoff`:
/// `2^floor(log2 d)` for every `d` in `(cutoff, m]`.
pub fn threshold_levels(m: usize, cutoff: usize) -> Vec<usize> {
    powers_of_two_upto(m).into_iter().filter(|&k| 2 * k > cutoff + 1).collect()
}

/// Binary search over the thresholds `ks`; the levels probed in one round
/// run in parallel.
fn search_levels(case: Case, p: &[u8], t: &[u8], q: &[usize], ks: &[usize], eps: f64, rng: &mut Rng) -> Result<Vec<f64>> {
    adaptive_level_search(ks, q.len(), eps, |batches| {
        let seeds: Vec<Rng> = batches.iter().map(|_| rng.fork()).collect();
        batches
            .par_iter()
            .zip(seeds)
            .map(|((j, idx), mut r)| {
                let sub: Vec<usize> = idx.iter().map(|&qi| q[qi]).collect();
                sampled_estimates(case, p, t, &sub, ks[*j], eps, &mut r)
            })
            .collect()
    })
}

/// `(1 ± eps)`-approximate distance at every queried position.
pub fn solve_combined_all(p: &[u8], t: &[u8], q: &[usize], eps: f64, rng: &mut Rng) -> Result<Vec<(usize, f64)>> {
    check_inputs(p.len(), t.len(), eps)?;
    check_queries(q, t.len() - p.len())?;
    let (m, n) = (p.len(), t.len());
    if small_pattern(m, n) {
        let est = search_levels(Case::SmallPattern, p, t, q, &powers_of_two_upto(m), eps, rng)?;
        return Ok(q.iter().copied().zip(est).collect());
    }

    let cutoff = exact_reach(m, exact_cutoff(m, eps));
    let exact = solve_exact(p, t, cutoff, rng)?;
    let unresolved: Vec<usize> = q.iter().copied().filter(|&i| exact[i].is_none()).collect();
    let mut far = if unresolved.is_empty() {
        Vec::new()
    } else {
        search_levels(Case::LargeThreshold, p, t, &unresolved, &threshold_levels(m, cutoff), eps, rng)?
    }
    .into_iter();
    Ok(q.iter()
        .map(|&i| match exact[i] {
            Some(d) => (i, d as f64),
            None => (i, far.next().unwrap()),
        })
        .collect())
}
