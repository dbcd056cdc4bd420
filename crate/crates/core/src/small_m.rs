//! Sampler specialised to `p = z = m` with per-position symbol hashes, and
//! the filter that picks between it and the generic sampler.

use rayon::prelude::*;

use crate::bits::{words_for, xor_into, xor_popcount, BitRows};
use crate::error::{Error, Result};
use crate::estimate::{estimate_from_count, median, EstimateRow};
use crate::generic::{check_inputs, check_queries, repetitions, GenericSampler, DEFAULT_C_L};
use crate::rng::Rng;
use crate::sample::{sample_subset, SampleSet};

/// `h[i][a]`: bit `l` is `h_i^{(l)}(a)` when `i` is in `B^{(l)}` and 0 otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositionHashTable {
    m: usize,
    sigma: usize,
    l: usize,
    rows: BitRows,
}

impl PositionHashTable {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    pub fn bits(&self) -> usize {
        self.l
    }

    #[inline]
    pub fn vector(&self, i: usize, a: u8) -> &[u64] {
        self.rows.row(i * self.sigma + a as usize)
    }

    pub fn bit(&self, i: usize, a: u8, l: usize) -> bool {
        self.rows.get(i * self.sigma + a as usize, l)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SmallMPlan {
    pub k: usize,
    pub eps: f64,
    pub beta: f64,
    pub l: usize,
    pub samples: Vec<SampleSet>,
    pub table: PositionHashTable,
}

impl SmallMPlan {
    /// `sigma` bounds every symbol of the pattern and the text.
    pub fn draw(m: usize, sigma: usize, k: usize, eps: f64, s: f64, c_l: f64, rng: &mut Rng) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidThreshold("k must be at least 1".into()));
        }
        if !(s >= 2.0) {
            return Err(Error::InvalidParameter(format!("confidence s = {s} must be at least 2")));
        }
        let l = repetitions(eps, s, c_l);
        let beta = 1.0 / (2 * k) as f64;
        let sigma = sigma.max(1);
        let mut rows = BitRows::zeros(m * sigma, l);
        let mut samples = Vec::with_capacity(l);
        for li in 0..l {
            let b = sample_subset(m as u64, beta, rng);
            for &i in &b.members {
                let mut word = 0;
                for a in 0..sigma {
                    if a % 64 == 0 {
                        word = rng.next_u64();
                    }
                    if word >> (a % 64) & 1 == 1 {
                        rows.set(i as usize * sigma + a, li);
                    }
                }
            }
            samples.push(b);
        }
        Ok(SmallMPlan {
            k,
            eps,
            beta,
            l,
            samples,
            table: PositionHashTable { m, sigma, l, rows },
        })
    }

    /// `x_u` for every `u in [m]`.
    pub fn pattern_vectors(&self, pattern: &[u8]) -> BitRows {
        let m = pattern.len();
        let mut x = BitRows::zeros(m, self.l);
        for u in 0..m {
            let row = x.row_mut(u);
            for (j, &a) in pattern.iter().enumerate() {
                xor_into(row, self.table.vector((u + j) % m, a));
            }
        }
        x
    }

    /// `y_i` recomputed from its definition.
    pub fn text_vector(&self, text: &[u8], i: usize) -> Vec<u64> {
        let m = self.table.m;
        let mut y = vec![0; words_for(self.l)];
        for g in i..i + m {
            xor_into(&mut y, self.table.vector(g % m, text[g]));
        }
        y
    }

    /// Hashed disagreements for each queried alignment.
    pub fn counts(&self, pattern: &[u8], text: &[u8], q: &[usize]) -> Vec<u32> {
        let m = pattern.len();
        let x = self.pattern_vectors(pattern);
        let mut out = Vec::with_capacity(q.len());
        let Some(&last) = q.last() else {
            return out;
        };
        let mut y = self.text_vector(text, 0);
        let mut qi = 0;
        for i in 0..=last {
            if i > 0 {
                xor_into(&mut y, self.table.vector((i - 1) % m, text[i - 1]));
                xor_into(&mut y, self.table.vector((i + m - 1) % m, text[i + m - 1]));
            }
            if q[qi] == i {
                out.push(xor_popcount(x.row(i % m), &y));
                qi += 1;
            }
        }
        out
    }

    pub fn estimate(&self, c: u32) -> f64 {
        estimate_from_count(c as usize, self.l, self.beta, true)
    }
}

fn alphabet_bound(pattern: &[u8], text: &[u8]) -> usize {
    pattern.iter().chain(text).map(|&c| c as usize + 1).max().unwrap_or(1)
}

pub fn solve_small_m_with(p: &[u8], t: &[u8], q: &[usize], k: usize, eps: f64, s: f64, c_l: f64, rng: &mut Rng) -> Result<Vec<EstimateRow>> {
    check_inputs(p.len(), t.len(), eps)?;
    check_queries(q, t.len() - p.len())?;
    let plan = SmallMPlan::draw(p.len(), alphabet_bound(p, t), k, eps, s, c_l, rng)?;
    Ok(q.iter()
        .zip(plan.counts(p, t, q))
        .map(|(&i, c)| EstimateRow::new(i, plan.estimate(c), k, eps))
        .collect())
}

pub fn solve_small_m(p: &[u8], t: &[u8], q: &[usize], k: usize, eps: f64, s: f64, rng: &mut Rng) -> Result<Vec<EstimateRow>> {
    solve_small_m_with(p, t, q, k, eps, s, DEFAULT_C_L, rng)
}

/// Per-position median over `reps` independent runs, as rows.
pub fn solve_small_m_median(p: &[u8], t: &[u8], q: &[usize], k: usize, eps: f64, s: f64, reps: usize, rng: &mut Rng) -> Result<Vec<EstimateRow>> {
    check_inputs(p.len(), t.len(), eps)?;
    check_queries(q, t.len() - p.len())?;
    let est = small_m_median(p, t, q, k, eps, s, DEFAULT_C_L, reps, rng)?;
    Ok(q.iter().zip(est).map(|(&i, e)| EstimateRow::new(i, e, k, eps)).collect())
}

/// Per-position median over `reps` independent runs of the small-m sampler.
pub(crate) fn small_m_median(p: &[u8], t: &[u8], q: &[usize], k: usize, eps: f64, s: f64, c_l: f64, reps: usize, rng: &mut Rng) -> Result<Vec<f64>> {
    let sigma = alphabet_bound(p, t);
    let seeds: Vec<Rng> = (0..reps.max(1)).map(|_| rng.fork()).collect();
    let runs: Vec<Vec<f64>> = seeds
        .into_par_iter()
        .map(|mut r| {
            let plan = SmallMPlan::draw(p.len(), sigma, k, eps, s, c_l, &mut r)?;
            Ok(plan.counts(p, t, q).into_iter().map(|c| plan.estimate(c)).collect())
        })
        .collect::<Result<_>>()?;
    Ok(median_columns(&runs, q.len()))
}

pub(crate) fn median_columns(runs: &[Vec<f64>], len: usize) -> Vec<f64> {
    let mut buf = vec![0.0; runs.len()];
    (0..len)
        .map(|j| {
            for (slot, run) in buf.iter_mut().zip(runs) {
                *slot = run[j];
            }
            median(&mut buf)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FilterRoute {
    SmallM,
    Generic,
}

/// Small-m sampler when `m <= (log2 n)^(1/delta)`.
pub fn filter_route(m: usize, n: usize, delta: f64) -> FilterRoute {
    if (m as f64) <= (n as f64).log2().powf(1.0 / delta) {
        FilterRoute::SmallM
    } else {
        FilterRoute::Generic
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FilterParams {
    pub delta: f64,
    pub reps: usize,
    /// Lower bound applied to `s = n^(delta/2)`.
    pub min_s: f64,
    pub c_l: f64,
}

impl Default for FilterParams {
    fn default() -> Self {
        FilterParams {
            delta: 0.25,
            reps: 3,
            min_s: 16.0,
            c_l: DEFAULT_C_L,
        }
    }
}

/// Median estimates at every alignment for a threshold `k >= m^delta / eps`.
pub fn solve_filter_with(p: &[u8], t: &[u8], k: usize, eps: f64, params: &FilterParams, rng: &mut Rng) -> Result<Vec<f64>> {
    check_inputs(p.len(), t.len(), eps)?;
    let (m, n) = (p.len(), t.len());
    if !(params.delta > 0.0) {
        return Err(Error::InvalidParameter(format!("delta = {} must be positive", params.delta)));
    }
    let need = (m as f64).powf(params.delta) / eps;
    if (k as f64) < need {
        return Err(Error::RegimeViolation(format!(
            "filter needs k >= m^delta / eps = {need:.2}, got k = {k}"
        )));
    }
    let s = (n as f64).powf(params.delta / 2.0).max(params.min_s).max(2.0);
    let q: Vec<usize> = (0..=n - m).collect();
    match filter_route(m, n, params.delta) {
        FilterRoute::SmallM => small_m_median(p, t, &q, k, eps, s, params.c_l, params.reps, rng),
        FilterRoute::Generic => {
            let sampler = GenericSampler { c_l: params.c_l, z: None };
            sampler.median_estimates(p, t, &q, k, eps, s, params.reps, rng)
        }
    }
}

pub fn solve_filter(p: &[u8], t: &[u8], k: usize, eps: f64, delta: f64, rng: &mut Rng) -> Result<Vec<EstimateRow>> {
    let params = FilterParams { delta, ..FilterParams::default() };
    let est = solve_filter_with(p, t, k, eps, &params, rng)?;
    Ok(est.into_iter().enumerate().map(|(i, e)| EstimateRow::new(i, e, k, eps)).collect())
}
