//! Forward differences and sums of sparse convolutions.

use std::collections::HashMap;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::sparse::SparseFunc;

/// `Δ_ρ[f](i) = f(i + ρ) − f(i)`.
pub fn forward_difference(f: &SparseFunc, rho: i64) -> SparseFunc {
    assert!(rho >= 1);
    let e = f.entries();
    let mut out = Vec::with_capacity(2 * e.len());
    // Merge the shifted copy (index x - ρ, +v) with the original (x, -v).
    let (mut a, mut b) = (0, 0);
    while a < e.len() || b < e.len() {
        let ia = if a < e.len() { e[a].0 - rho } else { i64::MAX };
        let ib = if b < e.len() { e[b].0 } else { i64::MAX };
        if ia < ib {
            out.push((ia, e[a].1));
            a += 1;
        } else if ib < ia {
            out.push((ib, -e[b].1));
            b += 1;
        } else {
            out.push((ia, e[a].1 - e[b].1));
            a += 1;
            b += 1;
        }
    }
    SparseFunc::from_sorted(out)
}

/// `Δ_ρ[X_a]` for every symbol `a`, read directly from the string.
pub fn symbol_differences(x: &[u8], rho: usize) -> Vec<SparseFunc> {
    let mut per: Vec<Vec<(i64, i64)>> = vec![Vec::new(); 256];
    let n = x.len() as i64;
    let rho = rho as i64;
    for i in -rho..n {
        let ahead = if i + rho < n { Some(x[(i + rho) as usize]) } else { None };
        let here = if i >= 0 { Some(x[i as usize]) } else { None };
        if ahead != here {
            if let Some(a) = ahead {
                per[a as usize].push((i, 1));
            }
            if let Some(a) = here {
                per[a as usize].push((i, -1));
            }
        }
    }
    per.into_iter().map(SparseFunc::from_sorted).collect()
}

/// Characteristic function of each symbol, optionally of the reversed string.
pub fn characteristic(x: &[u8], reversed: bool) -> Vec<SparseFunc> {
    let mut per: Vec<Vec<(i64, i64)>> = vec![Vec::new(); 256];
    let len = x.len();
    for i in 0..len {
        let c = if reversed { x[len - 1 - i] } else { x[i] };
        per[c as usize].push((i as i64, 1));
    }
    per.into_iter().map(SparseFunc::from_sorted).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Cheaper of the two per pair.
    Auto,
    Pairwise,
    Fft,
}

/// `sum_j f_j * g_j`.
pub fn convolution_summation(f: &[SparseFunc], g: &[SparseFunc], n_bound: usize) -> SparseFunc {
    convolution_summation_with(f, g, n_bound, Strategy::Auto)
}

pub fn convolution_summation_with(f: &[SparseFunc], g: &[SparseFunc], n_bound: usize, strategy: Strategy) -> SparseFunc {
    assert_eq!(f.len(), g.len());
    let nb = n_bound.max(2) as f64;
    let limit = nb * nb.log2();
    let pairs: Vec<(usize, bool)> = f
        .iter()
        .zip(g)
        .enumerate()
        .filter(|(_, (a, b))| !a.is_zero() && !b.is_zero())
        .map(|(j, (a, b))| {
            let use_fft = match strategy {
                Strategy::Auto => (a.support_len() as f64) * (b.support_len() as f64) > limit,
                Strategy::Pairwise => false,
                Strategy::Fft => true,
            };
            (j, use_fft)
        })
        .collect();
    if pairs.is_empty() {
        return SparseFunc::zero();
    }
    let lo = pairs.iter().map(|&(j, _)| f[j].min_index().unwrap() + g[j].min_index().unwrap()).min().unwrap();
    let hi = pairs.iter().map(|&(j, _)| f[j].max_index().unwrap() + g[j].max_index().unwrap()).max().unwrap();
    let mut acc = Accumulator::new(lo, hi);

    for &(j, _) in pairs.iter().filter(|p| !p.1) {
        for &(x, vx) in f[j].entries() {
            for &(y, vy) in g[j].entries() {
                acc.add(x + y, vx * vy);
            }
        }
    }

    let fft_pairs: Vec<usize> = pairs.iter().filter(|p| p.1).map(|p| p.0).collect();
    if !fft_pairs.is_empty() {
        let f_lo = fft_pairs.iter().map(|&j| f[j].min_index().unwrap()).min().unwrap();
        let f_hi = fft_pairs.iter().map(|&j| f[j].max_index().unwrap()).max().unwrap();
        let g_lo = fft_pairs.iter().map(|&j| g[j].min_index().unwrap()).min().unwrap();
        let g_hi = fft_pairs.iter().map(|&j| g[j].max_index().unwrap()).max().unwrap();
        let out_len = (f_hi - f_lo + g_hi - g_lo + 1) as usize;
        let size = out_len.next_power_of_two();
        let mut planner = FftPlanner::<f64>::new();
        let fwd = planner.plan_fft_forward(size);
        let inv = planner.plan_fft_inverse(size);
        let mut sum = vec![Complex::new(0.0, 0.0); size];
        let mut fa = vec![Complex::new(0.0, 0.0); size];
        let mut ga = vec![Complex::new(0.0, 0.0); size];
        for &j in &fft_pairs {
            fa.iter_mut().for_each(|c| *c = Complex::new(0.0, 0.0));
            ga.iter_mut().for_each(|c| *c = Complex::new(0.0, 0.0));
            for &(x, v) in f[j].entries() {
                fa[(x - f_lo) as usize].re = v as f64;
            }
            for &(y, v) in g[j].entries() {
                ga[(y - g_lo) as usize].re = v as f64;
            }
            fwd.process(&mut fa);
            fwd.process(&mut ga);
            for ((s, a), b) in sum.iter_mut().zip(&fa).zip(&ga) {
                *s += a * b;
            }
        }
        inv.process(&mut sum);
        let scale = 1.0 / size as f64;
        for (t, c) in sum.iter().take(out_len).enumerate() {
            let v = (c.re * scale).round() as i64;
            if v != 0 {
                acc.add(f_lo + g_lo + t as i64, v);
            }
        }
    }
    acc.finish()
}

/// Dense when the output range is moderate, hashed otherwise.
enum Accumulator {
    Dense { lo: i64, vals: Vec<i64> },
    Sparse(HashMap<i64, i64>),
}

impl Accumulator {
    fn new(lo: i64, hi: i64) -> Self {
        let width = (hi - lo + 1) as usize;
        if width <= 1 << 26 {
            Accumulator::Dense { lo, vals: vec![0; width] }
        } else {
            Accumulator::Sparse(HashMap::new())
        }
    }

    #[inline]
    fn add(&mut self, i: i64, v: i64) {
        match self {
            Accumulator::Dense { lo, vals } => vals[(i - *lo) as usize] += v,
            Accumulator::Sparse(map) => *map.entry(i).or_insert(0) += v,
        }
    }

    fn finish(self) -> SparseFunc {
        match self {
            Accumulator::Dense { lo, vals } => SparseFunc::from_dense(lo, &vals),
            Accumulator::Sparse(map) => SparseFunc::from_pairs(map),
        }
    }
}

/// Recovers `f` on `[lo, hi]` from `Δ²_ρ[f]`, given `f = 0` above `hi`.
pub fn reconstruct_from_second_difference(d2: &SparseFunc, rho: usize, lo: i64, hi: i64) -> Vec<i64> {
    reconstruct_dense(&d2.to_dense(lo, hi), rho)
}

/// Same as [`reconstruct_from_second_difference`] for a dense `Δ²` over `[lo, hi]`.
pub(crate) fn reconstruct_dense(d2: &[i64], rho: usize) -> Vec<i64> {
    let width = d2.len();
    let mut f = vec![0i64; width];
    for idx in (0..width).rev() {
        let ahead1 = if idx + rho < width { f[idx + rho] } else { 0 };
        let ahead2 = if idx + 2 * rho < width { f[idx + 2 * rho] } else { 0 };
        f[idx] = d2[idx] + 2 * ahead1 - ahead2;
    }
    f
}
