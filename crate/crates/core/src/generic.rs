//! Random-prime offset sampling with sliding fingerprints and packed signatures.

use rayon::prelude::*;

use crate::bits::{xor_popcount, BitRows};
use crate::bytestring::ByteString;
use crate::error::{Error, Result};
use crate::estimate::{classify, estimate_from_count, median, Class, EstimateRow};
use crate::fingerprint::{BitHashFn, FingerprintFn, Rolling, MERSENNE_61};
use crate::prime::sample_prime;
use crate::rng::Rng;
use crate::sample::{sample_subset, SampleSet};

pub const DEFAULT_C_L: f64 = 8.0;

pub(crate) fn check_inputs(m: usize, n: usize, eps: f64) -> Result<()> {
    if m == 0 {
        return Err(Error::EmptyPattern);
    }
    if m > n {
        return Err(Error::PatternLongerThanText { m, n });
    }
    check_eps(eps)
}

pub(crate) fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps <= 1.0 / 3.0 + 1e-12) {
        return Err(Error::InvalidEpsilon(eps));
    }
    Ok(())
}

pub(crate) fn check_queries(q: &[usize], last: usize) -> Result<()> {
    if q.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "query positions must be strictly increasing".into(),
        ));
    }
    if let Some(&x) = q.last() {
        if x > last {
            return Err(Error::InvalidParameter(format!(
                "query position {x} exceeds the last alignment {last}"
            )));
        }
    }
    Ok(())
}

/// Parameters of one run of the sampler.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleConfig {
    pub eps: f64,
    pub k: usize,
    pub s: f64,
    pub m: usize,
    pub n: usize,
    pub p_hat: u64,
    pub p: u64,
    pub z: u64,
    pub beta: f64,
    pub l: usize,
    pub c_l: f64,
}

pub fn p_hat(m: usize, k: usize, eps: f64, s: f64) -> u64 {
    let log_m = (m as f64).log2();
    ((s * k as f64 * log_m / eps).ceil() as u64).max(2)
}

/// `(p_hat, p)`: a random prime in `[p_hat, 2 p_hat)` capped at `m`, or `m`
/// itself when `p_hat >= m`.
pub(crate) fn pick_modulus(m: usize, k: usize, eps: f64, s: f64, rng: &mut Rng) -> Result<(u64, u64)> {
    let p_hat = p_hat(m, k, eps, s);
    let p = if p_hat >= m as u64 {
        m as u64
    } else {
        sample_prime(p_hat, 2 * p_hat, rng)?.min(m as u64)
    };
    Ok((p_hat, p))
}

pub fn repetitions(eps: f64, s: f64, c_l: f64) -> usize {
    ((c_l * s.log2() / (eps * eps)).ceil() as usize).max(1)
}

impl SampleConfig {
    /// Draws the prime and derives every other parameter.
    pub fn new(m: usize, n: usize, k: usize, eps: f64, s: f64, c_l: f64, rng: &mut Rng) -> Result<Self> {
        check_inputs(m, n, eps)?;
        if k == 0 {
            return Err(Error::InvalidThreshold("k must be at least 1".into()));
        }
        if !(s >= 2.0) {
            return Err(Error::InvalidParameter(format!("confidence s = {s} must be at least 2")));
        }
        if !(c_l > 0.0) {
            return Err(Error::InvalidParameter(format!("C_L = {c_l} must be positive")));
        }
        let (p_hat, p) = pick_modulus(m, k, eps, s, rng)?;
        let z = (((n as f64) * p as f64 / m as f64).sqrt().floor() as u64).clamp(1, p);
        Ok(SampleConfig {
            eps,
            k,
            s,
            m,
            n,
            p_hat,
            p,
            z,
            beta: 1.0 / (2 * k) as f64,
            l: repetitions(eps, s, c_l),
            c_l,
        })
    }

    pub fn with_z(mut self, z: u64) -> Self {
        self.z = z.clamp(1, self.p);
        self
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    pub fn num_v(&self) -> u64 {
        self.p.div_ceil(self.z)
    }

    /// `(i mod p) = u + v z`.
    #[inline]
    pub fn decompose(&self, i: usize) -> (u64, u64) {
        let r = i as u64 % self.p;
        (r % self.z, r / self.z)
    }
}

/// The random choices of one repetition.
#[derive(Clone, Debug, PartialEq)]
pub struct Repetition {
    pub sample: SampleSet,
    pub fp: FingerprintFn,
    pub hash: BitHashFn,
}

/// A configuration together with all of its repetitions.
#[derive(Clone, Debug, PartialEq)]
pub struct SamplerPlan {
    pub cfg: SampleConfig,
    pub reps: Vec<Repetition>,
}

impl SamplerPlan {
    pub fn draw(cfg: SampleConfig, rng: &mut Rng) -> Self {
        let reps = (0..cfg.l)
            .map(|_| Repetition {
                sample: sample_subset(cfg.p, cfg.beta, rng),
                fp: FingerprintFn::random(rng),
                hash: BitHashFn::random(MERSENNE_61, rng),
            })
            .collect();
        SamplerPlan { cfg, reps }
    }
}

/// `(b + shift) mod p` for every `b` in `members`, in ascending order.
pub(crate) fn rotate(members: &[u64], shift: u64, p: u64) -> Vec<u64> {
    let split = members.partition_point(|&b| b < p - shift);
    let mut out = Vec::with_capacity(members.len());
    out.extend(members[split..].iter().map(|&b| b + shift - p));
    out.extend(members[..split].iter().map(|&b| b + shift));
    out
}

/// Walks `{t p + r : r in residues}` in ascending order.
#[derive(Clone, Copy, Debug)]
struct Cursor {
    base: u64,
    j: usize,
}

impl Cursor {
    fn at_or_after(residues: &[u64], p: u64, g: u64) -> Self {
        let base = g / p * p;
        let j = residues.partition_point(|&r| r < g - base);
        let mut c = Cursor { base, j };
        c.normalize(residues, p);
        c
    }

    #[inline]
    fn normalize(&mut self, residues: &[u64], p: u64) {
        if self.j == residues.len() {
            self.j = 0;
            self.base += p;
        }
    }

    #[inline]
    fn value(&self, residues: &[u64]) -> u64 {
        self.base + residues[self.j]
    }

    #[inline]
    fn advance(&mut self, residues: &[u64], p: u64) {
        self.j += 1;
        self.normalize(residues, p);
    }
}

/// Fingerprint of `{T[g] : g in S, i <= g < i + m}` for a residue set `S`,
/// maintained as `i` increases.
struct WindowSweep<'a> {
    residues: &'a [u64],
    p: u64,
    m: u64,
    n: u64,
    f: FingerprintFn,
    inv_x: u64,
    enter: Cursor,
    exit: Cursor,
    roll: Rolling,
}

impl<'a> WindowSweep<'a> {
    fn start(residues: &'a [u64], p: u64, m: usize, t: &[u8], f: FingerprintFn, inv_x: u64, i0: usize) -> Self {
        let mut s = WindowSweep {
            residues,
            p,
            m: m as u64,
            n: t.len() as u64,
            f,
            inv_x,
            enter: Cursor { base: 0, j: 0 },
            exit: Cursor { base: 0, j: 0 },
            roll: Rolling::empty(),
        };
        if !residues.is_empty() {
            s.enter = Cursor::at_or_after(residues, p, i0 as u64);
            s.exit = s.enter;
            let end = (i0 + m) as u64;
            loop {
                let g = s.enter.value(residues);
                if g >= end {
                    break;
                }
                s.roll.push(&f, t[g as usize]);
                s.enter.advance(residues, p);
            }
        }
        s
    }

    #[inline]
    fn fp(&self) -> u64 {
        self.roll.fp
    }

    /// Earliest alignment after the current one at which the window changes.
    #[inline]
    fn next_change(&self) -> u64 {
        if self.residues.is_empty() {
            return u64::MAX;
        }
        let g_in = self.enter.value(self.residues);
        let t_in = if g_in < self.n { g_in + 1 - self.m } else { u64::MAX };
        let g_out = self.exit.value(self.residues);
        let t_out = if g_out < g_in { g_out + 1 } else { u64::MAX };
        t_in.min(t_out)
    }

    /// Applies every change that takes effect at alignment `tau`.
    #[inline]
    fn apply(&mut self, tau: u64, t: &[u8]) {
        let (residues, p) = (self.residues, self.p);
        let g_out = self.exit.value(residues);
        if g_out < self.enter.value(residues) && g_out + 1 == tau {
            self.roll.pop_front(&self.f, self.inv_x, t[g_out as usize]);
            self.exit.advance(residues, p);
        }
        let g_in = self.enter.value(residues);
        if g_in < self.n && g_in + 1 - self.m == tau {
            self.roll.push(&self.f, t[g_in as usize]);
            self.enter.advance(residues, p);
        }
    }
}

/// `X_u` for shift `u`: `P[j]` over `j` with `(j + u) mod p` in `B`.
pub fn build_offset_pattern(p: &[u8], u: u64, b: &SampleSet, modulus: u64) -> Vec<u8> {
    (0..p.len())
        .filter(|&j| b.contains((j as u64 + u) % modulus))
        .map(|j| p[j])
        .collect()
}

/// `Y_v(i)`: `T[i + j]` over `j in [m]` with `(i + j - v z) mod p` in `B`.
pub fn offset_text_window(t: &[u8], i: usize, m: usize, vz: u64, b: &SampleSet, modulus: u64) -> Vec<u8> {
    (i..i + m)
        .filter(|&g| b.contains((g as u64 % modulus + modulus - vz % modulus) % modulus))
        .map(|g| t[g])
        .collect()
}

/// Fingerprint of `X_u` for every `u in [z]`, computed in one pass per `u`
/// from the rotated residue list.
fn pattern_fps(rep: &Repetition, cfg: &SampleConfig, pattern: &[u8]) -> Vec<u64> {
    let p = cfg.p;
    let m = pattern.len() as u64;
    (0..cfg.z)
        .map(|u| {
            let residues = rotate(&rep.sample.members, (p - u % p) % p, p);
            let mut roll = Rolling::empty();
            let mut base = 0;
            while base < m {
                for &r in &residues {
                    let j = base + r;
                    if j >= m {
                        break;
                    }
                    roll.push(&rep.fp, pattern[j as usize]);
                }
                base += p;
            }
            roll.fp
        })
        .collect()
}

/// `F(X_u^{(l)})` indexed `[l][u]`.
pub fn pattern_fingerprints(plan: &SamplerPlan, pattern: &[u8]) -> Vec<Vec<u64>> {
    plan.reps.iter().map(|rep| pattern_fps(rep, &plan.cfg, pattern)).collect()
}

/// `F(Y_v^{(l)}(i))` for every alignment `i`, via the incremental sweep.
pub fn window_fingerprints(plan: &SamplerPlan, l: usize, v: u64, text: &[u8]) -> Vec<u64> {
    let cfg = &plan.cfg;
    let rep = &plan.reps[l];
    let residues = rotate(&rep.sample.members, (v * cfg.z) % cfg.p, cfg.p);
    let last = text.len() - cfg.m;
    let mut sweep = WindowSweep::start(&residues, cfg.p, cfg.m, text, rep.fp, rep.fp.inv_x(), 0);
    let mut out = Vec::with_capacity(last + 1);
    for i in 0..=last as u64 {
        while sweep.next_change() == i {
            sweep.apply(i, text);
        }
        out.push(sweep.fp());
    }
    out
}

/// Whether `X_{u_i}^{(l)} != Y_{v_i}^{(l)}(i)` as fingerprints, indexed `[i][l]`.
pub fn indicator_matrix(plan: &SamplerPlan, pattern: &[u8], text: &[u8]) -> Vec<Vec<bool>> {
    fingerprint_pairs(plan, pattern, text)
        .into_iter()
        .map(|row| row.into_iter().map(|(x, y)| x != y).collect())
        .collect()
}

/// `(F(X_{u_i}), F(Y_{v_i}(i)))` for every alignment and repetition, without packing.
pub fn fingerprint_pairs(plan: &SamplerPlan, pattern: &[u8], text: &[u8]) -> Vec<Vec<(u64, u64)>> {
    let cfg = &plan.cfg;
    let last = text.len() - cfg.m;
    let xs = pattern_fingerprints(plan, pattern);
    let mut out = vec![Vec::with_capacity(cfg.l); last + 1];
    for l in 0..cfg.l {
        let ys: Vec<Vec<u64>> = (0..cfg.num_v()).map(|v| window_fingerprints(plan, l, v, text)).collect();
        for (i, row) in out.iter_mut().enumerate() {
            let (u, v) = cfg.decompose(i);
            row.push((xs[l][u as usize], ys[v as usize][i]));
        }
    }
    out
}

/// Hashed bit disagreements per alignment, recomputed without packing.
pub fn unpacked_counts(plan: &SamplerPlan, pattern: &[u8], text: &[u8]) -> Vec<u32> {
    fingerprint_pairs(plan, pattern, text)
        .into_iter()
        .map(|row| {
            row.iter()
                .zip(&plan.reps)
                .filter(|((x, y), rep)| rep.hash.bit(*x) != rep.hash.bit(*y))
                .count() as u32
        })
        .collect()
}

/// Alignments per time chunk when collecting signature toggles.
const CHUNK: u64 = 1 << 13;

/// Hashed bit disagreements `c_i` for each `i` in `q`, using packed signatures.
pub fn packed_counts(plan: &SamplerPlan, pattern: &[u8], text: &[u8], q: &[usize]) -> Vec<u32> {
    let cfg = &plan.cfg;
    let (p, z, l) = (cfg.p, cfg.z, cfg.l);
    let mut out = vec![0u32; q.len()];
    if q.is_empty() {
        return out;
    }

    let mut xrows = BitRows::zeros(z as usize, l);
    for (li, rep) in plan.reps.iter().enumerate() {
        for (u, fp) in pattern_fps(rep, cfg, pattern).into_iter().enumerate() {
            if rep.hash.bit(fp) == 1 {
                xrows.set(u, li);
            }
        }
    }

    // Group query indices by v, keeping ascending order within each group.
    let nv = cfg.num_v() as usize;
    let mut start = vec![0usize; nv + 1];
    for &i in q {
        start[cfg.decompose(i).1 as usize + 1] += 1;
    }
    for v in 0..nv {
        start[v + 1] += start[v];
    }
    let mut fill = start.clone();
    let mut order = vec![0u32; q.len()];
    for (qi, &i) in q.iter().enumerate() {
        let v = cfg.decompose(i).1 as usize;
        order[fill[v]] = qi as u32;
        fill[v] += 1;
    }

    let inv: Vec<u64> = plan.reps.iter().map(|r| r.fp.inv_x()).collect();
    let m = cfg.m as u64;
    let mut y = vec![0u64; xrows.stride()];
    let mut bits = vec![0u64; l];
    let mut toggles: Vec<(u32, u32)> = Vec::new();
    let mut sorted: Vec<(u32, u32)> = Vec::new();
    let mut counts = vec![0u32; CHUNK as usize + 1];

    for v in 0..nv {
        let group = &order[start[v]..start[v + 1]];
        if group.is_empty() {
            continue;
        }
        let shift = (v as u64 * z) % p;
        let residues: Vec<Vec<u64>> = plan.reps.iter().map(|r| rotate(&r.sample.members, shift, p)).collect();
        let mut sweeps: Vec<WindowSweep> = Vec::with_capacity(l);
        // Alignment the sweeps currently describe.
        let mut now = u64::MAX;
        let mut gi = 0;
        while gi < group.len() {
            let a = q[group[gi] as usize] as u64;
            if now == u64::MAX || a - now > m {
                // Rebuilding a window is cheaper than replaying a long gap.
                sweeps.clear();
                sweeps.extend(
                    plan.reps
                        .iter()
                        .enumerate()
                        .map(|(li, rep)| WindowSweep::start(&residues[li], p, cfg.m, text, rep.fp, inv[li], a as usize)),
                );
                y.iter_mut().for_each(|w| *w = 0);
                for (li, (sw, rep)) in sweeps.iter().zip(&plan.reps).enumerate() {
                    bits[li] = rep.hash.bit(sw.fp());
                    y[li / 64] |= bits[li] << (li % 64);
                }
            } else {
                // Only the parity of the toggles inside a gap matters.
                for (li, sw) in sweeps.iter_mut().enumerate() {
                    let hash = plan.reps[li].hash;
                    loop {
                        let tau = sw.next_change();
                        if tau > a {
                            break;
                        }
                        sw.apply(tau, text);
                        let bit = hash.bit(sw.fp());
                        if bit != bits[li] {
                            bits[li] = bit;
                            y[li / 64] ^= 1 << (li % 64);
                        }
                    }
                }
            }

            let mut gj = gi;
            while gj < group.len() && (q[group[gj] as usize] as u64) < a + CHUNK {
                gj += 1;
            }
            let b = q[group[gj - 1] as usize] as u64 + 1;
            toggles.clear();
            for (li, sw) in sweeps.iter_mut().enumerate() {
                let hash = plan.reps[li].hash;
                loop {
                    let tau = sw.next_change();
                    if tau >= b {
                        break;
                    }
                    sw.apply(tau, text);
                    let bit = hash.bit(sw.fp());
                    if bit != bits[li] {
                        bits[li] = bit;
                        toggles.push(((tau - a) as u32, li as u32));
                    }
                }
            }
            // Counting sort by time offset.
            let width = (b - a) as usize;
            counts[..=width].iter_mut().for_each(|c| *c = 0);
            for &(off, _) in &toggles {
                counts[off as usize + 1] += 1;
            }
            for w in 0..width {
                counts[w + 1] += counts[w];
            }
            sorted.resize(toggles.len(), (0, 0));
            for &tg in &toggles {
                let slot = &mut counts[tg.0 as usize];
                sorted[*slot as usize] = tg;
                *slot += 1;
            }
            let mut ti = 0;
            for &qi in &group[gi..gj] {
                let i = q[qi as usize] as u64;
                let off = (i - a) as u32;
                while ti < sorted.len() && sorted[ti].0 <= off {
                    let li = sorted[ti].1 as usize;
                    y[li / 64] ^= 1 << (li % 64);
                    ti += 1;
                }
                let u = (i % p % z) as usize;
                out[qi as usize] = xor_popcount(xrows.row(u), &y);
            }
            now = b - 1;
            gi = gj;
        }
    }
    out
}

/// Tunable constants of the sampler.
#[derive(Clone, Debug, PartialEq)]
pub struct GenericSampler {
    pub c_l: f64,
    /// Overrides the balanced choice of `z`.
    pub z: Option<u64>,
}

impl Default for GenericSampler {
    fn default() -> Self {
        GenericSampler { c_l: DEFAULT_C_L, z: None }
    }
}

impl GenericSampler {
    pub fn plan(&self, m: usize, n: usize, k: usize, eps: f64, s: f64, rng: &mut Rng) -> Result<SamplerPlan> {
        let mut cfg = SampleConfig::new(m, n, k, eps, s, self.c_l, rng)?;
        if let Some(z) = self.z {
            cfg = cfg.with_z(z);
        }
        Ok(SamplerPlan::draw(cfg, rng))
    }

    /// Raw counts for one independent run.
    pub fn counts(&self, p: &[u8], t: &[u8], q: &[usize], k: usize, eps: f64, s: f64, rng: &mut Rng) -> Result<(SamplerPlan, Vec<u32>)> {
        let plan = self.plan(p.len(), t.len(), k, eps, s, rng)?;
        let c = packed_counts(&plan, p, t, q);
        Ok((plan, c))
    }

    pub fn solve(&self, p: &[u8], t: &[u8], q: &[usize], k: usize, eps: f64, s: f64, rng: &mut Rng) -> Result<Vec<EstimateRow>> {
        check_inputs(p.len(), t.len(), eps)?;
        check_queries(q, t.len() - p.len())?;
        if k == 0 {
            return Ok(exact_scan(p, t, q, eps, rng));
        }
        let (plan, c) = self.counts(p, t, q, k, eps, s, rng)?;
        Ok(rows_from_counts(q, &c, &plan.cfg))
    }

    /// Per-position median over `reps` independent runs.
    pub fn solve_median(&self, p: &[u8], t: &[u8], q: &[usize], k: usize, eps: f64, s: f64, reps: usize, rng: &mut Rng) -> Result<Vec<EstimateRow>> {
        check_inputs(p.len(), t.len(), eps)?;
        check_queries(q, t.len() - p.len())?;
        if k == 0 {
            return Ok(exact_scan(p, t, q, eps, rng));
        }
        let est = self.median_estimates(p, t, q, k, eps, s, reps, rng)?;
        Ok(q.iter().zip(est).map(|(&i, e)| EstimateRow::new(i, e, k, eps)).collect())
    }

    pub(crate) fn median_estimates(&self, p: &[u8], t: &[u8], q: &[usize], k: usize, eps: f64, s: f64, reps: usize, rng: &mut Rng) -> Result<Vec<f64>> {
        let seeds: Vec<Rng> = (0..reps.max(1)).map(|_| rng.fork()).collect();
        let runs: Vec<(SamplerPlan, Vec<u32>)> = seeds
            .into_par_iter()
            .map(|mut r| self.counts(p, t, q, k, eps, s, &mut r))
            .collect::<Result<_>>()?;
        Ok(median_of_runs(&runs, q.len()))
    }
}

fn median_of_runs(runs: &[(SamplerPlan, Vec<u32>)], len: usize) -> Vec<f64> {
    let mut buf = vec![0.0; runs.len()];
    (0..len)
        .map(|qi| {
            for (slot, (plan, c)) in buf.iter_mut().zip(runs) {
                *slot = estimate_from_count(c[qi] as usize, plan.cfg.l, plan.cfg.beta, true);
            }
            median(&mut buf)
        })
        .collect()
}

pub(crate) fn rows_from_counts(q: &[usize], c: &[u32], cfg: &SampleConfig) -> Vec<EstimateRow> {
    q.iter()
        .zip(c)
        .map(|(&i, &c)| EstimateRow::new(i, estimate_from_count(c as usize, cfg.l, cfg.beta, true), cfg.k, cfg.eps))
        .collect()
}

/// Threshold zero: whole-window fingerprint equality.
pub(crate) fn exact_scan(p: &[u8], t: &[u8], q: &[usize], eps: f64, rng: &mut Rng) -> Vec<EstimateRow> {
    let f = FingerprintFn::random(rng);
    let inv = f.inv_x();
    let target = f.fingerprint(p);
    let m = p.len();
    let mut roll = Rolling::empty();
    for &c in &t[..m] {
        roll.push(&f, c);
    }
    let mut out = Vec::with_capacity(q.len());
    let mut qi = 0;
    for i in 0..=t.len() - m {
        if qi == q.len() {
            break;
        }
        if i > 0 {
            roll.pop_front(&f, inv, t[i - 1]);
            roll.push(&f, t[i + m - 1]);
        }
        if q[qi] == i {
            let e = if roll.fp == target { 0.0 } else { f64::INFINITY };
            out.push(EstimateRow::new(i, e, 0, eps));
            qi += 1;
        }
    }
    out
}

pub fn solve_fixed_threshold(p: &ByteString, t: &ByteString, q: &[usize], k: usize, eps: f64, s: f64, rng: &mut Rng) -> Result<Vec<EstimateRow>> {
    GenericSampler::default().solve(p, t, q, k, eps, s, rng)
}

/// Binary search state of one position over increasing power-of-two levels.
#[derive(Clone, Copy, Debug)]
struct LevelSearch {
    lo: isize,
    hi: isize,
    levels: isize,
    /// Estimate at level `hi + 1`, the lowest level probed as below its band.
    upper: f64,
    last: f64,
    done: Option<f64>,
}

impl LevelSearch {
    fn new(levels: usize) -> Self {
        LevelSearch {
            lo: 0,
            hi: levels as isize - 1,
            levels: levels as isize,
            upper: f64::NAN,
            last: f64::NAN,
            done: None,
        }
    }

    fn probe(&self) -> Option<usize> {
        self.done.is_none().then(|| ((self.lo + self.hi) / 2) as usize)
    }

    fn feed(&mut self, e: f64, k: usize, eps: f64) {
        let mid = (self.lo + self.hi) / 2;
        self.last = e;
        match classify(e, k, eps) {
            Class::InRange => {
                self.done = Some(e);
                return;
            }
            Class::LtK => {
                self.hi = mid - 1;
                self.upper = e;
            }
            Class::Gt2K => self.lo = mid + 1,
        }
        if self.lo > self.hi {
            // Below the first level, above the last, or two adjacent levels
            // that disagree: take the lower of the two.
            self.done = Some(if self.lo < self.levels { self.upper } else { self.last });
        }
    }
}

/// Per-threshold estimates combined by a per-position binary search.
///
/// `levels[j]` holds `(k_j, estimates)` for increasing powers of two `k_j`.
pub fn binary_search_levels(levels: &[(usize, Vec<f64>)], idx: usize, eps: f64) -> f64 {
    assert!(!levels.is_empty());
    let mut st = LevelSearch::new(levels.len());
    while let Some(j) = st.probe() {
        st.feed(levels[j].1[idx], levels[j].0, eps);
    }
    st.done.unwrap()
}

/// Binary search over the thresholds `ks` for every query, run in rounds.
///
/// A level is evaluated only at the queries whose search reaches it.
/// `eval` receives `(level index, query indices)` batches for one round and
/// returns the estimates of each batch in the same order.
pub fn adaptive_level_search<F>(ks: &[usize], queries: usize, eps: f64, mut eval: F) -> Result<Vec<f64>>
where
    F: FnMut(&[(usize, Vec<usize>)]) -> Result<Vec<Vec<f64>>>,
{
    assert!(!ks.is_empty());
    let mut state = vec![LevelSearch::new(ks.len()); queries];
    loop {
        let mut batches: Vec<(usize, Vec<usize>)> = ks.iter().enumerate().map(|(j, _)| (j, Vec::new())).collect();
        for (qi, st) in state.iter().enumerate() {
            if let Some(j) = st.probe() {
                batches[j].1.push(qi);
            }
        }
        batches.retain(|b| !b.1.is_empty());
        if batches.is_empty() {
            break;
        }
        let est = eval(&batches)?;
        for ((j, idx), e) in batches.iter().zip(est) {
            for (&qi, e) in idx.iter().zip(e) {
                state[qi].feed(e, ks[*j], eps);
            }
        }
    }
    Ok(state.into_iter().map(|st| st.done.unwrap()).collect())
}

/// Tunable constants for the all-thresholds driver.
#[derive(Clone, Debug, PartialEq)]
pub struct AllDistancesParams {
    pub s: f64,
    pub reps: Option<usize>,
    pub sampler: GenericSampler,
}

impl Default for AllDistancesParams {
    fn default() -> Self {
        AllDistancesParams {
            s: 16.0,
            reps: None,
            sampler: GenericSampler::default(),
        }
    }
}

pub(crate) fn log2_ceil(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// Powers of two `1, 2, 4, ... <= m`.
pub(crate) fn powers_of_two_upto(m: usize) -> Vec<usize> {
    std::iter::successors(Some(1usize), |&k| k.checked_mul(2))
        .take_while(|&k| k <= m)
        .collect()
}

pub fn solve_all_distances_with(p: &[u8], t: &[u8], q: &[usize], eps: f64, params: &AllDistancesParams, rng: &mut Rng) -> Result<Vec<(usize, f64)>> {
    check_inputs(p.len(), t.len(), eps)?;
    check_queries(q, t.len() - p.len())?;
    let reps = params.reps.unwrap_or_else(|| log2_ceil(t.len()).max(1));
    let ks = powers_of_two_upto(p.len());
    let est = adaptive_level_search(&ks, q.len(), eps, |batches| {
        batches
            .iter()
            .map(|(j, idx)| {
                let sub: Vec<usize> = idx.iter().map(|&qi| q[qi]).collect();
                params.sampler.median_estimates(p, t, &sub, ks[*j], eps, params.s, reps, rng)
            })
            .collect()
    })?;
    Ok(q.iter().copied().zip(est).collect())
}

pub fn solve_all_distances(p: &ByteString, t: &ByteString, q: &[usize], eps: f64, rng: &mut Rng) -> Result<Vec<(usize, f64)>> {
    solve_all_distances_with(p, t, q, eps, &AllDistancesParams::default(), rng)
}
