//! Sublinear tester: reports every exact occurrence of the pattern and, with
//! high probability, nothing at distance above `delta m`.
//!
//! The sampler runs with `c = 2`, `eps = 1/3` and `k = delta m / ((1 + eps) c)`.
//! Text is touched only inside blocks of alignments that share `v_i`; within
//! a block the window fingerprints change at a few critical indices, and each
//! stretch between two of them is answered by one lookup of the signature
//! `<y_v^{(l)}>` in a table of pattern signatures `<x_u^{(l)}>`.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fingerprint::{FingerprintFn, Rolling};
use crate::generic::{pattern_fingerprints, SampleConfig, SamplerPlan, DEFAULT_C_L};
use crate::rng::Rng;

pub const TESTER_C: f64 = 2.0;
pub const TESTER_EPS: f64 = 1.0 / 3.0;
/// Majority vote over this many runs in amplified mode.
pub const DEFAULT_AMPLIFY: usize = 5;

/// Derived parameters of one tester run.
#[derive(Clone, Debug, PartialEq)]
pub struct TesterConfig {
    pub delta: f64,
    pub k: usize,
    pub s: f64,
    pub z: u64,
    pub p: u64,
    pub beta: f64,
    pub l: usize,
}

/// Outcome of one run, with instrumentation.
#[derive(Clone, Debug, PartialEq)]
pub struct TesterRun {
    pub config: TesterConfig,
    pub positions: Vec<usize>,
    /// Characters of `T` and `P` read.
    pub reads: u64,
    /// Reads plus critical stretches plus reported positions.
    pub steps: u64,
    /// False when the step budget ran out first.
    pub completed: bool,
}

fn check(m: usize, n: usize, delta: f64) -> Result<()> {
    if m == 0 {
        return Err(Error::EmptyPattern);
    }
    if m > n {
        return Err(Error::PatternLongerThanText { m, n });
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidParameter(format!("delta must lie in (0, 1], got {delta}")));
    }
    if delta * (m as f64) < 1.0 {
        return Err(Error::InvalidParameter(format!("delta m = {} must be at least 1", delta * m as f64)));
    }
    Ok(())
}

/// `delta m / ((1 + eps) c)`, at least 1.
pub fn tester_k(m: usize, delta: f64) -> usize {
    ((delta * m as f64 / ((1.0 + TESTER_EPS) * TESTER_C)).floor() as usize).max(1)
}

/// Levels needed so that a position at distance above `delta m` survives all
/// of them with probability at most `1 / (n s)`. A surviving level is one
/// whose sample misses at least `(1 - eps) delta m` distinct residues.
pub fn tester_levels(m: usize, n: usize, delta: f64, beta: f64, s: f64) -> usize {
    let d = (1.0 - TESTER_EPS) * (delta * m as f64).floor().max(1.0);
    let per_level = -d * (-beta).ln_1p();
    ((n as f64 * s).ln() / per_level).ceil().max(1.0) as usize
}

fn plan(m: usize, n: usize, delta: f64, rng: &mut Rng) -> Result<SamplerPlan> {
    let k = tester_k(m, delta);
    let r = k as f64 * n as f64 / m as f64;
    let s = r.cbrt().max(2.0);
    let z = (n as f64).sqrt().min(r.cbrt()).min(k as f64).floor().max(1.0) as u64;
    let mut cfg = SampleConfig::new(m, n, k, TESTER_EPS, s, DEFAULT_C_L, rng)?.with_z(z);
    cfg.l = tester_levels(m, n, delta, cfg.beta, s);
    Ok(SamplerPlan::draw(cfg, rng))
}

/// The members of `B` shifted by `sh` modulo `p`, in ascending order, read
/// without materializing the rotation.
#[derive(Clone, Copy)]
struct Rotated<'a> {
    members: &'a [u64],
    split: usize,
    sh: u64,
    p: u64,
}

impl<'a> Rotated<'a> {
    fn new(members: &'a [u64], sh: u64, p: u64) -> Self {
        let split = members.partition_point(|&b| b < p - sh);
        Rotated { members, split, sh, p }
    }

    #[inline]
    fn get(&self, k: usize) -> u64 {
        let mut idx = self.split + k;
        if idx >= self.members.len() {
            idx -= self.members.len();
        }
        let r = self.members[idx] + self.sh;
        if r >= self.p {
            r - self.p
        } else {
            r
        }
    }

    fn len(&self) -> usize {
        self.members.len()
    }
}

#[derive(Clone, Copy, Debug)]
struct Cursor {
    base: u64,
    k: usize,
}

impl Cursor {
    fn at_or_after(r: &Rotated, g: u64) -> Self {
        let base = g / r.p * r.p;
        let (mut lo, mut hi) = (0, r.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if r.get(mid) < g - base {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        let mut c = Cursor { base, k: lo };
        c.wrap(r);
        c
    }

    #[inline]
    fn wrap(&mut self, r: &Rotated) {
        if self.k == r.len() {
            self.k = 0;
            self.base += r.p;
        }
    }

    #[inline]
    fn value(&self, r: &Rotated) -> u64 {
        self.base + r.get(self.k)
    }

    #[inline]
    fn advance(&mut self, r: &Rotated) {
        self.k += 1;
        self.wrap(r);
    }
}

/// Fingerprint of `Y_v(i)` as the alignment `i` moves forward.
#[derive(Clone, Debug)]
struct Sweep {
    at: u64,
    enter: Cursor,
    exit: Cursor,
    roll: Rolling,
}

struct Ctx<'t> {
    text: &'t [u8],
    m: u64,
    reads: u64,
}

impl Sweep {
    fn start(r: &Rotated, f: &FingerprintFn, ctx: &mut Ctx, i: u64) -> Self {
        let c = Cursor::at_or_after(r, i);
        let mut s = Sweep { at: i, enter: c, exit: c, roll: Rolling::empty() };
        loop {
            let g = s.enter.value(r);
            if g >= i + ctx.m {
                break;
            }
            s.roll.push(f, ctx.text[g as usize]);
            ctx.reads += 1;
            s.enter.advance(r);
        }
        s
    }

    /// Earliest alignment after `at` at which the window changes.
    #[inline]
    fn next_change(&self, r: &Rotated, ctx: &Ctx) -> u64 {
        let g_in = self.enter.value(r);
        let t_in = if g_in < ctx.text.len() as u64 { g_in + 1 - ctx.m } else { u64::MAX };
        let g_out = self.exit.value(r);
        let t_out = if g_out < g_in { g_out + 1 } else { u64::MAX };
        t_in.min(t_out)
    }

    fn advance_to(&mut self, r: &Rotated, f: &FingerprintFn, inv_x: u64, ctx: &mut Ctx, i: u64) {
        loop {
            let tau = self.next_change(r, ctx);
            if tau > i {
                break;
            }
            let g_out = self.exit.value(r);
            if g_out < self.enter.value(r) && g_out + 1 == tau {
                self.roll.pop_front(f, inv_x, ctx.text[g_out as usize]);
                ctx.reads += 1;
                self.exit.advance(r);
            }
            let g_in = self.enter.value(r);
            if g_in < ctx.text.len() as u64 && g_in + 1 - ctx.m == tau {
                self.roll.push(f, ctx.text[g_in as usize]);
                ctx.reads += 1;
                self.enter.advance(r);
            }
        }
        self.at = i;
    }
}

/// `|X_u|` summed over `u in [z]`: the pattern characters read to build the
/// signature table.
fn pattern_reads(members: &[u64], p: u64, m: u64, z: u64) -> u64 {
    let count = |r: u64| if r < m { (m - r).div_ceil(p) } else { 0 };
    (0..z)
        .map(|u| members.iter().map(|&b| count((b + p - u % p) % p)).sum::<u64>())
        .sum()
}

/// Steps a run is expected to take: window reads per block and per critical
/// index, signature construction, and one lookup per stretch.
pub fn expected_steps(cfg: &TesterConfig, m: usize, n: usize) -> f64 {
    let (m, n, z) = (m as f64, n as f64, cfg.z as f64);
    let blocks = (n - m + 1.0) / z + 2.0;
    let l = cfg.l as f64;
    let window = l * blocks * (cfg.beta * (m + z) + 1.0);
    let changes = 2.0 * l * cfg.beta * n;
    let table = l * z * (cfg.beta * m + 1.0);
    window + 2.0 * changes + table + blocks
}

/// Default step budget for the decision: four times [`expected_steps`].
pub fn default_budget(cfg: &TesterConfig, m: usize, n: usize) -> u64 {
    (4.0 * expected_steps(cfg, m, n)).ceil() as u64
}

pub fn tester_config(m: usize, n: usize, delta: f64, rng: &mut Rng) -> Result<TesterConfig> {
    check(m, n, delta)?;
    Ok(config_of(&plan(m, n, delta, rng)?, delta))
}

fn config_of(plan: &SamplerPlan, delta: f64) -> TesterConfig {
    let c = &plan.cfg;
    TesterConfig { delta, k: c.k, s: c.s, z: c.z, p: c.p, beta: c.beta, l: c.l }
}

/// One run. Stops early, with `completed = false`, once `steps` would exceed
/// `budget`.
pub fn prop_test_run(pattern: &[u8], text: &[u8], delta: f64, budget: Option<u64>, rng: &mut Rng) -> Result<TesterRun> {
    let (m, n) = (pattern.len(), text.len());
    check(m, n, delta)?;
    let plan = plan(m, n, delta, rng)?;
    let config = config_of(&plan, delta);
    let cfg = &plan.cfg;
    let (p, z, l) = (cfg.p, cfg.z, cfg.l);
    let budget = budget.unwrap_or(u64::MAX);

    let mut ctx = Ctx { text, m: m as u64, reads: 0 };
    for rep in &plan.reps {
        ctx.reads += pattern_reads(&rep.sample.members, p, m as u64, z);
    }
    let x = pattern_fingerprints(&plan, pattern);
    let mut table: HashMap<Vec<u64>, Vec<u32>> = HashMap::new();
    for u in 0..z as usize {
        table.entry(x.iter().map(|row| row[u]).collect()).or_default().push(u as u32);
    }
    drop(x);

    let inv_x: Vec<u64> = plan.reps.iter().map(|r| r.fp.inv_x()).collect();
    let num_v = cfg.num_v() as usize;
    let mut sweeps: Vec<Option<Sweep>> = vec![None; num_v * l];
    let mut positions = Vec::new();
    let mut stretches = 0u64;
    let mut y = vec![0u64; l];
    let mut nexts = vec![0u64; l];
    let last = (n - m) as u64;
    let mut completed = true;

    let mut a = 0u64;
    'blocks: while a <= last {
        let (u0, v) = cfg.decompose(a as usize);
        let r0 = a % p;
        let end = (a + (z - u0)).min(a + (p - r0)).min(last + 1);
        for (li, rep) in plan.reps.iter().enumerate() {
            let rot = Rotated::new(&rep.sample.members, v * z % p, p);
            let slot = &mut sweeps[v as usize * l + li];
            if rot.len() == 0 {
                y[li] = Rolling::empty().fp;
                nexts[li] = u64::MAX;
                continue;
            }
            // Catching up reads about twice the sampled characters of the gap,
            // starting over reads those of one window.
            match slot {
                Some(s) if 2 * (a - s.at) <= m as u64 => s.advance_to(&rot, &rep.fp, inv_x[li], &mut ctx, a),
                _ => *slot = Some(Sweep::start(&rot, &rep.fp, &mut ctx, a)),
            }
            let s = slot.as_ref().unwrap();
            y[li] = s.roll.fp;
            nexts[li] = s.next_change(&rot, &ctx);
        }

        let mut i = a;
        while i < end {
            let stop = nexts.iter().copied().min().unwrap_or(u64::MAX).min(end);
            stretches += 1;
            if let Some(us) = table.get(y.as_slice()) {
                let lo = (u0 + (i - a)) as u32;
                let hi = (u0 + (stop - a)) as u32;
                let from = us.partition_point(|&u| u < lo);
                for &u in us[from..].iter().take_while(|&&u| u < hi) {
                    positions.push((a + (u as u64 - u0)) as usize);
                }
            }
            if ctx.reads + stretches + positions.len() as u64 > budget {
                completed = false;
                break 'blocks;
            }
            if stop >= end {
                break;
            }
            for (li, rep) in plan.reps.iter().enumerate() {
                if nexts[li] == stop {
                    let rot = Rotated::new(&rep.sample.members, v * z % p, p);
                    let s = sweeps[v as usize * l + li].as_mut().unwrap();
                    s.advance_to(&rot, &rep.fp, inv_x[li], &mut ctx, stop);
                    y[li] = s.roll.fp;
                    nexts[li] = s.next_change(&rot, &ctx);
                }
            }
            i = stop;
        }
        a = end;
    }

    let steps = ctx.reads + stretches + positions.len() as u64;
    Ok(TesterRun { config, positions, reads: ctx.reads, steps, completed })
}

/// Positions reported by a single run.
pub fn prop_test(pattern: &[u8], text: &[u8], delta: f64, rng: &mut Rng) -> Result<Vec<usize>> {
    Ok(prop_test_run(pattern, text, delta, None, rng)?.positions)
}

/// Positions reported by a strict majority of `reps` independent runs.
pub fn prop_test_amplified(pattern: &[u8], text: &[u8], delta: f64, reps: usize, rng: &mut Rng) -> Result<Vec<usize>> {
    let runs = independent_runs(pattern, text, delta, None, reps, rng)?;
    let mut votes: BTreeMap<usize, usize> = BTreeMap::new();
    for run in &runs {
        for &i in &run.positions {
            *votes.entry(i).or_default() += 1;
        }
    }
    Ok(votes.into_iter().filter(|&(_, c)| 2 * c > runs.len()).map(|(i, _)| i).collect())
}

fn independent_runs(pattern: &[u8], text: &[u8], delta: f64, budget: Option<u64>, reps: usize, rng: &mut Rng) -> Result<Vec<TesterRun>> {
    let rngs: Vec<Rng> = (0..reps.max(1)).map(|_| rng.fork()).collect();
    rngs.into_par_iter()
        .map(|mut r| prop_test_run(pattern, text, delta, budget, &mut r))
        .collect()
}

/// True when the run did not finish within `budget_steps` or reported at
/// least one position. `None` uses [`default_budget`].
pub fn prop_test_decision(pattern: &[u8], text: &[u8], delta: f64, budget_steps: Option<u64>, rng: &mut Rng) -> Result<bool> {
    prop_test_decision_amplified(pattern, text, delta, budget_steps, 1, rng)
}

/// Majority of `reps` independent decisions.
pub fn prop_test_decision_amplified(pattern: &[u8], text: &[u8], delta: f64, budget_steps: Option<u64>, reps: usize, rng: &mut Rng) -> Result<bool> {
    check(pattern.len(), text.len(), delta)?;
    let rngs: Vec<Rng> = (0..reps.max(1)).map(|_| rng.fork()).collect();
    let votes = rngs
        .into_par_iter()
        .map(|mut r| {
            let budget = match budget_steps {
                Some(b) => b,
                None => {
                    let cfg = tester_config(pattern.len(), text.len(), delta, &mut r.clone())?;
                    default_budget(&cfg, pattern.len(), text.len())
                }
            };
            let run = prop_test_run(pattern, text, delta, Some(budget), &mut r)?;
            Ok(!run.completed || !run.positions.is_empty())
        })
        .collect::<Result<Vec<bool>>>()?;
    let yes = votes.iter().filter(|&&b| b).count();
    Ok(2 * yes > votes.len())
}
