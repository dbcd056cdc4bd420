//! The generic sampler run online with `z = floor(sqrt p)`: one stream per
//! `(l, v)`, one dictionary of offset-pattern fingerprints per `l`.

use crate::estimate::{estimate_from_count, EstimateRow};
use crate::generic::{pattern_fingerprints, SampleConfig, SamplerPlan};
use crate::rng::Rng;
use crate::Result;

use super::scheduler::{Active, Scheduler};
use super::window::SampledWindow;
use super::StreamParams;

/// `floor(sqrt p)`.
pub fn stream_z(p: u64) -> u64 {
    let mut z = (p as f64).sqrt() as u64;
    while z * z > p {
        z -= 1;
    }
    while (z + 1) * (z + 1) <= p {
        z += 1;
    }
    z.max(1)
}

/// Configuration and random choices shared by the online and offline paths.
pub fn primary_plan(m: usize, k: usize, eps: f64, params: &StreamParams, rng: &mut Rng) -> Result<SamplerPlan> {
    let cfg = SampleConfig::new(m, m, k, eps, params.s, params.c_l, rng)?;
    let z = stream_z(cfg.p);
    Ok(SamplerPlan::draw(cfg.with_z(z), rng))
}

#[derive(Clone, Debug)]
pub struct PrimaryStream {
    plan: SamplerPlan,
    inv_x: Vec<u64>,
    /// `F(X_u^{(l)})` at `[l * z + u]`.
    dict: Vec<u64>,
    /// Stream `(l, v)` at `[l * num_v + v]`.
    streams: Vec<SampledWindow>,
    sched: Scheduler,
    active: Vec<Active>,
    /// Per-repetition mismatch flags of the last reported alignment.
    last: Vec<bool>,
    time: u64,
}

impl PrimaryStream {
    pub fn new(pattern: &[u8], plan: SamplerPlan) -> Self {
        let cfg = &plan.cfg;
        let (p, z, nv) = (cfg.p, cfg.z, cfg.num_v());
        let dict: Vec<u64> = pattern_fingerprints(&plan, pattern).concat();
        let mut sched = Scheduler::new(p, plan.reps.iter().map(|r| r.sample.members.clone()).collect());
        for l in 0..cfg.l {
            for v in 0..nv {
                // Active at time i iff (i - v z) mod p is in B^{(l)}.
                sched.add(l, (p - v * z % p) % p, 0);
            }
        }
        PrimaryStream {
            inv_x: plan.reps.iter().map(|r| r.fp.inv_x()).collect(),
            dict,
            streams: vec![SampledWindow::new(); cfg.l * nv as usize],
            sched,
            active: Vec::new(),
            last: vec![false; cfg.l],
            time: 0,
            plan,
        }
    }

    pub fn plan(&self) -> &SamplerPlan {
        &self.plan
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn push(&mut self, sym: u8) -> Option<EstimateRow> {
        let cfg = &self.plan.cfg;
        let i = self.time;
        let m = cfg.m as u64;
        let nv = cfg.num_v() as usize;
        let start = (i + 1).saturating_sub(m);

        self.active.clear();
        self.sched.advance(i, &mut self.active);
        for a in &self.active {
            let h = a.handle as usize;
            let l = h / nv;
            let f = &self.plan.reps[l].fp;
            let w = &mut self.streams[h];
            w.expire(f, self.inv_x[l], start);
            w.push(f, i, sym);
        }
        self.time += 1;
        if i + 1 < m {
            return None;
        }

        let pos = start as usize;
        let (u, v) = cfg.decompose(pos);
        let z = cfg.z as usize;
        let mut c = 0;
        for (l, rep) in self.plan.reps.iter().enumerate() {
            let w = &mut self.streams[l * nv + v as usize];
            w.expire(&rep.fp, self.inv_x[l], start);
            let differs = w.fp() != self.dict[l * z + u as usize];
            self.last[l] = differs;
            c += differs as usize;
        }
        let e = estimate_from_count(c, cfg.l, cfg.beta, false);
        Some(EstimateRow::new(pos, e, cfg.k, cfg.eps))
    }

    /// Mismatch flag per repetition for the alignment reported last.
    pub fn last_indicators(&self) -> &[bool] {
        &self.last
    }

    pub fn resident_words(&self) -> usize {
        self.dict.len()
            + self.inv_x.len()
            + self.last.len().div_ceil(64)
            + self.streams.iter().map(SampledWindow::resident_words).sum::<usize>()
            + self.sched.resident_words()
    }

    /// Upper bound on `resident_words`: a window of stream `(l, v)` holds at
    /// most `|B^{(l)}| ceil(m / p)` characters, and the scheduler keeps at
    /// most one bucket per handle.
    pub fn space_budget(&self) -> usize {
        let cfg = &self.plan.cfg;
        let (l, z, nv) = (cfg.l, cfg.z as usize, cfg.num_v() as usize);
        let per_period = cfg.m.div_ceil(cfg.p as usize);
        let windows: usize = self.plan.reps.iter().map(|r| nv * (2 + r.sample.len() * per_period)).sum();
        let lists: usize = self.plan.reps.iter().map(|r| r.sample.len()).sum();
        l * z + l + l.div_ceil(64) + windows + lists + 3 * l * nv
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generic::indicator_matrix;

    #[test]
    fn floor_sqrt() {
        assert_eq!(stream_z(1), 1);
        assert_eq!(stream_z(15), 3);
        assert_eq!(stream_z(16), 4);
        assert_eq!(stream_z(1 << 40), 1 << 20);
    }

    #[test]
    fn matches_offline_indicators() {
        let mut r = Rng::new(1);
        for trial in 0..6 {
            let m = 16 + 20 * trial;
            let n = 300 + 100 * trial;
            let sigma = [2u64, 4, 26][trial % 3];
            let pattern: Vec<u8> = (0..m).map(|_| r.below(sigma) as u8).collect();
            let mut text: Vec<u8> = (0..n).map(|_| r.below(sigma) as u8).collect();
            text[50..50 + m].copy_from_slice(&pattern);
            let params = StreamParams { s: 4.0, ..StreamParams::default() };
            let plan = primary_plan(m, 1 + trial, 1.0 / 3.0, &params, &mut r).unwrap();
            let offline = indicator_matrix(&plan, &pattern, &text);
            let mut st = PrimaryStream::new(&pattern, plan);
            for (j, &c) in text.iter().enumerate() {
                if let Some(row) = st.push(c) {
                    assert_eq!(row.position + m - 1, j);
                    assert_eq!(st.last_indicators(), offline[row.position].as_slice());
                }
            }
        }
    }
}
