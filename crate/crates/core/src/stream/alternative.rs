//! Independent samples of offset patterns (`B_P`) and offset texts (`B_T`).
//! Alignment `i` compares `X_b` with `Y_{(b + i) mod p}(i)` for every
//! `b in B_P` whose partner residue landed in `B_T`.

use crate::error::{Error, Result};
use crate::estimate::EstimateRow;
use crate::fingerprint::FingerprintFn;
use crate::generic::{check_eps, pick_modulus};
use crate::rng::Rng;
use crate::sample::{sample_subset, SampleSet};

use super::scheduler::{Active, Scheduler};
use super::window::SampledWindow;
use super::StreamParams;

/// `min(1, sqrt(s / (eps^2 k)))`, used for both samples.
pub fn alternative_rate(k: usize, eps: f64, s: f64) -> f64 {
    (s / (eps * eps * k as f64)).sqrt().min(1.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct AltPlan {
    pub m: usize,
    pub k: usize,
    pub eps: f64,
    pub s: f64,
    pub p_hat: u64,
    pub p: u64,
    pub beta: f64,
    pub b_p: SampleSet,
    pub b_t: SampleSet,
    pub fp: FingerprintFn,
}

impl AltPlan {
    pub fn draw(m: usize, k: usize, eps: f64, params: &StreamParams, rng: &mut Rng) -> Result<Self> {
        check_eps(eps)?;
        if m == 0 {
            return Err(Error::EmptyPattern);
        }
        if k == 0 {
            return Err(Error::InvalidThreshold("k must be at least 1".into()));
        }
        if !(params.s >= 2.0) {
            return Err(Error::InvalidParameter(format!("confidence s = {} must be at least 2", params.s)));
        }
        let (p_hat, p) = pick_modulus(m, k, eps, params.s, rng)?;
        let beta = alternative_rate(k, eps, params.s);
        let b_p = sample_subset(p, beta, rng);
        let b_t = sample_subset(p, beta, rng);
        let fp = FingerprintFn::random(rng);
        Ok(AltPlan { m, k, eps, s: params.s, p_hat, p, beta, b_p, b_t, fp })
    }

    /// `B_i = {b in B_P : (b + i) mod p in B_T}`, from the definition.
    pub fn b_set(&self, i: usize) -> Vec<u64> {
        let p = self.p;
        self.b_p
            .members
            .iter()
            .copied()
            .filter(|&b| self.b_t.contains((b + i as u64 % p) % p))
            .collect()
    }
}

/// `X_b = P[j]` over `j` with `j mod p = b`.
pub fn residue_string(s: &[u8], b: u64, p: u64) -> Vec<u8> {
    s.iter().skip(b as usize).step_by(p as usize).copied().collect()
}

#[derive(Clone, Debug)]
pub struct AltStream {
    plan: AltPlan,
    inv_x: u64,
    /// `F(X_b)` in the order of `B_P`.
    dict: Vec<u64>,
    /// `Y_v` for the `v`-th member of `B_T`.
    streams: Vec<SampledWindow>,
    sched: Scheduler,
    text_handle: u32,
    active: Vec<Active>,
    last_b: Vec<u64>,
    time: u64,
}

impl AltStream {
    pub fn new(pattern: &[u8], plan: AltPlan) -> Self {
        let p = plan.p;
        let m = plan.m as u64;
        let dict = plan.b_p.members.iter().map(|&b| plan.fp.fingerprint(&residue_string(pattern, b, p))).collect();
        let mut sched = Scheduler::new(p, vec![plan.b_t.members.clone()]);
        let lag = (m - 1) % p;
        for &b in &plan.b_p.members {
            // Reported at time i when (b + i - m + 1) mod p is in B_T.
            sched.add(0, (b + p - lag) % p, m - 1);
        }
        let text_handle = sched.add(0, 0, 0);
        AltStream {
            inv_x: plan.fp.inv_x(),
            dict,
            streams: vec![SampledWindow::new(); plan.b_t.len()],
            sched,
            text_handle,
            active: Vec::new(),
            last_b: Vec::new(),
            time: 0,
            plan,
        }
    }

    pub fn plan(&self) -> &AltPlan {
        &self.plan
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn push(&mut self, sym: u8) -> Option<EstimateRow> {
        let i = self.time;
        let m = self.plan.m as u64;
        let start = (i + 1).saturating_sub(m);
        let f = self.plan.fp;
        self.active.clear();
        self.sched.advance(i, &mut self.active);
        if let Some(a) = self.active.iter().find(|a| a.handle == self.text_handle) {
            let w = &mut self.streams[a.cursor as usize];
            w.expire(&f, self.inv_x, start);
            w.push(&f, i, sym);
        }
        self.time += 1;
        if i + 1 < m {
            return None;
        }

        self.last_b.clear();
        let mut c = 0usize;
        for a in &self.active {
            if a.handle == self.text_handle {
                continue;
            }
            let b = a.handle as usize;
            self.last_b.push(self.plan.b_p.members[b]);
            let w = &mut self.streams[a.cursor as usize];
            w.expire(&f, self.inv_x, start);
            c += (w.fp() != self.dict[b]) as usize;
        }
        self.last_b.sort_unstable();
        let e = c as f64 / (self.plan.beta * self.plan.beta);
        Some(EstimateRow::new(start as usize, e, self.plan.k, self.plan.eps))
    }

    /// `B_i` of the alignment reported last.
    pub fn last_b_set(&self) -> &[u64] {
        &self.last_b
    }

    pub fn resident_words(&self) -> usize {
        1 + self.dict.len() + self.streams.iter().map(SampledWindow::resident_words).sum::<usize>() + self.sched.resident_words()
    }

    /// Upper bound on `resident_words`: each `Y_v` window holds at most
    /// `ceil(m / p)` characters.
    pub fn space_budget(&self) -> usize {
        let (bp, bt) = (self.plan.b_p.len(), self.plan.b_t.len());
        let per_period = self.plan.m.div_ceil(self.plan.p as usize);
        1 + bp + bt * (2 + per_period) + bt + 3 * (bp + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn b_set_example() {
        let plan = AltPlan {
            m: 8,
            k: 1,
            eps: 1.0 / 3.0,
            s: 4.0,
            p_hat: 2,
            p: 4,
            beta: 0.5,
            b_p: SampleSet { p: 4, members: vec![0, 2], beta: 0.5 },
            b_t: SampleSet { p: 4, members: vec![1], beta: 0.5 },
            fp: FingerprintFn::new(crate::fingerprint::MERSENNE_61, 12345).unwrap(),
        };
        // X_0 lines up with text residue (0 + 1) mod 4 = 1.
        assert_eq!(plan.b_set(1), vec![0]);
        assert_eq!(plan.b_set(3), vec![2]);
    }

    #[test]
    fn reported_b_sets_match_definition() {
        let mut r = Rng::new(2);
        for trial in 0..5 {
            let m = 40 + 13 * trial;
            let params = StreamParams { s: 4.0, ..StreamParams::default() };
            let plan = AltPlan::draw(m, 2 + trial, 1.0 / 3.0, &params, &mut r).unwrap();
            let pattern: Vec<u8> = (0..m).map(|_| r.below(3) as u8).collect();
            let mut st = AltStream::new(&pattern, plan.clone());
            for _ in 0..400 {
                if let Some(row) = st.push(r.below(3) as u8) {
                    assert_eq!(st.last_b_set(), plan.b_set(row.position).as_slice());
                }
            }
        }
    }

    #[test]
    fn full_rate_counts_distinct_residues() {
        // beta = 1 turns c_i into |M_i mod p| exactly.
        let mut r = Rng::new(3);
        let m = 30;
        let pattern: Vec<u8> = (0..m).map(|_| r.below(2) as u8).collect();
        let text: Vec<u8> = (0..200).map(|_| r.below(2) as u8).collect();
        let params = StreamParams { s: 1e9, ..StreamParams::default() };
        let plan = AltPlan::draw(m, 1, 1.0 / 3.0, &params, &mut r).unwrap();
        assert_eq!(plan.beta, 1.0);
        let p = plan.p;
        let mut st = AltStream::new(&pattern, plan);
        for (j, &c) in text.iter().enumerate() {
            if let Some(row) = st.push(c) {
                let i = j + 1 - m;
                let mut res: Vec<u64> = (0..m).filter(|&t| pattern[t] != text[i + t]).map(|t| t as u64 % p).collect();
                res.sort_unstable();
                res.dedup();
                assert_eq!(row.estimate, res.len() as f64);
            }
        }
    }
}
