//! One-pass estimation: the estimate for alignment `i - m + 1` is reported
//! while `T[i]` is being consumed.
//!
//! Each stream keeps a rolling fingerprint of its own sampled characters that
//! arrived within the last `m` text positions. That fingerprint is exactly the
//! offset text of the alignment being reported, so the suffix test against an
//! offset pattern is a single comparison with a precomputed fingerprint.

pub mod alternative;
pub mod offline;
pub mod primary;
pub mod scheduler;
mod window;

use crate::error::{Error, Result};
use crate::estimate::{classify, median, Class, EstimateRow};
use crate::generic::{powers_of_two_upto, DEFAULT_C_L};
use crate::rng::Rng;

pub use alternative::{AltPlan, AltStream};
pub use offline::{stream_offline, stream_offline_multi};
pub use primary::{primary_plan, PrimaryStream};
pub use scheduler::Scheduler;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// Generic sampler with `z = floor(sqrt p)`.
    Primary,
    /// Independent offset-pattern and offset-text samples.
    Alternative,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StreamParams {
    pub s: f64,
    pub c_l: f64,
}

impl Default for StreamParams {
    fn default() -> Self {
        StreamParams { s: 16.0, c_l: DEFAULT_C_L }
    }
}

#[derive(Clone, Debug)]
pub enum StreamState {
    Primary(PrimaryStream),
    Alternative(AltStream),
}

impl StreamState {
    pub fn push(&mut self, sym: u8) -> Option<EstimateRow> {
        match self {
            StreamState::Primary(s) => s.push(sym),
            StreamState::Alternative(s) => s.push(sym),
        }
    }

    pub fn resident_words(&self) -> usize {
        match self {
            StreamState::Primary(s) => s.resident_words(),
            StreamState::Alternative(s) => s.resident_words(),
        }
    }

    pub fn space_budget(&self) -> usize {
        match self {
            StreamState::Primary(s) => s.space_budget(),
            StreamState::Alternative(s) => s.space_budget(),
        }
    }
}

pub fn stream_init_with(pattern: &[u8], k: usize, eps: f64, variant: Variant, params: &StreamParams, rng: &mut Rng) -> Result<StreamState> {
    if pattern.is_empty() {
        return Err(Error::EmptyPattern);
    }
    Ok(match variant {
        Variant::Primary => {
            let plan = primary_plan(pattern.len(), k, eps, params, rng)?;
            StreamState::Primary(PrimaryStream::new(pattern, plan))
        }
        Variant::Alternative => {
            let plan = AltPlan::draw(pattern.len(), k, eps, params, rng)?;
            StreamState::Alternative(AltStream::new(pattern, plan))
        }
    })
}

pub fn stream_init(pattern: &[u8], k: usize, eps: f64, variant: Variant, rng: &mut Rng) -> Result<StreamState> {
    stream_init_with(pattern, k, eps, variant, &StreamParams::default(), rng)
}

pub fn stream_push(st: &mut StreamState, sym: u8) -> Option<EstimateRow> {
    st.push(sym)
}

/// Independent instances for one threshold, reporting the per-position median.
#[derive(Clone, Debug)]
pub struct MedianStream {
    k: usize,
    eps: f64,
    instances: Vec<StreamState>,
    buf: Vec<f64>,
}

impl MedianStream {
    pub fn new(pattern: &[u8], k: usize, eps: f64, variant: Variant, reps: usize, params: &StreamParams, rng: &mut Rng) -> Result<Self> {
        let instances = (0..reps.max(1))
            .map(|_| stream_init_with(pattern, k, eps, variant, params, &mut rng.fork()))
            .collect::<Result<Vec<_>>>()?;
        Ok(MedianStream { k, eps, buf: Vec::with_capacity(instances.len()), instances })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn push(&mut self, sym: u8) -> Option<EstimateRow> {
        self.buf.clear();
        let mut pos = None;
        for inst in &mut self.instances {
            if let Some(row) = inst.push(sym) {
                pos = Some(row.position);
                self.buf.push(row.estimate);
            }
        }
        pos.map(|i| EstimateRow::new(i, median(&mut self.buf), self.k, self.eps))
    }

    pub fn resident_words(&self) -> usize {
        self.instances.iter().map(StreamState::resident_words).sum()
    }

    pub fn space_budget(&self) -> usize {
        self.instances.iter().map(StreamState::space_budget).sum()
    }
}

/// Instances for every power of two `k' <= k_max`, merged per position.
#[derive(Clone, Debug)]
pub struct MultiStream {
    eps: f64,
    levels: Vec<MedianStream>,
    rows: Vec<EstimateRow>,
}

/// Per-level output of [`MultiStream::push_levels`].
#[derive(Clone, Debug, PartialEq)]
pub struct MultiReport {
    pub position: usize,
    pub estimate: f64,
    pub levels: Vec<(usize, EstimateRow)>,
}

impl MultiStream {
    pub fn new(pattern: &[u8], k_max: usize, eps: f64, variant: Variant, reps: usize, params: &StreamParams, rng: &mut Rng) -> Result<Self> {
        if k_max == 0 || k_max > pattern.len() {
            return Err(Error::InvalidThreshold(format!(
                "k_max = {k_max} must lie in [1, m = {}]",
                pattern.len()
            )));
        }
        let levels = powers_of_two_upto(k_max)
            .into_iter()
            .map(|k| MedianStream::new(pattern, k, eps, variant, reps, params, rng))
            .collect::<Result<Vec<_>>>()?;
        Ok(MultiStream { eps, levels, rows: Vec::new() })
    }

    pub fn thresholds(&self) -> Vec<usize> {
        self.levels.iter().map(MedianStream::k).collect()
    }

    pub fn push(&mut self, sym: u8) -> Option<(usize, f64)> {
        self.rows.clear();
        for level in &mut self.levels {
            if let Some(row) = level.push(sym) {
                self.rows.push(row);
            }
        }
        let first = self.rows.first()?;
        Some((first.position, merge_levels(&self.rows, &self.thresholds(), self.eps)))
    }

    pub fn push_levels(&mut self, sym: u8) -> Option<MultiReport> {
        let (position, estimate) = self.push(sym)?;
        Some(MultiReport {
            position,
            estimate,
            levels: self.thresholds().into_iter().zip(self.rows.iter().copied()).collect(),
        })
    }

    pub fn resident_words(&self) -> usize {
        self.levels.iter().map(MedianStream::resident_words).sum()
    }

    pub fn space_budget(&self) -> usize {
        self.levels.iter().map(MedianStream::space_budget).sum()
    }
}

/// The estimate of the lowest level whose estimate falls inside its band.
/// Otherwise the lowest level if it reports below its band, else the highest.
pub fn merge_levels(rows: &[EstimateRow], ks: &[usize], eps: f64) -> f64 {
    debug_assert_eq!(rows.len(), ks.len());
    if let Some(row) = rows.iter().zip(ks).find(|(r, &k)| classify(r.estimate, k, eps) == Class::InRange) {
        return row.0.estimate;
    }
    if rows[0].class == Class::LtK {
        rows[0].estimate
    } else {
        rows[rows.len() - 1].estimate
    }
}

/// Runs a [`MultiStream`] over `text` and collects every report.
pub fn stream_solve_multi(pattern: &[u8], text: &[u8], k_max: usize, eps: f64, variant: Variant, reps: usize, rng: &mut Rng) -> Result<Vec<(usize, f64)>> {
    let mut st = MultiStream::new(pattern, k_max, eps, variant, reps, &StreamParams::default(), rng)?;
    Ok(text.iter().filter_map(|&c| st.push(c)).collect())
}
