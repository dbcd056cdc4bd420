use crate::rng::Rng;

/// A subset of `[p]` drawn with independent inclusion probability `beta`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleSet {
    pub p: u64,
    pub members: Vec<u64>,
    pub beta: f64,
}

impl SampleSet {
    pub fn full(p: u64) -> Self {
        SampleSet {
            p,
            members: (0..p).collect(),
            beta: 1.0,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, r: u64) -> bool {
        self.members.binary_search(&r).is_ok()
    }

    /// Index of the first member `>= r` (may equal `len()`).
    pub fn lower_bound(&self, r: u64) -> usize {
        self.members.partition_point(|&b| b < r)
    }
}

/// Bernoulli(beta) subset of `[p]`, generated by geometric gap skipping.
pub fn sample_subset(p: u64, beta: f64, rng: &mut Rng) -> SampleSet {
    if beta >= 1.0 {
        return SampleSet::full(p);
    }
    let mut members = Vec::new();
    if beta > 0.0 {
        let denom = (-beta).ln_1p();
        let mut pos: u64 = 0;
        loop {
            let gap = (rng.open01().ln() / denom).floor();
            if gap >= (p - pos) as f64 {
                break;
            }
            pos += gap as u64;
            members.push(pos);
            pos += 1;
            if pos >= p {
                break;
            }
        }
    }
    SampleSet { p, members, beta }
}
