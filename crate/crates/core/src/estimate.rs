use std::fmt;

/// Position of an estimate relative to the band `[(1-eps)k, 2(1+eps)k]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Class {
    LtK,
    InRange,
    Gt2K,
}

impl Class {
    pub fn as_str(self) -> &'static str {
        match self {
            Class::LtK => "LT_K",
            Class::InRange => "IN_RANGE",
            Class::Gt2K => "GT_2K",
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn classify(estimate: f64, k: usize, eps: f64) -> Class {
    let k = k as f64;
    if estimate < (1.0 - eps) * k {
        Class::LtK
    } else if estimate > 2.0 * (1.0 + eps) * k {
        Class::Gt2K
    } else {
        Class::InRange
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EstimateRow {
    pub position: usize,
    /// `f64::INFINITY` when every repetition reported a difference.
    pub estimate: f64,
    pub class: Class,
}

impl EstimateRow {
    pub fn new(position: usize, estimate: f64, k: usize, eps: f64) -> Self {
        EstimateRow {
            position,
            estimate,
            class: classify(estimate, k, eps),
        }
    }
}

/// Inverts `c = (1 - (1-beta)^d) L`. With `doubled`, `c` counts hashed bit
/// disagreements, which happen half as often as the underlying event.
pub fn estimate_from_count(c: usize, l: usize, beta: f64, doubled: bool) -> f64 {
    if c == 0 {
        return 0.0;
    }
    let scale = if doubled { 2.0 } else { 1.0 };
    let r = scale * c as f64 / l as f64;
    if r >= 1.0 {
        return f64::INFINITY;
    }
    (-r).ln_1p() / (-beta).ln_1p()
}

pub fn format_estimate(x: f64) -> String {
    if x.is_infinite() {
        "inf".to_string()
    } else {
        let s = format!("{x:.3}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    }
}

/// Median of estimates. Infinite values sort last.
pub fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty());
    values.sort_by(|a, b| a.total_cmp(b));
    values[(values.len() - 1) / 2]
}
