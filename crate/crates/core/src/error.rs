use thiserror::Error;

/// Errors reported by the solvers and primitives.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("no prime in [{lo}, {hi})")]
    NoPrimeInRange { lo: u64, hi: u64 },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("pattern of length {m} is longer than text of length {n}")]
    PatternLongerThanText { m: usize, n: usize },
    #[error("epsilon must lie in (0, 1/3], got {0}")]
    InvalidEpsilon(f64),
    #[error("invalid threshold: {0}")]
    InvalidThreshold(String),
    #[error("pattern is empty")]
    EmptyPattern,
    #[error("regime violation: {0}")]
    RegimeViolation(String),
    #[error("rho = {rho} is not a {bound}-period ({found} mismatches)")]
    PeriodViolation { rho: usize, bound: usize, found: usize },
    #[error("symbol {symbol} at offset {offset} is outside alphabet of size {sigma}")]
    SymbolOutOfRange { symbol: u32, offset: usize, sigma: u32 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
