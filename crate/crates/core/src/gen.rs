//! Random instances: uniform strings, planted occurrences, approximately
//! periodic pairs, and pairs far from each other at every alignment.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::oracle::all_distances_naive;
use crate::rng::Rng;

pub fn random_string(n: usize, sigma: u32, rng: &mut Rng) -> Vec<u8> {
    (0..n).map(|_| rng.below(sigma as u64) as u8).collect()
}

/// Replaces each position with probability `rate` by a different symbol.
pub fn add_noise(s: &mut [u8], sigma: u32, rate: f64, rng: &mut Rng) {
    if sigma < 2 {
        return;
    }
    for c in s.iter_mut() {
        if rng.bernoulli(rate) {
            *c = ((*c as u64 + 1 + rng.below(sigma as u64 - 1)) % sigma as u64) as u8;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Plant {
    /// Uniform pattern and text.
    None,
    /// The pattern copied into the text at a random position.
    Exact,
    /// Both strings repeat one random block of length `rho`, then get noise.
    Periodic { rho: usize, noise: f64 },
    /// Every alignment at distance above `delta m`.
    Far { delta: f64 },
}

impl FromStr for Plant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("unknown plant {s:?}; expected none, exact, periodic:RHO:NOISE or far:DELTA"));
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["none"] => Ok(Plant::None),
            ["exact"] => Ok(Plant::Exact),
            ["periodic", rho, noise] => {
                let rho: usize = rho.parse().map_err(|_| bad())?;
                let noise: f64 = noise.parse().map_err(|_| bad())?;
                if rho == 0 || !(0.0..=1.0).contains(&noise) {
                    return Err(bad());
                }
                Ok(Plant::Periodic { rho, noise })
            }
            ["far", delta] => {
                let delta: f64 = delta.parse().map_err(|_| bad())?;
                if !(0.0..1.0).contains(&delta) {
                    return Err(bad());
                }
                Ok(Plant::Far { delta })
            }
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub pattern: Vec<u8>,
    pub text: Vec<u8>,
    /// Where the pattern was copied, for [`Plant::Exact`].
    pub planted_at: Option<usize>,
}

const FAR_ATTEMPTS: usize = 20;

/// Draws an instance. Far instances are certified with the naive oracle and
/// redrawn until certified; after a few failed uniform draws the pattern and
/// text take symbols from disjoint halves of the alphabet.
pub fn generate(n: usize, m: usize, sigma: u32, plant: Plant, rng: &mut Rng) -> Result<Instance> {
    if m == 0 {
        return Err(Error::EmptyPattern);
    }
    if m > n {
        return Err(Error::PatternLongerThanText { m, n });
    }
    if sigma == 0 || sigma > 256 {
        return Err(Error::InvalidParameter(format!("alphabet size {sigma} must lie in [1, 256]")));
    }
    match plant {
        Plant::None => Ok(Instance { pattern: random_string(m, sigma, rng), text: random_string(n, sigma, rng), planted_at: None }),
        Plant::Exact => {
            let pattern = random_string(m, sigma, rng);
            let mut text = random_string(n, sigma, rng);
            let at = rng.below((n - m + 1) as u64) as usize;
            text[at..at + m].copy_from_slice(&pattern);
            Ok(Instance { pattern, text, planted_at: Some(at) })
        }
        Plant::Periodic { rho, noise } => {
            let block = random_string(rho, sigma, rng);
            let shift = rng.below(rho as u64) as usize;
            let mut pattern: Vec<u8> = (0..m).map(|j| block[j % rho]).collect();
            let mut text: Vec<u8> = (0..n).map(|j| block[(j + shift) % rho]).collect();
            add_noise(&mut pattern, sigma, noise, rng);
            add_noise(&mut text, sigma, noise, rng);
            Ok(Instance { pattern, text, planted_at: None })
        }
        Plant::Far { delta } => {
            if sigma < 2 {
                return Err(Error::InvalidParameter("far instances need an alphabet of at least 2 symbols".into()));
            }
            let bound = delta * m as f64;
            for attempt in 0.. {
                let (pattern, text) = if attempt < FAR_ATTEMPTS {
                    (random_string(m, sigma, rng), random_string(n, sigma, rng))
                } else {
                    let half = sigma / 2;
                    let p = random_string(m, half, rng);
                    let t = random_string(n, sigma - half, rng).into_iter().map(|c| c + half as u8).collect();
                    (p, t)
                };
                let d = all_distances_naive(&pattern, &text)?;
                if d.iter().all(|&x| x as f64 > bound) {
                    return Ok(Instance { pattern, text, planted_at: None });
                }
            }
            unreachable!()
        }
    }
}
