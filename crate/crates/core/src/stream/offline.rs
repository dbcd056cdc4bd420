//! The streaming estimators recomputed from the whole text. Random choices are
//! drawn in the same order as [`MedianStream`](super::MedianStream) and
//! [`MultiStream`](super::MultiStream), so equal seeds give equal output.

use crate::error::{Error, Result};
use crate::estimate::{estimate_from_count, median, EstimateRow};
use crate::generic::{fingerprint_pairs, powers_of_two_upto};
use crate::rng::Rng;

use super::alternative::{residue_string, AltPlan};
use super::primary::primary_plan;
use super::{merge_levels, StreamParams, Variant};

fn instance(pattern: &[u8], text: &[u8], k: usize, eps: f64, variant: Variant, params: &StreamParams, rng: &mut Rng) -> Result<Vec<f64>> {
    let m = pattern.len();
    Ok(match variant {
        Variant::Primary => {
            let plan = primary_plan(m, k, eps, params, rng)?;
            fingerprint_pairs(&plan, pattern, text)
                .into_iter()
                .map(|row| {
                    let c = row.iter().filter(|(x, y)| x != y).count();
                    estimate_from_count(c, plan.cfg.l, plan.cfg.beta, false)
                })
                .collect()
        }
        Variant::Alternative => {
            let plan = AltPlan::draw(m, k, eps, params, rng)?;
            let p = plan.p;
            let xs: Vec<(u64, u64)> = plan.b_p.members.iter().map(|&b| (b, plan.fp.fingerprint(&residue_string(pattern, b, p)))).collect();
            (0..=text.len() - m)
                .map(|i| {
                    let window = &text[i..i + m];
                    let c = xs
                        .iter()
                        .filter(|&&(b, _)| plan.b_t.contains((b + i as u64 % p) % p))
                        .filter(|&&(b, fx)| plan.fp.fingerprint(&residue_string(window, b, p)) != fx)
                        .count();
                    c as f64 / (plan.beta * plan.beta)
                })
                .collect()
        }
    })
}

fn check(pattern: &[u8], text: &[u8]) -> Result<()> {
    if pattern.is_empty() {
        return Err(Error::EmptyPattern);
    }
    if pattern.len() > text.len() {
        return Err(Error::PatternLongerThanText { m: pattern.len(), n: text.len() });
    }
    Ok(())
}

fn median_estimates(pattern: &[u8], text: &[u8], k: usize, eps: f64, variant: Variant, reps: usize, params: &StreamParams, rng: &mut Rng) -> Result<Vec<f64>> {
    let runs = (0..reps.max(1))
        .map(|_| instance(pattern, text, k, eps, variant, params, &mut rng.fork()))
        .collect::<Result<Vec<_>>>()?;
    let mut buf = vec![0.0; runs.len()];
    Ok((0..runs[0].len())
        .map(|i| {
            for (slot, run) in buf.iter_mut().zip(&runs) {
                *slot = run[i];
            }
            median(&mut buf)
        })
        .collect())
}

/// Rows a [`MedianStream`](super::MedianStream) built from `rng` reports on `text`.
pub fn stream_offline(pattern: &[u8], text: &[u8], k: usize, eps: f64, variant: Variant, reps: usize, params: &StreamParams, rng: &mut Rng) -> Result<Vec<EstimateRow>> {
    check(pattern, text)?;
    let est = median_estimates(pattern, text, k, eps, variant, reps, params, rng)?;
    Ok(est.into_iter().enumerate().map(|(i, e)| EstimateRow::new(i, e, k, eps)).collect())
}

/// Pairs a [`MultiStream`](super::MultiStream) built from `rng` reports on `text`.
pub fn stream_offline_multi(pattern: &[u8], text: &[u8], k_max: usize, eps: f64, variant: Variant, reps: usize, params: &StreamParams, rng: &mut Rng) -> Result<Vec<(usize, f64)>> {
    check(pattern, text)?;
    if k_max == 0 || k_max > pattern.len() {
        return Err(Error::InvalidThreshold(format!("k_max = {k_max} must lie in [1, m = {}]", pattern.len())));
    }
    let ks = powers_of_two_upto(k_max);
    let levels = ks
        .iter()
        .map(|&k| stream_offline(pattern, text, k, eps, variant, reps, params, rng))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(ks.len());
    Ok((0..levels[0].len())
        .map(|i| {
            rows.clear();
            rows.extend(levels.iter().map(|l| l[i]));
            (i, merge_levels(&rows, &ks, eps))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::{MedianStream, MultiStream};

    #[test]
    fn equals_online_output() {
        let mut r = Rng::new(8);
        for variant in [Variant::Primary, Variant::Alternative] {
            for trial in 0..4 {
                let m = 20 + 30 * trial;
                let pattern: Vec<u8> = (0..m).map(|_| r.below(3) as u8).collect();
                let mut text: Vec<u8> = (0..600).map(|_| r.below(3) as u8).collect();
                text[100..100 + m].copy_from_slice(&pattern);
                let params = StreamParams::default();
                let k = 2 + trial * 3;

                let mut a = r.clone();
                let mut online = MedianStream::new(&pattern, k, 1.0 / 3.0, variant, 3, &params, &mut a).unwrap();
                let got: Vec<EstimateRow> = text.iter().filter_map(|&c| online.push(c)).collect();
                let mut b = r.clone();
                assert_eq!(got, stream_offline(&pattern, &text, k, 1.0 / 3.0, variant, 3, &params, &mut b).unwrap());

                let mut a = r.clone();
                let mut online = MultiStream::new(&pattern, k, 1.0 / 3.0, variant, 1, &params, &mut a).unwrap();
                let got: Vec<(usize, f64)> = text.iter().filter_map(|&c| online.push(c)).collect();
                let mut b = r.clone();
                assert_eq!(got, stream_offline_multi(&pattern, &text, k, 1.0 / 3.0, variant, 1, &params, &mut b).unwrap());
                r.next_u64();
            }
        }
    }
}
