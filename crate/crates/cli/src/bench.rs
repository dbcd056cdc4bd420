//! Grid runner: one CSV row per combination of the listed values.
//!
//! Columns: `n,m,k,eps,algorithm,wall_ms,reads,violations`. `reads` is only
//! measured by the property tester; `violations` counts positions that fail
//! the algorithm's guarantee against the naive oracle, and is `NA` when
//! `n m` exceeds `--verify-limit`.

use std::io::{self, Write};
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Result};
use clap::{Args, ValueEnum};
use hamdist_core::gen::random_string;
use hamdist_core::oracle::within_bracket;
use hamdist_core::proptester::prop_test_run;
use hamdist_core::small_m::solve_small_m;
use hamdist_core::stream::{MedianStream, StreamParams, Variant};
use hamdist_core::{all_distances_naive, solve_combined_all, solve_combined_fixed, solve_exact, validate_estimation, GenericSampler, Rng};

use crate::input::write_file;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BenchAlgorithm {
    Exact,
    Generic,
    SmallM,
    CombinedFixed,
    CombinedAll,
    StreamPrimary,
    StreamAlt,
    Proptest,
}

impl BenchAlgorithm {
    fn name(self) -> &'static str {
        match self {
            BenchAlgorithm::Exact => "exact",
            BenchAlgorithm::Generic => "generic",
            BenchAlgorithm::SmallM => "small-m",
            BenchAlgorithm::CombinedFixed => "combined-fixed",
            BenchAlgorithm::CombinedAll => "combined-all",
            BenchAlgorithm::StreamPrimary => "stream-primary",
            BenchAlgorithm::StreamAlt => "stream-alt",
            BenchAlgorithm::Proptest => "proptest",
        }
    }
}

#[derive(Args)]
pub struct BenchArgs {
    /// Text lengths.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    /// Pattern lengths.
    #[arg(long, value_delimiter = ',', required = true)]
    m: Vec<usize>,
    /// Thresholds. The property tester uses delta = 8k / (3m).
    #[arg(short, long, value_delimiter = ',', default_value = "16")]
    k: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0.3333333333333333")]
    eps: Vec<f64>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "exact,generic")]
    algorithms: Vec<BenchAlgorithm>,
    #[arg(long, default_value_t = 4)]
    sigma: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Skip oracle verification above this many character comparisons.
    #[arg(long, default_value_t = 200_000_000)]
    verify_limit: u64,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Measured {
    wall_ms: f64,
    reads: Option<u64>,
    violations: Option<usize>,
}

fn run_one(algo: BenchAlgorithm, p: &[u8], t: &[u8], k: usize, eps: f64, verify: bool, rng: &mut Rng) -> Result<Measured> {
    let m = p.len();
    let q: Vec<usize> = (0..=t.len() - m).collect();
    let start = Instant::now();
    let mut reads = None;
    // Each arm returns a checker that compares its output with the oracle.
    let check: Box<dyn Fn(&[usize]) -> usize> = match algo {
        BenchAlgorithm::Exact => {
            let d = solve_exact(p, t, k, rng)?;
            Box::new(move |o| o.iter().zip(&d).filter(|(&x, &y)| y != (x <= k).then_some(x)).count())
        }
        BenchAlgorithm::Generic | BenchAlgorithm::SmallM | BenchAlgorithm::CombinedFixed => {
            let rows = match algo {
                BenchAlgorithm::Generic => GenericSampler::default().solve(p, t, &q, k, eps, 64.0, rng)?,
                BenchAlgorithm::SmallM => solve_small_m(p, t, &q, k, eps, 64.0, rng)?,
                _ => solve_combined_fixed(p, t, &q, k, eps, rng)?,
            };
            Box::new(move |o| rows.iter().filter(|r| !validate_estimation(o[r.position], r.estimate, k, eps)).count())
        }
        BenchAlgorithm::CombinedAll => {
            let est = solve_combined_all(p, t, &q, eps, rng)?;
            Box::new(move |o| est.iter().filter(|&&(i, e)| !within_bracket(o[i], e, eps)).count())
        }
        BenchAlgorithm::StreamPrimary | BenchAlgorithm::StreamAlt => {
            let variant = if algo == BenchAlgorithm::StreamPrimary { Variant::Primary } else { Variant::Alternative };
            let mut st = MedianStream::new(p, k, eps, variant, 1, &StreamParams::default(), rng)?;
            let rows: Vec<_> = t.iter().filter_map(|&c| st.push(c)).collect();
            Box::new(move |o| rows.iter().filter(|r| !validate_estimation(o[r.position], r.estimate, k, eps)).count())
        }
        BenchAlgorithm::Proptest => {
            let delta = (8.0 * k as f64 / (3.0 * m as f64)).min(1.0);
            let run = prop_test_run(p, t, delta, None, rng)?;
            reads = Some(run.reads);
            let found = run.positions;
            Box::new(move |o| {
                let bad = found.iter().filter(|&&i| o[i] as f64 > delta * m as f64).count();
                let missed = o.iter().enumerate().filter(|&(i, &d)| d == 0 && found.binary_search(&i).is_err()).count();
                bad + missed
            })
        }
    };
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let violations = if verify {
        let o = all_distances_naive(p, t)?;
        Some(check(&o))
    } else {
        None
    };
    Ok(Measured { wall_ms, reads, violations })
}

pub fn run(a: BenchArgs) -> Result<()> {
    for &n in &a.n {
        for &m in &a.m {
            if m == 0 || m > n {
                bail!("grid point n = {n}, m = {m} needs 1 <= m <= n");
            }
            for &k in &a.k {
                if k > m {
                    bail!("grid point m = {m}, k = {k} needs k <= m");
                }
            }
        }
    }
    let mut csv = String::from("n,m,k,eps,algorithm,wall_ms,reads,violations\n");
    let mut rng = Rng::new(a.seed);
    let na = |x: Option<String>| x.unwrap_or_else(|| "NA".into());
    for &n in &a.n {
        for &m in &a.m {
            let p = random_string(m, a.sigma, &mut rng);
            let t = random_string(n, a.sigma, &mut rng);
            let verify = (n as u64).saturating_mul(m as u64) <= a.verify_limit;
            for &k in &a.k {
                for &eps in &a.eps {
                    for &algo in &a.algorithms {
                        let r = run_one(algo, &p, &t, k, eps, verify, &mut rng.fork())?;
                        csv.push_str(&format!(
                            "{n},{m},{k},{eps},{},{:.3},{},{}\n",
                            algo.name(),
                            r.wall_ms,
                            na(r.reads.map(|x| x.to_string())),
                            na(r.violations.map(|x| x.to_string()))
                        ));
                    }
                }
            }
        }
    }
    match &a.out {
        Some(path) => write_file(path, csv.as_bytes()),
        None => Ok(io::stdout().lock().write_all(csv.as_bytes())?),
    }
}
