use std::io::{self, BufRead, BufWriter, Write};
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use hamdist_core::estimate::format_estimate;
use hamdist_core::gen::{generate, Plant};
use hamdist_core::generic::AllDistancesParams;
use hamdist_core::proptester::{prop_test_amplified, prop_test_decision_amplified, prop_test_run};
use hamdist_core::small_m::{solve_small_m, solve_small_m_median};
use hamdist_core::stream::{stream_offline, stream_offline_multi, MedianStream, MultiStream, StreamParams, Variant};
use hamdist_core::{solve_combined_all, solve_combined_fixed, solve_exact, EstimateRow, GenericSampler, Rng};

use crate::input::{read_queries, read_symbols, write_file};

pub fn log2_ceil(n: usize) -> usize {
    match n {
        0 | 1 => 0,
        _ => (usize::BITS - (n - 1).leading_zeros()) as usize,
    }
}

/// Confidence parameter used by `high` mode and by the streaming instances.
pub const DEFAULT_S: f64 = 16.0;

#[derive(Args)]
pub struct ExactArgs {
    #[arg(long)]
    pattern: PathBuf,
    #[arg(long)]
    text: PathBuf,
    /// Distances above this threshold are printed as `>k`.
    #[arg(short, long)]
    k: usize,
    /// Alphabet size; every input byte must be below it.
    #[arg(long)]
    sigma: Option<u32>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

pub fn exact(a: ExactArgs) -> Result<()> {
    let p = read_symbols(&a.pattern, a.sigma)?;
    let t = read_symbols(&a.text, a.sigma)?;
    let d = solve_exact(&p, &t, a.k, &mut Rng::new(a.seed))?;
    let mut out = BufWriter::new(io::stdout().lock());
    for (i, d) in d.iter().enumerate() {
        match d {
            Some(d) => writeln!(out, "{i}\t{d}")?,
            None => writeln!(out, "{i}\t>{}", a.k)?,
        }
    }
    out.flush()?;
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Confidence {
    /// One instance with confidence parameter `s`.
    Single(f64),
    /// Per-position median of `ceil(log2 n)` instances.
    High,
}

impl FromStr for Confidence {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "high" {
            return Ok(Confidence::High);
        }
        match s.strip_prefix("single:").map(str::parse::<f64>) {
            Some(Ok(v)) if v >= 2.0 => Ok(Confidence::Single(v)),
            _ => Err(format!("expected `high` or `single:S` with S >= 2, got {s:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Generic,
    SmallM,
    Combined,
}

#[derive(Args)]
pub struct ApproxArgs {
    #[arg(long)]
    pattern: PathBuf,
    #[arg(long)]
    text: PathBuf,
    /// Relative error, in (0, 1/3].
    #[arg(long)]
    epsilon: f64,
    /// Selects (eps, k)-estimation at this threshold.
    #[arg(long)]
    threshold: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// `single:S` or `high`.
    #[arg(long, default_value = "high")]
    confidence: Confidence,
    /// Defaults to `generic` with --threshold and `combined` without.
    #[arg(long, value_enum)]
    algorithm: Option<Algorithm>,
    /// Sorted positions to report, one per line; all positions by default.
    #[arg(long)]
    queries: Option<PathBuf>,
    #[arg(long)]
    sigma: Option<u32>,
}

pub fn approx(a: ApproxArgs) -> Result<()> {
    if !(a.epsilon > 0.0 && a.epsilon <= 1.0 / 3.0 + 1e-12) {
        return Err(hamdist_core::Error::InvalidEpsilon(a.epsilon).into());
    }
    let p = read_symbols(&a.pattern, a.sigma)?;
    let t = read_symbols(&a.text, a.sigma)?;
    if p.is_empty() {
        return Err(hamdist_core::Error::EmptyPattern.into());
    }
    if p.len() > t.len() {
        return Err(hamdist_core::Error::PatternLongerThanText { m: p.len(), n: t.len() }.into());
    }
    let q = match &a.queries {
        Some(path) => read_queries(path)?,
        None => (0..=t.len() - p.len()).collect(),
    };
    let mut rng = Rng::new(a.seed);
    let eps = a.epsilon;
    let reps = log2_ceil(t.len()).max(1);
    let mut out = BufWriter::new(io::stdout().lock());

    if let Some(k) = a.threshold {
        let algo = a.algorithm.unwrap_or(Algorithm::Generic);
        let rows: Vec<EstimateRow> = match (algo, a.confidence) {
            (Algorithm::Generic, Confidence::Single(s)) => GenericSampler::default().solve(&p, &t, &q, k, eps, s, &mut rng)?,
            (Algorithm::Generic, Confidence::High) => GenericSampler::default().solve_median(&p, &t, &q, k, eps, DEFAULT_S, reps, &mut rng)?,
            (Algorithm::SmallM, Confidence::Single(s)) => solve_small_m(&p, &t, &q, k, eps, s, &mut rng)?,
            (Algorithm::SmallM, Confidence::High) => solve_small_m_median(&p, &t, &q, k, eps, DEFAULT_S, reps, &mut rng)?,
            (Algorithm::Combined, Confidence::High) => solve_combined_fixed(&p, &t, &q, k, eps, &mut rng)?,
            (Algorithm::Combined, Confidence::Single(_)) => bail!("the combined solver picks its own confidence; use --confidence high"),
        };
        for r in rows {
            writeln!(out, "{}\t{}\t{}", r.position, format_estimate(r.estimate), r.class)?;
        }
    } else {
        let algo = a.algorithm.unwrap_or(Algorithm::Combined);
        let rows = match (algo, a.confidence) {
            (Algorithm::Combined, Confidence::High) => solve_combined_all(&p, &t, &q, eps, &mut rng)?,
            (Algorithm::Combined, Confidence::Single(_)) => bail!("the combined solver picks its own confidence; use --confidence high"),
            (Algorithm::Generic, c) => {
                let params = match c {
                    Confidence::Single(s) => AllDistancesParams { s, reps: Some(1), ..AllDistancesParams::default() },
                    Confidence::High => AllDistancesParams::default(),
                };
                hamdist_core::generic::solve_all_distances_with(&p, &t, &q, eps, &params, &mut rng)?
            }
            (Algorithm::SmallM, _) => bail!("the small-m sampler needs --threshold"),
        };
        for (i, e) in rows {
            writeln!(out, "{i}\t{}", format_estimate(e))?;
        }
    }
    out.flush()?;
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Primary,
    Alt,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Primary => Variant::Primary,
            VariantArg::Alt => Variant::Alternative,
        }
    }
}

#[derive(Args)]
pub struct StreamArgs {
    #[arg(long)]
    pattern: PathBuf,
    #[arg(long)]
    epsilon: f64,
    /// Threshold, or the largest threshold with --multi.
    #[arg(short, long)]
    k: usize,
    #[arg(long, value_enum, default_value = "primary")]
    variant: VariantArg,
    /// Estimate for every power of two up to k and merge.
    #[arg(long)]
    multi: bool,
    /// Independent instances per threshold; the median is reported.
    #[arg(long, default_value_t = 9)]
    reps: usize,
    /// Confidence parameter of each instance.
    #[arg(long, default_value_t = DEFAULT_S)]
    s: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Print resident words and the space budget to stderr at exit.
    #[arg(long)]
    stats: bool,
    #[arg(long)]
    sigma: Option<u32>,
    /// Read the text from this file and compute the same output offline.
    #[arg(long)]
    offline: Option<PathBuf>,
}

enum Online {
    Single(MedianStream),
    Multi(MultiStream),
}

pub fn stream(a: StreamArgs) -> Result<()> {
    let p = read_symbols(&a.pattern, a.sigma)?;
    let params = StreamParams { s: a.s, ..StreamParams::default() };
    let variant = Variant::from(a.variant);
    let mut rng = Rng::new(a.seed);
    let (eps, k) = (a.epsilon, a.k);

    if let Some(path) = &a.offline {
        let t = read_symbols(path, a.sigma)?;
        let mut out = BufWriter::new(io::stdout().lock());
        if t.len() < p.len() {
            return Ok(());
        }
        if a.multi {
            for (i, e) in stream_offline_multi(&p, &t, k, eps, variant, a.reps, &params, &mut rng)? {
                writeln!(out, "{i}\t{}", format_estimate(e))?;
            }
        } else {
            for r in stream_offline(&p, &t, k, eps, variant, a.reps, &params, &mut rng)? {
                writeln!(out, "{}\t{}\t{}", r.position, format_estimate(r.estimate), r.class)?;
            }
        }
        out.flush()?;
        return Ok(());
    }

    let mut st = if a.multi {
        Online::Multi(MultiStream::new(&p, k, eps, variant, a.reps, &params, &mut rng)?)
    } else {
        Online::Single(MedianStream::new(&p, k, eps, variant, a.reps, &params, &mut rng)?)
    };
    let sigma = a.sigma;
    let stdin = io::stdin();
    let mut input = stdin.lock();
    let mut out = io::stdout().lock();
    let mut offset = 0usize;
    loop {
        let buf = input.fill_buf().context("reading stdin")?;
        if buf.is_empty() {
            break;
        }
        let len = buf.len();
        for &c in buf {
            if let Some(s) = sigma {
                if c as u32 >= s {
                    return Err(hamdist_core::Error::SymbolOutOfRange { symbol: c as u32, offset, sigma: s }.into());
                }
            }
            offset += 1;
            let line = match &mut st {
                Online::Single(s) => s.push(c).map(|r| format!("{}\t{}\t{}\n", r.position, format_estimate(r.estimate), r.class)),
                Online::Multi(s) => s.push(c).map(|(i, e)| format!("{i}\t{}\n", format_estimate(e))),
            };
            if let Some(line) = line {
                // Flushed before the next byte is looked at.
                out.write_all(line.as_bytes())?;
                out.flush()?;
            }
        }
        input.consume(len);
    }
    if a.stats {
        let (words, budget) = match &st {
            Online::Single(s) => (s.resident_words(), s.space_budget()),
            Online::Multi(s) => (s.resident_words(), s.space_budget()),
        };
        eprintln!("resident_words\t{words}\nbudget\t{budget}");
    }
    Ok(())
}

#[derive(Args)]
pub struct PropTestArgs {
    #[arg(long)]
    pattern: PathBuf,
    #[arg(long)]
    text: PathBuf,
    /// Reported positions have distance at most delta m.
    #[arg(long)]
    delta: f64,
    /// Runs combined by majority vote.
    #[arg(long, default_value_t = 1)]
    amplify: usize,
    /// Print `true` or `false` instead of positions.
    #[arg(long)]
    decision: bool,
    /// Step budget for --decision; defaults to four times the expected steps.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Print character reads and steps of a single run to stderr.
    #[arg(long)]
    stats: bool,
    #[arg(long)]
    sigma: Option<u32>,
}

pub fn proptest(a: PropTestArgs) -> Result<()> {
    let p = read_symbols(&a.pattern, a.sigma)?;
    let t = read_symbols(&a.text, a.sigma)?;
    let mut rng = Rng::new(a.seed);
    let mut out = BufWriter::new(io::stdout().lock());
    if a.decision {
        let yes = prop_test_decision_amplified(&p, &t, a.delta, a.budget, a.amplify, &mut rng)?;
        writeln!(out, "{yes}")?;
    } else if a.amplify > 1 {
        for i in prop_test_amplified(&p, &t, a.delta, a.amplify, &mut rng)? {
            writeln!(out, "{i}")?;
        }
    } else {
        let run = prop_test_run(&p, &t, a.delta, None, &mut rng)?;
        for i in &run.positions {
            writeln!(out, "{i}")?;
        }
        if a.stats {
            eprintln!("reads\t{}\nsteps\t{}", run.reads, run.steps);
        }
    }
    out.flush()?;
    Ok(())
}

#[derive(Args)]
pub struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 4)]
    sigma: u32,
    /// none, exact, periodic:RHO:NOISE or far:DELTA.
    #[arg(long, default_value = "none")]
    plant: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    pattern_out: PathBuf,
    #[arg(long)]
    text_out: PathBuf,
}

pub fn gen(a: GenArgs) -> Result<()> {
    let plant: Plant = a.plant.parse()?;
    let inst = generate(a.n, a.m, a.sigma, plant, &mut Rng::new(a.seed))?;
    write_file(&a.pattern_out, &inst.pattern)?;
    write_file(&a.text_out, &inst.text)?;
    if let Some(at) = inst.planted_at {
        println!("planted\t{at}");
    }
    Ok(())
}
