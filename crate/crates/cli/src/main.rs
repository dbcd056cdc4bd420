//! `hamdist`: exact and approximate text-to-pattern Hamming distances.
//!
//! Exit codes: 0 on success, 2 on argument or I/O errors, 3 when the input
//! falls outside the regime an algorithm supports.

mod bench;
mod commands;
mod input;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{ApproxArgs, ExactArgs, GenArgs, PropTestArgs, StreamArgs};

#[derive(Parser)]
#[command(name = "hamdist", version, about = "Text-to-pattern Hamming distances")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact distances, reported up to a threshold.
    Exact(ExactArgs),
    /// (1 +- eps)-approximate distances, or (eps, k)-estimations with --threshold.
    Approx(ApproxArgs),
    /// One-pass estimation of a text read from stdin.
    Stream(StreamArgs),
    /// Sublinear test for exact occurrences versus delta-far alignments.
    Proptest(PropTestArgs),
    /// Writes a random pattern/text pair.
    Gen(GenArgs),
    /// Runs a grid of solvers and writes CSV timings.
    Bench(bench::BenchArgs),
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("HD_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| anyhow::anyhow!("HD_THREADS must be a positive integer, got {v:?}"))?;
        if n == 0 {
            anyhow::bail!("HD_THREADS must be a positive integer, got 0");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<hamdist_core::Error>() {
        Some(hamdist_core::Error::RegimeViolation(_)) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|_| match cli.command {
        Command::Exact(a) => commands::exact(a),
        Command::Approx(a) => commands::approx(a),
        Command::Stream(a) => commands::stream(a),
        Command::Proptest(a) => commands::proptest(a),
        Command::Gen(a) => commands::gen(a),
        Command::Bench(a) => bench::run(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        // A closed downstream pipe (`| head`) is a normal way to stop reading.
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hamdist: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain()
        .filter_map(|c| c.downcast_ref::<std::io::Error>())
        .any(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
}
