use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use tubal_cli::{approx, parse_dims, sweep, ApproxOptions, RecordWriter, SweepOptions};
use tubal_core::cur::{build_cur, verify_bound, MiddleVariant};
use tubal_core::datasets::{gen_function_tensor, gen_synthetic, FunctionKind, FunctionSpec};
use tubal_core::io::{read_tensor, write_tensor};
use tubal_core::samplers::{tdeim, Method};
use tubal_core::tsvd::truncated_tsvd;

/// Tubal CUR experiments on T3D1 tensor files.
///
/// Set TUBAL_NUM_THREADS to cap the worker pool.
#[derive(Parser)]
#[command(name = "tubal", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated tensor to a T3D1 file.
    #[command(subcommand)]
    Generate(Generate),
    /// One CUR approximation; prints a CSV row.
    Approx(ApproxArgs),
    /// Error table over a range of ranks and methods.
    Sweep(SweepArgs),
    /// Check the CUR error bound for the TDEIM selection.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum Generate {
    /// X(i,j,k) = (iᵖ + jᵖ + kᵖ)^(−1/p).
    Synthetic {
        #[arg(long)]
        p: f64,
        /// Shape as AxBxC.
        #[arg(long, value_parser = parse_dims)]
        dims: (usize, usize, usize),
        #[arg(long)]
        out: PathBuf,
    },
    /// A test function on a 1000×1000 grid folded into 100×100×100.
    Function {
        #[arg(long, value_parser = parse_function)]
        name: FunctionKind,
        /// Booth with an unsquared second term.
        #[arg(long)]
        booth_literal: bool,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct ApproxArgs {
    #[arg(long)]
    input: PathBuf,
    /// tdeim, htdeim, top_leverage, leverage_sampling or uniform.
    #[arg(long, value_parser = parse_method)]
    method: Method,
    #[arg(long)]
    rank: usize,
    /// Total indices per mode for htdeim.
    #[arg(long)]
    extended_rank: Option<usize>,
    /// optimal or intersection.
    #[arg(long, default_value = "optimal", value_parser = parse_middle)]
    middle: MiddleVariant,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated method names.
    #[arg(long, value_delimiter = ',', num_args = 1.., value_parser = parse_method)]
    methods: Vec<Method>,
    #[arg(long)]
    rank_min: usize,
    #[arg(long)]
    rank_max: usize,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "optimal", value_parser = parse_middle)]
    middle: MiddleVariant,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    rank: usize,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: tubal_core::Error| e.to_string())
}

fn parse_middle(s: &str) -> Result<MiddleVariant, String> {
    s.parse().map_err(|e: tubal_core::Error| e.to_string())
}

fn parse_function(s: &str) -> Result<FunctionKind, String> {
    s.parse().map_err(|e: tubal_core::Error| e.to_string())
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("TUBAL_NUM_THREADS") {
        let n: usize = v.trim().parse().with_context(|| format!("TUBAL_NUM_THREADS must be a positive integer, got '{v}'"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Generate(Generate::Synthetic { p, dims, out }) => {
            write_tensor(&out, &gen_synthetic(p, dims)?).with_context(|| format!("writing {}", out.display()))?;
        }
        Command::Generate(Generate::Function { name, booth_literal, out }) => {
            let spec = FunctionSpec { booth_literal, ..FunctionSpec::new(name) };
            write_tensor(&out, &gen_function_tensor(&spec)?).with_context(|| format!("writing {}", out.display()))?;
        }
        Command::Approx(a) => {
            let x = read_tensor(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
            let opts = ApproxOptions {
                method: a.method,
                rank: a.rank,
                extended_rank: a.extended_rank,
                middle: a.middle,
                seed: a.seed,
            };
            let record = approx(&x, &opts)?;
            let mut w = RecordWriter::new(io::stdout().lock())?;
            w.write(&record)?;
        }
        Command::Sweep(s) => {
            let x = read_tensor(&s.input).with_context(|| format!("reading {}", s.input.display()))?;
            let opts = SweepOptions {
                methods: s.methods,
                rank_min: s.rank_min,
                rank_max: s.rank_max,
                trials: s.trials,
                seed: s.seed,
                middle: s.middle,
            };
            let mut w = RecordWriter::new(io::stdout().lock())?;
            sweep(&x, &opts, &mut w)?;
        }
        Command::Verify(v) => {
            let x = read_tensor(&v.input).with_context(|| format!("reading {}", v.input.display()))?;
            let (n1, n2, _) = x.dims();
            anyhow::ensure!(v.rank >= 1 && v.rank <= n1.min(n2), "rank {} must lie in 1..={}", v.rank, n1.min(n2));
            let factors = truncated_tsvd(&x, v.rank)?;
            let p = tdeim(&factors.u)?;
            let q = tdeim(&factors.v)?;
            let model = build_cur(&x, &p, &q, MiddleVariant::Optimal)?;
            let report = verify_bound(&x, &factors, &model)?;
            println!("rank {}", report.rank);
            println!("lhs {:e}", report.lhs);
            println!("rhs {:e}", report.rhs);
            println!("eta_p {:e}", report.constants.eta_p);
            println!("eta_q {:e}", report.constants.eta_q);
            println!("tail {:e}", report.tail);
            println!("projector_lhs {:e}", report.projector_lhs);
            println!("projector_rhs {:e}", report.projector_rhs);
            println!("{}", if report.holds() { "pass" } else { "fail" });
            if !report.holds() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|()| run(cli)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
