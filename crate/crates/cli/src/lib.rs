//! Experiment plumbing behind the `tubal` binary: one CUR run per record,
//! rank sweeps, and CSV output.

use std::io::Write;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use tubal_core::cur::{build_cur, cur_error, error_constants, MiddleVariant};
use tubal_core::samplers::{select, Method, SamplerConfig};
use tubal_core::tsvd::{truncated_tsvd, TSvdFactors};
use tubal_core::Tensor3;

pub const CSV_HEADER: [&str; 9] =
    ["method", "rank", "trial", "seed", "error", "eta_p", "eta_q", "wall_seconds", "total_seconds"];

/// One CUR approximation. `wall_seconds` covers sampling and CUR assembly;
/// `total_seconds` adds the t-SVD basis computation.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRecord {
    pub method: Method,
    pub rank: usize,
    pub trial: usize,
    pub seed: Option<u64>,
    /// Absolute Frobenius error `‖X − C*U*R‖_F`.
    pub error: f64,
    /// Infinite when the selection makes the constant undefined.
    pub eta_p: f64,
    pub eta_q: f64,
    pub wall_seconds: f64,
    pub total_seconds: f64,
}

impl ExperimentRecord {
    pub fn fields(&self) -> [String; 9] {
        [
            self.method.name().to_string(),
            self.rank.to_string(),
            self.trial.to_string(),
            self.seed.map(|s| s.to_string()).unwrap_or_default(),
            self.error.to_string(),
            self.eta_p.to_string(),
            self.eta_q.to_string(),
            format!("{:.6}", self.wall_seconds),
            format!("{:.6}", self.total_seconds),
        ]
    }
}

/// CSV sink that flushes after every row, so a sweep that fails part-way
/// leaves its completed rows behind.
pub struct RecordWriter<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> RecordWriter<W> {
    pub fn new(w: W) -> Result<Self> {
        let mut inner = csv::Writer::from_writer(w);
        inner.write_record(CSV_HEADER)?;
        inner.flush()?;
        Ok(Self { inner })
    }

    pub fn write(&mut self, record: &ExperimentRecord) -> Result<()> {
        self.inner.write_record(record.fields())?;
        self.inner.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct ApproxOptions {
    pub method: Method,
    pub rank: usize,
    /// Total index count per mode for `htdeim`.
    pub extended_rank: Option<usize>,
    pub middle: MiddleVariant,
    pub seed: u64,
}

fn check_rank(x: &Tensor3, rank: usize) -> Result<()> {
    let (n1, n2, _) = x.dims();
    if rank == 0 || rank > n1.min(n2) {
        bail!("rank {rank} must lie in 1..={} for a {n1}x{n2}x{} tensor", n1.min(n2), x.dims().2);
    }
    Ok(())
}

/// Runs the sampler and CUR assembly on precomputed factors.
pub fn approx_with_basis(
    x: &Tensor3,
    factors: &TSvdFactors,
    basis_seconds: f64,
    opts: &ApproxOptions,
    trial: usize,
) -> Result<ExperimentRecord> {
    let config =
        SamplerConfig { method: opts.method, rank: opts.rank, extended_rank: opts.extended_rank, seed: opts.seed };
    if config.sample_count() > x.dims().0.min(x.dims().1) {
        bail!("{} indices requested but the tensor is {:?}", config.sample_count(), x.dims());
    }
    let start = Instant::now();
    let (p, q) = select(&config, factors).with_context(|| format!("{} selection at rank {}", opts.method, opts.rank))?;
    let model = build_cur(x, &p, &q, opts.middle)?;
    let wall_seconds = start.elapsed().as_secs_f64();
    let error = cur_error(x, &model)?;
    let u = factors.u.leading_lateral(opts.rank)?;
    let v = factors.v.leading_lateral(opts.rank)?;
    let (eta_p, eta_q) = match error_constants(&u, &p, &v, &q) {
        Ok(c) => (c.eta_p, c.eta_q),
        Err(_) => (f64::INFINITY, f64::INFINITY),
    };
    Ok(ExperimentRecord {
        method: opts.method,
        rank: opts.rank,
        trial,
        seed: opts.method.is_randomized().then_some(opts.seed),
        error,
        eta_p,
        eta_q,
        wall_seconds,
        total_seconds: wall_seconds + basis_seconds,
    })
}

/// Computes the rank-`opts.rank` t-SVD basis, then one CUR approximation.
pub fn approx(x: &Tensor3, opts: &ApproxOptions) -> Result<ExperimentRecord> {
    check_rank(x, opts.rank)?;
    let start = Instant::now();
    let factors = truncated_tsvd(x, opts.rank)?;
    let basis_seconds = start.elapsed().as_secs_f64();
    approx_with_basis(x, &factors, basis_seconds, opts, 0)
}

#[derive(Clone, Debug)]
pub struct SweepOptions {
    pub methods: Vec<Method>,
    pub rank_min: usize,
    pub rank_max: usize,
    pub trials: usize,
    pub seed: u64,
    pub middle: MiddleVariant,
}

/// Base rank HTDEIM uses when a sweep asks for `total` indices per mode:
/// a third of the total, rounded up, mirroring the R=5, R′=15 comparison.
pub fn htdeim_base_rank(total: usize) -> usize {
    total.div_ceil(3).max(1)
}

/// One row per (rank, method, trial), streamed to `out` as it completes.
/// Deterministic methods run once per rank; randomized ones `trials` times
/// with seed `seed + trial`. For `htdeim` the rank column is the total index
/// count and the basis has rank [`htdeim_base_rank`].
pub fn sweep<W: Write>(x: &Tensor3, opts: &SweepOptions, out: &mut RecordWriter<W>) -> Result<()> {
    if opts.methods.is_empty() {
        bail!("no sampling methods given");
    }
    if opts.trials == 0 {
        bail!("trials must be at least 1");
    }
    if opts.rank_min == 0 || opts.rank_min > opts.rank_max {
        bail!("rank range {}..={} is empty or starts at 0", opts.rank_min, opts.rank_max);
    }
    check_rank(x, opts.rank_max)?;
    for rank in opts.rank_min..=opts.rank_max {
        let mut bases: Vec<(usize, TSvdFactors, f64)> = Vec::new();
        for &method in &opts.methods {
            let base = if method == Method::Htdeim { htdeim_base_rank(rank) } else { rank };
            if !bases.iter().any(|(r, _, _)| *r == base) {
                let start = Instant::now();
                let f = truncated_tsvd(x, base)?;
                bases.push((base, f, start.elapsed().as_secs_f64()));
            }
            let (_, factors, basis_seconds) = bases.iter().find(|(r, _, _)| *r == base).expect("basis computed above");
            let trials = if method.is_randomized() { opts.trials } else { 1 };
            for trial in 0..trials {
                let run = ApproxOptions {
                    method,
                    rank: base,
                    extended_rank: (method == Method::Htdeim).then_some(rank),
                    middle: opts.middle,
                    seed: opts.seed.wrapping_add(trial as u64),
                };
                let mut record = approx_with_basis(x, factors, *basis_seconds, &run, trial)?;
                record.rank = rank;
                out.write(&record)?;
            }
        }
    }
    Ok(())
}

/// Parses `AxBxC` into positive dimensions.
pub fn parse_dims(s: &str) -> Result<(usize, usize, usize)> {
    let parts: Vec<usize> = s
        .split(['x', 'X'])
        .map(|p| p.trim().parse::<usize>().with_context(|| format!("bad dimension '{p}' in '{s}'")))
        .collect::<Result<_>>()?;
    match parts[..] {
        [a, b, c] if a > 0 && b > 0 && c > 0 => Ok((a, b, c)),
        _ => bail!("dimensions must be three positive integers like 100x100x100, got '{s}'"),
    }
}
