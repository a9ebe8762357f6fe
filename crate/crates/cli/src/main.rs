//! `rgcsr` — inspect, benchmark, simulate and reorder sparse matrices.
//!
//! Matrices are Matrix Market files, or built-in sources:
//! `synth:m8`, `synth:banded:N`, `synth:random:N` (seeded by `--seed`).
//! Reports go to stdout as pretty JSON; `bench` prints CSV and writes
//! `<out>.csv` / `<out>.json` when `--out` is given.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use rgcsr::bench::{self, BenchConfig, FormatKind, InputVector};
use rgcsr::memsim::{self, KernelLayout};
use rgcsr::mm;
use rgcsr::reorder::{apply_permutation, Ordering};
use rgcsr::synth::{self, Values};
use rgcsr::{
    AccessModel, CacheConfig, PermuteMode, Precision, RgcsrMatrix, SparseFormat, TripletMatrix,
};

const DEFAULT_GROUPS: &str = "32,64,128,256";

#[derive(Parser)]
#[command(name = "rgcsr", version, about = "Row-grouped CSR toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Matrix statistics and per-format fill.
    Inspect(InspectArgs),
    /// Time SpMV per format, group size and precision.
    Bench(BenchArgs),
    /// Coalesced-traffic and texture-cache model of one kernel.
    Simulate(SimulateArgs),
    /// Write a permuted matrix and report padding before/after.
    Reorder(ReorderArgs),
}

#[derive(Args)]
struct Common {
    /// Row ordering: none, descending or file:PATH.
    #[arg(long, default_value = "none")]
    ordering: Ordering,
    /// Seed for synthetic matrices and the random input vector.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct InspectArgs {
    #[arg(required = true)]
    matrices: Vec<String>,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "csr,ellpack,coo,hybrid,bcsr,rgcsr"
    )]
    format: Vec<FormatKind>,
    #[arg(long, value_delimiter = ',', default_value = DEFAULT_GROUPS)]
    group_size: Vec<usize>,
    #[command(flatten)]
    common: Common,
    /// Also write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum XArg {
    Random,
    Ones,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(required = true)]
    matrices: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "csr,hybrid,rgcsr")]
    format: Vec<FormatKind>,
    #[arg(long, value_delimiter = ',', default_value = DEFAULT_GROUPS)]
    group_size: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "single,double")]
    precision: Vec<Precision>,
    #[arg(long, default_value_t = 20)]
    reps: usize,
    /// Input vector: seeded random, or all ones.
    #[arg(long = "x", value_enum, default_value = "random")]
    x: XArg,
    #[command(flatten)]
    common: Common,
    /// Output stem; writes STEM.csv and STEM.json.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    matrix: String,
    /// csr, ellpack or rgcsr.
    #[arg(long, default_value = "rgcsr")]
    format: KernelLayout,
    /// RgCSR group size; thread-block size for the other kernels.
    #[arg(long, default_value_t = 32)]
    group_size: usize,
    #[arg(long, default_value = "single")]
    precision: Precision,
    #[arg(long, default_value_t = 64)]
    cache_lines: usize,
    #[arg(long, default_value_t = 128)]
    line_bytes: usize,
    /// Peak bandwidth in GB/s for the roofline figure.
    #[arg(long, default_value_t = 141.0)]
    bandwidth: f64,
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReorderArgs {
    matrix: String,
    /// descending or file:PATH.
    #[arg(long)]
    ordering: Ordering,
    /// Permute columns too (P A P^T), as for symmetric orderings like AMD.
    #[arg(long)]
    symmetric: bool,
    #[arg(long, value_delimiter = ',', default_value = DEFAULT_GROUPS)]
    group_size: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Where to write the permuted Matrix Market file.
    #[arg(long)]
    out: PathBuf,
}

fn load(source: &str, seed: u64) -> Result<(String, TripletMatrix)> {
    if let Some(spec) = source.strip_prefix("synth:") {
        let parts: Vec<&str> = spec.split(':').collect();
        let size = |s: Option<&&str>| -> Result<usize> {
            s.context("synthetic size missing, e.g. synth:banded:1000")?
                .parse()
                .context("synthetic size must be an integer")
        };
        let m = match parts[0] {
            "m8" => synth::m8(),
            "banded" => synth::banded(size(parts.get(1))?, 2, 1.0, Values::Real, seed),
            "random" => {
                let n = size(parts.get(1))?;
                synth::random(n, n, (8.0 / n.max(1) as f64).min(1.0), Values::Real, seed)?
            }
            other => bail!("unknown synthetic matrix `{other}`"),
        };
        return Ok((source.to_string(), m));
    }
    let m = mm::read_matrix_market_file(source).with_context(|| format!("reading {source}"))?;
    let name = Path::new(source)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| source.to_string());
    Ok((name, m))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Writes to stdout; a closed pipe (`rgcsr ... | head`) is not an error.
fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serializes")
}

fn inspect(args: InspectArgs) -> Result<()> {
    let mut reports = Vec::new();
    for source in &args.matrices {
        let (name, m) = load(source, args.common.seed)?;
        let m = args.common.ordering.apply(&m)?;
        reports.push(bench::inspect(&name, &m, &args.format, &args.group_size)?);
    }
    let json = pretty(&reports);
    emit(&format!("{json}\n"))?;
    if let Some(out) = &args.out {
        write_text(out, &json)?;
    }
    Ok(())
}

fn bench(args: BenchArgs) -> Result<bool> {
    let config = BenchConfig {
        formats: args.format,
        group_sizes: args.group_size,
        precisions: args.precision,
        repetitions: args.reps,
        seed: args.common.seed,
        input: match args.x {
            XArg::Random => InputVector::Random,
            XArg::Ones => InputVector::Ones,
        },
        ordering: args.common.ordering,
    };
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for source in &args.matrices {
        let (name, m) = load(source, config.seed)?;
        let outcome = bench::run_bench(&name, &m, &config)?;
        records.extend(outcome.records);
        failures.extend(outcome.failures);
    }
    let csv = bench::records_to_csv(&records);
    emit(&csv)?;
    if let Some(stem) = &args.out {
        write_text(&stem.with_extension("csv"), &csv)?;
        write_text(
            &stem.with_extension("json"),
            &bench::records_to_json(&records),
        )?;
    }
    for f in &failures {
        eprintln!("error: {f}");
    }
    Ok(failures.is_empty())
}

fn simulate(args: SimulateArgs) -> Result<()> {
    let (_, m) = load(&args.matrix, args.common.seed)?;
    let m = args.common.ordering.apply(&m)?;
    let model = AccessModel::with_bandwidth(args.bandwidth);
    let cache = CacheConfig {
        line_bytes: args.line_bytes,
        num_lines: args.cache_lines,
    };
    let report = memsim::simulate(
        args.format,
        &m,
        args.group_size,
        args.precision,
        &model,
        &cache,
    )?;
    let json = pretty(&report);
    emit(&format!("{json}\n"))?;
    if let Some(out) = &args.out {
        write_text(out, &json)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct PaddingDelta {
    group_size: usize,
    before: usize,
    after: usize,
}

fn reorder(args: ReorderArgs) -> Result<()> {
    if args.ordering == Ordering::None {
        bail!("reorder needs --ordering descending or file:PATH");
    }
    let (_, m) = load(&args.matrix, args.seed)?;
    let p = args.ordering.permutation(&m)?;
    let mode = if args.symmetric {
        PermuteMode::Symmetric
    } else {
        PermuteMode::RowsOnly
    };
    let pm = apply_permutation(&m, &p, mode)?;
    write_text(&args.out, &mm::to_matrix_market_string(&pm))?;

    let pads = |m: &TripletMatrix, g| -> Result<usize> {
        Ok(RgcsrMatrix::<f64>::from_triplets(m, g)?
            .fill_report()
            .artificial_zeros)
    };
    let deltas = args
        .group_size
        .iter()
        .map(|&g| {
            Ok(PaddingDelta {
                group_size: g,
                before: pads(&m, g)?,
                after: pads(&pm, g)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    emit(&format!("{}\n", pretty(&deltas)))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Inspect(a) => inspect(a).map(|()| true),
        Command::Bench(a) => bench(a),
        Command::Simulate(a) => simulate(a).map(|()| true),
        Command::Reorder(a) => reorder(a).map(|()| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
