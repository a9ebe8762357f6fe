//! Wall-clock SpMV benchmark with an oracle checksum gate.
//!
//! For each (format, group size, precision) the matrix is converted, one
//! SpMV is checked against [`TripletMatrix::spmv_reference`], and only then
//! are `repetitions` timed runs made. The median run time is reported.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formats::{
    convert_vector, BcsrMatrix, CooArrays, CsrMatrix, EllpackMatrix, FillReport, HybridMatrix,
    Precision, RgcsrMatrix, Scalar, SparseFormat,
};
use crate::matrix::{MatrixStats, TripletMatrix};
use crate::memsim::measured_gflops;
use crate::reorder::Ordering;
use crate::synth;

/// Relative checksum tolerance for double-precision kernels.
pub const DOUBLE_CHECKSUM_RTOL: f64 = 1e-10;

/// Shortest time attributed to one run; below this the clock cannot resolve.
pub const TIMER_FLOOR: Duration = Duration::from_nanos(1);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FormatKind {
    Csr,
    Ellpack,
    Coo,
    Hybrid,
    Bcsr,
    Rgcsr,
}

impl FormatKind {
    pub const ALL: [FormatKind; 6] = [
        FormatKind::Csr,
        FormatKind::Ellpack,
        FormatKind::Coo,
        FormatKind::Hybrid,
        FormatKind::Bcsr,
        FormatKind::Rgcsr,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FormatKind::Csr => "csr",
            FormatKind::Ellpack => "ellpack",
            FormatKind::Coo => "coo",
            FormatKind::Hybrid => "hybrid",
            FormatKind::Bcsr => "bcsr",
            FormatKind::Rgcsr => "rgcsr",
        }
    }
}

impl fmt::Display for FormatKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FormatKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FormatKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .or(match s {
                "ell" => Some(FormatKind::Ellpack),
                "hyb" => Some(FormatKind::Hybrid),
                _ => None,
            })
            .ok_or_else(|| Error::UnsupportedFormat(s.to_string()))
    }
}

/// Builds `kind` from `m` and returns it behind the common trait.
pub fn build_format<T: Scalar>(
    kind: FormatKind,
    m: &TripletMatrix,
    group_size: usize,
) -> Result<Box<dyn SparseFormat<T>>> {
    Ok(match kind {
        FormatKind::Csr => Box::new(CsrMatrix::<T>::from_triplets(m)),
        FormatKind::Ellpack => Box::new(EllpackMatrix::<T>::from_triplets(m)?),
        FormatKind::Coo => Box::new(CooArrays::<T>::from_triplets(m)),
        FormatKind::Hybrid => Box::new(HybridMatrix::<T>::from_triplets(m, None)),
        FormatKind::Bcsr => Box::new(BcsrMatrix::<T>::from_triplets(m)),
        FormatKind::Rgcsr => Box::new(RgcsrMatrix::<T>::from_triplets(m, group_size)?),
    })
}

/// Fill report of `kind` built from `m` (structure only, so precision is moot).
pub fn fill_report(kind: FormatKind, m: &TripletMatrix, group_size: usize) -> Result<FillReport> {
    Ok(build_format::<f64>(kind, m, group_size)?.fill_report())
}

/// Matrix statistics plus one fill report per requested layout.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InspectReport {
    pub matrix_name: String,
    pub stats: MatrixStats,
    pub fills: Vec<InspectFill>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InspectFill {
    pub group_size: Option<usize>,
    #[serde(flatten)]
    pub fill: FillReport,
}

/// Stats of `m` and the fill of every format; RgCSR once per group size.
pub fn inspect(
    name: &str,
    m: &TripletMatrix,
    formats: &[FormatKind],
    group_sizes: &[usize],
) -> Result<InspectReport> {
    let mut fills = Vec::new();
    for &kind in formats {
        if kind == FormatKind::Rgcsr {
            for &g in group_sizes {
                fills.push(InspectFill {
                    group_size: Some(g),
                    fill: fill_report(kind, m, g)?,
                });
            }
        } else {
            fills.push(InspectFill {
                group_size: None,
                fill: fill_report(kind, m, 1)?,
            });
        }
    }
    Ok(InspectReport {
        matrix_name: name.to_string(),
        stats: m.stats()?,
        fills,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InputVector {
    /// Seeded values in `[-1, 1)`.
    #[default]
    Random,
    Ones,
}

/// One timed configuration. CSV columns follow the field order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub matrix_name: String,
    pub format_name: String,
    /// Only meaningful for RgCSR.
    pub group_size: Option<usize>,
    pub precision: Precision,
    pub nnz: usize,
    pub repetitions: usize,
    pub median_seconds: f64,
    pub gflops: f64,
    pub fill_percent: f64,
    pub artificial_zeros: usize,
    pub bytes: usize,
    /// Sum of the output vector.
    pub checksum: f64,
}

pub const CSV_COLUMNS: [&str; 12] = [
    "matrix_name",
    "format_name",
    "group_size",
    "precision",
    "nnz",
    "repetitions",
    "median_seconds",
    "gflops",
    "fill_percent",
    "artificial_zeros",
    "bytes",
    "checksum",
];

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub formats: Vec<FormatKind>,
    pub group_sizes: Vec<usize>,
    pub precisions: Vec<Precision>,
    pub repetitions: usize,
    pub seed: u64,
    pub input: InputVector,
    /// Applied to the matrix before any format is built.
    pub ordering: Ordering,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            formats: vec![FormatKind::Csr, FormatKind::Hybrid, FormatKind::Rgcsr],
            group_sizes: vec![32, 64, 128, 256],
            precisions: vec![Precision::Single, Precision::Double],
            repetitions: 20,
            seed: 0,
            input: InputVector::Random,
            ordering: Ordering::None,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.formats.is_empty() {
            return Err(Error::InvalidArgument(
                "at least one format is required".into(),
            ));
        }
        if self.group_sizes.is_empty() || self.group_sizes.contains(&0) {
            return Err(Error::InvalidArgument(
                "group sizes must be at least 1".into(),
            ));
        }
        if self.precisions.is_empty() {
            return Err(Error::InvalidArgument(
                "at least one precision is required".into(),
            ));
        }
        if self.repetitions == 0 {
            return Err(Error::InvalidArgument(
                "repetitions must be at least 1".into(),
            ));
        }
        Ok(())
    }

    pub fn input_vector(&self, len: usize) -> Vec<f64> {
        match self.input {
            InputVector::Ones => vec![1.0; len],
            InputVector::Random => synth::random_vector(len, self.seed),
        }
    }
}

/// Outcome of a benchmark run: the records that passed the checksum gate and
/// the configurations that failed it.
#[derive(Debug, Default)]
pub struct BenchOutcome {
    pub records: Vec<BenchRecord>,
    pub failures: Vec<Error>,
}

/// Checksum the kernel must reproduce, and the allowed deviation.
///
/// Double kernels must agree with the double oracle to [`DOUBLE_CHECKSUM_RTOL`]
/// relative to `sum |v * x|`. Single kernels are compared with the oracle run
/// on single-rounded inputs, within a forward-error bound of
/// `(longest row + 1) * eps_f32 * sum |v * x|`.
pub fn oracle_checksum(m: &TripletMatrix, x: &[f64], precision: Precision) -> Result<(f64, f64)> {
    let (m_eff, x_eff) = match precision {
        Precision::Double => (m.clone(), x.to_vec()),
        Precision::Single => {
            let rounded = m
                .entries()
                .iter()
                .map(|t| (t.row, t.col, t.value as f32 as f64));
            let m32 = TripletMatrix::canonicalize(rounded, m.num_rows(), m.num_cols())?;
            (m32, x.iter().map(|&v| v as f32 as f64).collect())
        }
    };
    let y = m_eff.spmv_reference(&x_eff)?;
    let checksum: f64 = y.iter().sum();
    let magnitude: f64 = m_eff
        .entries()
        .iter()
        .map(|t| (t.value * x_eff[t.col]).abs())
        .sum();
    let tolerance = match precision {
        Precision::Double => DOUBLE_CHECKSUM_RTOL * magnitude,
        Precision::Single => {
            let longest = m.row_lengths().into_iter().max().unwrap_or(0);
            (longest + 1) as f64 * f32::EPSILON as f64 * magnitude
        }
    };
    Ok((checksum, tolerance))
}

fn median(mut samples: Vec<Duration>) -> Duration {
    samples.sort_unstable();
    let n = samples.len();
    if n % 2 == 1 {
        samples[n / 2]
    } else {
        (samples[n / 2 - 1] + samples[n / 2]) / 2
    }
}

fn run_one<T: Scalar>(
    name: &str,
    m: &TripletMatrix,
    kind: FormatKind,
    group_size: Option<usize>,
    x: &[f64],
    repetitions: usize,
) -> Result<BenchRecord> {
    let format = build_format::<T>(kind, m, group_size.unwrap_or(1))?;
    let fill = format.fill_report();
    let xt: Vec<T> = convert_vector(x);

    let y = format.spmv(&xt)?;
    let checksum: f64 = y.iter().map(|v| v.to_f64()).sum();
    let (expected, tolerance) = oracle_checksum(m, x, T::PRECISION)?;
    // written so that a NaN checksum fails the gate
    let within = (checksum - expected).abs() <= tolerance;
    if !within {
        let group = group_size.map(|g| format!(" g={g}")).unwrap_or_default();
        return Err(Error::ChecksumMismatch {
            context: format!("{name} {kind}{group} {}", T::PRECISION),
            actual: checksum,
            expected,
            tolerance,
        });
    }

    let mut samples = Vec::with_capacity(repetitions);
    for _ in 0..repetitions {
        let start = Instant::now();
        let y = format.spmv(&xt)?;
        samples.push(start.elapsed().max(TIMER_FLOOR));
        std::hint::black_box(y);
    }
    let median_seconds = median(samples).as_secs_f64();

    Ok(BenchRecord {
        matrix_name: name.to_string(),
        format_name: kind.as_str().to_string(),
        group_size,
        precision: T::PRECISION,
        nnz: m.nnz(),
        repetitions,
        median_seconds,
        gflops: measured_gflops(m.nnz(), median_seconds)?,
        fill_percent: fill.fill_percent,
        artificial_zeros: fill.artificial_zeros,
        bytes: fill.bytes(T::PRECISION),
        checksum,
    })
}

/// Benchmarks every configured combination on `m`.
///
/// A checksum mismatch drops that record and is reported in
/// [`BenchOutcome::failures`]; other combinations still run.
pub fn run_bench(name: &str, m: &TripletMatrix, config: &BenchConfig) -> Result<BenchOutcome> {
    config.validate()?;
    let ordered = config.ordering.apply(m)?;
    let m = &ordered;
    let x = config.input_vector(m.num_cols());
    let mut outcome = BenchOutcome::default();
    for &kind in &config.formats {
        let groups: Vec<Option<usize>> = if kind == FormatKind::Rgcsr {
            config.group_sizes.iter().map(|&g| Some(g)).collect()
        } else {
            vec![None]
        };
        for group in groups {
            for &precision in &config.precisions {
                let result = match precision {
                    Precision::Single => {
                        run_one::<f32>(name, m, kind, group, &x, config.repetitions)
                    }
                    Precision::Double => {
                        run_one::<f64>(name, m, kind, group, &x, config.repetitions)
                    }
                };
                match result {
                    Ok(r) => outcome.records.push(r),
                    Err(e @ Error::ChecksumMismatch { .. }) => outcome.failures.push(e),
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(outcome)
}

pub fn records_to_csv(records: &[BenchRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    if records.is_empty() {
        w.write_record(CSV_COLUMNS).expect("in-memory write");
    }
    for r in records {
        w.serialize(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

pub fn records_to_json(records: &[BenchRecord]) -> String {
    serde_json::to_string_pretty(records).expect("records serialize")
}
