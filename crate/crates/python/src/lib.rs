//! Python bindings: `import rgcsr_py`.
//!
//! Matrices and formats are classes; reports come back as plain dicts and
//! lists (built through `json.loads`, so their keys match the CLI's JSON).

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyModule;
use serde::Serialize;

use rgcsr::bench::{self, BenchConfig, FormatKind, InputVector};
use rgcsr::memsim::{self, KernelLayout};
use rgcsr::reorder::{apply_permutation, descending_row_permutation, Ordering};
use rgcsr::{
    AccessModel, BcsrMatrix, CacheConfig, CooArrays, CsrMatrix, EllpackMatrix, HybridMatrix,
    Permutation, PermuteMode, Precision, RgcsrMatrix, SparseFormat, TripletMatrix,
};

fn py_err(e: rgcsr::Error) -> PyErr {
    match e {
        rgcsr::Error::Io(io) => PyOSError::new_err(io.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn parse<T: std::str::FromStr<Err = rgcsr::Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(py_err)
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// Canonical sparse matrix: sorted, duplicate-free triplets.
#[pyclass(module = "rgcsr_py", frozen)]
struct Matrix {
    inner: TripletMatrix,
}

#[pymethods]
impl Matrix {
    /// Builds from parallel `rows`, `cols`, `values` lists (0-based);
    /// duplicates are summed.
    #[new]
    fn new(
        num_rows: usize,
        num_cols: usize,
        rows: Vec<usize>,
        cols: Vec<usize>,
        values: Vec<f64>,
    ) -> PyResult<Self> {
        if rows.len() != cols.len() || rows.len() != values.len() {
            return Err(PyValueError::new_err(
                "rows, cols and values differ in length",
            ));
        }
        let raw = rows
            .into_iter()
            .zip(cols)
            .zip(values)
            .map(|((r, c), v)| (r, c, v));
        Ok(Self {
            inner: TripletMatrix::canonicalize(raw, num_rows, num_cols).map_err(py_err)?,
        })
    }

    #[staticmethod]
    fn read_matrix_market(path: &str) -> PyResult<Self> {
        Ok(Self {
            inner: rgcsr::mm::read_matrix_market_file(path).map_err(py_err)?,
        })
    }

    #[staticmethod]
    fn parse_matrix_market(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: rgcsr::mm::parse_matrix_market_str(text).map_err(py_err)?,
        })
    }

    /// The 8x8, 13-entry example matrix.
    #[staticmethod]
    fn example() -> Self {
        Self {
            inner: rgcsr::synth::m8(),
        }
    }

    #[staticmethod]
    #[pyo3(signature = (n, half_bandwidth=2, extra_per_row=1.0, seed=0))]
    fn banded(n: usize, half_bandwidth: usize, extra_per_row: f64, seed: u64) -> Self {
        Self {
            inner: rgcsr::synth::banded(
                n,
                half_bandwidth,
                extra_per_row,
                rgcsr::synth::Values::Real,
                seed,
            ),
        }
    }

    #[getter]
    fn num_rows(&self) -> usize {
        self.inner.num_rows()
    }

    #[getter]
    fn num_cols(&self) -> usize {
        self.inner.num_cols()
    }

    #[getter]
    fn nnz(&self) -> usize {
        self.inner.nnz()
    }

    fn triplets(&self) -> Vec<(usize, usize, f64)> {
        self.inner
            .entries()
            .iter()
            .map(|t| (t.row, t.col, t.value))
            .collect()
    }

    fn row_lengths(&self) -> Vec<usize> {
        self.inner.row_lengths()
    }

    fn stats<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.stats().map_err(py_err)?)
    }

    fn spmv_reference(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        self.inner.spmv_reference(&x).map_err(py_err)
    }

    fn to_matrix_market(&self) -> String {
        rgcsr::mm::to_matrix_market_string(&self.inner)
    }

    /// Row order by decreasing length, ties by original index.
    fn descending_permutation(&self) -> Vec<usize> {
        descending_row_permutation(&self.inner).as_slice().to_vec()
    }

    /// New row `i` is old row `order[i]`; `symmetric` also permutes columns.
    #[pyo3(signature = (order, symmetric=false))]
    fn permute(&self, order: Vec<usize>, symmetric: bool) -> PyResult<Self> {
        let p = Permutation::new(order).map_err(py_err)?;
        let mode = if symmetric {
            PermuteMode::Symmetric
        } else {
            PermuteMode::RowsOnly
        };
        Ok(Self {
            inner: apply_permutation(&self.inner, &p, mode).map_err(py_err)?,
        })
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "Matrix({}x{}, nnz={})",
            self.inner.num_rows(),
            self.inner.num_cols(),
            self.inner.nnz()
        )
    }
}

enum AnyFormat {
    Csr(CsrMatrix),
    Ellpack(EllpackMatrix),
    Coo(CooArrays),
    Hybrid(HybridMatrix),
    Bcsr(BcsrMatrix),
    Rgcsr(RgcsrMatrix),
}

impl AnyFormat {
    fn as_dyn(&self) -> &dyn SparseFormat<f64> {
        match self {
            AnyFormat::Csr(a) => a,
            AnyFormat::Ellpack(a) => a,
            AnyFormat::Coo(a) => a,
            AnyFormat::Hybrid(a) => a,
            AnyFormat::Bcsr(a) => a,
            AnyFormat::Rgcsr(a) => a,
        }
    }

    fn debug_json(&self) -> String {
        match self {
            AnyFormat::Csr(a) => a.to_debug_json(),
            AnyFormat::Ellpack(a) => a.to_debug_json(),
            AnyFormat::Coo(a) => a.to_debug_json(),
            AnyFormat::Hybrid(a) => a.to_debug_json(),
            AnyFormat::Bcsr(a) => a.to_debug_json(),
            AnyFormat::Rgcsr(a) => a.to_debug_json(),
        }
    }
}

/// A matrix converted to one storage layout (double precision).
#[pyclass(module = "rgcsr_py", frozen)]
struct Format {
    inner: AnyFormat,
}

#[pymethods]
impl Format {
    /// `kind` is one of csr, ellpack, coo, hybrid, bcsr, rgcsr. `group_size`
    /// applies to rgcsr, `k1` to hybrid (chosen automatically when omitted).
    #[new]
    #[pyo3(signature = (kind, matrix, group_size=32, k1=None))]
    fn new(kind: &str, matrix: &Matrix, group_size: usize, k1: Option<usize>) -> PyResult<Self> {
        let m = &matrix.inner;
        let inner = match parse::<FormatKind>(kind)? {
            FormatKind::Csr => AnyFormat::Csr(CsrMatrix::from_triplets(m)),
            FormatKind::Ellpack => {
                AnyFormat::Ellpack(EllpackMatrix::from_triplets(m).map_err(py_err)?)
            }
            FormatKind::Coo => AnyFormat::Coo(CooArrays::from_triplets(m)),
            FormatKind::Hybrid => AnyFormat::Hybrid(HybridMatrix::from_triplets(m, k1)),
            FormatKind::Bcsr => AnyFormat::Bcsr(BcsrMatrix::from_triplets(m)),
            FormatKind::Rgcsr => {
                AnyFormat::Rgcsr(RgcsrMatrix::from_triplets(m, group_size).map_err(py_err)?)
            }
        };
        Ok(Self { inner })
    }

    #[getter]
    fn name(&self) -> &'static str {
        self.inner.as_dyn().format_name()
    }

    #[getter]
    fn nnz(&self) -> usize {
        self.inner.as_dyn().nnz()
    }

    fn spmv(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        self.inner.as_dyn().spmv(&x).map_err(py_err)
    }

    fn fill_report<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.as_dyn().fill_report())
    }

    fn to_matrix(&self) -> Matrix {
        Matrix {
            inner: self.inner.as_dyn().to_triplets(),
        }
    }

    /// Storage arrays verbatim.
    fn arrays<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        py.import("json")?
            .call_method1("loads", (self.inner.debug_json(),))
    }

    fn __repr__(&self) -> String {
        let f = self.inner.as_dyn();
        format!(
            "Format({}, {}x{}, nnz={})",
            f.format_name(),
            f.num_rows(),
            f.num_cols(),
            f.nnz()
        )
    }
}

#[pyfunction]
fn choose_k1(row_lengths: Vec<usize>) -> usize {
    rgcsr::formats::choose_k1(&row_lengths)
}

/// Distinct 128-byte segments touched by one half-warp request.
#[pyfunction]
#[pyo3(signature = (addresses, segment_bytes=128))]
fn count_segment_transactions(addresses: Vec<u64>, segment_bytes: u64) -> PyResult<usize> {
    let model = AccessModel {
        segment_bytes,
        ..AccessModel::default()
    };
    model.validate().map_err(py_err)?;
    Ok(memsim::count_segment_transactions(&addresses, &model))
}

#[pyfunction]
#[pyo3(signature = (trace, element_bytes, line_bytes=128, num_lines=64))]
fn simulate_texture_cache<'py>(
    py: Python<'py>,
    trace: Vec<usize>,
    element_bytes: usize,
    line_bytes: usize,
    num_lines: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = CacheConfig {
        line_bytes,
        num_lines,
    };
    to_py(
        py,
        &memsim::simulate_texture_cache(&trace, &cfg, element_bytes).map_err(py_err)?,
    )
}

#[pyfunction]
#[pyo3(signature = (precision, cached_x, bandwidth_gb_s=141.0))]
fn peak_performance<'py>(
    py: Python<'py>,
    precision: &str,
    cached_x: bool,
    bandwidth_gb_s: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let model = AccessModel::with_bandwidth(bandwidth_gb_s);
    to_py(
        py,
        &memsim::peak_performance(&model, parse(precision)?, cached_x),
    )
}

#[pyfunction]
fn measured_gflops(nnz: usize, seconds: f64) -> PyResult<f64> {
    memsim::measured_gflops(nnz, seconds).map_err(py_err)
}

/// Traffic/cache/peak report of the csr, ellpack or rgcsr kernel.
#[pyfunction]
#[pyo3(signature = (kind, matrix, group_size=32, precision="single", cache_lines=64, line_bytes=128, bandwidth_gb_s=141.0))]
#[allow(clippy::too_many_arguments)]
fn simulate<'py>(
    py: Python<'py>,
    kind: &str,
    matrix: &Matrix,
    group_size: usize,
    precision: &str,
    cache_lines: usize,
    line_bytes: usize,
    bandwidth_gb_s: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let report = memsim::simulate(
        parse::<KernelLayout>(kind)?,
        &matrix.inner,
        group_size,
        parse(precision)?,
        &AccessModel::with_bandwidth(bandwidth_gb_s),
        &CacheConfig {
            line_bytes,
            num_lines: cache_lines,
        },
    )
    .map_err(py_err)?;
    to_py(py, &report)
}

fn kinds(names: Vec<String>) -> PyResult<Vec<FormatKind>> {
    names.iter().map(|n| parse(n)).collect()
}

#[pyfunction]
#[pyo3(signature = (matrix, formats=None, group_sizes=None, name="matrix"))]
fn inspect<'py>(
    py: Python<'py>,
    matrix: &Matrix,
    formats: Option<Vec<String>>,
    group_sizes: Option<Vec<usize>>,
    name: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let formats = match formats {
        Some(f) => kinds(f)?,
        None => FormatKind::ALL.to_vec(),
    };
    let groups = group_sizes.unwrap_or_else(|| BenchConfig::default().group_sizes);
    to_py(
        py,
        &bench::inspect(name, &matrix.inner, &formats, &groups).map_err(py_err)?,
    )
}

/// Timed SpMV records; raises if any kernel fails its checksum.
#[pyfunction]
#[pyo3(signature = (matrix, formats=None, group_sizes=None, precisions=None, repetitions=20, seed=0, x_ones=false, ordering="none", name="matrix"))]
#[allow(clippy::too_many_arguments)]
fn bench_spmv<'py>(
    py: Python<'py>,
    matrix: &Matrix,
    formats: Option<Vec<String>>,
    group_sizes: Option<Vec<usize>>,
    precisions: Option<Vec<String>>,
    repetitions: usize,
    seed: u64,
    x_ones: bool,
    ordering: &str,
    name: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let defaults = BenchConfig::default();
    let config = BenchConfig {
        formats: formats.map(kinds).transpose()?.unwrap_or(defaults.formats),
        group_sizes: group_sizes.unwrap_or(defaults.group_sizes),
        precisions: match precisions {
            Some(p) => p
                .iter()
                .map(|s| parse::<Precision>(s))
                .collect::<PyResult<_>>()?,
            None => defaults.precisions,
        },
        repetitions,
        seed,
        input: if x_ones {
            InputVector::Ones
        } else {
            InputVector::Random
        },
        ordering: parse::<Ordering>(ordering)?,
    };
    let outcome = bench::run_bench(name, &matrix.inner, &config).map_err(py_err)?;
    if let Some(e) = outcome.failures.into_iter().next() {
        return Err(py_err(e));
    }
    to_py(py, &outcome.records)
}

#[pymodule]
pub fn rgcsr_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Matrix>()?;
    m.add_class::<Format>()?;
    m.add_function(wrap_pyfunction!(choose_k1, m)?)?;
    m.add_function(wrap_pyfunction!(count_segment_transactions, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_texture_cache, m)?)?;
    m.add_function(wrap_pyfunction!(peak_performance, m)?)?;
    m.add_function(wrap_pyfunction!(measured_gflops, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(inspect, m)?)?;
    m.add_function(wrap_pyfunction!(bench_spmv, m)?)?;
    Ok(())
}
