//! Storage layouts, their SpMV kernels and artificial-zero accounting.
//!
//! Every layout is built from a canonical [`TripletMatrix`] and can be turned
//! back into one with [`SparseFormat::to_triplets`] (pad slots dropped).
//! ELLPACK and Row-grouped CSR keep their slots in slot-major order: all
//! first entries of a block of rows, then all second entries, and so on.

mod bcsr;
mod coo;
mod csr;
mod ellpack;
mod hybrid;
mod rgcsr;

use std::fmt;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use bcsr::BcsrMatrix;
pub use coo::CooArrays;
pub use csr::CsrMatrix;
pub use ellpack::{EllpackMatrix, DEFAULT_SLOT_BUDGET};
pub use hybrid::{choose_k1, HybridMatrix};
pub use rgcsr::RgcsrMatrix;

use crate::error::{Error, Result};
use crate::matrix::TripletMatrix;

/// Size of one stored index (column, pointer or row length).
pub const INDEX_BYTES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    Single,
    Double,
}

impl Precision {
    pub fn value_bytes(self) -> usize {
        match self {
            Precision::Single => 4,
            Precision::Double => 8,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Precision::Single => "single",
            Precision::Double => "double",
        }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Precision {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single" | "f32" => Ok(Precision::Single),
            "double" | "f64" => Ok(Precision::Double),
            other => Err(Error::InvalidArgument(format!(
                "unknown precision `{other}`"
            ))),
        }
    }
}

/// Element type a layout stores. Implemented for `f32` and `f64`.
pub trait Scalar:
    Copy
    + Default
    + PartialEq
    + fmt::Debug
    + Serialize
    + Add<Output = Self>
    + Mul<Output = Self>
    + AddAssign
    + Send
    + Sync
    + 'static
{
    const ZERO: Self;
    const PRECISION: Precision;

    fn from_f64(v: f64) -> Self;
    fn to_f64(self) -> f64;
}

impl Scalar for f32 {
    const ZERO: Self = 0.0;
    const PRECISION: Precision = Precision::Single;

    fn from_f64(v: f64) -> Self {
        v as f32
    }

    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Scalar for f64 {
    const ZERO: Self = 0.0;
    const PRECISION: Precision = Precision::Double;

    fn from_f64(v: f64) -> Self {
        v
    }

    fn to_f64(self) -> f64 {
        self
    }
}

/// Storage cost of one format instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FillReport {
    pub format_name: String,
    pub stored_slots: usize,
    pub nnz: usize,
    /// Pad slots holding no source entry. Always 0 for CSR and COO.
    pub artificial_zeros: usize,
    /// `100 * artificial_zeros / nnz`; 100% means as many pads as entries.
    pub fill_percent: f64,
    pub bytes_single: usize,
    pub bytes_double: usize,
}

impl FillReport {
    pub(crate) fn new(
        format_name: impl Into<String>,
        stored_slots: usize,
        nnz: usize,
        bytes: impl Fn(usize) -> usize,
    ) -> Self {
        let artificial_zeros = stored_slots - nnz;
        let fill_percent = if nnz == 0 {
            0.0
        } else {
            100.0 * artificial_zeros as f64 / nnz as f64
        };
        Self {
            format_name: format_name.into(),
            stored_slots,
            nnz,
            artificial_zeros,
            fill_percent,
            bytes_single: bytes(4),
            bytes_double: bytes(8),
        }
    }

    /// Share of stored slots that hold real entries, in percent.
    pub fn efficiency_percent(&self) -> f64 {
        if self.stored_slots == 0 {
            100.0
        } else {
            100.0 * self.nnz as f64 / self.stored_slots as f64
        }
    }

    pub fn bytes(&self, precision: Precision) -> usize {
        match precision {
            Precision::Single => self.bytes_single,
            Precision::Double => self.bytes_double,
        }
    }
}

/// Behaviour shared by every layout.
pub trait SparseFormat<T: Scalar> {
    fn format_name(&self) -> &'static str;
    fn num_rows(&self) -> usize;
    fn num_cols(&self) -> usize;
    /// Source entries held (pads excluded).
    fn nnz(&self) -> usize;
    fn spmv(&self, x: &[T]) -> Result<Vec<T>>;
    fn to_triplets(&self) -> TripletMatrix;
    fn fill_report(&self) -> FillReport;

    /// All arrays verbatim, for golden-file comparisons.
    fn to_debug_json(&self) -> String
    where
        Self: Serialize + Sized,
    {
        serde_json::to_string_pretty(self).expect("format arrays serialize")
    }
}

pub(crate) fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::DimensionMismatch { expected, actual });
    }
    Ok(())
}

/// Converts a double vector to the storage precision.
pub fn convert_vector<T: Scalar>(x: &[f64]) -> Vec<T> {
    x.iter().map(|&v| T::from_f64(v)).collect()
}
