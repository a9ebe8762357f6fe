use serde::Serialize;

use super::{check_len, FillReport, Scalar, SparseFormat, INDEX_BYTES};
use crate::error::Result;
use crate::matrix::{Triplet, TripletMatrix};

/// Parallel `(row, column, value)` arrays sorted by `(row, column)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CooArrays<T = f64> {
    num_rows: usize,
    num_cols: usize,
    rows: Vec<usize>,
    columns: Vec<usize>,
    values: Vec<T>,
}

impl<T: Scalar> CooArrays<T> {
    pub fn from_triplets(m: &TripletMatrix) -> Self {
        Self::from_entries(m.num_rows(), m.num_cols(), m.entries())
    }

    pub(crate) fn from_entries(num_rows: usize, num_cols: usize, entries: &[Triplet]) -> Self {
        Self {
            num_rows,
            num_cols,
            rows: entries.iter().map(|t| t.row).collect(),
            columns: entries.iter().map(|t| t.col).collect(),
            values: entries.iter().map(|t| T::from_f64(t.value)).collect(),
        }
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn columns(&self) -> &[usize] {
        &self.columns
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Adds `v * x[col]` into `y[row]` for every entry, in array order.
    ///
    /// Runs sequentially so each output element sees its updates in a fixed
    /// order.
    pub fn spmv_accumulate(&self, x: &[T], y: &mut [T]) -> Result<()> {
        check_len(self.num_cols, x.len())?;
        check_len(self.num_rows, y.len())?;
        for ((&r, &c), &v) in self.rows.iter().zip(&self.columns).zip(&self.values) {
            y[r] += v * x[c];
        }
        Ok(())
    }

    pub(crate) fn bytes(&self, scalar: usize) -> usize {
        self.len() * (scalar + 2 * INDEX_BYTES)
    }

    pub(crate) fn triplets(&self) -> impl Iterator<Item = Triplet> + '_ {
        (0..self.len())
            .map(|k| Triplet::new(self.rows[k], self.columns[k], self.values[k].to_f64()))
    }
}

impl<T: Scalar> SparseFormat<T> for CooArrays<T> {
    fn format_name(&self) -> &'static str {
        "coo"
    }

    fn num_rows(&self) -> usize {
        self.num_rows
    }

    fn num_cols(&self) -> usize {
        self.num_cols
    }

    fn nnz(&self) -> usize {
        self.len()
    }

    fn spmv(&self, x: &[T]) -> Result<Vec<T>> {
        let mut y = vec![T::ZERO; self.num_rows];
        self.spmv_accumulate(x, &mut y)?;
        Ok(y)
    }

    fn to_triplets(&self) -> TripletMatrix {
        TripletMatrix::from_sorted_unchecked(
            self.num_rows,
            self.num_cols,
            self.triplets().collect(),
        )
    }

    fn fill_report(&self) -> FillReport {
        FillReport::new("coo", self.len(), self.len(), |s| self.bytes(s))
    }
}
