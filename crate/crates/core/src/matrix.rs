//! Canonical coordinate representation and the reference SpMV.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Triplet {
    pub row: usize,
    pub col: usize,
    pub value: f64,
}

impl Triplet {
    pub fn new(row: usize, col: usize, value: f64) -> Self {
        Self { row, col, value }
    }
}

impl From<(usize, usize, f64)> for Triplet {
    fn from((row, col, value): (usize, usize, f64)) -> Self {
        Self { row, col, value }
    }
}

/// Sparse matrix as `(row, col, value)` entries, sorted by `(row, col)` with
/// no duplicates. Every storage format is converted from this form.
///
/// Explicitly stored zeros are kept and count toward `nnz`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TripletMatrix {
    num_rows: usize,
    num_cols: usize,
    entries: Vec<Triplet>,
}

/// Row-length statistics of a matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatrixStats {
    pub num_rows: usize,
    pub num_cols: usize,
    pub nnz: usize,
    pub row_len_max: usize,
    pub row_len_mean: f64,
    pub row_len_min: usize,
    /// `nnz / (rows * cols) * 100`
    pub density_percent: f64,
}

impl TripletMatrix {
    /// Sorts `raw` by `(row, col)` and sums duplicates.
    pub fn canonicalize<I, T>(raw: I, num_rows: usize, num_cols: usize) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: Into<Triplet>,
    {
        let mut entries: Vec<Triplet> = raw.into_iter().map(Into::into).collect();
        for t in &entries {
            if t.row >= num_rows || t.col >= num_cols {
                return Err(Error::IndexOutOfBounds {
                    row: t.row,
                    col: t.col,
                    num_rows,
                    num_cols,
                });
            }
        }
        // stable, so duplicates are summed in input order
        entries.sort_by_key(|t| (t.row, t.col));
        let mut merged: Vec<Triplet> = Vec::with_capacity(entries.len());
        for t in entries {
            match merged.last_mut() {
                Some(last) if last.row == t.row && last.col == t.col => last.value += t.value,
                _ => merged.push(t),
            }
        }
        Ok(Self {
            num_rows,
            num_cols,
            entries: merged,
        })
    }

    /// Wraps entries that are already strictly increasing in `(row, col)`.
    pub(crate) fn from_sorted_unchecked(
        num_rows: usize,
        num_cols: usize,
        entries: Vec<Triplet>,
    ) -> Self {
        debug_assert!(entries
            .windows(2)
            .all(|w| (w[0].row, w[0].col) < (w[1].row, w[1].col)));
        Self {
            num_rows,
            num_cols,
            entries,
        }
    }

    pub fn empty(num_rows: usize, num_cols: usize) -> Self {
        Self {
            num_rows,
            num_cols,
            entries: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            num_rows: n,
            num_cols: n,
            entries: (0..n).map(|i| Triplet::new(i, i, 1.0)).collect(),
        }
    }

    pub fn num_rows(&self) -> usize {
        self.num_rows
    }

    pub fn num_cols(&self) -> usize {
        self.num_cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Triplet] {
        &self.entries
    }

    /// Entries of row `row`, in column order.
    pub fn row(&self, row: usize) -> &[Triplet] {
        let start = self.entries.partition_point(|t| t.row < row);
        let end = self.entries.partition_point(|t| t.row <= row);
        &self.entries[start..end]
    }

    /// Copy without explicitly stored zeros.
    pub fn without_explicit_zeros(&self) -> Self {
        Self {
            num_rows: self.num_rows,
            num_cols: self.num_cols,
            entries: self
                .entries
                .iter()
                .copied()
                .filter(|t| t.value != 0.0)
                .collect(),
        }
    }

    /// Number of stored entries in each row.
    pub fn row_lengths(&self) -> Vec<usize> {
        let mut lens = vec![0; self.num_rows];
        for t in &self.entries {
            lens[t.row] += 1;
        }
        lens
    }

    pub fn stats(&self) -> Result<MatrixStats> {
        if self.num_rows == 0 {
            return Err(Error::EmptyMatrix);
        }
        let lens = self.row_lengths();
        let max = lens.iter().copied().max().unwrap_or(0);
        let min = lens.iter().copied().min().unwrap_or(0);
        let mean = self.nnz() as f64 / self.num_rows as f64;
        let cells = self.num_rows as f64 * self.num_cols as f64;
        let density = if cells > 0.0 {
            self.nnz() as f64 / cells * 100.0
        } else {
            0.0
        };
        Ok(MatrixStats {
            num_rows: self.num_rows,
            num_cols: self.num_cols,
            nnz: self.nnz(),
            row_len_max: max,
            row_len_mean: mean,
            row_len_min: min,
            density_percent: density,
        })
    }

    /// `y = A x`, accumulating each row in sorted entry order starting from 0.
    ///
    /// This is the oracle every format kernel is compared against.
    pub fn spmv_reference(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.num_cols {
            return Err(Error::DimensionMismatch {
                expected: self.num_cols,
                actual: x.len(),
            });
        }
        let mut y = vec![0.0; self.num_rows];
        for t in &self.entries {
            y[t.row] += t.value * x[t.col];
        }
        Ok(y)
    }
}
