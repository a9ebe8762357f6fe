//! Row-grouped CSR.
//!
//! Rows are cut into groups of `G` consecutive rows (the last group may be
//! shorter). Group `g` with `s` rows and longest row `K_g` owns `s * K_g`
//! slots starting at `group_pointers[g]`, laid out slot-major: entry `j` of
//! local row `t` sits at `group_pointers[g] + t + j * s`. With one thread per
//! row, step `j` of a group therefore touches `s` consecutive slots.
//!
//! Unlike sliced ELLPACK the per-row lengths are stored, so the kernel stops
//! at each row's last real entry and never multiplies a pad.

use serde::Serialize;

use super::{check_len, FillReport, Scalar, SparseFormat, INDEX_BYTES};
use crate::error::{Error, Result};
use crate::matrix::{Triplet, TripletMatrix};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RgcsrMatrix<T = f64> {
    num_rows: usize,
    num_cols: usize,
    group_size: usize,
    values: Vec<T>,
    columns: Vec<usize>,
    group_pointers: Vec<usize>,
    row_lengths: Vec<usize>,
}

impl<T: Scalar> RgcsrMatrix<T> {
    pub fn from_triplets(m: &TripletMatrix, group_size: usize) -> Result<Self> {
        if group_size == 0 {
            return Err(Error::InvalidArgument(
                "group size must be at least 1".into(),
            ));
        }
        let n = m.num_rows();
        let row_lengths = m.row_lengths();
        let num_groups = n.div_ceil(group_size);

        let mut group_pointers = Vec::with_capacity(num_groups + 1);
        group_pointers.push(0);
        for g in 0..num_groups {
            let rows = &row_lengths[g * group_size..((g + 1) * group_size).min(n)];
            let width = rows.iter().copied().max().unwrap_or(0);
            group_pointers.push(group_pointers[g] + rows.len() * width);
        }

        let total = group_pointers[num_groups];
        let mut values = vec![T::ZERO; total];
        let mut columns = vec![0usize; total];
        for row in 0..n {
            let g = row / group_size;
            let s = Self::size_of_group(n, group_size, g);
            let base = group_pointers[g] + row % group_size;
            for (j, t) in m.row(row).iter().enumerate() {
                values[base + j * s] = T::from_f64(t.value);
                columns[base + j * s] = t.col;
            }
        }

        Ok(Self {
            num_rows: n,
            num_cols: m.num_cols(),
            group_size,
            values,
            columns,
            group_pointers,
            row_lengths,
        })
    }

    fn size_of_group(num_rows: usize, group_size: usize, g: usize) -> usize {
        group_size.min(num_rows - g * group_size)
    }

    pub fn group_size(&self) -> usize {
        self.group_size
    }

    pub fn num_groups(&self) -> usize {
        self.group_pointers.len() - 1
    }

    /// Rows in group `g`; smaller than `group_size` only for the last group.
    pub fn group_rows(&self, g: usize) -> usize {
        Self::size_of_group(self.num_rows, self.group_size, g)
    }

    /// Slot width `K_g` of group `g`.
    pub fn group_width(&self, g: usize) -> usize {
        (self.group_pointers[g + 1] - self.group_pointers[g])
            .checked_div(self.group_rows(g))
            .unwrap_or(0)
    }

    /// Position of entry `j` of `row` in `values`/`columns`.
    pub fn slot_index(&self, row: usize, j: usize) -> usize {
        let g = row / self.group_size;
        self.group_pointers[g] + row % self.group_size + j * self.group_rows(g)
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn columns(&self) -> &[usize] {
        &self.columns
    }

    pub fn group_pointers(&self) -> &[usize] {
        &self.group_pointers
    }

    pub fn row_lengths(&self) -> &[usize] {
        &self.row_lengths
    }

    pub fn stored_slots(&self) -> usize {
        self.values.len()
    }

    /// SpMV that also returns the number of multiply-adds executed, which
    /// equals the number of stored entries rather than the slot count.
    pub fn spmv_counted(&self, x: &[T]) -> Result<(Vec<T>, usize)> {
        check_len(self.num_cols, x.len())?;
        let mut y = vec![T::ZERO; self.num_rows];
        let mut madds = 0;
        for g in 0..self.num_groups() {
            let s = self.group_rows(g);
            let first = g * self.group_size;
            for t in 0..s {
                let row = first + t;
                let mut ptr = self.group_pointers[g] + t;
                let mut product = T::ZERO;
                for _ in 0..self.row_lengths[row] {
                    product += self.values[ptr] * x[self.columns[ptr]];
                    ptr += s;
                }
                madds += self.row_lengths[row];
                y[row] = product;
            }
        }
        Ok((y, madds))
    }
}

impl<T: Scalar> SparseFormat<T> for RgcsrMatrix<T> {
    fn format_name(&self) -> &'static str {
        "rgcsr"
    }

    fn num_rows(&self) -> usize {
        self.num_rows
    }

    fn num_cols(&self) -> usize {
        self.num_cols
    }

    fn nnz(&self) -> usize {
        self.row_lengths.iter().sum()
    }

    fn spmv(&self, x: &[T]) -> Result<Vec<T>> {
        self.spmv_counted(x).map(|(y, _)| y)
    }

    fn to_triplets(&self) -> TripletMatrix {
        let mut entries = Vec::with_capacity(self.nnz());
        for row in 0..self.num_rows {
            for j in 0..self.row_lengths[row] {
                let k = self.slot_index(row, j);
                entries.push(Triplet::new(row, self.columns[k], self.values[k].to_f64()));
            }
        }
        TripletMatrix::from_sorted_unchecked(self.num_rows, self.num_cols, entries)
    }

    fn fill_report(&self) -> FillReport {
        let slots = self.stored_slots();
        let meta = (self.group_pointers.len() + self.row_lengths.len()) * INDEX_BYTES;
        FillReport::new("rgcsr", slots, self.nnz(), |s| {
            slots * (s + INDEX_BYTES) + meta
        })
    }
}
