use serde::Serialize;

use super::{check_len, FillReport, Scalar, SparseFormat, INDEX_BYTES};
use crate::error::Result;
use crate::matrix::{Triplet, TripletMatrix};

/// Compressed sparse rows.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CsrMatrix<T = f64> {
    num_rows: usize,
    num_cols: usize,
    values: Vec<T>,
    columns: Vec<usize>,
    row_pointers: Vec<usize>,
}

impl<T: Scalar> CsrMatrix<T> {
    pub fn from_triplets(m: &TripletMatrix) -> Self {
        let mut row_pointers = vec![0usize; m.num_rows() + 1];
        for t in m.entries() {
            row_pointers[t.row + 1] += 1;
        }
        for i in 0..m.num_rows() {
            row_pointers[i + 1] += row_pointers[i];
        }
        Self {
            num_rows: m.num_rows(),
            num_cols: m.num_cols(),
            values: m.entries().iter().map(|t| T::from_f64(t.value)).collect(),
            columns: m.entries().iter().map(|t| t.col).collect(),
            row_pointers,
        }
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn columns(&self) -> &[usize] {
        &self.columns
    }

    pub fn row_pointers(&self) -> &[usize] {
        &self.row_pointers
    }
}

impl<T: Scalar> SparseFormat<T> for CsrMatrix<T> {
    fn format_name(&self) -> &'static str {
        "csr"
    }

    fn num_rows(&self) -> usize {
        self.num_rows
    }

    fn num_cols(&self) -> usize {
        self.num_cols
    }

    fn nnz(&self) -> usize {
        self.values.len()
    }

    /// One logical thread per row, walking `row_pointers[i]..row_pointers[i+1]`.
    fn spmv(&self, x: &[T]) -> Result<Vec<T>> {
        check_len(self.num_cols, x.len())?;
        let y = self
            .row_pointers
            .windows(2)
            .map(|w| {
                let mut sum = T::ZERO;
                for j in w[0]..w[1] {
                    sum += self.values[j] * x[self.columns[j]];
                }
                sum
            })
            .collect();
        Ok(y)
    }

    fn to_triplets(&self) -> TripletMatrix {
        let mut entries = Vec::with_capacity(self.values.len());
        for (row, w) in self.row_pointers.windows(2).enumerate() {
            for j in w[0]..w[1] {
                entries.push(Triplet::new(row, self.columns[j], self.values[j].to_f64()));
            }
        }
        TripletMatrix::from_sorted_unchecked(self.num_rows, self.num_cols, entries)
    }

    fn fill_report(&self) -> FillReport {
        let nnz = self.values.len();
        let rows = self.num_rows;
        FillReport::new("csr", nnz, nnz, |scalar| {
            nnz * (scalar + INDEX_BYTES) + (rows + 1) * INDEX_BYTES
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formats::testutil::{int_matrix, int_vector};
    use crate::synth::m8;
    use proptest::prelude::*;

    #[test]
    fn m8_row_pointers() {
        let a = CsrMatrix::<f64>::from_triplets(&m8());
        assert_eq!(a.row_pointers(), &[0, 2, 3, 4, 5, 6, 8, 11, 13]);
    }

    #[test]
    fn empty_and_identity() {
        let a = CsrMatrix::<f64>::from_triplets(&TripletMatrix::empty(3, 3));
        assert_eq!(a.row_pointers(), &[0, 0, 0, 0]);
        let a = CsrMatrix::<f64>::from_triplets(&TripletMatrix::identity(3));
        assert_eq!(a.values(), &[1.0, 1.0, 1.0]);
        assert_eq!(a.columns(), &[0, 1, 2]);
        assert_eq!(a.row_pointers(), &[0, 1, 2, 3]);
    }

    #[test]
    fn spmv_examples() {
        let a = CsrMatrix::<f64>::from_triplets(&m8());
        assert_eq!(
            a.spmv(&[1.0; 8]).unwrap(),
            vec![3.0, 3.0, 4.0, 5.0, 6.0, 15.0, 30.0, 25.0]
        );
        assert_eq!(a.spmv(&[0.0; 8]).unwrap(), vec![0.0; 8]);
        let id = CsrMatrix::<f64>::from_triplets(&TripletMatrix::identity(3));
        assert_eq!(id.spmv(&[4.0, 5.0, 6.0]).unwrap(), vec![4.0, 5.0, 6.0]);
        assert!(a.spmv(&[1.0; 3]).is_err());
    }

    #[test]
    fn fill_is_zero() {
        let r = CsrMatrix::<f64>::from_triplets(&m8()).fill_report();
        assert_eq!(r.artificial_zeros, 0);
        assert_eq!(r.fill_percent, 0.0);
        assert_eq!(r.bytes_single, 13 * 8 + 9 * 4);
        assert_eq!(r.bytes_double, 13 * 12 + 9 * 4);
    }

    proptest! {
        #[test]
        fn round_trip_and_oracle(m in int_matrix(64), seed in any::<u64>()) {
            let a = CsrMatrix::<f64>::from_triplets(&m);
            prop_assert_eq!(&a.to_triplets(), &m);
            let x = int_vector(m.num_cols(), seed);
            prop_assert_eq!(a.spmv(&x).unwrap(), m.spmv_reference(&x).unwrap());
        }
    }
}
