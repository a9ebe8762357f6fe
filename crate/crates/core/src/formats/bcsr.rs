use serde::Serialize;

use super::{check_len, FillReport, Scalar, SparseFormat, INDEX_BYTES};
use crate::error::{Error, Result};
use crate::matrix::{Triplet, TripletMatrix};

/// Blocked CSR over an `r x c` tile grid anchored at (0, 0).
///
/// A tile is stored iff it holds at least one source entry; its `r * c`
/// values are kept row-major. Trailing partial tiles are padded conceptually.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BcsrMatrix<T = f64> {
    num_rows: usize,
    num_cols: usize,
    block_rows: usize,
    block_cols: usize,
    #[serde(rename = "rowPointers")]
    block_row_pointers: Vec<usize>,
    #[serde(rename = "columns")]
    block_column_index: Vec<usize>,
    #[serde(rename = "values")]
    block_values: Vec<T>,
    /// Marks slots holding a source entry, so stored zeros survive `to_triplets`.
    #[serde(skip)]
    occupied: Vec<bool>,
}

impl<T: Scalar> BcsrMatrix<T> {
    /// 4x4 tiles.
    pub fn from_triplets(m: &TripletMatrix) -> Self {
        Self::with_block_dims(m, 4, 4).expect("4x4 is a valid block shape")
    }

    pub fn with_block_dims(
        m: &TripletMatrix,
        block_rows: usize,
        block_cols: usize,
    ) -> Result<Self> {
        if block_rows == 0 || block_cols == 0 {
            return Err(Error::InvalidArgument(format!(
                "block dimensions must be positive, got {block_rows}x{block_cols}"
            )));
        }
        let tile = block_rows * block_cols;
        let grid_rows = m.num_rows().div_ceil(block_rows);
        let mut block_row_pointers = vec![0usize; grid_rows + 1];
        let mut block_column_index = Vec::new();
        let mut block_values = Vec::new();
        let mut occupied = Vec::new();

        for br in 0..grid_rows {
            let first = br * block_rows;
            let last = (first + block_rows).min(m.num_rows());
            // entries of this block row, ordered by tile column
            let mut band: Vec<&Triplet> = (first..last).flat_map(|r| m.row(r)).collect();
            band.sort_by_key(|t| t.col / block_cols);
            let mut current: Option<usize> = None;
            for t in band {
                let bc = t.col / block_cols;
                if current != Some(bc) {
                    current = Some(bc);
                    block_column_index.push(bc);
                    block_values.resize(block_values.len() + tile, T::ZERO);
                    occupied.resize(occupied.len() + tile, false);
                }
                let base = block_values.len() - tile;
                let local = (t.row - first) * block_cols + (t.col - bc * block_cols);
                block_values[base + local] = T::from_f64(t.value);
                occupied[base + local] = true;
            }
            block_row_pointers[br + 1] = block_column_index.len();
        }

        Ok(Self {
            num_rows: m.num_rows(),
            num_cols: m.num_cols(),
            block_rows,
            block_cols,
            block_row_pointers,
            block_column_index,
            block_values,
            occupied,
        })
    }

    pub fn block_dims(&self) -> (usize, usize) {
        (self.block_rows, self.block_cols)
    }

    pub fn num_blocks(&self) -> usize {
        self.block_column_index.len()
    }

    pub fn block_row_pointers(&self) -> &[usize] {
        &self.block_row_pointers
    }

    pub fn block_column_index(&self) -> &[usize] {
        &self.block_column_index
    }

    pub fn block_values(&self) -> &[T] {
        &self.block_values
    }

    pub fn stored_slots(&self) -> usize {
        self.block_values.len()
    }
}

impl<T: Scalar> SparseFormat<T> for BcsrMatrix<T> {
    fn format_name(&self) -> &'static str {
        "bcsr"
    }

    fn num_rows(&self) -> usize {
        self.num_rows
    }

    fn num_cols(&self) -> usize {
        self.num_cols
    }

    fn nnz(&self) -> usize {
        self.occupied.iter().filter(|&&o| o).count()
    }

    /// Dense multiply of every stored tile; slots outside the matrix bounds
    /// are skipped, in-bounds pad slots contribute `0 * x[col]`.
    fn spmv(&self, x: &[T]) -> Result<Vec<T>> {
        check_len(self.num_cols, x.len())?;
        let (r, c) = (self.block_rows, self.block_cols);
        let mut y = vec![T::ZERO; self.num_rows];
        for (br, w) in self.block_row_pointers.windows(2).enumerate() {
            let row0 = br * r;
            let rows = r.min(self.num_rows - row0);
            for (i, yi) in y[row0..row0 + rows].iter_mut().enumerate() {
                let mut sum = T::ZERO;
                for b in w[0]..w[1] {
                    let col0 = self.block_column_index[b] * c;
                    let cols = c.min(self.num_cols - col0);
                    let tile = &self.block_values[b * r * c + i * c..];
                    for j in 0..cols {
                        sum += tile[j] * x[col0 + j];
                    }
                }
                *yi = sum;
            }
        }
        Ok(y)
    }

    fn to_triplets(&self) -> TripletMatrix {
        let (r, c) = (self.block_rows, self.block_cols);
        let mut entries = Vec::with_capacity(self.nnz());
        for (br, w) in self.block_row_pointers.windows(2).enumerate() {
            for i in 0..r {
                for b in w[0]..w[1] {
                    for j in 0..c {
                        let k = b * r * c + i * c + j;
                        if self.occupied[k] {
                            let col = self.block_column_index[b] * c + j;
                            entries.push(Triplet::new(
                                br * r + i,
                                col,
                                self.block_values[k].to_f64(),
                            ));
                        }
                    }
                }
            }
        }
        TripletMatrix::from_sorted_unchecked(self.num_rows, self.num_cols, entries)
    }

    fn fill_report(&self) -> FillReport {
        let blocks = self.num_blocks();
        let pointers = self.block_row_pointers.len();
        FillReport::new("bcsr", self.stored_slots(), self.nnz(), |s| {
            self.stored_slots() * s + blocks * INDEX_BYTES + pointers * INDEX_BYTES
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
    fn m8_tiles() {
        let a = BcsrMatrix::<f64>::from_triplets(&m8());
        assert_eq!(a.num_blocks(), 3);
        assert_eq!(a.block_row_pointers(), &[0, 1, 3]);
        assert_eq!(a.block_column_index(), &[0, 0, 1]);
        let r = a.fill_report();
        assert_eq!(r.stored_slots, 48);
        assert_eq!(r.artificial_zeros, 35);
        assert_eq!(r.efficiency_percent().round(), 27.0);
    }

    #[test]
    fn identity_and_dense_tile() {
        let r = BcsrMatrix::<f64>::from_triplets(&TripletMatrix::identity(4)).fill_report();
        assert_eq!((r.stored_slots, r.artificial_zeros), (16, 12));

        let dense: Vec<_> = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j, 1.0)))
            .collect();
        let dense = TripletMatrix::canonicalize(dense, 4, 4).unwrap();
        let a = BcsrMatrix::<f64>::from_triplets(&dense);
        assert_eq!(a.num_blocks(), 1);
        assert_eq!(a.fill_report().artificial_zeros, 0);
        assert_eq!(a.spmv(&[1.0; 4]).unwrap(), vec![4.0; 4]);
    }

    #[test]
    fn spmv_examples() {
        let a = BcsrMatrix::<f64>::from_triplets(&m8());
        assert_eq!(
            a.spmv(&[1.0; 8]).unwrap(),
            vec![3.0, 3.0, 4.0, 5.0, 6.0, 15.0, 30.0, 25.0]
        );
        assert_eq!(a.spmv(&[0.0; 8]).unwrap(), vec![0.0; 8]);
        assert!(a.spmv(&[0.0; 4]).is_err());
    }

    #[test]
    fn zero_block_dims_rejected() {
        assert!(BcsrMatrix::<f64>::with_block_dims(&m8(), 0, 4).is_err());
        assert!(BcsrMatrix::<f64>::with_block_dims(&m8(), 4, 0).is_err());
    }

    #[test]
    fn partial_trailing_tiles() {
        let m = TripletMatrix::canonicalize([(4, 4, 2.0), (0, 3, 1.0)], 5, 5).unwrap();
        let a = BcsrMatrix::<f64>::with_block_dims(&m, 4, 4).unwrap();
        assert_eq!(a.num_blocks(), 2);
        assert_eq!(a.spmv(&[1.0; 5]).unwrap(), vec![1.0, 0.0, 0.0, 0.0, 2.0]);
        assert_eq!(a.to_triplets(), m);
    }

    proptest! {
        #[test]
        fn round_trip_and_oracle(
            m in int_matrix(64),
            r in 1usize..6,
            c in 1usize..6,
            seed in any::<u64>(),
        ) {
            let a = BcsrMatrix::<f64>::with_block_dims(&m, r, c).unwrap();
            prop_assert_eq!(&a.to_triplets(), &m);
            prop_assert_eq!(a.stored_slots(), a.num_blocks() * r * c);
            let x = int_vector(m.num_cols(), seed);
            prop_assert_eq!(a.spmv(&x).unwrap(), m.spmv_reference(&x).unwrap());
        }
    }
}
