use serde::Serialize;

use super::{check_len, FillReport, Scalar, SparseFormat, INDEX_BYTES};
use crate::error::{Error, Result};
use crate::matrix::{Triplet, TripletMatrix};

/// Default cap on `N * K` allocated slots.
pub const DEFAULT_SLOT_BUDGET: u128 = 1 << 31;

/// `N x K` slot grid stored slot-major: slot `j` of row `i` lives at
/// `j * N + i`. Pad slots hold value 0 and column 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EllpackMatrix<T = f64> {
    num_rows: usize,
    num_cols: usize,
    width: usize,
    values: Vec<T>,
    columns: Vec<usize>,
    /// Not read by the kernel; lets pads be told apart from stored zeros.
    row_lengths: Vec<usize>,
}

impl<T: Scalar> EllpackMatrix<T> {
    /// Width `K` is the longest row.
    pub fn from_triplets(m: &TripletMatrix) -> Result<Self> {
        Self::with_slot_budget(m, DEFAULT_SLOT_BUDGET)
    }

    pub fn with_slot_budget(m: &TripletMatrix, budget: u128) -> Result<Self> {
        let width = m.row_lengths().into_iter().max().unwrap_or(0);
        let slots = m.num_rows() as u128 * width as u128;
        if slots > budget {
            return Err(Error::SlotBudgetExceeded { slots, budget });
        }
        Ok(Self::with_width(m, width))
    }

    /// Keeps each row's first `min(len, width)` entries; the rest are
    /// dropped, so callers must route them elsewhere (see Hybrid).
    pub(crate) fn with_width(m: &TripletMatrix, width: usize) -> Self {
        let n = m.num_rows();
        let mut values = vec![T::ZERO; n * width];
        let mut columns = vec![0usize; n * width];
        let mut row_lengths = vec![0usize; n];
        let mut slot = 0;
        let mut prev_row = usize::MAX;
        for t in m.entries() {
            if t.row != prev_row {
                slot = 0;
                prev_row = t.row;
            }
            if slot < width {
                values[slot * n + t.row] = T::from_f64(t.value);
                columns[slot * n + t.row] = t.col;
                row_lengths[t.row] += 1;
            }
            slot += 1;
        }
        Self {
            num_rows: n,
            num_cols: m.num_cols(),
            width,
            values,
            columns,
            row_lengths,
        }
    }

    /// Slots per row (`K`).
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn columns(&self) -> &[usize] {
        &self.columns
    }

    pub fn row_lengths(&self) -> &[usize] {
        &self.row_lengths
    }

    pub fn stored_slots(&self) -> usize {
        self.num_rows * self.width
    }

    pub(crate) fn bytes(&self, scalar: usize) -> usize {
        self.stored_slots() * (scalar + INDEX_BYTES)
    }

    pub(crate) fn push_triplets(&self, out: &mut Vec<Triplet>, row: usize) {
        let n = self.num_rows;
        for j in 0..self.row_lengths[row] {
            let k = j * n + row;
            out.push(Triplet::new(row, self.columns[k], self.values[k].to_f64()));
        }
    }
}

impl<T: Scalar> SparseFormat<T> for EllpackMatrix<T> {
    fn format_name(&self) -> &'static str {
        "ellpack"
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

    /// Every row walks all `K` slots; pads add `0 * x[0]`.
    fn spmv(&self, x: &[T]) -> Result<Vec<T>> {
        check_len(self.num_cols, x.len())?;
        let n = self.num_rows;
        let y = (0..n)
            .map(|row| {
                let mut sum = T::ZERO;
                for j in 0..self.width {
                    let k = j * n + row;
                    sum += self.values[k] * x[self.columns[k]];
                }
                sum
            })
            .collect();
        Ok(y)
    }

    fn to_triplets(&self) -> TripletMatrix {
        let mut entries = Vec::with_capacity(self.nnz());
        for row in 0..self.num_rows {
            self.push_triplets(&mut entries, row);
        }
        TripletMatrix::from_sorted_unchecked(self.num_rows, self.num_cols, entries)
    }

    fn fill_report(&self) -> FillReport {
        FillReport::new("ellpack", self.stored_slots(), self.nnz(), |s| {
            self.bytes(s)
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
    fn m8_counts() {
        let a = EllpackMatrix::<f64>::from_triplets(&m8()).unwrap();
        assert_eq!(a.width(), 3);
        let r = a.fill_report();
        assert_eq!(r.stored_slots, 24);
        assert_eq!(r.artificial_zeros, 11);
        assert!((r.fill_percent - 84.615).abs() < 1e-3);
    }

    #[test]
    fn m8_slot_major_layout() {
        let a = EllpackMatrix::<f64>::from_triplets(&m8()).unwrap();
        assert_eq!(
            a.values(),
            &[
                1.0, 3.0, 4.0, 5.0, 6.0, 7.0, 9.0, 12.0, //
                2.0, 0.0, 0.0, 0.0, 0.0, 8.0, 10.0, 13.0, //
                0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 11.0, 0.0,
            ]
        );
        assert_eq!(&a.columns()[8..16], &[3, 0, 0, 0, 0, 5, 4, 7]);
    }

    #[test]
    fn identity_has_no_padding() {
        let a = EllpackMatrix::<f64>::from_triplets(&TripletMatrix::identity(5)).unwrap();
        assert_eq!(a.width(), 1);
        assert_eq!(a.fill_report().artificial_zeros, 0);
    }

    #[test]
    fn long_first_row() {
        let m = TripletMatrix::canonicalize(
            [
                (0, 0, 1.0),
                (0, 1, 1.0),
                (0, 2, 1.0),
                (0, 3, 1.0),
                (1, 1, 1.0),
                (2, 2, 1.0),
                (3, 3, 1.0),
            ],
            4,
            4,
        )
        .unwrap();
        let r = EllpackMatrix::<f64>::from_triplets(&m)
            .unwrap()
            .fill_report();
        assert_eq!((r.stored_slots, r.artificial_zeros), (16, 9));
    }

    #[test]
    fn slot_budget_guard() {
        // diagonal plus one full row: N^2 slots for 2N-1 entries
        let n = 100;
        let mut raw: Vec<(usize, usize, f64)> = (0..n).map(|i| (i, i, 1.0)).collect();
        raw.extend((1..n).map(|j| (0, j, 1.0)));
        let m = TripletMatrix::canonicalize(raw, n, n).unwrap();
        let err = EllpackMatrix::<f64>::with_slot_budget(&m, 5_000).unwrap_err();
        assert!(matches!(
            err,
            Error::SlotBudgetExceeded {
                slots: 10_000,
                budget: 5_000
            }
        ));
        assert!(EllpackMatrix::<f64>::with_slot_budget(&m, 10_000).is_ok());
    }

    #[test]
    fn spmv_examples() {
        let a = EllpackMatrix::<f64>::from_triplets(&m8()).unwrap();
        assert_eq!(
            a.spmv(&[1.0; 8]).unwrap(),
            vec![3.0, 3.0, 4.0, 5.0, 6.0, 15.0, 30.0, 25.0]
        );
        assert_eq!(a.spmv(&[0.0; 8]).unwrap(), vec![0.0; 8]);
        let v = 2.5;
        let single = TripletMatrix::canonicalize([(0, 2, v)], 1, 3).unwrap();
        let a = EllpackMatrix::<f64>::from_triplets(&single).unwrap();
        assert_eq!(a.spmv(&[0.0, 0.0, 5.0]).unwrap(), vec![5.0 * v]);
        assert!(a.spmv(&[1.0]).is_err());
    }

    #[test]
    fn stored_zero_at_column_zero_survives_round_trip() {
        let m = TripletMatrix::canonicalize([(0, 0, 0.0), (1, 0, 1.0), (1, 1, 2.0)], 3, 2).unwrap();
        let a = EllpackMatrix::<f64>::from_triplets(&m).unwrap();
        assert_eq!(a.to_triplets(), m);
        assert_eq!(a.fill_report().artificial_zeros, 3);
    }

    proptest! {
        #[test]
        fn round_trip_and_oracle(m in int_matrix(64), seed in any::<u64>()) {
            let a = EllpackMatrix::<f64>::from_triplets(&m).unwrap();
            prop_assert_eq!(&a.to_triplets(), &m);
            let x = int_vector(m.num_cols(), seed);
            prop_assert_eq!(a.spmv(&x).unwrap(), m.spmv_reference(&x).unwrap());
        }
    }
}
