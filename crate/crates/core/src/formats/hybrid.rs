use serde::Serialize;

use super::{check_len, CooArrays, EllpackMatrix, FillReport, Scalar, SparseFormat};
use crate::error::Result;
use crate::matrix::{Triplet, TripletMatrix};

/// ELLPACK slot: value + column.
const ELL_WORDS: usize = 2;
/// COO entry: value + row + column.
const COO_WORDS: usize = 3;

/// ELLPACK width minimising stored words for the Hybrid split.
///
/// Scans `k` in `0..=max_len` and returns the smallest minimiser of
/// `2 * N * k + 3 * sum(max(0, len_i - k))`.
pub fn choose_k1(row_lens: &[usize]) -> usize {
    let n = row_lens.len();
    let max_len = row_lens.iter().copied().max().unwrap_or(0);
    // overflow(k) is maintained incrementally: it drops by the number of
    // rows longer than k each time k grows by one.
    let mut longer_than = vec![0usize; max_len + 1];
    for &len in row_lens {
        if len > 0 {
            longer_than[len - 1] += 1;
        }
    }
    for k in (0..max_len).rev() {
        longer_than[k] += longer_than[k + 1];
    }
    let mut overflow: usize = row_lens.iter().sum();
    let mut best = (COO_WORDS * overflow, 0);
    for k in 1..=max_len {
        overflow -= longer_than[k - 1];
        let cost = ELL_WORDS * n * k + COO_WORDS * overflow;
        if cost < best.0 {
            best = (cost, k);
        }
    }
    best.1
}

/// ELLPACK part of width `K1` plus COO overflow.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HybridMatrix<T = f64> {
    ell: EllpackMatrix<T>,
    coo: CooArrays<T>,
}

impl<T: Scalar> HybridMatrix<T> {
    /// Splits after each row's first `k1` entries by column. `None` picks
    /// [`choose_k1`]; a `k1` above the longest row is clamped to it.
    pub fn from_triplets(m: &TripletMatrix, k1: Option<usize>) -> Self {
        let lens = m.row_lengths();
        let max_len = lens.iter().copied().max().unwrap_or(0);
        let k1 = k1.unwrap_or_else(|| choose_k1(&lens)).min(max_len);
        let ell = EllpackMatrix::with_width(m, k1);
        let mut overflow = Vec::new();
        for row in 0..m.num_rows() {
            overflow.extend(m.row(row).iter().skip(k1).copied());
        }
        let coo = CooArrays::from_entries(m.num_rows(), m.num_cols(), &overflow);
        Self { ell, coo }
    }

    pub fn k1(&self) -> usize {
        self.ell.width()
    }

    pub fn ell(&self) -> &EllpackMatrix<T> {
        &self.ell
    }

    pub fn coo(&self) -> &CooArrays<T> {
        &self.coo
    }
}

impl<T: Scalar> SparseFormat<T> for HybridMatrix<T> {
    fn format_name(&self) -> &'static str {
        "hybrid"
    }

    fn num_rows(&self) -> usize {
        self.ell.num_rows()
    }

    fn num_cols(&self) -> usize {
        self.ell.num_cols()
    }

    fn nnz(&self) -> usize {
        self.ell.nnz() + self.coo.len()
    }

    /// ELLPACK pass, then COO accumulation into the same output.
    fn spmv(&self, x: &[T]) -> Result<Vec<T>> {
        check_len(self.num_cols(), x.len())?;
        let mut y = self.ell.spmv(x)?;
        self.coo.spmv_accumulate(x, &mut y)?;
        Ok(y)
    }

    fn to_triplets(&self) -> TripletMatrix {
        let mut entries: Vec<Triplet> = Vec::with_capacity(self.nnz());
        let mut overflow = self.coo.triplets().peekable();
        for row in 0..self.num_rows() {
            self.ell.push_triplets(&mut entries, row);
            while let Some(t) = overflow.next_if(|t| t.row == row) {
                entries.push(t);
            }
        }
        TripletMatrix::from_sorted_unchecked(self.num_rows(), self.num_cols(), entries)
    }

    fn fill_report(&self) -> FillReport {
        let slots = self.ell.stored_slots() + self.coo.len();
        FillReport::new("hybrid", slots, self.nnz(), |s| {
            self.ell.bytes(s) + self.coo.bytes(s)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formats::testutil::{int_matrix, int_vector};
    use crate::synth::m8;
    use proptest::prelude::*;

    /// Independent scan evaluating every candidate width from scratch.
    fn brute_force_k1(lens: &[usize]) -> (usize, Vec<usize>) {
        let max_len = lens.iter().copied().max().unwrap_or(0);
        let costs: Vec<usize> = (0..=max_len)
            .map(|k| {
                2 * lens.len() * k + 3 * lens.iter().map(|&l| l.saturating_sub(k)).sum::<usize>()
            })
            .collect();
        let min = *costs.iter().min().unwrap();
        (costs.iter().position(|&c| c == min).unwrap(), costs)
    }

    #[test]
    fn k1_examples() {
        let m8_lens = [2, 1, 1, 1, 1, 2, 3, 2];
        let (k, costs) = brute_force_k1(&m8_lens);
        assert_eq!(costs, vec![39, 31, 35, 48]);
        assert_eq!(k, 1);
        assert_eq!(choose_k1(&m8_lens), 1);
        assert_eq!(choose_k1(&[3, 3, 3, 3]), 3);
        assert_eq!(choose_k1(&[0, 0, 0]), 0);
        assert_eq!(choose_k1(&[]), 0);
    }

    #[test]
    fn m8_split() {
        let h = HybridMatrix::<f64>::from_triplets(&m8(), Some(1));
        assert_eq!(h.ell().nnz(), 8);
        let overflow: Vec<Triplet> = h.coo().triplets().collect();
        assert_eq!(
            overflow,
            vec![
                Triplet::new(0, 3, 2.0),
                Triplet::new(5, 5, 8.0),
                Triplet::new(6, 4, 10.0),
                Triplet::new(6, 6, 11.0),
                Triplet::new(7, 7, 13.0),
            ]
        );
        assert_eq!(HybridMatrix::<f64>::from_triplets(&m8(), None).k1(), 1);
    }

    #[test]
    fn degenerate_splits() {
        let full = HybridMatrix::<f64>::from_triplets(&m8(), Some(3));
        assert!(full.coo().is_empty());
        assert_eq!(full.ell(), &EllpackMatrix::from_triplets(&m8()).unwrap());

        let none = HybridMatrix::<f64>::from_triplets(&m8(), Some(0));
        assert_eq!(none.ell().nnz(), 0);
        assert_eq!(none.ell().stored_slots(), 0);
        assert_eq!(none.coo().len(), 13);
        let x = [1.0; 8];
        assert_eq!(
            none.spmv(&x).unwrap(),
            CooArrays::<f64>::from_triplets(&m8()).spmv(&x).unwrap()
        );
    }

    #[test]
    fn spmv_examples() {
        let h = HybridMatrix::<f64>::from_triplets(&m8(), Some(1));
        assert_eq!(
            h.spmv(&[1.0; 8]).unwrap(),
            vec![3.0, 3.0, 4.0, 5.0, 6.0, 15.0, 30.0, 25.0]
        );
        assert_eq!(h.spmv(&[0.0; 8]).unwrap(), vec![0.0; 8]);
        assert!(h.spmv(&[0.0; 2]).is_err());
    }

    #[test]
    fn fill_counts_ell_padding_only() {
        let r = HybridMatrix::<f64>::from_triplets(&m8(), Some(1)).fill_report();
        assert_eq!(r.stored_slots, 8 + 5);
        assert_eq!(r.artificial_zeros, 0);
        let r = HybridMatrix::<f64>::from_triplets(&m8(), Some(2)).fill_report();
        assert_eq!(r.stored_slots, 16 + 1);
        assert_eq!(r.artificial_zeros, 4);
    }

    proptest! {
        #[test]
        fn k1_matches_exhaustive_scan(lens in proptest::collection::vec(0usize..40, 0..50)) {
            let (expected, _) = if lens.is_empty() { (0, vec![]) } else { brute_force_k1(&lens) };
            prop_assert_eq!(choose_k1(&lens), expected);
        }

        #[test]
        fn partition_and_oracle(m in int_matrix(64), k in 0usize..8, seed in any::<u64>()) {
            let h = HybridMatrix::<f64>::from_triplets(&m, Some(k));
            prop_assert_eq!(h.ell().nnz() + h.coo().len(), m.nnz());
            prop_assert_eq!(&h.to_triplets(), &m);
            let x = int_vector(m.num_cols(), seed);
            prop_assert_eq!(h.spmv(&x).unwrap(), m.spmv_reference(&x).unwrap());
        }
    }
}
