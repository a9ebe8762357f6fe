//! Address-stream replay of the one-thread-per-row SpMV kernels.
//!
//! Threads are launched in blocks of `block_size` rows (for RgCSR the block
//! is the row group). Inside a block, threads run in lockstep half-warps.
//! For every step `j` each half-warp issues, for its active threads, one read
//! of `values` and `columns` and one read of `x`; threads whose row is
//! exhausted issue nothing. After the loop each half-warp writes its outputs
//! once. Every array starts at an aligned base address.

use std::str::FromStr;

use serde::Serialize;

use super::{count_segment_transactions, AccessModel, Precision};
use crate::error::{Error, Result};
use crate::formats::{CsrMatrix, EllpackMatrix, RgcsrMatrix};
use crate::matrix::TripletMatrix;

/// Kernels the traffic model knows how to replay.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelLayout {
    /// Scalar CSR: thread `t` reads `row_pointers[t] + j` at step `j`.
    Csr,
    /// ELLPACK: every thread reads all `K` slots, pads included.
    Ellpack,
    /// Row-grouped CSR: thread `t` reads `group_pointers[g] + t + j * s`.
    Rgcsr,
}

impl KernelLayout {
    pub fn as_str(self) -> &'static str {
        match self {
            KernelLayout::Csr => "csr",
            KernelLayout::Ellpack => "ellpack",
            KernelLayout::Rgcsr => "rgcsr",
        }
    }
}

impl FromStr for KernelLayout {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csr" => Ok(KernelLayout::Csr),
            "ellpack" | "ell" => Ok(KernelLayout::Ellpack),
            "rgcsr" => Ok(KernelLayout::Rgcsr),
            other => Err(Error::UnsupportedFormat(other.to_string())),
        }
    }
}

/// Traffic on one array.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ArrayTraffic {
    pub transactions: u64,
    /// Sum over requests of `ceil(distinct bytes requested / segment)`.
    pub min_possible: u64,
}

impl ArrayTraffic {
    fn record(&mut self, addresses: &mut Vec<u64>, element_bytes: u64, model: &AccessModel) {
        if addresses.is_empty() {
            return;
        }
        self.transactions += count_segment_transactions(addresses, model) as u64;
        addresses.sort_unstable();
        addresses.dedup();
        let bytes = addresses.len() as u64 * element_bytes;
        self.min_possible += bytes.div_ceil(model.segment_bytes);
        addresses.clear();
    }

    /// `min_possible / transactions`, 1.0 when nothing was read.
    pub fn efficiency(&self) -> f64 {
        if self.transactions == 0 {
            1.0
        } else {
            self.min_possible as f64 / self.transactions as f64
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct TransactionReport {
    pub values: ArrayTraffic,
    pub columns: ArrayTraffic,
    pub x: ArrayTraffic,
    pub output: ArrayTraffic,
}

impl TransactionReport {
    fn arrays(&self) -> [ArrayTraffic; 4] {
        [self.values, self.columns, self.x, self.output]
    }

    pub fn total(&self) -> u64 {
        self.arrays().iter().map(|a| a.transactions).sum()
    }

    pub fn min_possible(&self) -> u64 {
        self.arrays().iter().map(|a| a.min_possible).sum()
    }

    pub fn efficiency(&self) -> f64 {
        let total = self.total();
        if total == 0 {
            1.0
        } else {
            self.min_possible() as f64 / total as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrafficSimulation {
    pub report: TransactionReport,
    /// Indices of `x` in issue order: blocks ascending, then steps, then
    /// threads. Feed to [`super::simulate_texture_cache`].
    pub x_trace: Vec<usize>,
}

/// Per-row access description shared by the three kernels.
struct Plan {
    num_rows: usize,
    /// Threads per block.
    block: usize,
    /// Number of steps row `r` takes.
    steps: Vec<usize>,
    /// Element offset in `values`/`columns` of step `j` of row `r`.
    slot: Box<dyn Fn(usize, usize) -> usize>,
    /// Column read at that slot.
    column: Vec<usize>,
}

/// Replays `layout`'s SpMV of `m` and counts segment transactions per array.
///
/// `block_size` is the number of rows per thread block; for RgCSR it is the
/// group size.
pub fn simulate_spmv_traffic(
    layout: KernelLayout,
    m: &TripletMatrix,
    block_size: usize,
    model: &AccessModel,
    precision: Precision,
) -> Result<TrafficSimulation> {
    model.validate()?;
    if block_size == 0 {
        return Err(Error::InvalidArgument(
            "block size must be at least 1".into(),
        ));
    }
    let plan = match layout {
        KernelLayout::Csr => {
            let a = CsrMatrix::<f64>::from_triplets(m);
            let rp = a.row_pointers().to_vec();
            Plan {
                num_rows: m.num_rows(),
                block: block_size,
                steps: m.row_lengths(),
                slot: Box::new(move |r, j| rp[r] + j),
                column: a.columns().to_vec(),
            }
        }
        KernelLayout::Ellpack => {
            let a = EllpackMatrix::<f64>::from_triplets(m)?;
            let n = m.num_rows();
            Plan {
                num_rows: n,
                block: block_size,
                steps: vec![a.width(); n],
                slot: Box::new(move |r, j| j * n + r),
                column: a.columns().to_vec(),
            }
        }
        KernelLayout::Rgcsr => {
            let a = RgcsrMatrix::<f64>::from_triplets(m, block_size)?;
            let column = a.columns().to_vec();
            let steps = a.row_lengths().to_vec();
            Plan {
                num_rows: m.num_rows(),
                block: block_size,
                steps,
                slot: Box::new(move |r, j| a.slot_index(r, j)),
                column,
            }
        }
    };
    Ok(replay(&plan, model, precision))
}

fn replay(plan: &Plan, model: &AccessModel, precision: Precision) -> TrafficSimulation {
    let vb = precision.value_bytes() as u64;
    let ib = model.index_bytes as u64;
    let mut report = TransactionReport::default();
    let mut x_trace = Vec::new();
    let (mut values, mut columns, mut xs) = (Vec::new(), Vec::new(), Vec::new());

    let mut first = 0;
    while first < plan.num_rows {
        let end = (first + plan.block).min(plan.num_rows);
        let depth = plan.steps[first..end].iter().copied().max().unwrap_or(0);
        for j in 0..depth {
            for hw in (first..end).step_by(model.half_warp) {
                let hw_end = (hw + model.half_warp).min(end);
                for row in hw..hw_end {
                    if j >= plan.steps[row] {
                        continue;
                    }
                    let k = (plan.slot)(row, j);
                    let col = plan.column[k];
                    values.push(k as u64 * vb);
                    columns.push(k as u64 * ib);
                    xs.push(col as u64 * vb);
                    x_trace.push(col);
                }
                report.values.record(&mut values, vb, model);
                report.columns.record(&mut columns, ib, model);
                report.x.record(&mut xs, vb, model);
            }
        }
        for hw in (first..end).step_by(model.half_warp) {
            let hw_end = (hw + model.half_warp).min(end);
            let mut out: Vec<u64> = (hw..hw_end).map(|r| r as u64 * vb).collect();
            report.output.record(&mut out, vb, model);
        }
        first = end;
    }
    TrafficSimulation { report, x_trace }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::m8;

    fn sim(
        layout: KernelLayout,
        m: &TripletMatrix,
        block: usize,
        p: Precision,
    ) -> TrafficSimulation {
        simulate_spmv_traffic(layout, m, block, &AccessModel::default(), p).unwrap()
    }

    #[test]
    fn identity_32_is_fully_coalesced() {
        let m = TripletMatrix::identity(32);
        let r = sim(KernelLayout::Rgcsr, &m, 32, Precision::Single).report;
        assert_eq!(r.values.transactions, 2);
        assert_eq!(r.values.efficiency(), 1.0);
        assert_eq!(r.efficiency(), 1.0);
        let c = sim(KernelLayout::Csr, &m, 32, Precision::Single).report;
        assert_eq!(c.values.transactions, 2);
    }

    #[test]
    fn long_first_row_scatters_csr() {
        let mut raw: Vec<(usize, usize, f64)> = (0..32).map(|c| (0, c, 1.0)).collect();
        raw.extend((1..32).map(|r| (r, r, 1.0)));
        let m = TripletMatrix::canonicalize(raw, 32, 32).unwrap();

        // step-0 addresses of the first half-warp, by hand
        let csr_step0: Vec<u64> = std::iter::once(0).chain(32..47).map(|o| o * 4).collect();
        let model = AccessModel::default();
        assert!(count_segment_transactions(&csr_step0, &model) >= 2);
        let rg_step0: Vec<u64> = (0..16).map(|o| o * 4).collect();
        assert_eq!(count_segment_transactions(&rg_step0, &model), 1);

        let c = sim(KernelLayout::Csr, &m, 32, Precision::Single).report;
        let g = sim(KernelLayout::Rgcsr, &m, 32, Precision::Single).report;
        assert!(g.values.transactions < c.values.transactions);
    }

    #[test]
    fn m8_groups_of_four() {
        let m = m8();
        let c = sim(KernelLayout::Csr, &m, 4, Precision::Single).report;
        let g = sim(KernelLayout::Rgcsr, &m, 4, Precision::Single).report;
        assert_eq!(c.values.transactions, 5);
        assert_eq!(g.values.transactions, 5);
        // output: one write per half-warp (= group here)
        assert_eq!(g.output.transactions, 2);
    }

    #[test]
    fn ellpack_reads_every_slot() {
        let sim = sim(KernelLayout::Ellpack, &m8(), 8, Precision::Double);
        assert_eq!(sim.x_trace.len(), 24);
        assert_eq!(sim.report.values.transactions, 3);
    }

    #[test]
    fn x_trace_order() {
        // groups ascending, steps within group, threads within step
        let t = sim(KernelLayout::Rgcsr, &m8(), 4, Precision::Single).x_trace;
        assert_eq!(t, vec![0, 1, 2, 0, 3, 4, 0, 1, 2, 5, 4, 7, 6]);
        let t = sim(KernelLayout::Csr, &m8(), 4, Precision::Single).x_trace;
        assert_eq!(t.len(), 13);
    }

    #[test]
    fn unaligned_group_can_lose_to_sparse_csr() {
        // one 25-row group: step 1 reads words 25..=40, straddling the
        // 128-byte boundary, while CSR's few active rows pack into one segment
        let m = crate::synth::random_case(64, 0.3, crate::synth::Values::Real, 2088);
        assert_eq!(m.num_rows(), 25);
        let c = sim(KernelLayout::Csr, &m, 32, Precision::Single).report;
        let g = sim(KernelLayout::Rgcsr, &m, 32, Precision::Single).report;
        assert_eq!((g.values.transactions, c.values.transactions), (7, 6));
    }

    #[test]
    fn layout_names() {
        assert_eq!(
            "rgcsr".parse::<KernelLayout>().unwrap(),
            KernelLayout::Rgcsr
        );
        assert!(matches!(
            "bcsr".parse::<KernelLayout>(),
            Err(Error::UnsupportedFormat(_))
        ));
        assert!(matches!(
            "hybrid".parse::<KernelLayout>(),
            Err(Error::UnsupportedFormat(_))
        ));
    }

    #[test]
    fn zero_block_rejected() {
        assert!(simulate_spmv_traffic(
            KernelLayout::Csr,
            &m8(),
            0,
            &AccessModel::default(),
            Precision::Single
        )
        .is_err());
    }
}
