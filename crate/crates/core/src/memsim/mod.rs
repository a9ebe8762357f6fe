//! Deterministic model of coalesced global-memory traffic.
//!
//! Global memory is served in aligned segments (128 bytes by default) and
//! requests are issued per half-warp: one memory step of a half-warp costs
//! one transaction per distinct segment its active threads touch. The model
//! counts logical transactions only; there is no notion of latency, cycles
//! or occupancy.

mod cache;
mod coalesce;
mod roofline;
mod traffic;

use serde::Serialize;

pub use crate::formats::Precision;
pub use cache::{simulate_texture_cache, CacheConfig, CacheReport};
pub use coalesce::count_segment_transactions;
pub use roofline::{measured_gflops, peak_performance, PeakEstimate};
pub use traffic::{
    simulate_spmv_traffic, ArrayTraffic, KernelLayout, TrafficSimulation, TransactionReport,
};

use crate::error::{Error, Result};
use crate::formats::{EllpackMatrix, RgcsrMatrix, SparseFormat};
use crate::matrix::TripletMatrix;

/// Hardware parameters of the cost model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AccessModel {
    pub segment_bytes: u64,
    pub half_warp: usize,
    pub warp: usize,
    pub index_bytes: usize,
    pub bandwidth_gb_s: f64,
}

impl Default for AccessModel {
    /// 128-byte segments, 16/32-thread half-warp/warp, 4-byte indices, 141 GB/s.
    fn default() -> Self {
        Self {
            segment_bytes: 128,
            half_warp: 16,
            warp: 32,
            index_bytes: 4,
            bandwidth_gb_s: 141.0,
        }
    }
}

impl AccessModel {
    pub fn with_bandwidth(bandwidth_gb_s: f64) -> Self {
        Self {
            bandwidth_gb_s,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.segment_bytes.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "segment size {} is not a power of two",
                self.segment_bytes
            )));
        }
        if self.half_warp == 0 || self.half_warp > self.warp {
            return Err(Error::InvalidArgument(format!(
                "half-warp {} must be in 1..={}",
                self.half_warp, self.warp
            )));
        }
        if self.index_bytes == 0 {
            return Err(Error::InvalidArgument("index size must be positive".into()));
        }
        Ok(())
    }
}

/// JSON shape of a `simulate` run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    pub artificial_zeros: usize,
    pub transactions: TransactionCounts,
    pub min_possible: u64,
    pub efficiency: f64,
    pub cache: CacheReport,
    pub peak: PeakSummary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TransactionCounts {
    pub values: u64,
    pub columns: u64,
    pub x: u64,
    pub output: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeakSummary {
    pub bytes_per_nnz: usize,
    pub gflops: f64,
}

impl From<&TransactionReport> for TransactionCounts {
    fn from(r: &TransactionReport) -> Self {
        Self {
            values: r.values.transactions,
            columns: r.columns.transactions,
            x: r.x.transactions,
            output: r.output.transactions,
        }
    }
}

impl From<PeakEstimate> for PeakSummary {
    fn from(p: PeakEstimate) -> Self {
        Self {
            bytes_per_nnz: p.bytes_per_nnz,
            gflops: p.gflops,
        }
    }
}

/// Traffic, cache and peak figures for one kernel on `m`.
///
/// `group_size` is the RgCSR group and, for the other layouts, the thread
/// block size. The peak assumes `x` is served from the texture cache.
pub fn simulate(
    layout: KernelLayout,
    m: &TripletMatrix,
    group_size: usize,
    precision: Precision,
    model: &AccessModel,
    cache: &CacheConfig,
) -> Result<SimulationReport> {
    let sim = simulate_spmv_traffic(layout, m, group_size, model, precision)?;
    let cache = simulate_texture_cache(&sim.x_trace, cache, precision.value_bytes())?;
    let artificial_zeros = match layout {
        KernelLayout::Csr => 0,
        KernelLayout::Ellpack => {
            EllpackMatrix::<f64>::from_triplets(m)?
                .fill_report()
                .artificial_zeros
        }
        KernelLayout::Rgcsr => {
            RgcsrMatrix::<f64>::from_triplets(m, group_size)?
                .fill_report()
                .artificial_zeros
        }
    };
    Ok(SimulationReport {
        artificial_zeros,
        transactions: (&sim.report).into(),
        min_possible: sim.report.min_possible(),
        efficiency: sim.report.efficiency(),
        cache,
        peak: peak_performance(model, precision, true).into(),
    })
}
