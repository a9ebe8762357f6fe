use serde::Serialize;

use super::{AccessModel, Precision};
use crate::error::{Error, Result};

/// Bandwidth-bound upper limit for the RgCSR kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeakEstimate {
    pub precision: Precision,
    pub cached_x: bool,
    pub bytes_per_nnz: usize,
    pub gflops: f64,
}

/// Each nonzero costs one column index and one matrix value, plus one `x`
/// value unless `x` is served from cache; it yields two flops. Pointer and
/// row-length arrays are left out.
pub fn peak_performance(model: &AccessModel, precision: Precision, cached_x: bool) -> PeakEstimate {
    let value = precision.value_bytes();
    let bytes_per_nnz = model.index_bytes + value + if cached_x { 0 } else { value };
    PeakEstimate {
        precision,
        cached_x,
        bytes_per_nnz,
        gflops: 2.0 * model.bandwidth_gb_s / bytes_per_nnz as f64,
    }
}

/// `2 * nnz / seconds / 1e9`.
pub fn measured_gflops(nnz: usize, seconds: f64) -> Result<f64> {
    if seconds.is_nan() || seconds <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "elapsed time must be positive, got {seconds}"
        )));
    }
    Ok(2.0 * nnz as f64 / seconds / 1e9)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn peaks_at_141_gb_s() {
        let m = AccessModel::with_bandwidth(141.0);
        let cases = [
            (Precision::Single, false, 12, 23.5),
            (Precision::Double, false, 20, 14.1),
            (Precision::Single, true, 8, 35.25),
            (Precision::Double, true, 12, 23.5),
        ];
        for (p, cached, bytes, gflops) in cases {
            let e = peak_performance(&m, p, cached);
            assert_eq!(e.bytes_per_nnz, bytes);
            assert_eq!(e.gflops, gflops, "{p} cached={cached}");
        }
    }

    #[test]
    fn gflops_arithmetic() {
        assert_eq!(measured_gflops(1_000_000, 1e-3).unwrap(), 2.0);
        assert_eq!(measured_gflops(0, 0.5).unwrap(), 0.0);
        assert!(measured_gflops(10, 0.0).is_err());
        assert!(measured_gflops(10, -1.0).is_err());
        assert!(measured_gflops(10, f64::NAN).is_err());
    }

    #[test]
    fn fd18_sized_rate() {
        // 63,406 nonzeros at 4.69 GFLOPS takes 2 * 63406 / 4.69e9 seconds
        let seconds = 2.0 * 63_406.0 / 4.69e9;
        let g = measured_gflops(63_406, seconds).unwrap();
        assert!((g - 4.69).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn linear_in_bandwidth(bw in 1.0f64..1000.0, k in 1u32..8, cached in any::<bool>()) {
            for p in [Precision::Single, Precision::Double] {
                let one = peak_performance(&AccessModel::with_bandwidth(bw), p, cached).gflops;
                let scaled = peak_performance(&AccessModel::with_bandwidth(bw * k as f64), p, cached).gflops;
                prop_assert!((scaled - one * k as f64).abs() <= 1e-12 * scaled);
            }
            let single = peak_performance(&AccessModel::with_bandwidth(bw), Precision::Single, cached);
            let double = peak_performance(&AccessModel::with_bandwidth(bw), Precision::Double, cached);
            prop_assert!(single.gflops > double.gflops);
        }
    }
}
