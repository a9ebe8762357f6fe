//! Sparse storage formats for GPU-style SpMV.
//!
//! The crate centres on the Row-grouped CSR layout ([`formats::RgcsrMatrix`]):
//! rows are split into fixed-size groups and each group is stored slot-major,
//! so one thread per row reads consecutive addresses on every step. Around it
//! sit the usual comparison formats (CSR, ELLPACK, COO, Hybrid, Blocked CSR),
//! artificial-zero accounting, row reordering, and a deterministic model of
//! segment-coalesced memory traffic and texture-cache reuse.
//!
//! Every format is built from a canonical [`TripletMatrix`] and its SpMV is
//! checked against [`TripletMatrix::spmv_reference`].

pub mod bench;
pub mod error;
pub mod formats;
pub mod matrix;
pub mod memsim;
pub mod mm;
pub mod reorder;
pub mod synth;

pub use error::{Error, Result};
pub use formats::{
    BcsrMatrix, CooArrays, CsrMatrix, EllpackMatrix, FillReport, HybridMatrix, RgcsrMatrix, Scalar,
    SparseFormat,
};
pub use matrix::{MatrixStats, Triplet, TripletMatrix};
pub use memsim::{
    AccessModel, CacheConfig, CacheReport, PeakEstimate, Precision, TransactionReport,
};
pub use reorder::{Permutation, PermuteMode};
