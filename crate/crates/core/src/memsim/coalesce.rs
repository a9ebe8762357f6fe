use super::AccessModel;

/// Transactions needed for one half-warp memory step: the number of distinct
/// aligned segments hit by `addresses` (one byte address per active thread).
///
/// Each element is assumed to lie inside a single segment, which holds for
/// naturally aligned 4- and 8-byte elements.
pub fn count_segment_transactions(addresses: &[u64], model: &AccessModel) -> usize {
    let mut segments: Vec<u64> = addresses.iter().map(|a| a / model.segment_bytes).collect();
    segments.sort_unstable();
    segments.dedup();
    segments.len()
}
