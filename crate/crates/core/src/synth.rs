//! Seeded synthetic matrices, plus the 8x8 example used throughout the tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{Triplet, TripletMatrix};

/// 8x8 matrix with 13 entries valued 1..13.
///
/// Its CSR row starts are 0,2,3,4,5,6,8,11; it needs three 4x4 tiles (35
/// padded slots), an ELLPACK width of 3 (11 pads) and 7 pads as RgCSR with
/// groups of 4.
pub fn m8() -> TripletMatrix {
    const POSITIONS: [(usize, usize); 13] = [
        (0, 0),
        (0, 3),
        (1, 1),
        (2, 2),
        (3, 0),
        (4, 4),
        (5, 0),
        (5, 5),
        (6, 1),
        (6, 4),
        (6, 6),
        (7, 2),
        (7, 7),
    ];
    let entries = POSITIONS
        .iter()
        .enumerate()
        .map(|(k, &(r, c))| Triplet::new(r, c, (k + 1) as f64))
        .collect();
    TripletMatrix::from_sorted_unchecked(8, 8, entries)
}

/// Value distribution for generated entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Values {
    /// Uniform integers in `[-bound, bound]`.
    Integer(i32),
    /// Uniform doubles in `[-1, 1)`.
    Real,
}

fn draw(rng: &mut ChaCha8Rng, values: Values) -> f64 {
    match values {
        Values::Integer(b) => rng.random_range(-b..=b) as f64,
        Values::Real => rng.random_range(-1.0..1.0),
    }
}

/// Each cell is present independently with probability `density`.
pub fn random(
    num_rows: usize,
    num_cols: usize,
    density: f64,
    values: Values,
    seed: u64,
) -> Result<TripletMatrix> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidArgument(format!(
            "density {density} outside [0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::new();
    for r in 0..num_rows {
        for c in 0..num_cols {
            if rng.random_bool(density) {
                entries.push(Triplet::new(r, c, draw(&mut rng, values)));
            }
        }
    }
    Ok(TripletMatrix::from_sorted_unchecked(
        num_rows, num_cols, entries,
    ))
}

/// Square matrix with a full band of half-width `half_bandwidth` plus
/// `extra_per_row` random off-band entries per row on average.
pub fn banded(
    n: usize,
    half_bandwidth: usize,
    extra_per_row: f64,
    values: Values,
    seed: u64,
) -> TripletMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut raw = Vec::new();
    for r in 0..n {
        let lo = r.saturating_sub(half_bandwidth);
        let hi = (r + half_bandwidth).min(n.saturating_sub(1));
        for c in lo..=hi {
            raw.push(Triplet::new(r, c, draw(&mut rng, values)));
        }
        if n > 0 && extra_per_row > 0.0 {
            let p = (extra_per_row / n as f64).min(1.0);
            for c in 0..n {
                if (c < lo || c > hi) && rng.random_bool(p) {
                    raw.push(Triplet::new(r, c, draw(&mut rng, values)));
                }
            }
        }
    }
    TripletMatrix::canonicalize(raw, n, n).expect("generated indices are in bounds")
}

/// Pseudo-random vector with entries in `[-1, 1)`.
pub fn random_vector(len: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| rng.random_range(-1.0..1.0)).collect()
}

/// Pseudo-random vector of integers in `[-bound, bound]`.
pub fn integer_vector(len: usize, bound: i32, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len)
        .map(|_| rng.random_range(-bound..=bound) as f64)
        .collect()
}

/// Random matrix shape used by the randomized checks: up to `max_rows` rows
/// and columns, density drawn from `[0, max_density]`.
pub fn random_case(max_rows: usize, max_density: f64, values: Values, seed: u64) -> TripletMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let rows = rng.random_range(1..=max_rows);
    let cols = rng.random_range(1..=max_rows);
    let density = rng.random_range(0.0..=max_density);
    random(rows, cols, density, values, seed).expect("density in range")
}
