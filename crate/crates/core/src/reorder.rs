//! Row reorderings that reduce RgCSR padding, and ingestion of externally
//! computed permutations (e.g. AMD orderings).

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{Triplet, TripletMatrix};

/// Row permutation: new row `i` is old row `map[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Permutation {
    map: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PermuteMode {
    /// Rows move, columns stay.
    RowsOnly,
    /// Rows and columns move by the same map (`P A P^T`).
    Symmetric,
}

impl Permutation {
    /// Validates that `map` is a bijection on `0..map.len()`.
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for (i, &m) in map.iter().enumerate() {
            if m >= n {
                return Err(Error::InvalidPermutation(format!(
                    "position {i}: index {m} out of range 0..{n}"
                )));
            }
            if std::mem::replace(&mut seen[m], true) {
                return Err(Error::InvalidPermutation(format!(
                    "not a bijection: index {m} repeated at position {i}"
                )));
            }
        }
        Ok(Self { map })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            map: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    /// `inverse()[old] = new`.
    pub fn inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.map.len()];
        for (new, &old) in self.map.iter().enumerate() {
            inv[old] = new;
        }
        inv
    }

    /// Reorders `v` so that `out[i] = v[map[i]]`.
    pub fn apply_to_vector<T: Copy>(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.map.len() {
            return Err(Error::DimensionMismatch {
                expected: self.map.len(),
                actual: v.len(),
            });
        }
        Ok(self.map.iter().map(|&old| v[old]).collect())
    }

    /// One 0-based index per line; blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let idx = line.parse::<usize>().map_err(|_| Error::Parse {
                line: no + 1,
                msg: format!("invalid permutation index `{line}`"),
            })?;
            map.push(idx);
        }
        Self::new(map)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.map.len() * 6);
        for i in &self.map {
            s.push_str(&i.to_string());
            s.push('\n');
        }
        s
    }
}

/// Rows ordered by decreasing length; equal lengths keep their original order.
pub fn descending_row_permutation(m: &TripletMatrix) -> Permutation {
    let lens = m.row_lengths();
    let mut map: Vec<usize> = (0..m.num_rows()).collect();
    map.sort_by(|&a, &b| lens[b].cmp(&lens[a]));
    Permutation { map }
}

pub fn load_permutation(text: &str) -> Result<Permutation> {
    Permutation::parse(text)
}

pub fn apply_permutation(
    m: &TripletMatrix,
    p: &Permutation,
    mode: PermuteMode,
) -> Result<TripletMatrix> {
    if p.len() != m.num_rows() {
        return Err(Error::DimensionMismatch {
            expected: m.num_rows(),
            actual: p.len(),
        });
    }
    if mode == PermuteMode::Symmetric && m.num_rows() != m.num_cols() {
        return Err(Error::InvalidArgument(format!(
            "symmetric permutation needs a square matrix, got {}x{}",
            m.num_rows(),
            m.num_cols()
        )));
    }
    let inv = p.inverse();
    let raw = m.entries().iter().map(|t| {
        let col = match mode {
            PermuteMode::RowsOnly => t.col,
            PermuteMode::Symmetric => inv[t.col],
        };
        Triplet::new(inv[t.row], col, t.value)
    });
    TripletMatrix::canonicalize(raw, m.num_rows(), m.num_cols())
}

/// Row ordering applied before building formats.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Ordering {
    #[default]
    None,
    Descending,
    /// Permutation file in [`Permutation::parse`] syntax, applied rows-only.
    File(PathBuf),
}

impl Ordering {
    /// The permutation this ordering induces on `m`.
    pub fn permutation(&self, m: &TripletMatrix) -> Result<Permutation> {
        match self {
            Ordering::None => Ok(Permutation::identity(m.num_rows())),
            Ordering::Descending => Ok(descending_row_permutation(m)),
            Ordering::File(path) => load_permutation(&std::fs::read_to_string(path)?),
        }
    }

    pub fn apply(&self, m: &TripletMatrix) -> Result<TripletMatrix> {
        match self {
            Ordering::None => Ok(m.clone()),
            _ => apply_permutation(m, &self.permutation(m)?, PermuteMode::RowsOnly),
        }
    }
}

impl fmt::Display for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ordering::None => f.write_str("none"),
            Ordering::Descending => f.write_str("descending"),
            Ordering::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl FromStr for Ordering {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Ordering::None),
            "descending" => Ok(Ordering::Descending),
            _ => match s.strip_prefix("file:") {
                Some(path) if !path.is_empty() => Ok(Ordering::File(PathBuf::from(path))),
                _ => Err(Error::InvalidArgument(format!(
                    "ordering must be none, descending or file:PATH, got `{s}`"
                ))),
            },
        }
    }
}
