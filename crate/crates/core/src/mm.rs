//! Matrix Market coordinate files.
//!
//! Only the `coordinate` variant is handled. Fields `real`, `integer` and
//! `pattern` are accepted (pattern entries get value 1.0); symmetry is
//! `general` or `symmetric`, the latter mirrored into both triangles.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::matrix::{Triplet, TripletMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Real,
    Integer,
    Pattern,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_banner(line_no: usize, line: &str) -> Result<(Field, Symmetry)> {
    let tokens: Vec<String> = line
        .split_whitespace()
        .map(str::to_ascii_lowercase)
        .collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" {
        return Err(parse_err(line_no, "malformed Matrix Market banner"));
    }
    if tokens[1] != "matrix" {
        return Err(parse_err(
            line_no,
            format!("unsupported object `{}`", tokens[1]),
        ));
    }
    if tokens[2] != "coordinate" {
        return Err(parse_err(
            line_no,
            format!("unsupported format `{}` (only coordinate)", tokens[2]),
        ));
    }
    let field = match tokens[3].as_str() {
        "real" | "double" => Field::Real,
        "integer" => Field::Integer,
        "pattern" => Field::Pattern,
        other => return Err(parse_err(line_no, format!("unsupported field `{other}`"))),
    };
    let symmetry = match tokens[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        other => {
            return Err(parse_err(
                line_no,
                format!("unsupported symmetry `{other}`"),
            ))
        }
    };
    Ok((field, symmetry))
}

fn parse_index(tok: &str, bound: usize, line_no: usize, what: &str) -> Result<usize> {
    let i: usize = tok
        .parse()
        .map_err(|_| parse_err(line_no, format!("invalid {what} index `{tok}`")))?;
    if i == 0 || i > bound {
        return Err(parse_err(
            line_no,
            format!("{what} index {i} outside 1..={bound}"),
        ));
    }
    Ok(i - 1)
}

/// Reads a coordinate Matrix Market stream into canonical form.
///
/// Errors carry the 1-based line number of the offending line.
pub fn parse_matrix_market<R: BufRead>(reader: R) -> Result<TripletMatrix> {
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (field, symmetry) = match lines.next() {
        Some((no, line)) => parse_banner(no, &line?)?,
        None => return Err(parse_err(1, "empty input")),
    };

    let mut header: Option<(usize, usize, usize)> = None;
    let mut raw: Vec<Triplet> = Vec::new();
    let mut seen = 0usize;
    let mut last_line = 1;

    for (no, line) in lines {
        let line = line?;
        last_line = no;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let toks: Vec<&str> = trimmed.split_whitespace().collect();
        let Some((rows, cols, declared)) = header else {
            if toks.len() != 3 {
                return Err(parse_err(no, "expected size line `rows cols nnz`"));
            }
            let parse = |t: &str| {
                t.parse::<usize>()
                    .map_err(|_| parse_err(no, format!("invalid size `{t}`")))
            };
            header = Some((parse(toks[0])?, parse(toks[1])?, parse(toks[2])?));
            raw.reserve(header.map_or(0, |h| h.2));
            continue;
        };

        if seen == declared {
            return Err(parse_err(
                no,
                format!("more entries than the declared {declared}"),
            ));
        }
        let expected_toks = if field == Field::Pattern { 2 } else { 3 };
        if toks.len() != expected_toks {
            return Err(parse_err(
                no,
                format!("expected {expected_toks} fields, found {}", toks.len()),
            ));
        }
        let row = parse_index(toks[0], rows, no, "row")?;
        let col = parse_index(toks[1], cols, no, "column")?;
        let value = match field {
            Field::Pattern => 1.0,
            Field::Integer => toks[2]
                .parse::<i64>()
                .map_err(|_| parse_err(no, format!("invalid integer value `{}`", toks[2])))?
                as f64,
            Field::Real => toks[2]
                .parse::<f64>()
                .map_err(|_| parse_err(no, format!("invalid real value `{}`", toks[2])))?,
        };
        raw.push(Triplet::new(row, col, value));
        if symmetry == Symmetry::Symmetric && row != col {
            if rows != cols {
                return Err(parse_err(no, "symmetric storage requires a square matrix"));
            }
            raw.push(Triplet::new(col, row, value));
        }
        seen += 1;
    }

    let Some((rows, cols, declared)) = header else {
        return Err(parse_err(last_line, "missing size line"));
    };
    if seen != declared {
        return Err(parse_err(
            last_line,
            format!("declared {declared} entries, found {seen}"),
        ));
    }
    TripletMatrix::canonicalize(raw, rows, cols)
}

pub fn parse_matrix_market_str(text: &str) -> Result<TripletMatrix> {
    parse_matrix_market(text.as_bytes())
}

pub fn read_matrix_market_file(path: impl AsRef<std::path::Path>) -> Result<TripletMatrix> {
    let file = std::fs::File::open(path)?;
    parse_matrix_market(std::io::BufReader::new(file))
}

/// Writes `m` as a `real general` coordinate file.
///
/// Values use the shortest representation that parses back to the same
/// double, so a write/parse cycle is lossless.
pub fn write_matrix_market<W: Write>(m: &TripletMatrix, mut out: W) -> Result<()> {
    writeln!(out, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(out, "{} {} {}", m.num_rows(), m.num_cols(), m.nnz())?;
    for t in m.entries() {
        writeln!(out, "{} {} {:?}", t.row + 1, t.col + 1, t.value)?;
    }
    Ok(())
}

pub fn to_matrix_market_string(m: &TripletMatrix) -> String {
    let mut buf = Vec::new();
    write_matrix_market(m, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("ascii output")
}
