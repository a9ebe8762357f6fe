use std::path::PathBuf;

use rgcsr::mm::{parse_matrix_market_str, read_matrix_market_file, to_matrix_market_string};
use rgcsr::synth::m8;
use rgcsr::{CsrMatrix, RgcsrMatrix, SparseFormat};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

#[test]
fn m8_file_matches_fixture() {
    let m = read_matrix_market_file(data("m8.mtx")).unwrap();
    assert_eq!(m, m8());
}

#[test]
fn m8_rgcsr_dump() {
    let a = RgcsrMatrix::<f64>::from_triplets(&m8(), 4).unwrap();
    let got: serde_json::Value = serde_json::from_str(&a.to_debug_json()).unwrap();
    let want: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(data("m8_rgcsr_g4.json")).unwrap()).unwrap();
    assert_eq!(got, want);
}

#[test]
fn m8_csr_dump() {
    let a = CsrMatrix::<f64>::from_triplets(&m8());
    let v: serde_json::Value = serde_json::from_str(&a.to_debug_json()).unwrap();
    assert_eq!(
        v["rowPointers"],
        serde_json::json!([0, 2, 3, 4, 5, 6, 8, 11, 13])
    );
    assert_eq!(
        v["columns"],
        serde_json::json!([0, 3, 1, 2, 0, 4, 0, 5, 1, 4, 6, 2, 7])
    );
}

#[test]
fn writer_round_trip() {
    let text = to_matrix_market_string(&m8());
    assert_eq!(parse_matrix_market_str(&text).unwrap(), m8());
}
