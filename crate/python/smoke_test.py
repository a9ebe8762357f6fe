"""Smoke test for the rgcsr_py extension.

Build and install first:
    pip install maturin
    (cd crates/python && maturin build --release -o ../../target/wheels)
    pip install target/wheels/rgcsr_py-*.whl
then run `python python/smoke_test.py` (or with pytest).
"""

import math

import rgcsr_py as rg


def m8():
    return rg.Matrix.example()


def test_matrix_basics():
    m = m8()
    assert (m.num_rows, m.num_cols, m.nnz) == (8, 8, 13)
    assert m.row_lengths() == [2, 1, 1, 1, 1, 2, 3, 2]
    assert sum(m.spmv_reference([1.0] * 8)) == 91.0
    again = rg.Matrix.parse_matrix_market(m.to_matrix_market())
    assert again == m
    built = rg.Matrix(2, 2, [0, 1, 0], [0, 1, 0], [1.0, 2.0, 3.0])
    assert built.triplets() == [(0, 0, 4.0), (1, 1, 2.0)]


def test_fixture_fills():
    m = m8()
    zeros = {
        kind: rg.Format(kind, m, group_size=4).fill_report()["artificial_zeros"]
        for kind in ["csr", "ellpack", "coo", "hybrid", "bcsr", "rgcsr"]
    }
    assert zeros == {"csr": 0, "ellpack": 11, "coo": 0, "hybrid": 0, "bcsr": 35, "rgcsr": 7}
    rg4 = rg.Format("rgcsr", m, group_size=4).arrays()
    assert rg4["groupPointers"] == [0, 8, 20]
    csr = rg.Format("csr", m).arrays()
    assert csr["rowPointers"] == [0, 2, 3, 4, 5, 6, 8, 11, 13]


def test_every_format_matches_oracle():
    m = rg.Matrix.banded(200, seed=4)
    x = [((i * 37) % 17) - 8.0 for i in range(m.num_cols)]
    want = m.spmv_reference(x)
    for kind in ["csr", "ellpack", "coo", "hybrid", "bcsr", "rgcsr"]:
        f = rg.Format(kind, m, group_size=32)
        got = f.spmv(x)
        assert max(abs(a - b) for a, b in zip(got, want)) <= 1e-12 * max(map(abs, want))
        assert f.to_matrix() == m


def test_reorder():
    m = m8()
    order = m.descending_permutation()
    assert order == [6, 0, 5, 7, 1, 2, 3, 4]
    pm = m.permute(order)
    assert rg.Format("rgcsr", pm, group_size=4).fill_report()["artificial_zeros"] == 3
    try:
        m.permute([0, 0, 1, 2, 3, 4, 5, 6])
    except ValueError as e:
        assert "bijection" in str(e)
    else:
        raise AssertionError("duplicate index accepted")


def test_models():
    assert [rg.peak_performance(p, c)["gflops"] for p, c in
            [("single", False), ("double", False), ("single", True), ("double", True)]] == [23.5, 14.1, 35.25, 23.5]
    assert rg.measured_gflops(1_000_000, 1e-3) == 2.0
    assert rg.count_segment_transactions([i * 4 for i in range(16)]) == 1
    assert rg.count_segment_transactions([i * 128 for i in range(16)]) == 16
    assert rg.count_segment_transactions([64 + i * 8 for i in range(16)]) == 2
    assert rg.simulate_texture_cache([0, 0, 0], 4) == {"hits": 2, "misses": 1}
    assert rg.choose_k1([2, 1, 1, 1, 1, 2, 3, 2]) == 1

    eye = rg.Matrix(32, 32, list(range(32)), list(range(32)), [1.0] * 32)
    r = rg.simulate("rgcsr", eye, group_size=32)
    assert r["transactions"]["values"] == 2 and r["efficiency"] == 1.0
    assert set(r) == {"artificial_zeros", "transactions", "min_possible", "efficiency", "cache", "peak"}
    a = rg.simulate("rgcsr", m8(), group_size=4)
    b = rg.simulate("csr", m8(), group_size=4)
    assert a["transactions"]["values"] <= b["transactions"]["values"]


def test_inspect_and_bench():
    report = rg.inspect(m8(), formats=["rgcsr", "ellpack", "bcsr"], group_sizes=[4], name="m8")
    assert [f["artificial_zeros"] for f in report["fills"]] == [7, 11, 35]
    assert report["stats"]["row_len_max"] == 3

    recs = rg.bench_spmv(m8(), formats=["csr"], precisions=["double"], repetitions=3, x_ones=True)
    assert len(recs) == 1 and recs[0]["checksum"] == 91.0
    recs = rg.bench_spmv(rg.Matrix.banded(500), group_sizes=[32, 64], repetitions=2, ordering="descending")
    assert len(recs) == 2 * (2 + 2)
    for r in recs:
        assert math.isclose(r["gflops"], 2 * r["nnz"] / r["median_seconds"] / 1e9, rel_tol=1e-12)


if __name__ == "__main__":
    tests = [(k, v) for k, v in sorted(globals().items()) if k.startswith("test_")]
    for name, fn in tests:
        fn()
        print(f"ok {name}")
    print(f"{len(tests)} smoke tests passed")
