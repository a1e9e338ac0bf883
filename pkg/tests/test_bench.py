from app.services.bench import SKIPPED_BUDGET, SKIPPED_PRECISION, bench_cell, run_bench


def test_bench_cell_ok():
    row = bench_cell(3, "exact-divisor")
    assert row.status == "ok"
    assert row.p_next == 7
    assert row.term_count == 8
    assert row.peak_bits == 30
    assert row.precision_bits is None
    assert row.wall_ms >= 0


def test_bench_cell_interval_records_precision():
    row = bench_cell(5, "interval")
    assert row.status == "ok"
    assert row.p_next == 13
    assert row.precision_bits == 64


def test_bench_cell_over_budget_is_skipped():
    row = bench_cell(12, "exact-coprime")
    assert row.status == SKIPPED_BUDGET
    assert row.peak_bits == 7420738134810
    assert row.wall_ms is None
    assert row.to_dict()["p_next"] is None


def test_bench_cell_precision_ceiling_is_skipped():
    row = bench_cell(4, "interval", initial_precision=8, max_precision=8)
    assert row.status == SKIPPED_PRECISION


def test_run_bench_orders_rows():
    rows = run_bench(range(1, 4), ("interval", "exact-divisor"))
    assert [(r.n, r.strategy) for r in rows] == [
        (1, "interval"), (1, "exact-divisor"),
        (2, "interval"), (2, "exact-divisor"),
        (3, "interval"), (3, "exact-divisor"),
    ]
    assert [r.p_next for r in rows] == [3, 3, 5, 5, 7, 7]


def test_run_bench_passes_budget_through():
    rows = run_bench([4], ("exact-divisor",), bit_budget=100)
    assert rows[0].status == SKIPPED_BUDGET
    assert rows[0].peak_bits == 210
