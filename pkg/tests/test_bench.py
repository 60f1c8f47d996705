import json
from pathlib import Path

import pytest

from philyap.bench import (CSV_COLUMNS, RunReport, median_time, parse_ladder, parse_range,
                           run_integrate_ladder, run_phi_bench)

GOLDEN = Path(__file__).parent / "golden" / "csv_header.txt"


def test_csv_header_matches_golden():
    report = run_phi_bench(n=4, ls=[1], cases=["zero"], repeats=1)
    assert report.csv_text().splitlines()[0] + "\n" == GOLDEN.read_text()
    assert ",".join(CSV_COLUMNS) + "\n" == GOLDEN.read_text()


def test_rows_sorted_and_formatted(tmp_path):
    report = run_phi_bench(n=4, ls=[2, 1], cases=["jordan", "identity"], repeats=1)
    keys = [(r.case, r.l_or_scheme) for r in report.rows]
    assert keys == [("identity", "1"), ("identity", "2"), ("jordan", "1"), ("jordan", "2")]
    csv_path, json_path = report.write(tmp_path / "out")
    line = Path(csv_path).read_text().splitlines()[1].split(",")
    assert "e" in line[2] and "e" in line[6]
    assert len(line[2].split("e")[0].replace(".", "").lstrip("-")) >= 7
    data = json.loads(Path(json_path).read_text())
    assert data["columns"] == list(CSV_COLUMNS)
    assert data["metadata"]["seed"] == 42
    assert len(data["rows"]) == 4


def test_worker_pool_gives_same_rows():
    a = run_phi_bench(n=4, ls=[1, 3], cases=["random_dense", "nilpotent"], repeats=1)
    b = run_phi_bench(n=4, ls=[1, 3], cases=["random_dense", "nilpotent"], repeats=1, workers=2)
    strip = lambda rep: [(r.case, r.l_or_scheme, r.error, r.products, r.m, r.s) for r in rep.rows]
    assert strip(a) == strip(b)


def test_oracle_off_and_scale_guard():
    rep = run_phi_bench(n=4, ls=[1], cases=["identity"], oracle=False, repeats=1)
    assert rep.rows[0].error is None and rep.rows[0].oracle == "off"
    assert rep.csv_text().splitlines()[1].split(",")[2] == ""


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_phi_bench("bogus")


def test_median_time():
    calls = []
    t, out = median_time(lambda: calls.append(1) or len(calls), repeats=5)
    assert len(calls) == 6 and out == 6 and t >= 0


def test_ranges():
    assert parse_range("1..4") == [1, 2, 3, 4]
    assert parse_range("2,5") == [2, 5]
    assert parse_ladder("16..512") == [16, 32, 64, 128, 256, 512]
    with pytest.raises(ValueError):
        parse_range("5..1")


def test_integrate_ladder_small():
    rep = run_integrate_ladder("exprb2", [4, 8, 16], n0=4, t_end=0.02, ref_steps=256)
    assert [r.l_or_scheme for r in rep.rows] == ["exprb2/4", "exprb2/8", "exprb2/16"]
    assert 1.7 < rep.metadata["slope"] < 2.3


def test_report_roundtrip_empty():
    assert RunReport([]).csv_text() == GOLDEN.read_text()
