from pathlib import Path

import pandas as pd
import pytest

from src.reporting import directions


def _fig9(one, two, four, eight):
    rows = zip(["1-config", "2-config", "4-config", "8-config"], [one, two, four, eight])
    return pd.DataFrame(
        [{"suite": "fig9", "workload": "w", "variant": v, "total_pj": e} for v, e in rows]
    )


def test_directions_pass(tmp_path, monkeypatch):
    csv = tmp_path / "fig9.csv"
    _fig9(100.0, 80.0, 60.0, 59.0).to_csv(csv, index=False)
    monkeypatch.chdir(tmp_path)
    out = directions.run(csv, tmp_path / "report.html")
    assert Path(out).exists()
    assert "All directions hold" in Path(out).read_text()


def test_directions_fail(tmp_path, monkeypatch):
    csv = tmp_path / "fig9.csv"
    _fig9(100.0, 80.0, 90.0, 90.0).to_csv(csv, index=False)
    monkeypatch.chdir(tmp_path)
    with pytest.raises(RuntimeError, match="not ordered"):
        directions.run(csv, tmp_path / "report.html")
    assert "Failed" in (tmp_path / "report.html").read_text()


def _rows(suite, columns, *values):
    return pd.DataFrame([dict(zip(columns, v), suite=suite, workload="w") for v in values])


def test_bus_and_pipeline_checks():
    cols = ("variant", "interconnect_pj", "interconnect_latency_ps")
    bus = _rows("fig8", cols, ("noc", 5.0, 600), ("segbus", 6.0, 50))
    assert directions.check_directions(bus) == ["w: segmented bus energy not below NoC"]

    cols = ("variant", "cores", "throughput_per_us")
    piped = _rows("fig10", cols, ("non-pipelined", 3, 100.0), ("pipelined", 3, 105.0))
    assert len(directions.check_directions(piped)) == 1
    assert directions.check_directions(piped.assign(cores=1)) == []
