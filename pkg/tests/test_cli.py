import json
from pathlib import Path

import pandas as pd
import pytest

from conftest import TINY_LAYERS
from src.cli import main
from src.qa.expectations import CORE_SCHEMA, GANTT_SCHEMA

DEEP = TINY_LAYERS[:2] + [{"type": "dense", "units": 4}, {"type": "dense", "units": 3}]


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    Path("workloads").mkdir()
    Path("workloads/deep.json").write_text(
        json.dumps({"name": "deep", "seed": 1, "threshold": 1, "layers": DEEP})
    )
    return tmp_path


def _pipeline(tag):
    steps = [
        ["generate", "--workload", "workloads/deep.json", "--out", f"{tag}/g.json"],
        ["compile", "--graph", f"{tag}/g.json", "--images", "2", "--out", f"{tag}/dfg.json"],
        [
            "schedule",
            "--dfg",
            f"{tag}/dfg.json",
            "--batch",
            "2",
            "--gantt",
            f"{tag}/gantt.csv",
            "--out",
            f"{tag}/sched.json",
        ],
        [
            "plan-bus",
            "--dfg",
            f"{tag}/dfg.json",
            "--schedule",
            f"{tag}/sched.json",
            "--out",
            f"{tag}/bus.json",
        ],
        [
            "simulate",
            "--dfg",
            f"{tag}/dfg.json",
            "--schedule",
            f"{tag}/sched.json",
            "--bus",
            f"{tag}/bus.json",
            "--images",
            "2",
            "--cores-csv",
            f"{tag}/cores.csv",
            "--out",
            f"{tag}/report.json",
        ],
    ]
    for argv in steps:
        assert main(argv) == 0, argv[0]


def test_end_to_end(workdir):
    _pipeline("a")
    dfg = json.loads(Path("a/dfg.json").read_text())
    assert dfg["kind"] == "dfg"
    assert set(dfg["inputs"]) == {"graph", "hardware"}
    assert len(dfg["payload"]["dfg"]["subnets"]) >= 2

    gantt = pd.read_csv("a/gantt.csv")
    assert list(gantt.columns) == list(GANTT_SCHEMA.columns)
    assert set(gantt["image"]) == {0, 1}

    report = json.loads(Path("a/report.json").read_text())
    assert report["payload"]["images"] == 2
    assert report["payload"]["spikes_conserved"]
    assert report["payload"]["summary"]["interconnect"] == "segbus"
    cores = pd.read_csv("a/cores.csv")
    assert list(cores.columns) == list(CORE_SCHEMA.columns)
    assert len(cores) == len(dfg["payload"]["dfg"]["subnets"])


def test_noc_baseline(workdir):
    _pipeline("a")
    plan = ["plan-bus", "--dfg", "a/dfg.json", "--interconnect", "noc"]
    assert main(plan + ["--out", "a/noc.json"]) == 0
    argv = ["simulate", "--dfg", "a/dfg.json", "--schedule", "a/sched.json", "--bus", "a/noc.json"]
    assert main(argv + ["--images", "2", "--out", "a/noc-report.json"]) == 0
    sb = json.loads(Path("a/report.json").read_text())["payload"]
    noc = json.loads(Path("a/noc-report.json").read_text())["payload"]
    assert noc["interconnect"] == "noc"
    assert noc["output_spikes"] == sb["output_spikes"]
    assert noc["makespan_ps"] > sb["makespan_ps"]


def test_outputs_are_reproducible(workdir):
    _pipeline("a")
    _pipeline("b")
    for name in ("g.json", "dfg.json", "sched.json", "bus.json", "report.json", "gantt.csv"):
        assert Path("a", name).read_bytes() == Path("b", name).read_bytes(), name


def test_stats(workdir, capsys):
    assert main(["generate", "--workload", "workloads/deep.json", "--out", "g.json"]) == 0
    assert main(["stats", "--graph", "g.json"]) == 0
    printed = json.loads(capsys.readouterr().out)
    assert printed["l1_max"] == 9
    assert main(["stats", "--graph", "g.json", "--out", "stats.json"]) == 0
    assert json.loads(Path("stats.json").read_text()) == printed


def test_mixed_versions_rejected(workdir, capsys):
    _pipeline("a")
    other = dict(json.loads(Path("workloads/deep.json").read_text()), seed=2)
    Path("workloads/other.json").write_text(json.dumps(other))
    assert main(["generate", "--workload", "workloads/other.json", "--out", "o/g.json"]) == 0
    assert main(["compile", "--graph", "o/g.json", "--out", "o/dfg.json"]) == 0
    capsys.readouterr()
    argv = ["plan-bus", "--dfg", "o/dfg.json", "--schedule", "a/sched.json", "--out", "x.json"]
    assert main(argv) == 1
    assert "inconsistent artifact versions" in capsys.readouterr().err
    assert not Path("x.json").exists()


def test_tampered_artifact_rejected(workdir, capsys):
    _pipeline("a")
    data = json.loads(Path("a/sched.json").read_text())
    data["payload"]["summary"]["makespan_ps"] += 1
    Path("a/sched.json").write_text(json.dumps(data))
    argv = ["plan-bus", "--dfg", "a/dfg.json", "--schedule", "a/sched.json", "--out", "x.json"]
    assert main(argv) == 1
    assert "inconsistent artifact versions" in capsys.readouterr().err


def test_stage_errors_exit_nonzero(workdir):
    assert main(["compile", "--graph", "missing.json", "--out", "dfg.json"]) == 1
    _pipeline("a")
    assert main(["plan-bus", "--dfg", "a/dfg.json", "--out", "bus.json"]) == 1


def test_compare_with_report(workdir):
    argv = ["compare", "--suite", "fig8", "--workloads", "workloads", "--workers", "1"]
    assert main(argv + ["--out", "fig8.csv", "--report", "fig8.html"]) == 0
    df = pd.read_csv("fig8.csv")
    assert list(df["variant"]) == ["noc", "segbus"]
    assert "All directions hold" in Path("fig8.html").read_text()
