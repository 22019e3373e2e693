import pandas as pd

from conftest import make_dfg
from src.export.csv import write_comparison, write_cores, write_gantt
from src.qa.expectations import COMPARISON_SCHEMA
from src.sentryrt.pipelines import allocate_pipelines
from src.sentryrt.schedule import schedule_batch
from src.simulator.mapped import CoreReport, SimReport


def _report():
    return SimReport(
        name="r",
        interconnect="segbus",
        images=1,
        cores=(
            CoreReport(core=0, config="little-1", spikes=3, static_fj=10, dynamic_fj=78_000),
            CoreReport(core=1, config="little-2", spikes=0, static_fj=40, dynamic_fj=0),
        ),
        interconnect_fj=100,
        latencies_ps=(5000,),
        makespan_ps=5000,
        channel_spikes={0: 1},
        output_spikes={},
        total_spikes=3,
        spikes_conserved=True,
    )


def test_write_gantt(tmp_path):
    dfg = make_dfg([3, 4], [(0, 1)])
    schedule = schedule_batch(dfg, allocate_pipelines(dfg, 2), 2)
    out = write_gantt(schedule, tmp_path / "out" / "gantt.csv")
    df = pd.read_csv(out)
    assert len(df) == 4
    assert list(df["end_ps"]) == [3, 7, 6, 11]


def test_write_cores(tmp_path):
    df = pd.read_csv(write_cores(_report(), tmp_path / "cores.csv"))
    assert list(df.columns) == ["core", "config", "spikes", "static_fj", "dynamic_fj"]
    assert df["dynamic_fj"].sum() == 78_000


def test_empty_comparison_writes_header(tmp_path):
    out = write_comparison(pd.DataFrame(), tmp_path / "empty.csv")
    assert out.read_text().strip() == ",".join(COMPARISON_SCHEMA.columns)


def test_report_totals():
    r = _report()
    assert r.core_fj == 78_050
    assert r.total_fj == 78_150
    assert r.total_pj == 78.15
    assert r.throughput == 1 / 5000
    assert r.summary()["cores"] == 2
