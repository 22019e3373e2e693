"""CSV writers for schedules, simulation reports and comparison tables.

Every table is validated against its schema in ``src.qa.expectations`` before
it is written; the file is always produced, even with zero rows.
"""

from __future__ import annotations

import logging
from pathlib import Path

import pandas as pd
import pandera as pa

from src.common.diagnostics import validate_io
from src.qa.expectations import COMPARISON_SCHEMA, CORE_SCHEMA, GANTT_SCHEMA
from src.sentryrt.schedule import Schedule, gantt_rows
from src.simulator.mapped import SimReport

log = logging.getLogger(__name__)


def _write(df: pd.DataFrame, schema: pa.DataFrameSchema, path: Path) -> Path:
    if not df.empty:
        schema.validate(df)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(path, index=False, lineterminator="\n")
    log.info("wrote %d rows -> %s", len(df), path)
    return path


def gantt_frame(schedule: Schedule) -> pd.DataFrame:
    return pd.DataFrame(gantt_rows(schedule), columns=list(GANTT_SCHEMA.columns))


def core_frame(report: SimReport) -> pd.DataFrame:
    return pd.DataFrame([c.dict() for c in report.cores], columns=list(CORE_SCHEMA.columns))


@validate_io
def write_gantt(schedule: Schedule, path: Path) -> Path:
    return _write(gantt_frame(schedule), GANTT_SCHEMA, path)


@validate_io
def write_cores(report: SimReport, path: Path) -> Path:
    return _write(core_frame(report), CORE_SCHEMA, path)


@validate_io
def write_comparison(df: pd.DataFrame, path: Path) -> Path:
    return _write(df.reindex(columns=list(COMPARISON_SCHEMA.columns)), COMPARISON_SCHEMA, path)
