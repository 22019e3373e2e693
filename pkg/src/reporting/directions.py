"""Direction checks on comparison tables, rendered as a small HTML report."""

from __future__ import annotations

import html
import logging
from pathlib import Path

import pandas as pd

log = logging.getLogger(__name__)

SAVING_4_VS_1 = 0.15
GAP_8_VS_4 = 0.05
PIPELINE_GAIN = 0.10


def _by_variant(df: pd.DataFrame, column: str) -> dict[str, dict[str, float]]:
    out: dict[str, dict[str, float]] = {}
    for row in df.itertuples(index=False):
        out.setdefault(row.workload, {})[row.variant] = getattr(row, column)
    return out


def _fig4(df: pd.DataFrame) -> list[str]:
    issues = []
    for w, v in _by_variant(df, "total_pj").items():
        if not v["custom"] < v["conservative"]:
            issues.append(f"{w}: custom cores do not beat the conservative design")
    return issues


def _fig8(df: pd.DataFrame) -> list[str]:
    issues = []
    energy = _by_variant(df, "interconnect_pj")
    latency = _by_variant(df, "interconnect_latency_ps")
    for w in energy:
        if energy[w]["noc"] == 0:
            continue
        if not energy[w]["segbus"] < energy[w]["noc"]:
            issues.append(f"{w}: segmented bus energy not below NoC")
        if not latency[w]["segbus"] < latency[w]["noc"]:
            issues.append(f"{w}: segmented bus latency not below NoC")
    return issues


def _fig9(df: pd.DataFrame) -> list[str]:
    issues = []
    for w, v in _by_variant(df, "total_pj").items():
        one, two, four, eight = v["1-config"], v["2-config"], v["4-config"], v["8-config"]
        if not one > two > four >= eight:
            issues.append(f"{w}: energy not ordered 1 > 2 > 4 >= 8 configs")
        if four > (1 - SAVING_4_VS_1) * one:
            issues.append(f"{w}: 4 configs save less than {SAVING_4_VS_1:.0%} over 1")
        if abs(four - eight) > GAP_8_VS_4 * four:
            issues.append(f"{w}: 8 vs 4 configs differ by more than {GAP_8_VS_4:.0%}")
    return issues


def _fig10(df: pd.DataFrame) -> list[str]:
    issues = []
    cores = _by_variant(df, "cores")
    for w, v in _by_variant(df, "throughput_per_us").items():
        if cores[w]["pipelined"] < 2:
            continue
        if v["pipelined"] < (1 + PIPELINE_GAIN) * v["non-pipelined"]:
            issues.append(f"{w}: pipelining gains less than {PIPELINE_GAIN:.0%} throughput")
    return issues


def _backends(df: pd.DataFrame) -> list[str]:
    issues = []
    for w, v in _by_variant(df, "core_pj").items():
        if not v["loihi"] > v["mubrain"]:
            issues.append(f"{w}: off-chip Loihi cores not costlier than µBrain")
    return issues


CHECKS = {"fig4": _fig4, "fig8": _fig8, "fig9": _fig9, "fig10": _fig10, "backends": _backends}


def check_directions(df: pd.DataFrame) -> list[str]:
    """Every direction the comparison should show but does not."""
    issues: list[str] = []
    for suite, part in df.groupby("suite", sort=True):
        check = CHECKS.get(str(suite))
        if check is None:
            log.warning("no direction checks for suite %s", suite)
            continue
        issues.extend(check(part))
    return issues


def run(csv_path: Path, html_out: Path) -> Path:
    """Write the direction report for a comparison CSV; raise if any direction fails."""
    df = pd.read_csv(csv_path)
    issues = check_directions(df)

    parts = ["<html><body><h1>Comparison directions</h1>"]
    parts.append(f"<p>{len(df)} run(s) from {html.escape(str(csv_path))}</p>")
    if issues:
        parts.append("<p>Failed:</p><ul>")
        for item in issues:
            parts.append(f"<li>{html.escape(item)}</li>")
        parts.append("</ul>")
    else:
        parts.append("<p>All directions hold.</p>")
    parts.append("</body></html>")
    Path(html_out).parent.mkdir(parents=True, exist_ok=True)
    Path(html_out).write_text("".join(parts), encoding="utf-8")
    log.info("saved report -> %s", html_out)

    if issues:
        raise RuntimeError("; ".join(issues))
    return Path(html_out)
