"""Readers for the gkpsim CSV schemas.

These scripts never recompute physics: every number plotted traces back to a
CSV cell.  Files start with ``#`` comment lines (schema version, footers)
followed by a header row.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

SWEEP_COLUMNS = (
    "scheme",
    "b",
    "m",
    "k",
    "sigma_A",
    "sigma_D",
    "delta_q",
    "delta_q_se",
    "delta_p",
    "delta_p_se",
    "logical_rate",
    "logical_rate_se",
    "n_samples",
    "seed",
)


class SchemaError(ValueError):
    """The CSV does not carry the expected columns."""


@dataclass(frozen=True)
class SweepCurve:
    """One scheme's rows of a sweep, sorted by sigma_A."""

    label: str
    k: float
    sigma_A: list[float]
    delta_q: list[float]
    delta_q_se: list[float]
    delta_p: list[float]
    delta_p_se: list[float]


def _read_rows(path: str | Path) -> list[dict[str, str]]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        lines = [ln for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    return list(csv.DictReader(lines))


def scheme_label(row: dict[str, str]) -> str:
    if row["b"]:
        return f"{row['scheme']}(b={float(row['b']):.3g}, m={row['m']})"
    return row["scheme"]


def read_sweep(path: str | Path) -> list[SweepCurve]:
    """Load a sweep CSV into per-scheme curves; raises SchemaError on mismatch."""
    rows = _read_rows(path)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    for col in SWEEP_COLUMNS:
        if col not in rows[0]:
            raise SchemaError(f"{path}: missing column {col!r}")

    grouped: dict[str, list[dict[str, str]]] = {}
    for row in rows:
        grouped.setdefault(scheme_label(row), []).append(row)

    curves = []
    for label in sorted(grouped):
        block = sorted(grouped[label], key=lambda r: float(r["sigma_A"]))
        curves.append(
            SweepCurve(
                label=label,
                k=float(block[0]["k"]),
                sigma_A=[float(r["sigma_A"]) for r in block],
                delta_q=[float(r["delta_q"]) for r in block],
                delta_q_se=[float(r["delta_q_se"]) for r in block],
                delta_p=[float(r["delta_p"]) for r in block],
                delta_p_se=[float(r["delta_p_se"]) for r in block],
            )
        )
    return curves


@dataclass(frozen=True)
class DensityTable:
    x: list[float]
    f: list[float]
    mc_density: list[float] | None


def read_density(path: str | Path) -> DensityTable:
    """Load a pdf CSV (columns x, f and optionally mc_density)."""
    rows = _read_rows(path)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    for col in ("x", "f"):
        if col not in rows[0]:
            raise SchemaError(f"{path}: missing column {col!r}")
    has_mc = "mc_density" in rows[0]
    return DensityTable(
        x=[float(r["x"]) for r in rows],
        f=[float(r["f"]) for r in rows],
        mc_density=[float(r["mc_density"]) for r in rows] if has_mc else None,
    )
