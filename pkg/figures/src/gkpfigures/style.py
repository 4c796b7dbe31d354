"""Deterministic matplotlib setup shared by the figure scripts.

Rendering must be byte-stable across reruns: fixed Agg backend, fixed SVG
hash salt, and no timestamp metadata in either output format.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "gkp-figures"
matplotlib.rcParams["figure.dpi"] = 110

CYCLE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def color_for(index: int) -> str:
    return CYCLE[index % len(CYCLE)]


def save_stable(fig, output_base: str | Path) -> tuple[Path, Path]:
    """Write <base>.png and <base>.svg without timestamps; returns the paths."""
    base = Path(output_base)
    if base.suffix.lower() in (".png", ".svg"):
        base = base.with_suffix("")
    base.parent.mkdir(parents=True, exist_ok=True)
    png = base.with_suffix(".png")
    svg = base.with_suffix(".svg")
    fig.savefig(png, format="png", metadata={"Software": None})
    fig.savefig(svg, format="svg", metadata={"Date": None})
    return png, svg
