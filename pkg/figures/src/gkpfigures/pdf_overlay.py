"""Analytic output density with an optional Monte Carlo histogram overlay.

Reads the gkpsim ``pdf`` CSV (x, f, optionally mc_density); the histogram can
also come from a second CSV on the identical x grid.  A log y-axis makes the
sqrt(pi) lattice side lobes (the logical-error mass) visible next to the
central peak.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np
import matplotlib.pyplot as plt

from .csvio import SchemaError, read_density
from .style import save_stable

SQRT_PI = float(np.sqrt(np.pi))
GRID_TOL = 1e-9


def build_overlay_figure(pdf_csv: str, mc_csv: str | None = None, log_y: bool = True):
    """Render the overlay; returns (figure, used_histogram flag)."""
    table = read_density(pdf_csv)
    x = np.asarray(table.x)
    f = np.asarray(table.f)
    hist = None if table.mc_density is None else np.asarray(table.mc_density)

    if mc_csv is not None:
        other = read_density(mc_csv)
        if other.mc_density is None:
            raise SchemaError(f"{mc_csv}: missing column 'mc_density'")
        ox = np.asarray(other.x)
        if ox.shape != x.shape or np.max(np.abs(ox - x)) > GRID_TOL * max(1.0, np.max(np.abs(x))):
            raise ValueError("incompatible ranges: histogram x grid does not match the density grid")
        hist = np.asarray(other.mc_density)

    fig, ax = plt.subplots(figsize=(7.0, 4.2), constrained_layout=True)
    if hist is not None:
        width = x[1] - x[0] if len(x) > 1 else 1.0
        ax.bar(x, hist, width=width, color="#c8d7e8", label="Monte Carlo histogram")
    else:
        print("warning: no histogram columns; rendering the analytic density only", file=sys.stderr)
    ax.plot(x, f, color="#d62728", lw=1.5, label="analytic density")

    for n in range(int(np.floor(x[0] / SQRT_PI)), int(np.ceil(x[-1] / SQRT_PI)) + 1):
        if n != 0:
            ax.axvline(n * SQRT_PI, color="0.75", lw=0.6, ls=":")
    if log_y:
        positive = f[f > 0]
        floor = max(positive.min() * 0.5, f.max() * 1e-12) if positive.size else 1e-12
        ax.set_yscale("log")
        ax.set_ylim(bottom=floor)
    ax.set_xlabel("output shift")
    ax.set_ylabel("density")
    ax.legend(frameon=False)
    return fig, hist is not None


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="gkp-plot-pdf-overlay",
        description="Overlay the analytic output density with its MC histogram.",
    )
    parser.add_argument("--input", required=True, help="pdf CSV with columns x, f[, mc_density]")
    parser.add_argument("--mc-input", default=None,
                        help="separate CSV carrying mc_density on the same x grid")
    parser.add_argument("--output", required=True, help="output basename (.png/.svg written)")
    parser.add_argument("--linear-y", action="store_true", help="linear instead of log y-axis")
    args = parser.parse_args(argv)

    try:
        fig, _ = build_overlay_figure(args.input, args.mc_input, log_y=not args.linear_y)
    except (SchemaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    png, svg = save_stable(fig, args.output)
    plt.close(fig)
    print(f"wrote {png} and {svg}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
