"""Two-panel scheme comparison: Delta_q and Delta_p vs sigma_A with SE bands.

Each input CSV becomes one row of panels (one row per noise ratio k); every
scheme in a CSV gets exactly one legend entry.  Pure CSV -> image transform.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib.pyplot as plt

from .csvio import SchemaError, SweepCurve, read_sweep
from .style import color_for, save_stable


@dataclass(frozen=True)
class FigureSpec:
    """Inputs, layout and styling of one comparison figure."""

    inputs: list[str]
    output: str
    styles: dict[str, str] = field(default_factory=dict)
    band_sigmas: float = 1.0


def build_sweep_figure(spec: FigureSpec):
    """Render the figure; returns (figure, list of curve lists per input)."""
    tables = [read_sweep(p) for p in spec.inputs]
    n_rows = len(tables)
    fig, axes = plt.subplots(
        n_rows, 2, figsize=(9.0, 3.2 * n_rows), squeeze=False, constrained_layout=True
    )

    labels = sorted({c.label for curves in tables for c in curves})
    colors = {lab: spec.styles.get(lab, color_for(i)) for i, lab in enumerate(labels)}

    for row, curves in enumerate(tables):
        for col, (metric, se, title) in enumerate(
            (("delta_q", "delta_q_se", r"$\Delta_q$"), ("delta_p", "delta_p_se", r"$\Delta_p$"))
        ):
            ax = axes[row][col]
            for curve in curves:
                y = getattr(curve, metric)
                err = getattr(curve, se)
                lo = [v - spec.band_sigmas * e for v, e in zip(y, err)]
                hi = [v + spec.band_sigmas * e for v, e in zip(y, err)]
                ax.fill_between(curve.sigma_A, lo, hi, alpha=0.25, color=colors[curve.label], lw=0)
                ax.plot(
                    curve.sigma_A,
                    y,
                    marker="o",
                    ms=3,
                    color=colors[curve.label],
                    label=curve.label if col == 0 and row == 0 else None,
                )
            ax.set_xlabel(r"$\sigma_A$")
            ax.set_ylabel(title)
            ax.set_title(f"k = {curves[0].k:g}")
            ax.grid(True, alpha=0.3)

    handles, labels_used = axes[0][0].get_legend_handles_labels()
    # schemes only present in later rows still need their single legend entry
    missing = [lab for lab in labels if lab not in labels_used]
    for row, curves in enumerate(tables):
        for curve in curves:
            if curve.label in missing:
                h = axes[row][0].plot([], [], color=colors[curve.label], marker="o", ms=3)[0]
                handles.append(h)
                labels_used.append(curve.label)
                missing.remove(curve.label)
    fig.legend(handles, labels_used, loc="upper center", ncol=min(len(labels_used), 4),
               bbox_to_anchor=(0.5, 1.08), frameon=False)
    return fig, tables


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="gkp-plot-sweep",
        description="Render Delta_q / Delta_p comparison panels from sweep CSVs.",
    )
    parser.add_argument("--input", action="append", required=True,
                        help="sweep CSV; repeat for one panel row per file")
    parser.add_argument("--output", required=True, help="output basename (.png/.svg written)")
    parser.add_argument("--band-sigmas", type=float, default=1.0,
                        help="half-width of the error band in standard errors")
    args = parser.parse_args(argv)

    try:
        fig, _ = build_sweep_figure(
            FigureSpec(inputs=args.input, output=args.output, band_sigmas=args.band_sigmas)
        )
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    png, svg = save_stable(fig, args.output)
    plt.close(fig)
    print(f"wrote {png} and {svg}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
