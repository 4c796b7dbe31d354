"""Figure scripts for gkpsim CSV outputs: sweep comparisons and PDF overlays."""

from .csvio import DensityTable, SchemaError, SweepCurve, read_density, read_sweep
from .pdf_overlay import build_overlay_figure
from .sweep import FigureSpec, build_sweep_figure

__version__ = "0.1.0"
