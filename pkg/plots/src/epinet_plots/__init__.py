"""Plotting layer for epinet CSV bundles: reads, never recomputes."""

from .render import (CurveSpec, PanelSpec, PlotSpec, RenderError, load_bundle,
                     render)

__version__ = "0.1.0"

__all__ = ["CurveSpec", "PanelSpec", "PlotSpec", "RenderError",
           "load_bundle", "render"]
