"""SVG rendering of figure bundles.

A bundle is a directory written by the simulation package: per-curve CSV
files plus a `manifest.json` whose `figure.panels` entry names every curve,
its CSV columns, styling role and label.  This layer only reads those values;
no quantity is recomputed here.

Rendering is pinned (fixed hash salt, no date metadata, fixed geometry), so
the same bundle always produces byte-identical SVG output.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

# curve styling roles: solid for model curves, dashed+markers for simulation
# output, bare markers for point series
_STYLES = {
    "line": {"linestyle": "-", "marker": ""},
    "dashed": {"linestyle": "--", "marker": "o", "markersize": 3,
               "markevery": 10, "fillstyle": "none"},
    "circles": {"linestyle": "", "marker": "o", "fillstyle": "none"},
    "stars": {"linestyle": "", "marker": "*"},
}

_RC = {
    "svg.hashsalt": "epinet-plots",
    "figure.dpi": 100,
    "font.family": "DejaVu Sans",
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.25,
    "legend.fontsize": 7,
}


class RenderError(RuntimeError):
    """Bundle or series data unusable for rendering."""


@dataclass(frozen=True)
class CurveSpec:
    csv_path: Path
    x_column: str
    y_column: str
    style: str
    label: str


@dataclass(frozen=True)
class PanelSpec:
    title: str
    xlabel: str
    ylabel: str
    curves: tuple[CurveSpec, ...]


@dataclass(frozen=True)
class PlotSpec:
    name: str
    panels: tuple[PanelSpec, ...]
    subtitle: str = ""
    extra_info: dict = field(default_factory=dict)


def load_bundle(bundle_dir) -> PlotSpec:
    """PlotSpec from a bundle directory's manifest."""
    bundle = Path(bundle_dir)
    manifest_path = bundle / "manifest.json"
    if not manifest_path.exists():
        raise RenderError(f"no manifest.json in {bundle}")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise RenderError(f"{manifest_path}: invalid JSON: {exc}") from exc
    figure = manifest.get("figure")
    if not figure or "panels" not in figure:
        raise RenderError(f"{manifest_path}: missing figure/panels entry")
    panels = []
    for p in figure["panels"]:
        curves = tuple(
            CurveSpec(csv_path=bundle / c["csv"], x_column=c["x"],
                      y_column=c["y"], style=c["style"], label=c["label"])
            for c in p.get("curves", ()))
        panels.append(PanelSpec(title=p.get("title", ""),
                                xlabel=p.get("xlabel", ""),
                                ylabel=p.get("ylabel", ""), curves=curves))
    params = manifest.get("parameters", {})
    subtitle = ", ".join(f"{k}={v}" for k, v in sorted(params.items())
                         if isinstance(v, (int, float, str)))
    return PlotSpec(name=figure.get("name", bundle.name),
                    panels=tuple(panels), subtitle=subtitle,
                    extra_info=params)


def _read_series(curve: CurveSpec):
    if not curve.csv_path.exists():
        raise RenderError(f"missing CSV: {curve.csv_path}")
    with open(curve.csv_path, encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or \
                curve.x_column not in reader.fieldnames or \
                curve.y_column not in reader.fieldnames:
            raise RenderError(
                f"{curve.csv_path}: needs columns "
                f"{curve.x_column!r}, {curve.y_column!r}, "
                f"has {reader.fieldnames}")
        xs, ys = [], []
        for row in reader:
            x = row.get(curve.x_column)
            y = row.get(curve.y_column)
            if x is None or y is None or x == "" or y == "":
                raise RenderError(
                    f"{curve.csv_path}: row with mismatched columns: {row}")
            try:
                xs.append(float(x))
                ys.append(float(y))
            except ValueError as exc:
                raise RenderError(
                    f"{curve.csv_path}: non-numeric value {row}") from exc
    if not xs:
        raise RenderError(f"{curve.csv_path}: no data rows")
    return xs, ys


def render(spec: PlotSpec, out_path, png: bool = False) -> Path:
    """Write the figure as SVG (or PNG); returns the output path.

    Fails before creating the file when there are no series to draw or any
    series is missing or malformed.
    """
    if not spec.panels or all(not p.curves for p in spec.panels):
        raise RenderError("nothing to plot: empty series list")
    series = [[(_read_series(c), c) for c in panel.curves]
              for panel in spec.panels]

    out_path = Path(out_path)
    n = len(spec.panels)
    with plt.rc_context(_RC):
        fig, axes = plt.subplots(1, n, figsize=(5.2 * n, 3.9))
        if n == 1:
            axes = [axes]
        curve_index = 0
        for ax, panel, panel_series in zip(axes, spec.panels, series):
            for (xs, ys), curve in panel_series:
                style = _STYLES.get(curve.style, _STYLES["line"])
                artist, = ax.plot(xs, ys, label=curve.label, **style)
                artist.set_gid(f"curve-{curve_index}")
                curve_index += 1
            ax.set_title(panel.title)
            ax.set_xlabel(panel.xlabel)
            ax.set_ylabel(panel.ylabel)
            ax.legend(loc="best")
        if spec.subtitle:
            fig.suptitle(f"{spec.name}: {spec.subtitle}"[:120], fontsize=8)
        fig.tight_layout()
        fmt = "png" if png else "svg"
        fig.savefig(out_path, format=fmt, metadata=None if png
                    else {"Date": None})
        plt.close(fig)
    return out_path
