"""Figure-reproduction presets: parameter sets and CSV bundle layout.

Each preset writes one CSV per curve plus a `manifest.json` whose `figure`
entry describes panels, curve files and styling roles; the plotting layer
renders bundles from that description alone.

Styles: `line` (solid), `dashed` (dashed with circle markers, used for
simulation output), `circles` / `stars` (marker-only series).
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .. import __version__
from ..equilibria import sweep_endemic
from ..gillespie import EpidemicParams
from ..netgen import WeightClasses
from ..ode import integrate
from ..pairwise import Closure, initial_conditions, make_rhs
from ..thresholds import r0_fixed, r0_random
from .config import EpidemicSpec, NetworkSpec
from .run import integrate_pairwise, run_ensemble

FIGURE_NAMES = ("fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7")

DEFAULT_SEED = 42
DEFAULT_N = 1000
DEFAULT_RUNS = 100
FIG7_RUNS = 50
FIG7_MARKER_TAUS = (0.3, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0)
FIG7_SIM_T_MAX = 40.0
FIG7_SIM_WINDOW = 10.0


def _fmt(x) -> str:
    return f"{x:.12g}"


def _write_xy(out_dir: Path, name: str, xlabel: str, ylabel: str, xs, ys):
    with open(out_dir / name, "w", encoding="utf-8") as fh:
        fh.write(f"{xlabel},{ylabel}\n")
        for x, y in zip(xs, ys):
            fh.write(f"{_fmt(x)},{_fmt(y)}\n")


def _curve(csv, style, label, x="time", y="I_over_N"):
    return {"csv": csv, "x": x, "y": y, "style": style, "label": label}


def _prevalence_pair(out_dir, tag, spec, epidemic, closure, seed, runs,
                     grid_points=201):
    """ODE curve + simulation ensemble curve for one parameter row."""
    grid = np.linspace(0.0, epidemic.t_max, grid_points)
    sol, _ = integrate_pairwise(spec, epidemic, closure)
    ode_name = f"{tag}_ode.csv"
    _write_xy(out_dir, ode_name, "time", "I_over_N",
              grid, sol.sample(grid)[:, 1] / spec.N)
    mean, _ = run_ensemble(spec, epidemic, runs, seed, grid)
    sim_name = f"{tag}_sim.csv"
    _write_xy(out_dir, sim_name, "time", "I_over_N", grid, mean.I / spec.N)
    return ode_name, sim_name


def _fig1(out_dir, seed, runs, N):
    k, k1, k2, gamma = 6, 2, 4, 1.0
    taus = np.linspace(0.0, 3.0, 61)
    files, curves = [], []

    def r0r(w1, p1, w2):
        return [r0_random(k, [w1, w2], [p1, 1 - p1], t, gamma).value
                for t in taus]

    def r0f(w1, w2):
        return [r0_fixed(k1, k2, w1, w2, t, gamma).value for t in taus]

    name = "max_equal_weights.csv"
    _write_xy(out_dir, name, "tau", "R0",
              taus, [(k - 1) * t / (t + gamma) for t in taus])
    files.append(name)
    curves.append(_curve(name, "line", "equal weights w1=w2=1",
                         x="tau", y="R0"))

    for w1 in (2.5, 5.0, 10.0):
        p1 = 0.5 / w1
        w2 = 0.5 / (1 - p1)
        name = f"random_w1_{w1:g}.csv"
        _write_xy(out_dir, name, "tau", "R0", taus, r0r(w1, p1, w2))
        files.append(name)
        curves.append(_curve(name, "line",
                             f"random: w1={w1:g}, p1={p1:g}", x="tau", y="R0"))

    for w1 in (0.2, 0.8, 1.4):
        w2 = (3.0 - w1) / 2.0
        name = f"fixed_w1_{w1:g}.csv"
        _write_xy(out_dir, name, "tau", "R0", taus, r0f(w1, w2))
        files.append(name)
        curves.append(_curve(name, "dashed",
                             f"fixed: w1={w1:g} (k1=2, k2=4)", x="tau", y="R0"))

    star_taus = np.arange(0.25, 3.01, 0.25)
    name = "random_markers.csv"
    _write_xy(out_dir, name, "tau", "R0", star_taus,
              [r0_random(k, [1.4, 0.8], [1 / 3, 2 / 3], t, gamma).value
               for t in star_taus])
    files.append(name)
    curves.append(_curve(name, "stars", "random: w1=1.4, p1=1/3",
                         x="tau", y="R0"))

    panels = [{"title": "reproduction number vs transmission rate",
               "xlabel": "tau", "ylabel": "R0", "curves": curves}]
    params = {"k": k, "k1": k1, "k2": k2, "gamma": gamma,
              "average_weight": 1.0}
    return files, panels, params


def _prevalence_figure(out_dir, seed, runs, N, rows, k, tau, gamma,
                       t_max=15.0, i0=0.05):
    """Two panels (SIS, SIR), one ODE+sim curve pair per row and dynamics."""
    files = []
    panels = []
    for dynamics in ("sis", "sir"):
        curves = []
        for ridx, (label, spec, closure) in enumerate(rows):
            epidemic = EpidemicSpec(dynamics=dynamics, tau=tau, gamma=gamma,
                                    i0_fraction=i0, t_max=t_max)
            tag = f"{dynamics}_row{ridx}"
            row_seed = seed ^ ((ridx + 1) << 32) ^ (0 if dynamics == "sis"
                                                    else 1 << 48)
            ode_name, sim_name = _prevalence_pair(out_dir, tag, spec, epidemic,
                                                  closure, row_seed, runs)
            files += [ode_name, sim_name]
            curves.append(_curve(ode_name, "line", f"{label} (ODE)"))
            curves.append(_curve(sim_name, "dashed", f"{label} (simulation)"))
        panels.append({"title": dynamics.upper(), "xlabel": "time",
                       "ylabel": "I/N", "curves": curves})
    return files, panels


def _random_row(N, k, weights, probs, label):
    spec = NetworkSpec(N=N, mode="random", weights=tuple(weights),
                       topology="regular", k=k, probs=tuple(probs))
    return label, spec, Closure.classic(k)


def _fixed_row(N, weights, counts, label):
    spec = NetworkSpec(N=N, mode="fixed", weights=tuple(weights),
                       topology="regular", k=sum(counts),
                       counts=tuple(counts))
    return label, spec, Closure.modified(counts)


def _fig2(out_dir, seed, runs, N):
    rows = [
        _random_row(N, 5, (5.0, 1.25), (0.2, 0.8), "w1=5, p1=0.2"),
        _random_row(N, 5, (0.5, 1.5), (0.5, 0.5), "w1=0.5, p1=0.5"),
    ]
    files, panels = _prevalence_figure(out_dir, seed, runs, N, rows,
                                       k=5, tau=1.0, gamma=1.0)
    params = {"N": N, "k": 5, "tau": 1.0, "gamma": 1.0, "i0_fraction": 0.05,
              "rows": [r[0] for r in rows]}
    return files, panels, params


def _fig3(out_dir, seed, runs, N):
    p1 = 0.05
    rows = [_random_row(N, 5, (w1, (1 - p1 * w1) / (1 - p1)), (p1, 1 - p1),
                        f"w1={w1:g}")
            for w1 in (2.5, 5.0, 10.0)]
    files, panels = _prevalence_figure(out_dir, seed, runs, N, rows,
                                       k=5, tau=1.0, gamma=1.0)
    params = {"N": N, "k": 5, "tau": 1.0, "gamma": 1.0, "p1": p1,
              "average_weight": 1.0, "rows": [r[0] for r in rows]}
    return files, panels, params


def _fig4(out_dir, seed, runs, N):
    w1 = 10.0
    rows = [_random_row(N, 10, (w1, (1 - p1 * w1) / (1 - p1)), (p1, 1 - p1),
                        f"p1={p1:g}")
            for p1 in (0.01, 0.05, 0.09)]
    files, panels = _prevalence_figure(out_dir, seed, runs, N, rows,
                                       k=10, tau=0.5, gamma=1.0)
    params = {"N": N, "k": 10, "tau": 0.5, "gamma": 1.0, "w1": w1,
              "average_weight": 1.0, "rows": [r[0] for r in rows]}
    return files, panels, params


def _fig5(out_dir, seed, runs, N):
    files = []
    panels = []
    weights = (10.0, 1.25)
    for dynamics in ("sis", "sir"):
        curves = []
        for tidx, tau in enumerate((0.5, 0.1)):
            rows = [
                _random_row(N, 10, weights, (0.2, 0.8),
                            f"random, tau={tau:g}"),
                _fixed_row(N, weights, (2, 8), f"fixed, tau={tau:g}"),
            ]
            for ridx, (label, spec, closure) in enumerate(rows):
                epidemic = EpidemicSpec(dynamics=dynamics, tau=tau, gamma=1.0,
                                        i0_fraction=0.05, t_max=15.0)
                tag = f"{dynamics}_tau{tidx}_{spec.mode}"
                row_seed = (seed ^ ((2 * tidx + ridx + 1) << 32)
                            ^ (0 if dynamics == "sis" else 1 << 48))
                ode_name, sim_name = _prevalence_pair(
                    out_dir, tag, spec, epidemic, closure, row_seed, runs)
                files += [ode_name, sim_name]
                curves.append(_curve(ode_name, "line", f"{label} (ODE)"))
                curves.append(_curve(sim_name, "dashed",
                                     f"{label} (simulation)"))
        panels.append({"title": dynamics.upper(), "xlabel": "time",
                       "ylabel": "I/N", "curves": curves})
    params = {"N": N, "k": 10, "k1": 2, "k2": 8, "weights": weights,
              "gamma": 1.0, "taus": (0.5, 0.1)}
    return files, panels, params


def _fig6(out_dir, seed, runs, N):
    rows = [_fixed_row(N, (1.4, 0.8), (k1, 6 - k1), f"k1={k1}")
            for k1 in (5, 4, 3, 2, 1)]
    files, panels = _prevalence_figure(out_dir, seed, runs, N, rows,
                                       k=6, tau=1.0, gamma=1.0)
    params = {"N": N, "k": 6, "tau": 1.0, "gamma": 1.0,
              "weights": (1.4, 0.8), "rows": [r[0] for r in rows]}
    return files, panels, params


def _fig7(out_dir, seed, runs, N):
    k, gamma = 5, 1.0
    weights = (10.0, 1.0)
    p1_values = (0.9, 0.5, 0.1, 0.01)
    fine_taus = np.round(np.arange(0.3, 3.0 + 1e-9, 0.05), 10)
    files, curves = [], []
    for pidx, p1 in enumerate(p1_values):
        wc = WeightClasses.random(weights, (p1, 1 - p1), k)
        closure = Closure.classic(k)

        rows = sweep_endemic(wc, fine_taus, gamma, closure, N)
        name = f"steady_p1_{p1:g}.csv"
        _write_xy(out_dir, name, "tau", "I_over_N",
                  [r.tau for r in rows], [r.I_over_N for r in rows])
        files.append(name)
        curves.append(_curve(name, "line", f"p1={p1:g} (steady state)",
                             x="tau"))

        ode_vals = []
        for tau in FIG7_MARKER_TAUS:
            params = EpidemicParams(tau=tau, gamma=gamma)
            y0 = initial_conditions(N, 0.05, wc, "sis")
            sol = integrate(make_rhs(wc, params, closure, "sis"), y0.vector,
                            (0.0, 500.0 / gamma), rel_tol=1e-10, abs_tol=1e-10)
            ode_vals.append(sol.y[-1][1] / N)
        name = f"ode_p1_{p1:g}.csv"
        _write_xy(out_dir, name, "tau", "I_over_N", FIG7_MARKER_TAUS, ode_vals)
        files.append(name)
        curves.append(_curve(name, "circles", f"p1={p1:g} (ODE, long run)",
                             x="tau"))

        spec = NetworkSpec(N=N, mode="random", weights=weights,
                           topology="regular", k=k, probs=(p1, 1 - p1))
        sim_vals = []
        window = np.linspace(FIG7_SIM_T_MAX - FIG7_SIM_WINDOW,
                             FIG7_SIM_T_MAX, 21)
        for tidx, tau in enumerate(FIG7_MARKER_TAUS):
            epidemic = EpidemicSpec(dynamics="sis", tau=tau, gamma=gamma,
                                    i0_fraction=0.05, t_max=FIG7_SIM_T_MAX)
            mean, _ = run_ensemble(spec, epidemic, runs, seed
                                   ^ ((pidx + 1) << 32) ^ ((tidx + 1) << 40),
                                   window)
            sim_vals.append(float(mean.I.mean()) / N)
        name = f"sim_p1_{p1:g}.csv"
        _write_xy(out_dir, name, "tau", "I_over_N", FIG7_MARKER_TAUS, sim_vals)
        files.append(name)
        curves.append(_curve(name, "stars", f"p1={p1:g} (simulation)",
                             x="tau"))

    panels = [{"title": "endemic prevalence vs transmission rate",
               "xlabel": "tau", "ylabel": "I/N", "curves": curves}]
    params = {"N": N, "k": k, "gamma": gamma, "weights": weights,
              "p1_values": p1_values, "marker_taus": FIG7_MARKER_TAUS,
              "sim_t_max": FIG7_SIM_T_MAX, "sim_window": FIG7_SIM_WINDOW}
    return files, panels, params


_BUILDERS = {"fig1": _fig1, "fig2": _fig2, "fig3": _fig3, "fig4": _fig4,
             "fig5": _fig5, "fig6": _fig6, "fig7": _fig7}
_DEFAULT_RUNS = {"fig7": FIG7_RUNS}


def reproduce_figure(name: str, out_dir, seed: int = DEFAULT_SEED,
                     runs: int | None = None, N: int | None = None) -> dict:
    """Write the named figure's CSV bundle + manifest; returns the manifest.

    `runs` (ensemble size) and `N` (network size) default to the values used
    for full-quality bundles and can be lowered for quick rebuilds; whatever
    is used is recorded in the manifest.
    """
    if name not in _BUILDERS:
        raise ValueError(f"unknown figure name {name!r}; "
                         f"expected one of {FIGURE_NAMES}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    runs = int(runs) if runs is not None else _DEFAULT_RUNS.get(name,
                                                                DEFAULT_RUNS)
    N = int(N) if N is not None else DEFAULT_N
    files, panels, params = _BUILDERS[name](out_dir, int(seed), runs, N)
    manifest = {
        "epinet_version": __version__,
        "schema": 1,
        "kind": "figure-preset",
        "seed": int(seed),
        "figure": {"name": name, "panels": panels},
        "parameters": {**params, "ensemble_runs": runs, "seed": int(seed)},
        "outputs": sorted(files),
    }
    with open(out_dir / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest
