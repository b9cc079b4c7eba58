"""Experiment execution: ensembles, comparisons, CSV artifacts, manifests.

Everything written here is deterministic given the config and seed: floats
are formatted with a fixed precision and the manifest is dumped with sorted
keys, so re-running an experiment reproduces the bytes.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .. import __version__
from ..equilibria import sweep_endemic, write_sweep_csv
from ..gillespie import (EpidemicParams, Trajectory, ensemble_mean, run_sir,
                         run_sis, write_ensemble_csv, write_trajectory_csv)
from ..netgen import (WeightClasses, assign_weights_random, build_erdos_renyi,
                      build_fixed_weight_network, build_regular_graph,
                      network_stats, write_edge_list)
from ..ode import integrate
from ..pairwise import initial_conditions, make_rhs
from ..rng import TAG_NETWORK, TAG_WEIGHTS, stream_key
from ..thresholds import (ThresholdReport, r0_fixed, r0_random,
                          r_pairwise_classic, r_pairwise_modified)
from .config import ConfigError, ExperimentConfig, NetworkSpec

log = logging.getLogger("epinet.harness")

MIN_ENSEMBLE_SUCCESS = 0.9


class NumericError(RuntimeError):
    """An experiment failed numerically (too many run failures, etc.)."""


@dataclass(frozen=True)
class ComparisonReport:
    time_grid: np.ndarray
    sim_I_over_N: np.ndarray
    ode_I_over_N: np.ndarray
    max_discrepancy: float
    parameters: dict


@dataclass(frozen=True)
class ExperimentResult:
    kind: str
    out_dir: Path
    files: tuple[str, ...]
    summary: dict


def _fmt(x) -> str:
    return f"{x:.12g}"


def build_network(spec: NetworkSpec, seed: int):
    """Network + weight classes for one run seed."""
    wc = spec.weight_classes()
    if spec.mode == "fixed":
        return build_fixed_weight_network(spec.N, wc, seed), wc
    if spec.topology == "erdos-renyi":
        net = build_erdos_renyi(spec.N, spec.k, seed)
    else:
        net = build_regular_graph(spec.N, int(spec.k), seed)
    return assign_weights_random(net, wc, seed ^ TAG_WEIGHTS), wc


def run_ensemble(spec: NetworkSpec, epidemic, runs: int, seed: int,
                 time_grid) -> tuple[Trajectory, list[Trajectory]]:
    """Mean trajectory over `runs` independent runs (fresh network each run).

    Individual run failures are logged and skipped; the ensemble aborts only
    when more than 10% of the runs fail.
    """
    params = EpidemicParams(tau=epidemic.tau, gamma=epidemic.gamma)
    runner = run_sis if epidemic.dynamics == "sis" else run_sir
    trajectories = []
    for r in range(runs):
        rk = stream_key(seed, r, TAG_NETWORK)
        try:
            net, wc = build_network(spec, rk)
            trajectories.append(runner(net, wc, params, epidemic.i0_fraction,
                                       epidemic.t_max, seed=rk))
        except Exception as exc:  # noqa: BLE001 - per-run isolation is the point
            log.warning("run %d failed: %s", r, exc)
    if len(trajectories) < MIN_ENSEMBLE_SUCCESS * runs:
        raise NumericError(f"only {len(trajectories)}/{runs} runs succeeded")
    return ensemble_mean(trajectories, time_grid), trajectories


def integrate_pairwise(spec: NetworkSpec, epidemic, closure,
                       rel_tol=1e-8, abs_tol=1e-8):
    wc = spec.weight_classes()
    params = EpidemicParams(tau=epidemic.tau, gamma=epidemic.gamma)
    y0 = initial_conditions(spec.N, epidemic.i0_fraction, wc,
                            epidemic.dynamics)
    rhs = make_rhs(wc, params, closure, epidemic.dynamics)
    return integrate(rhs, y0.vector, (0.0, epidemic.t_max),
                     rel_tol=rel_tol, abs_tol=abs_tol), wc


def write_ode_csv(sol, wc: WeightClasses, dynamics: str, path) -> None:
    """`time,S,I,R,SS_1..,SI_1..,II_1..[,SR,IR,RR]` at the accepted steps."""
    M = wc.M
    blocks = ["SS", "SI", "II"] + (["SR", "IR", "RR"] if dynamics == "sir" else [])
    cols = ["time", "S", "I", "R"]
    for b in blocks:
        cols += [f"{b}_{m + 1}" for m in range(M)]
    weights = ",".join(_fmt(w) for w in wc.weights)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# M={M} weights={weights} dynamics={dynamics}\n")
        fh.write(",".join(cols) + "\n")
        base = 2 if dynamics == "sis" else 3
        for t, y in zip(sol.t, sol.y):
            row = [t, y[0], y[1], y[2] if dynamics == "sir" else 0.0]
            row.extend(y[base:])
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def threshold_csv_line(report: ThresholdReport) -> str:
    """Single CSV line `kind,value,r1,r2,R1,R2,Q,lambda1,lambda2`."""
    r1 = report.r[0] if len(report.r) > 0 else None
    r2 = report.r[1] if len(report.r) > 1 else None
    cells = [report.kind, _fmt(report.value)]
    for v in (r1, r2, report.R1, report.R2, report.Q,
              report.lambda1, report.lambda2):
        cells.append("" if v is None else _fmt(v))
    return ",".join(cells)


def evaluate_query(query: dict) -> ThresholdReport:
    q = dict(query)
    qtype = q.pop("type")
    if qtype == "r0_random":
        return r0_random(q["k"], q["weights"], q["probs"], q["tau"], q["gamma"])
    if qtype == "r0_fixed":
        return r0_fixed(int(q["k1"]), int(q["k2"]), q["w1"], q["w2"],
                        q["tau"], q["gamma"])
    if qtype == "r_classic":
        return r_pairwise_classic(q["k"], q["p1"], q["w1"], q["w2"],
                                  q["tau"], q["gamma"])
    return r_pairwise_modified(int(q["k1"]), int(q["k2"]), q["w1"], q["w2"],
                               q["tau"], q["gamma"])


def _write_manifest(out_dir: Path, config: ExperimentConfig, seed: int,
                    files, results: dict, extra: dict | None = None) -> None:
    manifest = {
        "epinet_version": __version__,
        "schema": 1,
        "kind": config.kind,
        "seed": seed,
        "config": config.resolved,
        "outputs": sorted(files),
        "results": results,
    }
    if extra:
        manifest.update(extra)
    with open(out_dir / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def run_experiment(config: ExperimentConfig, out_dir=None,
                   seed: int | None = None) -> ExperimentResult:
    """Execute a validated config; writes CSV artifacts plus manifest.json."""
    target = Path(out_dir if out_dir is not None else (config.output or "."))
    target.mkdir(parents=True, exist_ok=True)
    seed = config.ensemble.seed if seed is None else int(seed)

    if config.kind == "figure-preset":
        from .figures import reproduce_figure
        fig = config.figure
        manifest = reproduce_figure(fig["name"], target, seed=seed,
                                    runs=fig.get("runs"), N=fig.get("N"))
        return ExperimentResult(kind=config.kind, out_dir=target,
                                files=tuple(manifest["outputs"]),
                                summary={"figure": fig["name"]})

    files: list[str] = []
    results: dict = {}

    if config.kind == "generate":
        rk = stream_key(seed, 0, TAG_NETWORK)
        net, wc = build_network(config.network, rk)
        write_edge_list(net, wc, target / "network.txt")
        files.append("network.txt")
        stats = network_stats(net, wc)
        results = {"edge_count": stats.edge_count,
                   "average_weight": stats.average_weight}

    elif config.kind == "simulate":
        grid = np.linspace(0.0, config.epidemic.t_max, config.grid_points)
        mean, trajs = run_ensemble(config.network, config.epidemic,
                                   config.ensemble.runs, seed, grid)
        write_ensemble_csv(mean, target / "ensemble.csv")
        files.append("ensemble.csv")
        if config.save_runs:
            for r, traj in enumerate(trajs):
                name = f"run_{r:04d}.csv"
                write_trajectory_csv(traj, target / name)
                files.append(name)
        results = {"runs_succeeded": len(trajs),
                   "final_mean_I_over_N": mean.I[-1] / config.network.N}

    elif config.kind == "pairwise":
        wc = config.network.weight_classes()
        closure = config.pick_closure(wc)
        sol, wc = integrate_pairwise(config.network, config.epidemic, closure)
        write_ode_csv(sol, wc, config.epidemic.dynamics, target / "ode.csv")
        files.append("ode.csv")
        results = {"steps": sol.n_steps,
                   "final_I_over_N": sol.y[-1][1] / config.network.N}

    elif config.kind == "compare":
        report = run_comparison(config, seed)
        with open(target / "compare.csv", "w", encoding="utf-8") as fh:
            fh.write("time,sim_I_over_N,ode_I_over_N\n")
            for t, s, o in zip(report.time_grid, report.sim_I_over_N,
                               report.ode_I_over_N):
                fh.write(f"{_fmt(t)},{_fmt(s)},{_fmt(o)}\n")
        files.append("compare.csv")
        results = {"max_discrepancy": report.max_discrepancy,
                   "runs_succeeded": report.parameters["runs_succeeded"]}

    elif config.kind == "r0":
        report = evaluate_query(config.query)
        with open(target / "thresholds.csv", "w", encoding="utf-8") as fh:
            fh.write("kind,value,r1,r2,R1,R2,Q,lambda1,lambda2\n")
            fh.write(threshold_csv_line(report) + "\n")
        files.append("thresholds.csv")
        results = {"kind": report.kind, "value": report.value}

    elif config.kind == "steady-sweep":
        wc = config.network.weight_classes()
        closure = config.pick_closure(wc)
        rows = sweep_endemic(wc, config.steady["tau_grid"],
                             config.steady["gamma"], closure,
                             config.network.N,
                             i0_fraction=config.steady["i0_fraction"])
        write_sweep_csv(rows, target / "sweep.csv")
        files.append("sweep.csv")
        results = {"converged": sum(r.converged for r in rows),
                   "points": len(rows)}

    else:  # pragma: no cover - validate_config guards this
        raise ConfigError("kind", f"unhandled kind {config.kind!r}")

    _write_manifest(target, config, seed, files, results)
    files.append("manifest.json")
    return ExperimentResult(kind=config.kind, out_dir=target,
                            files=tuple(files), summary=results)


def run_comparison(config: ExperimentConfig, seed: int) -> ComparisonReport:
    """Ensemble mean vs pairwise ODE on a shared uniform grid."""
    N = config.network.N
    grid = np.linspace(0.0, config.epidemic.t_max, config.grid_points)
    mean, trajs = run_ensemble(config.network, config.epidemic,
                               config.ensemble.runs, seed, grid)
    wc = config.network.weight_classes()
    closure = config.pick_closure(wc)
    sol, _ = integrate_pairwise(config.network, config.epidemic, closure)
    ode_I = sol.sample(grid)[:, 1] / N
    sim_I = mean.I / N
    return ComparisonReport(
        time_grid=grid, sim_I_over_N=sim_I, ode_I_over_N=ode_I,
        max_discrepancy=float(np.abs(sim_I - ode_I).max()),
        parameters={"N": N, "runs_succeeded": len(trajs),
                    "dynamics": config.epidemic.dynamics},
    )
