"""Experiment configuration: a versioned JSON schema with strict validation.

Every error names the offending field path (e.g. `network.probs`); unknown
keys are rejected so typos cannot silently change an experiment.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..netgen import WeightClasses
from ..pairwise import Closure

SCHEMA_VERSION = 1

KINDS = ("generate", "simulate", "pairwise", "compare", "r0",
         "steady-sweep", "figure-preset")
QUERY_TYPES = ("r0_random", "r0_fixed", "r_classic", "r_modified")


class ConfigError(ValueError):
    """Invalid experiment configuration; message starts with the field path."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


def _require(d: dict, path: str, key: str):
    if key not in d:
        raise ConfigError(f"{path}.{key}", "missing required field")
    return d[key]


def _no_unknown(d: dict, path: str, allowed):
    unknown = set(d) - set(allowed)
    if unknown:
        raise ConfigError(path, f"unknown keys: {sorted(unknown)}")


def _number(value, path: str, minimum=None, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(path, f"expected a number, got {value!r}")
    if integer and int(value) != value:
        raise ConfigError(path, f"expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(path, f"must be >= {minimum}, got {value!r}")
    return int(value) if integer else float(value)


def _number_list(value, path: str, minimum=None):
    if not isinstance(value, (list, tuple)) or not value:
        raise ConfigError(path, "expected a non-empty list of numbers")
    return tuple(_number(v, f"{path}[{i}]", minimum=minimum)
                 for i, v in enumerate(value))


def _choice(value, path: str, options):
    if value not in options:
        raise ConfigError(path, f"expected one of {options}, got {value!r}")
    return value


@dataclass(frozen=True)
class NetworkSpec:
    N: int
    mode: str                    # random | fixed
    weights: tuple[float, ...]
    topology: str = "regular"    # regular | erdos-renyi
    k: float | None = None       # degree (regular) or mean degree (ER)
    probs: tuple[float, ...] = ()
    counts: tuple[int, ...] = ()

    def weight_classes(self) -> WeightClasses:
        if self.mode == "random":
            return WeightClasses.random(self.weights, self.probs, self.k)
        return WeightClasses.fixed(self.weights, self.counts)


@dataclass(frozen=True)
class EpidemicSpec:
    dynamics: str                # sis | sir
    tau: float
    gamma: float
    i0_fraction: float
    t_max: float


@dataclass(frozen=True)
class EnsembleSpec:
    seed: int
    runs: int = 100


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    network: NetworkSpec | None = None
    epidemic: EpidemicSpec | None = None
    ensemble: EnsembleSpec = EnsembleSpec(seed=0)
    closure: str | None = None   # classic | modified | None (pick by mode)
    output: str | None = None
    save_runs: bool = False
    grid_points: int = 201
    query: dict = field(default_factory=dict)
    steady: dict = field(default_factory=dict)
    figure: dict = field(default_factory=dict)
    resolved: dict = field(default_factory=dict, repr=False)

    def pick_closure(self, wc: WeightClasses) -> Closure:
        if self.closure == "classic":
            return Closure.classic(wc.degree)
        if self.closure == "modified":
            return Closure.modified(wc.counts if wc.counts else
                                    [round(p * wc.degree) for p in wc.probs])
        return Closure.for_weight_classes(wc)


def _parse_network(raw, path="network") -> NetworkSpec:
    if not isinstance(raw, dict):
        raise ConfigError(path, "expected an object")
    _no_unknown(raw, path, ("N", "topology", "k", "mean_degree", "mode",
                            "weights", "probs", "counts"))
    N = _number(_require(raw, path, "N"), f"{path}.N", minimum=2, integer=True)
    mode = _choice(_require(raw, path, "mode"), f"{path}.mode",
                   ("random", "fixed"))
    weights = _number_list(_require(raw, path, "weights"), f"{path}.weights")
    if any(w <= 0 for w in weights):
        raise ConfigError(f"{path}.weights", "weights must be positive")
    topology = _choice(raw.get("topology", "regular"), f"{path}.topology",
                       ("regular", "erdos-renyi"))
    k = raw.get("k", raw.get("mean_degree"))
    probs: tuple[float, ...] = ()
    counts: tuple[int, ...] = ()
    if mode == "random":
        probs = _number_list(_require(raw, path, "probs"), f"{path}.probs",
                             minimum=0.0)
        if len(probs) != len(weights):
            raise ConfigError(f"{path}.probs", "length must match weights")
        if abs(sum(probs) - 1.0) > 1e-12:
            raise ConfigError(f"{path}.probs", "must sum to 1")
        if k is None:
            raise ConfigError(f"{path}.k", "missing required field")
        k = _number(k, f"{path}.k", minimum=1,
                    integer=(topology == "regular"))
    else:
        if topology != "regular":
            raise ConfigError(f"{path}.topology",
                              "fixed weights need a regular topology")
        if "probs" in raw:
            raise ConfigError(f"{path}.probs", "not allowed in fixed mode")
        counts = tuple(int(c) for c in _number_list(
            _require(raw, path, "counts"), f"{path}.counts", minimum=0))
        if len(counts) != len(weights):
            raise ConfigError(f"{path}.counts", "length must match weights")
        if k is not None and _number(k, f"{path}.k", integer=True) != sum(counts):
            raise ConfigError(f"{path}.k", "must equal sum(counts)")
        k = sum(counts)
    spec = NetworkSpec(N=N, mode=mode, weights=weights, topology=topology,
                       k=k, probs=probs, counts=counts)
    try:
        spec.weight_classes()
    except ValueError as exc:
        raise ConfigError(path, str(exc)) from exc
    return spec


def _parse_epidemic(raw, gamma_default=None, path="epidemic") -> EpidemicSpec:
    if not isinstance(raw, dict):
        raise ConfigError(path, "expected an object")
    _no_unknown(raw, path, ("dynamics", "tau", "gamma", "i0_fraction", "t_max"))
    dynamics = _choice(raw.get("dynamics", "sis"), f"{path}.dynamics",
                       ("sis", "sir"))
    tau = _number(_require(raw, path, "tau"), f"{path}.tau", minimum=0.0)
    gamma = _number(_require(raw, path, "gamma"), f"{path}.gamma")
    if gamma <= 0:
        raise ConfigError(f"{path}.gamma", "must be positive")
    f = _number(raw.get("i0_fraction", 0.05), f"{path}.i0_fraction")
    if not 0 < f < 1:
        raise ConfigError(f"{path}.i0_fraction", "must lie in (0, 1)")
    t_max = _number(raw.get("t_max", 15.0 / gamma), f"{path}.t_max")
    if t_max <= 0:
        raise ConfigError(f"{path}.t_max", "must be positive")
    return EpidemicSpec(dynamics=dynamics, tau=tau, gamma=gamma,
                        i0_fraction=f, t_max=t_max)


def _parse_ensemble(raw, path="ensemble") -> EnsembleSpec:
    if not isinstance(raw, dict):
        raise ConfigError(path, "expected an object")
    _no_unknown(raw, path, ("runs", "seed"))
    seed = _number(_require(raw, path, "seed"), f"{path}.seed",
                   minimum=0, integer=True)
    runs = _number(raw.get("runs", 100), f"{path}.runs", minimum=1,
                   integer=True)
    return EnsembleSpec(seed=seed, runs=runs)


def _parse_query(raw, path="query") -> dict:
    if not isinstance(raw, dict):
        raise ConfigError(path, "expected an object")
    qtype = _choice(_require(raw, path, "type"), f"{path}.type", QUERY_TYPES)
    fields = {
        "r0_random": ("type", "k", "weights", "probs", "tau", "gamma"),
        "r0_fixed": ("type", "k1", "k2", "w1", "w2", "tau", "gamma"),
        "r_classic": ("type", "k", "p1", "w1", "w2", "tau", "gamma"),
        "r_modified": ("type", "k1", "k2", "w1", "w2", "tau", "gamma"),
    }[qtype]
    _no_unknown(raw, path, fields)
    out = {"type": qtype}
    for key in fields[1:]:
        value = _require(raw, path, key)
        if key in ("weights", "probs"):
            out[key] = _number_list(value, f"{path}.{key}")
        else:
            out[key] = _number(value, f"{path}.{key}")
    return out


def _parse_steady(raw, path="steady") -> dict:
    if not isinstance(raw, dict):
        raise ConfigError(path, "expected an object")
    _no_unknown(raw, path, ("tau_grid", "gamma", "i0_fraction"))
    grid = _number_list(_require(raw, path, "tau_grid"), f"{path}.tau_grid",
                        minimum=0.0)
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigError(f"{path}.tau_grid", "must be strictly ascending")
    gamma = _number(_require(raw, path, "gamma"), f"{path}.gamma")
    if gamma <= 0:
        raise ConfigError(f"{path}.gamma", "must be positive")
    f = _number(raw.get("i0_fraction", 0.05), f"{path}.i0_fraction")
    if not 0 < f < 1:
        raise ConfigError(f"{path}.i0_fraction", "must lie in (0, 1)")
    return {"tau_grid": grid, "gamma": gamma, "i0_fraction": f}


def _parse_figure(raw, path="figure") -> dict:
    from .figures import FIGURE_NAMES
    if not isinstance(raw, dict):
        raise ConfigError(path, "expected an object")
    _no_unknown(raw, path, ("name", "runs", "N"))
    name = _choice(_require(raw, path, "name"), f"{path}.name", FIGURE_NAMES)
    out = {"name": name}
    if "runs" in raw:
        out["runs"] = _number(raw["runs"], f"{path}.runs", minimum=1,
                              integer=True)
    if "N" in raw:
        out["N"] = _number(raw["N"], f"{path}.N", minimum=2, integer=True)
    return out


_SECTIONS = {
    # kind -> (required sections, optional sections)
    "generate": (("network", "ensemble"), ()),
    "simulate": (("network", "epidemic", "ensemble"), ("save_runs",)),
    "pairwise": (("network", "epidemic"), ("closure",)),
    "compare": (("network", "epidemic", "ensemble"),
                ("closure", "grid_points", "save_runs")),
    "r0": (("query",), ()),
    "steady-sweep": (("network", "steady"), ("closure",)),
    "figure-preset": (("figure", "ensemble"), ()),
}


def validate_config(raw: dict) -> ExperimentConfig:
    if not isinstance(raw, dict):
        raise ConfigError("", "config must be a JSON object")
    schema = _require(raw, "", "schema")
    if schema != SCHEMA_VERSION:
        raise ConfigError("schema", f"unsupported version {schema!r} "
                                    f"(expected {SCHEMA_VERSION})")
    kind = _choice(_require(raw, "", "kind"), "kind", KINDS)
    required, optional = _SECTIONS[kind]
    _no_unknown(raw, "", ("schema", "kind", "output") + required + optional)
    for section in required:
        if section not in raw:
            raise ConfigError(section, "missing required section")

    network = _parse_network(raw["network"]) if "network" in raw else None
    epidemic = _parse_epidemic(raw["epidemic"]) if "epidemic" in raw else None
    ensemble = (_parse_ensemble(raw["ensemble"]) if "ensemble" in raw
                else EnsembleSpec(seed=0))
    closure = raw.get("closure")
    if closure is not None:
        _choice(closure, "closure", ("classic", "modified"))
        if closure == "modified" and network is not None and not network.counts:
            raise ConfigError("closure",
                              "modified closure needs fixed-mode class counts")
    output = raw.get("output")
    if output is not None and not isinstance(output, str):
        raise ConfigError("output", "expected a string path")
    save_runs = raw.get("save_runs", False)
    if not isinstance(save_runs, bool):
        raise ConfigError("save_runs", "expected a boolean")
    grid_points = _number(raw.get("grid_points", 201), "grid_points",
                          minimum=2, integer=True)
    query = _parse_query(raw["query"]) if kind == "r0" else {}
    steady = _parse_steady(raw["steady"]) if kind == "steady-sweep" else {}
    figure = _parse_figure(raw["figure"]) if kind == "figure-preset" else {}

    return ExperimentConfig(kind=kind, network=network, epidemic=epidemic,
                            ensemble=ensemble, closure=closure, output=output,
                            save_runs=save_runs, grid_points=grid_points,
                            query=query, steady=steady, figure=figure,
                            resolved=raw)


def load_config(path) -> ExperimentConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError("", f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError("", f"invalid JSON: {exc}") from exc
    return validate_config(raw)
