"""Weighted contact-network generation.

Networks are plain undirected simple graphs plus a weight-class index per
edge.  Two weighting schemes are supported: *random* (every edge draws its
class independently with probabilities p_i) and *fixed* (every node has
exactly k_i incident edges of class i).  The actual weight values live in
:class:`WeightClasses`; the graph only stores class indices.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .rng import substream

_PROB_TOL = 1e-12
MAX_RESTARTS = 500


class GenerationError(RuntimeError):
    """Raised when a network cannot be assembled within the restart budget."""


class WeightMode(enum.Enum):
    RANDOM = "random"
    FIXED = "fixed"


@dataclass(frozen=True)
class WeightClasses:
    """The weight alphabet: M classes with values, frequencies or per-node counts.

    `probs` is used in RANDOM mode (class drawn per edge), `counts` in FIXED
    mode (class-i degree of every node).  `degree` is the per-node link count
    k; in FIXED mode it must equal sum(counts).
    """

    mode: WeightMode
    weights: tuple[float, ...]
    degree: float
    probs: tuple[float, ...] = ()
    counts: tuple[int, ...] = ()

    def __post_init__(self):
        if len(self.weights) < 1:
            raise ValueError("need at least one weight class")
        if any(w <= 0 for w in self.weights):
            raise ValueError("weights must be positive")
        if self.degree <= 0:
            raise ValueError("degree must be positive")
        if self.mode is WeightMode.RANDOM:
            if len(self.probs) != len(self.weights):
                raise ValueError("probs must match weights in length")
            if any(p < 0 or p > 1 for p in self.probs):
                raise ValueError("probs must lie in [0, 1]")
            if abs(sum(self.probs) - 1.0) > _PROB_TOL:
                raise ValueError("probs must sum to 1")
        else:
            if len(self.counts) != len(self.weights):
                raise ValueError("counts must match weights in length")
            if any(int(c) != c or c < 0 for c in self.counts):
                raise ValueError("counts must be non-negative integers")
            if sum(self.counts) != self.degree:
                raise ValueError("counts must sum to the degree")

    @classmethod
    def random(cls, weights, probs, degree) -> "WeightClasses":
        return cls(WeightMode.RANDOM, tuple(float(w) for w in weights),
                   float(degree), probs=tuple(float(p) for p in probs))

    @classmethod
    def fixed(cls, weights, counts) -> "WeightClasses":
        counts = tuple(int(c) for c in counts)
        return cls(WeightMode.FIXED, tuple(float(w) for w in weights),
                   float(sum(counts)), counts=counts)

    @classmethod
    def unweighted(cls, degree) -> "WeightClasses":
        """Single class of weight 1 (sentinel for not-yet-weighted graphs)."""
        return cls.random([1.0], [1.0], degree)

    @property
    def M(self) -> int:
        return len(self.weights)

    @property
    def class_fractions(self) -> np.ndarray:
        """Expected fraction of links in each class (p_i, or k_i/k)."""
        if self.mode is WeightMode.RANDOM:
            return np.asarray(self.probs, dtype=float)
        return np.asarray(self.counts, dtype=float) / self.degree

    @property
    def average_weight(self) -> float:
        return float(np.dot(self.class_fractions, self.weights))


class WeightedNetwork:
    """Undirected simple graph with a weight-class index per edge."""

    def __init__(self, node_count: int, edge_u, edge_v, edge_class):
        self.node_count = int(node_count)
        self.edge_u = np.asarray(edge_u, dtype=np.int64)
        self.edge_v = np.asarray(edge_v, dtype=np.int64)
        self.edge_class = np.asarray(edge_class, dtype=np.int64)
        if not (self.edge_u.shape == self.edge_v.shape == self.edge_class.shape):
            raise ValueError("edge arrays must have equal length")
        if self.edge_count and (self.edge_u.max() >= self.node_count
                                or self.edge_v.max() >= self.node_count
                                or min(self.edge_u.min(), self.edge_v.min()) < 0):
            raise ValueError("edge endpoint out of range")
        if np.any(self.edge_u == self.edge_v):
            raise ValueError("self-loops are not allowed")
        lo = np.minimum(self.edge_u, self.edge_v)
        hi = np.maximum(self.edge_u, self.edge_v)
        if np.unique(lo * self.node_count + hi).size != self.edge_count:
            raise ValueError("parallel edges are not allowed")
        self._csr = None

    @property
    def edge_count(self) -> int:
        return self.edge_u.size

    def degrees(self) -> np.ndarray:
        return np.bincount(np.concatenate([self.edge_u, self.edge_v]),
                           minlength=self.node_count)

    def per_class_degrees(self, M: int) -> np.ndarray:
        """(N, M) matrix: number of class-i edges incident to each node."""
        out = np.zeros((self.node_count, M), dtype=np.int64)
        np.add.at(out, (self.edge_u, self.edge_class), 1)
        np.add.at(out, (self.edge_v, self.edge_class), 1)
        return out

    def class_edge_counts(self, M: int) -> np.ndarray:
        return np.bincount(self.edge_class, minlength=M)

    def adjacency(self):
        """CSR arrays (indptr, neighbors, neighbor_class); built once, cached."""
        if self._csr is None:
            src = np.concatenate([self.edge_u, self.edge_v])
            dst = np.concatenate([self.edge_v, self.edge_u])
            cls = np.concatenate([self.edge_class, self.edge_class])
            order = np.argsort(src, kind="stable")
            indptr = np.zeros(self.node_count + 1, dtype=np.int64)
            np.cumsum(np.bincount(src, minlength=self.node_count), out=indptr[1:])
            self._csr = (indptr, dst[order], cls[order])
        return self._csr

    def with_classes(self, edge_class) -> "WeightedNetwork":
        return WeightedNetwork(self.node_count, self.edge_u, self.edge_v, edge_class)


@dataclass(frozen=True)
class NetworkStats:
    node_count: int
    edge_count: int
    degree_histogram: np.ndarray = field(repr=False)
    class_edge_counts: np.ndarray = field(repr=False)
    average_weight: float


def _regular_pairing(n_nodes, degree, rng, forbidden):
    """One stub-matching attempt at a `degree`-regular simple layer.

    Conflicting pairs (self-loop, duplicate, or edge in `forbidden`) are
    thrown back into the pool and re-shuffled; returns None when the leftover
    stubs admit no permissible pair, which triggers a full restart upstream.
    """
    edges = set()

    def suitable(potential):
        if not potential:
            return True
        nodes = list(potential)
        for i, s1 in enumerate(nodes):
            for s2 in nodes[i + 1:]:
                a, b = (s1, s2) if s1 < s2 else (s2, s1)
                if (a, b) not in edges and (a, b) not in forbidden:
                    return True
        return False

    stubs = np.repeat(np.arange(n_nodes, dtype=np.int64), degree)
    while stubs.size:
        rng.shuffle(stubs)
        retry = {}
        for i in range(0, stubs.size - 1, 2):
            s1, s2 = int(stubs[i]), int(stubs[i + 1])
            a, b = (s1, s2) if s1 < s2 else (s2, s1)
            if a != b and (a, b) not in edges and (a, b) not in forbidden:
                edges.add((a, b))
            else:
                retry[s1] = retry.get(s1, 0) + 1
                retry[s2] = retry.get(s2, 0) + 1
        if not suitable(retry):
            return None
        stubs = np.array([s for s, c in retry.items() for _ in range(c)],
                         dtype=np.int64)
    return edges


def build_regular_graph(N: int, k: int, seed: int) -> WeightedNetwork:
    """Uniform-ish random k-regular simple graph on N nodes (stub matching).

    All edges carry the sentinel class 0; overlay weights afterwards with
    :func:`assign_weights_random`.
    """
    N, k = int(N), int(k)
    if k < 1 or k >= N:
        raise ValueError("need 1 <= k < N")
    if (N * k) % 2 != 0:
        raise ValueError("N*k must be even")
    rng = substream(seed)
    for _ in range(MAX_RESTARTS):
        edges = _regular_pairing(N, k, rng, frozenset())
        if edges is not None:
            eu, ev = map(np.array, zip(*sorted(edges)))
            return WeightedNetwork(N, eu, ev, np.zeros(len(eu), dtype=np.int64))
    raise GenerationError(
        f"failed to build a simple {k}-regular graph on {N} nodes "
        f"within {MAX_RESTARTS} restarts")


def build_erdos_renyi(N: int, mean_degree: float, seed: int) -> WeightedNetwork:
    """Erdos-Renyi graph: each pair joined independently with p = mean_degree/(N-1)."""
    N = int(N)
    if N < 2:
        raise ValueError("need at least two nodes")
    if not 0 < mean_degree <= N - 1:
        raise ValueError("need 0 < mean_degree <= N-1")
    p = mean_degree / (N - 1)
    rng = substream(seed)
    eu, ev = [], []
    for u in range(N - 1):
        hits = np.nonzero(rng.random(N - 1 - u) < p)[0] + u + 1
        eu.append(np.full(hits.size, u, dtype=np.int64))
        ev.append(hits.astype(np.int64))
    eu = np.concatenate(eu)
    ev = np.concatenate(ev)
    return WeightedNetwork(N, eu, ev, np.zeros(eu.size, dtype=np.int64))


def assign_weights_random(net: WeightedNetwork, wc: WeightClasses,
                          seed: int) -> WeightedNetwork:
    """Draw every edge's class independently with probabilities wc.probs."""
    if wc.mode is not WeightMode.RANDOM:
        raise ValueError("assign_weights_random needs RANDOM-mode weight classes")
    rng = substream(seed)
    classes = rng.choice(wc.M, size=net.edge_count,
                         p=np.asarray(wc.probs, dtype=float))
    return net.with_classes(classes.astype(np.int64))


def build_fixed_weight_network(N: int, wc: WeightClasses,
                               seed: int) -> WeightedNetwork:
    """Network where every node has exactly wc.counts[i] class-i edges.

    Built as one independent k_i-regular pairing per class on the shared node
    set; a restart is rejected whenever layers collide (which would create a
    parallel edge), so the union stays simple.
    """
    N = int(N)
    if wc.mode is not WeightMode.FIXED:
        raise ValueError("build_fixed_weight_network needs FIXED-mode weight classes")
    for i, ki in enumerate(wc.counts):
        if (N * ki) % 2 != 0:
            raise ValueError(f"N*k_{i} must be even (k_{i}={ki})")
    if wc.degree >= N:
        raise ValueError("total degree must be below N")
    rng = substream(seed)
    for _ in range(MAX_RESTARTS):
        taken: set[tuple[int, int]] = set()
        layers = []
        ok = True
        for ki in wc.counts:
            if ki == 0:
                layers.append(set())
                continue
            layer = _regular_pairing(N, ki, rng, taken)
            if layer is None:
                ok = False
                break
            taken |= layer
            layers.append(layer)
        if not ok:
            continue
        eu, ev, ecls = [], [], []
        for ci, layer in enumerate(layers):
            for a, b in sorted(layer):
                eu.append(a)
                ev.append(b)
                ecls.append(ci)
        return WeightedNetwork(N, np.array(eu, dtype=np.int64),
                               np.array(ev, dtype=np.int64),
                               np.array(ecls, dtype=np.int64))
    raise GenerationError(
        f"failed to build fixed-weight network (N={N}, counts={wc.counts}) "
        f"within {MAX_RESTARTS} restarts")


def network_stats(net: WeightedNetwork, wc: WeightClasses) -> NetworkStats:
    """Exact degree histogram, per-class edge counts and average link weight."""
    if net.edge_count == 0:
        raise ValueError("network has no edges")
    counts = net.class_edge_counts(wc.M)
    w_av = float(np.dot(counts, wc.weights) / net.edge_count)
    return NetworkStats(
        node_count=net.node_count,
        edge_count=net.edge_count,
        degree_histogram=np.bincount(net.degrees()),
        class_edge_counts=counts,
        average_weight=w_av,
    )


def write_edge_list(net: WeightedNetwork, wc: WeightClasses, path) -> None:
    """Text edge list: header line with N/M/weights/mode, then `u v class` rows."""
    weights = ",".join(repr(w) for w in wc.weights)
    lines = [f"# N={net.node_count} M={wc.M} weights={weights} mode={wc.mode.value}"]
    for u, v, c in zip(net.edge_u, net.edge_v, net.edge_class):
        lines.append(f"{u} {v} {c}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_edge_list(path):
    """Inverse of :func:`write_edge_list`; returns (network, header dict)."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if not header.startswith("# "):
            raise ValueError(f"{path}: missing edge-list header")
        meta = {}
        for tok in header[2:].split():
            key, _, val = tok.partition("=")
            meta[key] = val
        try:
            info = {
                "N": int(meta["N"]),
                "M": int(meta["M"]),
                "weights": tuple(float(w) for w in meta["weights"].split(",")),
                "mode": meta["mode"],
            }
        except (KeyError, ValueError) as exc:
            raise ValueError(f"{path}: malformed header: {header!r}") from exc
        eu, ev, ecls = [], [], []
        for line in fh:
            line = line.strip()
            if not line:
                continue
            u, v, c = line.split()
            eu.append(int(u))
            ev.append(int(v))
            ecls.append(int(c))
    net = WeightedNetwork(info["N"], np.array(eu, dtype=np.int64),
                          np.array(ev, dtype=np.int64),
                          np.array(ecls, dtype=np.int64))
    return net, info
