"""Exact event-driven simulation of SIS/SIR dynamics on weighted networks.

Continuous-time Markov chain sampled event by event: a susceptible node u is
infected at rate tau * (sum of link weights to its infected neighbours), an
infected node recovers at rate gamma (back to S for SIS, to R for SIR).
Waiting times are exponential in the total rate; the event is drawn
proportionally to its rate.

The hot loop is JIT-compiled.  It keeps per-node infection pressures, the
total rate and per-class pair counts incrementally (O(degree) per event),
checks the integer pair-conservation identity after every event, and audits
the cached rates against a full recomputation every `audit_every` events.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .netgen import WeightClasses, WeightedNetwork
from .rng import TAG_KERNEL, TAG_PLACEMENT, fold32, substream

RATE_AUDIT_REL_TOL = 1e-9


class SimulationError(RuntimeError):
    """Internal bookkeeping audit failed during a run."""


@dataclass(frozen=True)
class EpidemicParams:
    """Transmission rate per unit link weight and recovery rate."""

    tau: float
    gamma: float

    def __post_init__(self):
        if self.tau < 0:
            raise ValueError("tau must be non-negative")
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")


@dataclass(frozen=True)
class AuditReport:
    """Bookkeeping checks accumulated over one run."""

    checked_events: int
    rate_audits: int
    max_rate_deviation: float
    pairs_exact: bool
    rates_ok: bool


@dataclass
class Trajectory:
    """Time-stamped prevalence series; one row per event (row 0 = start)."""

    times: np.ndarray
    S: np.ndarray
    I: np.ndarray
    R: np.ndarray
    t_max: float
    node_count: int
    seed: int | None = None
    event_nodes: np.ndarray | None = field(default=None, repr=False)
    event_types: np.ndarray | None = field(default=None, repr=False)
    runs: int = 1
    audit: AuditReport | None = None

    @property
    def event_count(self) -> int:
        return self.times.size - 1

    def sample(self, time_grid) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Piecewise-constant S, I, R at the grid times (state after the
        last event at or before each query time)."""
        grid = np.asarray(time_grid, dtype=float)
        if grid.size and (grid.min() < 0 or grid.max() > self.t_max + 1e-12):
            raise ValueError("time grid must lie within [0, t_max]")
        idx = np.clip(np.searchsorted(self.times, grid, side="right") - 1,
                      0, self.times.size - 1)
        return self.S[idx], self.I[idx], self.R[idx]


@njit(cache=True)
def _kernel(indptr, nbrs, nbr_w, nbr_cls, M, status, tau, gamma, t_max,
            seed32, absorbing, audit_every):
    np.random.seed(seed32)
    N = status.size

    pressure = np.zeros(N)
    inf_list = np.empty(N, np.int64)
    inf_pos = np.full(N, -1, np.int64)
    n_inf = 0
    for u in range(N):
        if status[u] == 1:
            inf_list[n_inf] = u
            inf_pos[u] = n_inf
            n_inf += 1
            for e in range(indptr[u], indptr[u + 1]):
                pressure[nbrs[e]] += tau * nbr_w[e]
    inf_total = 0.0
    for v in range(N):
        if status[v] == 0:
            inf_total += pressure[v]

    # doubly counted per-class pair matrix P[m, a, b]
    P = np.zeros((M, 3, 3), np.int64)
    for u in range(N):
        for e in range(indptr[u], indptr[u + 1]):
            P[nbr_cls[e], status[u], status[nbrs[e]]] += 1
    target = np.empty(M, np.int64)
    for m in range(M):
        target[m] = P[m].sum()

    nS = 0
    nR = 0
    for u in range(N):
        if status[u] == 0:
            nS += 1
        elif status[u] == 2:
            nR += 1

    cap = 4096
    times = np.empty(cap)
    Sarr = np.empty(cap, np.int64)
    Iarr = np.empty(cap, np.int64)
    Rarr = np.empty(cap, np.int64)
    ev_node = np.empty(cap, np.int64)
    ev_type = np.empty(cap, np.int8)
    times[0] = 0.0
    Sarr[0] = nS
    Iarr[0] = n_inf
    Rarr[0] = nR
    ev_node[0] = -1
    ev_type[0] = -1
    n = 1

    t = 0.0
    checked = 0
    audits = 0
    max_dev = 0.0
    pairs_ok = True
    rates_ok = True

    while n_inf > 0:
        total = inf_total + gamma * n_inf
        if total <= 0.0:
            break
        r = np.random.random()
        dt = -np.log(r) / total if r > 0.0 else np.inf
        if t + dt > t_max:
            break

        pick = np.random.random() * total
        if pick < inf_total:
            # infection: susceptible node weighted by cached pressure
            acc = 0.0
            node = -1
            for v in range(N):
                if status[v] == 0 and pressure[v] > 0.0:
                    acc += pressure[v]
                    node = v
                    if acc >= pick:
                        break
            if node == -1:
                # cached total drifted above zero with no eligible node left;
                # refresh and redraw
                inf_total = 0.0
                for v in range(N):
                    if status[v] == 0:
                        inf_total += pressure[v]
                continue
            t += dt
            for e in range(indptr[node], indptr[node + 1]):
                c = status[nbrs[e]]
                m = nbr_cls[e]
                P[m, 0, c] -= 1
                P[m, c, 0] -= 1
                P[m, 1, c] += 1
                P[m, c, 1] += 1
            status[node] = 1
            nS -= 1
            inf_total -= pressure[node]
            inf_list[n_inf] = node
            inf_pos[node] = n_inf
            n_inf += 1
            for e in range(indptr[node], indptr[node + 1]):
                nb = nbrs[e]
                dw = tau * nbr_w[e]
                pressure[nb] += dw
                if status[nb] == 0:
                    inf_total += dw
            etype = 0
        else:
            # recovery: uniform among infected nodes
            idx = int((pick - inf_total) / gamma)
            if idx >= n_inf:
                idx = n_inf - 1
            node = inf_list[idx]
            t += dt
            new_state = 2 if absorbing else 0
            for e in range(indptr[node], indptr[node + 1]):
                c = status[nbrs[e]]
                m = nbr_cls[e]
                P[m, 1, c] -= 1
                P[m, c, 1] -= 1
                P[m, new_state, c] += 1
                P[m, c, new_state] += 1
            status[node] = new_state
            if absorbing:
                nR += 1
            else:
                nS += 1
            last = inf_list[n_inf - 1]
            inf_list[idx] = last
            inf_pos[last] = idx
            inf_pos[node] = -1
            n_inf -= 1
            for e in range(indptr[node], indptr[node + 1]):
                nb = nbrs[e]
                dw = tau * nbr_w[e]
                pressure[nb] -= dw
                if status[nb] == 0:
                    inf_total -= dw
            if not absorbing:
                inf_total += pressure[node]
            etype = 1

        if n == cap:
            cap2 = 2 * cap
            tmp_t = np.empty(cap2)
            tmp_t[:cap] = times
            times = tmp_t
            tmp = np.empty(cap2, np.int64)
            tmp[:cap] = Sarr
            Sarr = tmp
            tmp = np.empty(cap2, np.int64)
            tmp[:cap] = Iarr
            Iarr = tmp
            tmp = np.empty(cap2, np.int64)
            tmp[:cap] = Rarr
            Rarr = tmp
            tmp = np.empty(cap2, np.int64)
            tmp[:cap] = ev_node
            ev_node = tmp
            tmp8 = np.empty(cap2, np.int8)
            tmp8[:cap] = ev_type
            ev_type = tmp8
            cap = cap2
        times[n] = t
        Sarr[n] = nS
        Iarr[n] = n_inf
        Rarr[n] = nR
        ev_node[n] = node
        ev_type[n] = etype
        n += 1

        # integer conservation checks, every event
        for m in range(M):
            s = 0
            for a in range(3):
                for b in range(3):
                    s += P[m, a, b]
            if s != target[m]:
                pairs_ok = False
            if (P[m, 0, 1] != P[m, 1, 0] or P[m, 0, 2] != P[m, 2, 0]
                    or P[m, 1, 2] != P[m, 2, 1]):
                pairs_ok = False
        if nS + n_inf + nR != N:
            pairs_ok = False
        checked += 1

        # periodic full recomputation of the cached rates
        if checked % audit_every == 0:
            fresh_p = np.zeros(N)
            for u in range(N):
                if status[u] == 1:
                    for e in range(indptr[u], indptr[u + 1]):
                        fresh_p[nbrs[e]] += tau * nbr_w[e]
            fresh_total = 0.0
            for v in range(N):
                if status[v] == 0:
                    fresh_total += fresh_p[v]
            denom = fresh_total if fresh_total > 1.0 else 1.0
            dev = abs(inf_total - fresh_total) / denom
            if dev > max_dev:
                max_dev = dev
            pressure = fresh_p
            inf_total = fresh_total
            fresh_P = np.zeros((M, 3, 3), np.int64)
            for u in range(N):
                for e in range(indptr[u], indptr[u + 1]):
                    fresh_P[nbr_cls[e], status[u], status[nbrs[e]]] += 1
            for m in range(M):
                for a in range(3):
                    for b in range(3):
                        if fresh_P[m, a, b] != P[m, a, b]:
                            pairs_ok = False
            audits += 1

    if max_dev > RATE_AUDIT_REL_TOL:
        rates_ok = False
    return (times[:n], Sarr[:n], Iarr[:n], Rarr[:n], ev_node[:n],
            ev_type[:n], checked, audits, max_dev, pairs_ok, rates_ok)


def _network_arrays(net: WeightedNetwork, wc: WeightClasses):
    indptr, nbrs, ncls = net.adjacency()
    w = np.asarray(wc.weights, dtype=float)
    return indptr, nbrs, w[ncls], ncls


def _initial_status(net: WeightedNetwork, initial_infected_fraction: float,
                    seed: int) -> np.ndarray:
    N = net.node_count
    if N == 0 or net.edge_count == 0:
        raise ValueError("network is empty")
    if not 0 < initial_infected_fraction < 1:
        raise ValueError("initial_infected_fraction must be in (0, 1)")
    n0 = int(np.floor(initial_infected_fraction * N + 0.5))
    if n0 == 0:
        raise ValueError("initial infected count rounds to zero")
    if n0 >= N:
        raise ValueError("initial infected count rounds to the whole network")
    rng = substream(seed, TAG_PLACEMENT)
    status = np.zeros(N, dtype=np.int8)
    status[rng.choice(N, size=n0, replace=False)] = 1
    return status


def _run(net, wc, params, initial_infected_fraction, t_max, seed, absorbing,
         audit_every):
    if t_max <= 0:
        raise ValueError("t_max must be positive")
    if audit_every < 1:
        raise ValueError("audit_every must be >= 1")
    status = _initial_status(net, initial_infected_fraction, seed)
    indptr, nbrs, nbr_w, ncls = _network_arrays(net, wc)
    out = _kernel(indptr, nbrs, nbr_w, ncls, wc.M, status,
                  float(params.tau), float(params.gamma), float(t_max),
                  fold32(seed ^ TAG_KERNEL), absorbing, audit_every)
    (times, S, I, R, ev_node, ev_type, checked, audits, max_dev,
     pairs_ok, rates_ok) = out
    if not pairs_ok:
        raise SimulationError("pair-count bookkeeping lost integer exactness")
    if not rates_ok:
        raise SimulationError(
            f"cached event rate drifted by {max_dev:.3e} (> {RATE_AUDIT_REL_TOL})")
    audit = AuditReport(checked_events=int(checked), rate_audits=int(audits),
                        max_rate_deviation=float(max_dev),
                        pairs_exact=bool(pairs_ok), rates_ok=bool(rates_ok))
    return Trajectory(times=times, S=S.astype(float), I=I.astype(float),
                      R=R.astype(float), t_max=float(t_max),
                      node_count=net.node_count, seed=seed,
                      event_nodes=ev_node, event_types=ev_type, audit=audit)


def run_sis(net: WeightedNetwork, wc: WeightClasses, params: EpidemicParams,
            initial_infected_fraction: float, t_max: float, seed: int,
            audit_every: int = 10_000) -> Trajectory:
    """One exact SIS sample path; recovered nodes return to S.

    Initial infecteds are drawn uniformly without replacement from the
    placement sub-stream of `seed`; the event loop uses its own sub-stream.
    """
    return _run(net, wc, params, initial_infected_fraction, t_max, seed,
                absorbing=False, audit_every=audit_every)


def run_sir(net: WeightedNetwork, wc: WeightClasses, params: EpidemicParams,
            initial_infected_fraction: float, t_max: float, seed: int,
            audit_every: int = 10_000) -> Trajectory:
    """One exact SIR sample path; ends early once no infecteds remain."""
    return _run(net, wc, params, initial_infected_fraction, t_max, seed,
                absorbing=True, audit_every=audit_every)


def ensemble_mean(trajectories, time_grid) -> Trajectory:
    """Pointwise mean of the runs on a common grid.

    Each run is sampled as a step function (piecewise-constant between
    events) before averaging.
    """
    trajectories = list(trajectories)
    if not trajectories:
        raise ValueError("need at least one trajectory")
    grid = np.asarray(time_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("time grid must be a non-empty 1-d array")
    n = len(trajectories)
    S = np.zeros(grid.size)
    I = np.zeros(grid.size)
    R = np.zeros(grid.size)
    for traj in trajectories:
        s, i, r = traj.sample(grid)
        S += s
        I += i
        R += r
    S /= n
    I /= n
    R /= n
    return Trajectory(times=grid, S=S, I=I, R=R,
                      t_max=min(tr.t_max for tr in trajectories),
                      node_count=trajectories[0].node_count, runs=n)


def write_trajectory_csv(traj: Trajectory, path) -> None:
    """CSV `time,S,I,R` (R stays zero for SIS runs)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("time,S,I,R\n")
        for t, s, i, r in zip(traj.times, traj.S, traj.I, traj.R):
            fh.write(f"{t:.12g},{s:.12g},{i:.12g},{r:.12g}\n")


def write_ensemble_csv(traj: Trajectory, path) -> None:
    """CSV `time,mean_S,mean_I,mean_R,runs` for an averaged trajectory."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("time,mean_S,mean_I,mean_R,runs\n")
        for t, s, i, r in zip(traj.times, traj.S, traj.I, traj.R):
            fh.write(f"{t:.12g},{s:.12g},{i:.12g},{r:.12g},{traj.runs}\n")
