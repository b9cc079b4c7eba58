"""Endemic steady states of the SIS pairwise system.

The flow conserves the population and every per-class pair sum, so the raw
algebraic system d(state)/dt = 0 has a rank-deficient Jacobian.  The solver
therefore eliminates S and the SS pairs through the conserved quantities of
the supplied guess and runs damped Newton on the remaining unknowns
[I, SI_1..M, II_1..M] with a finite-difference Jacobian.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gillespie import EpidemicParams
from .netgen import WeightClasses
from .ode import integrate
from .pairwise import (Closure, PairwiseState, initial_conditions, make_rhs,
                       sis_rhs_vector)

RESIDUAL_TOL_FACTOR = 1e-10
PHYSICAL_SLACK_FACTOR = 1e-6


@dataclass(frozen=True)
class SteadyStateResult:
    state: PairwiseState
    residual_norm: float
    converged: bool
    iterations: int
    message: str = ""


@dataclass(frozen=True)
class SweepPoint:
    tau: float
    p1: float
    I_over_N: float
    residual_norm: float
    converged: bool


def _assemble(x: np.ndarray, N: float, pair_totals: np.ndarray,
              M: int) -> np.ndarray:
    """Full SIS state vector from the reduced unknowns [I, SI_m, II_m]."""
    y = np.empty(2 + 3 * M)
    I = x[0]
    SI = x[1:1 + M]
    II = x[1 + M:1 + 2 * M]
    y[0] = N - I
    y[1] = I
    y[2:2 + M] = pair_totals - 2 * SI - II
    y[2 + M:2 + 2 * M] = SI
    y[2 + 2 * M:2 + 3 * M] = II
    return y


def _reduce(state: PairwiseState) -> np.ndarray:
    return np.concatenate([[state.I], state.SI, state.II])


def solve_sis_endemic(wc: WeightClasses, params: EpidemicParams,
                      closure: Closure, N: float,
                      initial_guess: PairwiseState,
                      max_iterations: int = 200,
                      max_halvings: int = 30) -> SteadyStateResult:
    """Damped Newton root of the SIS pairwise system near the guess.

    The pair sums of the guess fix the conserved quantities; the disease-free
    state is itself a root, so seeding there returns it unchanged.  A root is
    reported converged only if the residual infinity-norm falls below
    1e-10*N and the state is physical (components within [0, N] and pair
    bounds, up to 1e-6*N slack).
    """
    if initial_guess.dynamics != "sis" or initial_guess.M != wc.M:
        raise ValueError("initial guess must be an SIS state with matching M")
    M = wc.M
    w = np.asarray(wc.weights, dtype=float)
    F = closure.factors(M)
    tau, gamma = params.tau, params.gamma
    pair_totals = initial_guess.pair_sums()
    tol = RESIDUAL_TOL_FACTOR * N

    def residual(x):
        dy = sis_rhs_vector(_assemble(x, N, pair_totals, M), w, F, tau, gamma)
        return np.concatenate([[dy[1]], dy[2 + M:2 + 2 * M],
                               dy[2 + 2 * M:2 + 3 * M]])

    def result(x, norm, it, converged, message=""):
        state = PairwiseState(_assemble(x, N, pair_totals, M), M, "sis")
        return SteadyStateResult(state=state, residual_norm=float(norm),
                                 converged=converged, iterations=it,
                                 message=message)

    x = _reduce(initial_guess)
    fx = residual(x)
    norm = np.abs(fx).max()
    dim = x.size
    for it in range(max_iterations):
        if norm <= tol:
            return _finalize(result, x, norm, it, N, pair_totals)
        J = np.empty((dim, dim))
        for j in range(dim):
            h = 1e-6 * max(1.0, abs(x[j]))
            xp = x.copy()
            xp[j] += h
            J[:, j] = (residual(xp) - fx) / h
        try:
            dx = np.linalg.solve(J, -fx)
        except np.linalg.LinAlgError:
            return result(x, norm, it, False, "singular Jacobian")
        alpha = 1.0
        for _ in range(max_halvings):
            xn = x + alpha * dx
            fn = residual(xn)
            nn = np.abs(fn).max()
            if nn < norm:
                x, fx, norm = xn, fn, nn
                break
            alpha *= 0.5
        else:
            return result(x, norm, it, False,
                          "line search stalled (no residual decrease)")
    if norm <= tol:
        return _finalize(result, x, norm, max_iterations, N, pair_totals)
    return result(x, norm, max_iterations, False,
                  f"no convergence after {max_iterations} iterations")


def _finalize(result, x, norm, it, N, pair_totals):
    slack = PHYSICAL_SLACK_FACTOR * N
    M = pair_totals.size
    I = x[0]
    SI = x[1:1 + M]
    II = x[1 + M:1 + 2 * M]
    SS = pair_totals - 2 * SI - II
    physical = (-slack <= I <= N + slack
                and np.all(SI >= -slack) and np.all(II >= -slack)
                and np.all(SS >= -slack)
                and np.all(SI <= pair_totals + slack)
                and np.all(II <= pair_totals + slack))
    if not physical:
        return result(x, norm, it, False, "root outside physical bounds")
    return result(x, norm, it, True)


def _ode_guess(wc, tau, gamma, closure, N, i0_fraction, horizon):
    params = EpidemicParams(tau=tau, gamma=gamma)
    y0 = initial_conditions(N, i0_fraction, wc, "sis")
    sol = integrate(make_rhs(wc, params, closure, "sis"), y0.vector,
                    (0.0, horizon), rel_tol=1e-10, abs_tol=1e-10)
    return PairwiseState(sol.y[-1], wc.M, "sis")


def sweep_endemic(wc: WeightClasses, taus, gamma: float, closure: Closure,
                  N: float, i0_fraction: float = 0.05,
                  ode_horizon_over_gamma: float = 500.0) -> list[SweepPoint]:
    """Endemic I/N over an ascending tau grid, by continuation.

    The first point is seeded from a long ODE integration; each further point
    reuses the previous converged root (falling back to a fresh ODE seed when
    the previous point failed).  Per-point failures are recorded, not raised.
    """
    taus = np.asarray(taus, dtype=float)
    if taus.ndim != 1 or taus.size == 0 or np.any(np.diff(taus) <= 0):
        raise ValueError("taus must be a non-empty strictly ascending grid")
    p1 = float(wc.class_fractions[0])
    horizon = ode_horizon_over_gamma / gamma
    rows: list[SweepPoint] = []
    guess: PairwiseState | None = None
    for tau in taus:
        params = EpidemicParams(tau=float(tau), gamma=gamma)
        try:
            seed_state = guess if guess is not None else _ode_guess(
                wc, float(tau), gamma, closure, N, i0_fraction, horizon)
            res = solve_sis_endemic(wc, params, closure, N, seed_state)
        except Exception:
            rows.append(SweepPoint(tau=float(tau), p1=p1, I_over_N=float("nan"),
                                   residual_norm=float("nan"), converged=False))
            continue
        rows.append(SweepPoint(tau=float(tau), p1=p1,
                               I_over_N=res.state.I / N,
                               residual_norm=res.residual_norm,
                               converged=res.converged))
        if res.converged:
            guess = res.state
    return rows


def write_sweep_csv(rows, path) -> None:
    """CSV `tau,p1,I_over_N,residual,converged`."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("tau,p1,I_over_N,residual,converged\n")
        for row in rows:
            fh.write(f"{row.tau:.12g},{row.p1:.12g},{row.I_over_N:.12g},"
                     f"{row.residual_norm:.12g},{int(row.converged)}\n")
