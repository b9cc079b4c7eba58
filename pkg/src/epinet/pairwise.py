"""Pairwise ODE models on weighted networks.

Tracks expected singles [S], [I], [R] and per-weight-class pair counts
(doubly counted), closing triples with either the classic mean-degree factor
or the per-class ("modified") factors.  State vectors are laid out as

    SIS:  [S, I, SS_1..M, SI_1..M, II_1..M]
    SIR:  [S, I, R, SS_1..M, SI_1..M, II_1..M, SR_1..M, IR_1..M, RR_1..M]

Singles and the per-class combination SS + 2*SI + II (+ 2*SR + 2*IR + RR)
are exact invariants of both systems and are used as correctness checks.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .gillespie import EpidemicParams
from .netgen import WeightClasses, WeightMode
from .ode import integrate, OdeSolution, IntegrationError  # noqa: F401  (re-export)


class ClosureKind(enum.Enum):
    CLASSIC = "classic"
    MODIFIED = "modified"


@dataclass(frozen=True)
class Closure:
    """Triple-closure choice plus the degree structure it needs."""

    kind: ClosureKind
    mean_degree: float = 0.0
    class_degrees: tuple[int, ...] = ()

    @classmethod
    def classic(cls, mean_degree: float) -> "Closure":
        if mean_degree <= 0:
            raise ValueError("mean degree must be positive")
        return cls(ClosureKind.CLASSIC, mean_degree=float(mean_degree))

    @classmethod
    def modified(cls, class_degrees) -> "Closure":
        degs = tuple(int(k) for k in class_degrees)
        if any(k < 1 for k in degs):
            raise ValueError("modified closure needs every class degree >= 1")
        return cls(ClosureKind.MODIFIED, class_degrees=degs,
                   mean_degree=float(sum(degs)))

    @classmethod
    def for_weight_classes(cls, wc: WeightClasses) -> "Closure":
        """Default pairing: classic for random weights, modified for fixed."""
        if wc.mode is WeightMode.RANDOM:
            return cls.classic(wc.degree)
        return cls.modified(wc.counts)

    def factors(self, M: int) -> np.ndarray:
        """(M, M) matrix F with triple estimate F[m,n]*AB_m*BC_n/B."""
        if self.kind is ClosureKind.CLASSIC:
            k = self.mean_degree
            return np.full((M, M), (k - 1.0) / k)
        if len(self.class_degrees) != M:
            raise ValueError(f"closure has {len(self.class_degrees)} class "
                             f"degrees, model has {M} classes")
        F = np.ones((M, M))
        ki = np.asarray(self.class_degrees, dtype=float)
        np.fill_diagonal(F, (ki - 1.0) / ki)
        return F


def closure_eval(closure: Closure, AB_m: float, BC_n: float, B: float,
                 m: int, n: int) -> float:
    """Triple estimate [ABC]_{mn} from the pair/single counts.

    Returns 0 when the centre count B is 0 (triples vanish with their centre).
    """
    if min(AB_m, BC_n, B) < 0:
        raise ValueError("pair and single counts must be non-negative")
    if B == 0:
        return 0.0
    if closure.kind is ClosureKind.CLASSIC:
        k = closure.mean_degree
        factor = (k - 1.0) / k
    else:
        if not (0 <= m < len(closure.class_degrees)
                and 0 <= n < len(closure.class_degrees)):
            raise IndexError("class index out of range for this closure")
        if m == n:
            km = closure.class_degrees[m]
            factor = (km - 1.0) / km
        else:
            factor = 1.0
    return float(factor * AB_m * BC_n / B)


class PairwiseState:
    """View over a pairwise state vector (doubly counted pairs)."""

    def __init__(self, vector, M: int, dynamics: str):
        if dynamics not in ("sis", "sir"):
            raise ValueError("dynamics must be 'sis' or 'sir'")
        self.vector = np.asarray(vector, dtype=float)
        self.M = int(M)
        self.dynamics = dynamics
        expected = 2 + 3 * M if dynamics == "sis" else 3 + 6 * M
        if self.vector.size != expected:
            raise ValueError(f"state for {dynamics} with M={M} needs "
                             f"{expected} components, got {self.vector.size}")

    @classmethod
    def sis(cls, S, I, SS, SI, II) -> "PairwiseState":
        M = len(SS)
        return cls(np.concatenate([[S, I], SS, SI, II]), M, "sis")

    @classmethod
    def sir(cls, S, I, R, SS, SI, II, SR, IR, RR) -> "PairwiseState":
        M = len(SS)
        return cls(np.concatenate([[S, I, R], SS, SI, II, SR, IR, RR]), M, "sir")

    def _block(self, i: int) -> np.ndarray:
        base = 2 if self.dynamics == "sis" else 3
        return self.vector[base + i * self.M: base + (i + 1) * self.M]

    @property
    def S(self) -> float:
        return float(self.vector[0])

    @property
    def I(self) -> float:
        return float(self.vector[1])

    @property
    def R(self) -> float:
        return float(self.vector[2]) if self.dynamics == "sir" else 0.0

    @property
    def SS(self) -> np.ndarray:
        return self._block(0)

    @property
    def SI(self) -> np.ndarray:
        return self._block(1)

    @property
    def II(self) -> np.ndarray:
        return self._block(2)

    @property
    def SR(self) -> np.ndarray:
        if self.dynamics != "sir":
            raise AttributeError("SR pairs exist only for SIR dynamics")
        return self._block(3)

    @property
    def IR(self) -> np.ndarray:
        if self.dynamics != "sir":
            raise AttributeError("IR pairs exist only for SIR dynamics")
        return self._block(4)

    @property
    def RR(self) -> np.ndarray:
        if self.dynamics != "sir":
            raise AttributeError("RR pairs exist only for SIR dynamics")
        return self._block(5)

    def population(self) -> float:
        return self.S + self.I + self.R

    def pair_sums(self) -> np.ndarray:
        """Per-class SS + 2*SI + II (+ 2*SR + 2*IR + RR); invariant in time."""
        total = self.SS + 2 * self.SI + self.II
        if self.dynamics == "sir":
            total = total + 2 * self.SR + 2 * self.IR + self.RR
        return total

    def copy(self) -> "PairwiseState":
        return PairwiseState(self.vector.copy(), self.M, self.dynamics)


# ---------------------------------------------------------------------------
# right-hand sides (vector form used by the integrator and the root solver)

def sis_rhs_vector(y: np.ndarray, weights: np.ndarray, F: np.ndarray,
                   tau: float, gamma: float) -> np.ndarray:
    M = weights.size
    yc = np.maximum(y, 0.0)  # integrator overshoot must not reach the closures
    S, I = yc[0], yc[1]
    SS = yc[2: 2 + M]
    SI = yc[2 + M: 2 + 2 * M]
    II = yc[2 + 2 * M: 2 + 3 * M]

    wSI = weights * SI
    flux = wSI.sum()
    if S > 0:
        g = (F @ wSI) / S        # g[m]   = sum_n F[m,n] w_n SI_n / S
        gT = (F.T @ wSI) / S     # gT[m]  = sum_n F[n,m] w_n SI_n / S
    else:
        g = gT = np.zeros(M)

    dy = np.empty_like(y)
    dy[0] = gamma * I - tau * flux
    dy[1] = tau * flux - gamma * I
    dy[2: 2 + M] = 2 * gamma * SI - 2 * tau * SS * g
    dy[2 + M: 2 + 2 * M] = (gamma * (II - SI)
                            + tau * (SS * g - SI * gT)
                            - tau * weights * SI)
    dy[2 + 2 * M: 2 + 3 * M] = (-2 * gamma * II + 2 * tau * SI * gT
                                + 2 * tau * weights * SI)
    return dy


def sir_rhs_vector(y: np.ndarray, weights: np.ndarray, F: np.ndarray,
                   tau: float, gamma: float) -> np.ndarray:
    M = weights.size
    yc = np.maximum(y, 0.0)
    S, I = yc[0], yc[1]
    SS = yc[3: 3 + M]
    SI = yc[3 + M: 3 + 2 * M]
    II = yc[3 + 2 * M: 3 + 3 * M]
    SR = yc[3 + 3 * M: 3 + 4 * M]
    IR = yc[3 + 4 * M: 3 + 5 * M]

    wSI = weights * SI
    flux = wSI.sum()
    if S > 0:
        g = (F @ wSI) / S
        gT = (F.T @ wSI) / S
    else:
        g = gT = np.zeros(M)

    dy = np.empty_like(y)
    dy[0] = -tau * flux
    dy[1] = tau * flux - gamma * I
    dy[2] = gamma * I
    dy[3: 3 + M] = -2 * tau * SS * g
    dy[3 + M: 3 + 2 * M] = (tau * (SS * g - SI * gT)
                            - tau * weights * SI - gamma * SI)
    dy[3 + 2 * M: 3 + 3 * M] = (2 * tau * SI * gT + 2 * tau * weights * SI
                                - 2 * gamma * II)
    dy[3 + 3 * M: 3 + 4 * M] = -tau * SR * gT + gamma * SI
    dy[3 + 4 * M: 3 + 5 * M] = tau * SR * gT + gamma * (II - IR)
    # 2*gamma*IR: each I->R event converts one doubly-counted I-R pair into
    # two ordered R-R pairs, which is what keeps the per-class pair sum exact
    dy[3 + 5 * M: 3 + 6 * M] = 2 * gamma * IR
    return dy


def _check_dims(state: PairwiseState, wc: WeightClasses, dynamics: str) -> None:
    if state.M != wc.M:
        raise ValueError(f"state has M={state.M} classes, weights have {wc.M}")
    if state.dynamics != dynamics:
        raise ValueError(f"expected a {dynamics} state, got {state.dynamics}")


def sis_rhs(state: PairwiseState, wc: WeightClasses, params: EpidemicParams,
            closure: Closure) -> PairwiseState:
    """Time derivative of the SIS pairwise state."""
    _check_dims(state, wc, "sis")
    w = np.asarray(wc.weights, dtype=float)
    dy = sis_rhs_vector(state.vector, w, closure.factors(wc.M),
                        params.tau, params.gamma)
    return PairwiseState(dy, wc.M, "sis")


def sir_rhs(state: PairwiseState, wc: WeightClasses, params: EpidemicParams,
            closure: Closure) -> PairwiseState:
    """Time derivative of the SIR pairwise state."""
    _check_dims(state, wc, "sir")
    w = np.asarray(wc.weights, dtype=float)
    dy = sir_rhs_vector(state.vector, w, closure.factors(wc.M),
                        params.tau, params.gamma)
    return PairwiseState(dy, wc.M, "sir")


def make_rhs(wc: WeightClasses, params: EpidemicParams, closure: Closure,
             dynamics: str):
    """rhs(t, y) callable for :func:`epinet.ode.integrate`."""
    w = np.asarray(wc.weights, dtype=float)
    F = closure.factors(wc.M)
    tau, gamma = params.tau, params.gamma
    if dynamics == "sis":
        return lambda t, y: sis_rhs_vector(y, w, F, tau, gamma)
    if dynamics == "sir":
        return lambda t, y: sir_rhs_vector(y, w, F, tau, gamma)
    raise ValueError("dynamics must be 'sis' or 'sir'")


def initial_conditions(N: float, I0_fraction: float, wc: WeightClasses,
                       dynamics: str = "sis") -> PairwiseState:
    """Proportionally mixed start: infecteds placed at random, pairs at
    random-mixing expectations, all R components zero."""
    if not 0 < I0_fraction < 1:
        raise ValueError("I0_fraction must lie strictly between 0 and 1")
    s, i = 1.0 - I0_fraction, I0_fraction
    S, I = s * N, i * N
    q = wc.class_fractions
    kN = wc.degree * N
    SS = q * kN * s * s
    SI = q * kN * s * i
    II = q * kN * i * i
    zero = np.zeros(wc.M)
    if dynamics == "sis":
        return PairwiseState.sis(S, I, SS, SI, II)
    return PairwiseState.sir(S, I, 0.0, SS, SI, II, zero, zero, zero)


# ---------------------------------------------------------------------------
# classic unweighted reference model (independent implementation, used to
# check that the weighted systems reduce to it when all weights are equal)

def reference_rhs_vector(y: np.ndarray, k: float, tau: float, gamma: float,
                         dynamics: str) -> np.ndarray:
    yc = np.maximum(y, 0.0)
    phi = (k - 1.0) / k
    dy = np.empty_like(y)
    if dynamics == "sis":
        S, I, SS, SI, II = yc
        SSI = phi * SS * SI / S if S > 0 else 0.0
        ISI = phi * SI * SI / S if S > 0 else 0.0
        dy[0] = gamma * I - tau * SI
        dy[1] = tau * SI - gamma * I
        dy[2] = 2 * gamma * SI - 2 * tau * SSI
        dy[3] = gamma * (II - SI) + tau * (SSI - ISI - SI)
        dy[4] = -2 * gamma * II + 2 * tau * (ISI + SI)
        return dy
    S, I, R, SS, SI, II, SR, IR, RR = yc
    SSI = phi * SS * SI / S if S > 0 else 0.0
    ISI = phi * SI * SI / S if S > 0 else 0.0
    ISR = phi * SI * SR / S if S > 0 else 0.0
    dy[0] = -tau * SI
    dy[1] = tau * SI - gamma * I
    dy[2] = gamma * I
    dy[3] = -2 * tau * SSI
    dy[4] = tau * (SSI - ISI) - (tau + gamma) * SI
    dy[5] = 2 * tau * (ISI + SI) - 2 * gamma * II
    dy[6] = -tau * ISR + gamma * SI
    dy[7] = tau * ISR + gamma * (II - IR)
    dy[8] = 2 * gamma * IR
    return dy


def unweighted_reference_rhs(state: PairwiseState, k: float,
                             params: EpidemicParams) -> PairwiseState:
    """Classic (single weight class, weight 1) pairwise model derivative."""
    if state.M != 1:
        raise ValueError("the reference model is single-class; aggregate first")
    dy = reference_rhs_vector(state.vector, k, params.tau, params.gamma,
                              state.dynamics)
    return PairwiseState(dy, 1, state.dynamics)


def aggregate_classes(state: PairwiseState) -> PairwiseState:
    """Sum the per-class pair blocks into a single-class state."""
    if state.dynamics == "sis":
        return PairwiseState.sis(state.S, state.I, [state.SS.sum()],
                                 [state.SI.sum()], [state.II.sum()])
    return PairwiseState.sir(state.S, state.I, state.R, [state.SS.sum()],
                             [state.SI.sum()], [state.II.sum()],
                             [state.SR.sum()], [state.IR.sum()],
                             [state.RR.sum()])
