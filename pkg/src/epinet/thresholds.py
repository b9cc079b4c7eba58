"""Closed-form epidemic-threshold quantities.

Two families: next-generation-matrix reproduction numbers from the network
perspective (random and fixed weight assignment), and growth-rate thresholds
derived from the pairwise models with either closure.  The pairwise formulas
contain a ratio Q that is singular at isolated parameter points; the products
entering the discriminants are therefore always evaluated through their
cancelled, everywhere-finite forms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rng import substream


@dataclass(frozen=True)
class ThresholdReport:
    """A threshold value plus the intermediates that produced it."""

    kind: str                      # R0_random | R0_fixed | R_classic | R_modified
    value: float
    r: tuple[float, ...] = ()      # per-class transmission probabilities
    R1: float | None = None
    R2: float | None = None
    Q: float | None = None
    lambda1: float | None = None
    lambda2: float | None = None

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("threshold value must be non-negative")
        if any(not 0 <= ri < 1 for ri in self.r):
            raise ValueError("transmission probabilities must lie in [0, 1)")


def _check_rates(tau: float, gamma: float) -> None:
    if tau < 0:
        raise ValueError("tau must be non-negative")
    if gamma <= 0:
        raise ValueError("gamma must be positive")


def _edge_prob(w, tau, gamma):
    """Probability that transmission beats recovery across a weight-w link."""
    return tau * w / (tau * w + gamma)


def r0_random(k: float, weights, probs, tau: float,
              gamma: float) -> ThresholdReport:
    """Reproduction number for random weight assignment: (k-1) * sum p_i r_i."""
    _check_rates(tau, gamma)
    w = np.asarray(weights, dtype=float)
    p = np.asarray(probs, dtype=float)
    if w.size != p.size or w.size == 0:
        raise ValueError("weights and probs must be equally sized and non-empty")
    if np.any(w <= 0):
        raise ValueError("weights must be positive")
    if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-12:
        raise ValueError("probs must be a probability distribution")
    if k < 2:
        raise ValueError("need degree k >= 2")
    r = _edge_prob(w, tau, gamma)
    value = float((k - 1.0) * np.dot(p, r))
    return ThresholdReport(kind="R0_random", value=value, r=tuple(r))


def r0_fixed(k1: int, k2: int, w1: float, w2: float, tau: float,
             gamma: float) -> ThresholdReport:
    """Reproduction number for fixed weight assignment (two classes).

    Leading eigenvalue of the 2x2 next-generation matrix with (k_i - 1)
    same-class and k_i cross-class link counts.
    """
    _check_rates(tau, gamma)
    if k1 < 1 or k2 < 1:
        raise ValueError("need k1, k2 >= 1")
    if w1 <= 0 or w2 <= 0:
        raise ValueError("weights must be positive")
    r1 = _edge_prob(w1, tau, gamma)
    r2 = _edge_prob(w2, tau, gamma)
    a = (k1 - 1) * r1
    b = (k2 - 1) * r2
    value = 0.5 * (a + b + np.sqrt((a - b) ** 2 + 4 * k1 * k2 * r1 * r2))
    return ThresholdReport(kind="R0_fixed", value=float(value), r=(r1, r2))


def r_pairwise_classic(k: float, p1: float, w1: float, w2: float, tau: float,
                       gamma: float) -> ThresholdReport:
    """Pairwise growth-rate threshold under the classic (mean-degree) closure.

    The product R1*R2*Q is evaluated through its cancelled form
    tau^2 w1 w2 (k-2) / gamma^2, which stays finite where Q itself is not
    defined ((k-1)p_i = 1).
    """
    _check_rates(tau, gamma)
    if k <= 2:
        raise ValueError("need degree k >= 3 for the classic pairwise threshold")
    if not 0 <= p1 <= 1:
        raise ValueError("p1 must lie in [0, 1]")
    if w1 <= 0 or w2 <= 0:
        raise ValueError("weights must be positive")
    p2 = 1.0 - p1
    R1 = tau * w1 * ((k - 1) * p1 - 1) / gamma
    R2 = tau * w2 * ((k - 1) * p2 - 1) / gamma
    prod = tau * tau * w1 * w2 * (k - 2) / gamma ** 2     # = R1*R2*Q
    value = 0.5 * ((R1 + R2) + np.sqrt((R1 + R2) ** 2 + 4 * prod))
    d1 = (k - 1) * p1 - 1
    d2 = (k - 1) * p2 - 1
    Q = (k - 2) / (d1 * d2) if d1 != 0 and d2 != 0 else None
    lam1 = gamma * (k - 1) * p1 * value / (tau * w1 + gamma * value) if value > 0 else 0.0
    lam2 = gamma * (k - 1) * p2 * value / (tau * w2 + gamma * value) if value > 0 else 0.0
    return ThresholdReport(kind="R_classic", value=float(value),
                           r=(_edge_prob(w1, tau, gamma), _edge_prob(w2, tau, gamma)),
                           R1=float(R1), R2=float(R2), Q=Q,
                           lambda1=float(lam1), lambda2=float(lam2))


def r_pairwise_modified(k1: int, k2: int, w1: float, w2: float, tau: float,
                        gamma: float) -> ThresholdReport:
    """Pairwise growth-rate threshold under the per-class closure.

    R1*R2*Q is evaluated as tau^2 w1 w2 k1 k2 / gamma^2, finite at k_i = 2
    where Q itself degenerates.
    """
    _check_rates(tau, gamma)
    if k1 < 1 or k2 < 1:
        raise ValueError("need k1, k2 >= 1")
    if w1 <= 0 or w2 <= 0:
        raise ValueError("weights must be positive")
    R1 = tau * w1 * (k1 - 2) / gamma
    R2 = tau * w2 * (k2 - 2) / gamma
    prod = tau * tau * w1 * w2 * k1 * k2 / gamma ** 2     # = R1*R2*Q
    # (R1+R2)^2 + 4 R1 R2 (Q-1) rearranged to an explicitly non-negative form
    disc = (R1 - R2) ** 2 + 4 * prod
    value = 0.5 * ((R1 + R2) + np.sqrt(disc))
    Q = k1 * k2 / ((k1 - 2) * (k2 - 2)) if k1 != 2 and k2 != 2 else None
    lam1 = gamma * k1 * value / (2 * tau * w1 + gamma * value) if value > 0 else 0.0
    lam2 = gamma * k2 * value / (2 * tau * w2 + gamma * value) if value > 0 else 0.0
    return ThresholdReport(kind="R_modified", value=float(value),
                           r=(_edge_prob(w1, tau, gamma), _edge_prob(w2, tau, gamma)),
                           R1=float(R1), R2=float(R2), Q=Q,
                           lambda1=float(lam1), lambda2=float(lam2))


@dataclass(frozen=True)
class Theorem1Report:
    samples: int
    violations: int
    max_excess: float
    passed: bool


def check_theorem1(sample_count: int, seed: int) -> Theorem1Report:
    """Random-weights R0 dominates fixed-weights R0 with matched fractions.

    Draws (k, k1, w1, w2, tau, gamma) at random with 1 <= k1 <= k-1 and
    asserts R0_fixed <= R0_random(p1 = k1/k) + 1e-12 for every draw.
    """
    if sample_count < 1:
        raise ValueError("sample_count must be >= 1")
    rng = substream(seed)
    k = rng.integers(2, 21, size=sample_count)
    k1 = np.array([rng.integers(1, kk) for kk in k])
    k2 = k - k1
    w1 = 10.0 * (1.0 - rng.random(sample_count))
    w2 = 10.0 * (1.0 - rng.random(sample_count))
    tau = rng.uniform(0.01, 5.0, size=sample_count)
    gamma = rng.uniform(0.01, 5.0, size=sample_count)

    r1 = tau * w1 / (tau * w1 + gamma)
    r2 = tau * w2 / (tau * w2 + gamma)
    r0_rand = (k - 1) * ((k1 / k) * r1 + (k2 / k) * r2)
    a = (k1 - 1) * r1
    b = (k2 - 1) * r2
    r0_fix = 0.5 * (a + b + np.sqrt((a - b) ** 2 + 4 * k1 * k2 * r1 * r2))

    excess = r0_fix - r0_rand
    violations = int(np.count_nonzero(excess > 1e-12))
    return Theorem1Report(samples=sample_count, violations=violations,
                          max_excess=float(excess.max()),
                          passed=violations == 0)


@dataclass(frozen=True)
class Theorem2Report:
    passed: bool
    theoretical_max: float
    random_argmax_w1: float
    random_max: float
    fixed_argmax_w1: float
    fixed_max: float
    grid_step_random: float
    grid_step_fixed: float


def check_theorem2(grid_points: int, k: float = 6, k1: int = 2,
                   tau: float = 1.0, gamma: float = 1.0,
                   W: float = 1.0, p1: float = 1 / 3) -> Theorem2Report:
    """Both R0 curves peak at equal weights under a fixed average weight.

    Sweeps w1 with w2 chosen to keep the average weight at W (random mode:
    p1*w1 + p2*w2 = W; fixed mode: the k_i/k analogue) and asserts the maxima
    sit at the grid point nearest w1 = W with value (k-1)*tau*W/(tau*W+gamma).
    """
    if grid_points < 3:
        raise ValueError("need at least 3 grid points")
    p2 = 1.0 - p1
    k2 = k - k1

    def edge_prob(w):
        return tau * w / (tau * w + gamma)

    w1r = np.linspace(0.0, W / p1, grid_points)
    w2r = (W - p1 * w1r) / p2
    curve_r = (k - 1) * (p1 * edge_prob(w1r) + p2 * edge_prob(w2r))

    w1f = np.linspace(0.0, W * k / k1, grid_points)
    w2f = (W - (k1 / k) * w1f) * k / k2
    a = (k1 - 1) * edge_prob(w1f)
    b = (k2 - 1) * edge_prob(w2f)
    curve_f = 0.5 * (a + b + np.sqrt((a - b) ** 2
                                     + 4 * k1 * k2 * edge_prob(w1f) * edge_prob(w2f)))

    theo = (k - 1) * tau * W / (tau * W + gamma)
    ir = int(np.argmax(curve_r))
    iff = int(np.argmax(curve_f))
    step_r = w1r[1] - w1r[0]
    step_f = w1f[1] - w1f[0]
    ok = bool(ir == int(np.argmin(np.abs(w1r - W)))
              and iff == int(np.argmin(np.abs(w1f - W)))
              and abs(curve_r[ir] - theo) <= step_r
              and abs(curve_f[iff] - theo) <= step_f)
    return Theorem2Report(passed=ok, theoretical_max=theo,
                          random_argmax_w1=float(w1r[ir]),
                          random_max=float(curve_r[ir]),
                          fixed_argmax_w1=float(w1f[iff]),
                          fixed_max=float(curve_f[iff]),
                          grid_step_random=float(step_r),
                          grid_step_fixed=float(step_f))
