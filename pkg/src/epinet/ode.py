"""Adaptive explicit Runge-Kutta integration.

Embedded Fehlberg 4(5) pair: the fourth-order solution is propagated and the
difference to the fifth-order one drives step acceptance.  Accepted steps are
stored together with the derivative at each node, so the solution can be
sampled anywhere by cubic Hermite interpolation.
"""

from __future__ import annotations

import numpy as np

_C = np.array([0.0, 1 / 4, 3 / 8, 12 / 13, 1.0, 1 / 2])
_A = [
    np.array([]),
    np.array([1 / 4]),
    np.array([3 / 32, 9 / 32]),
    np.array([1932 / 2197, -7200 / 2197, 7296 / 2197]),
    np.array([439 / 216, -8.0, 3680 / 513, -845 / 4104]),
    np.array([-8 / 27, 2.0, -3544 / 2565, 1859 / 4104, -11 / 40]),
]
_B4 = np.array([25 / 216, 0.0, 1408 / 2565, 2197 / 4104, -1 / 5, 0.0])
_B5 = np.array([16 / 135, 0.0, 6656 / 12825, 28561 / 56430, -9 / 50, 2 / 55])
_ERR = _B5 - _B4

_SAFETY = 0.9
_MIN_SHRINK = 0.2
_MAX_GROW = 5.0
_MAX_STEPS = 10_000_000


class IntegrationError(RuntimeError):
    """Step-size underflow or step-budget exhaustion; carries the failure time."""

    def __init__(self, message: str, time: float):
        super().__init__(message)
        self.time = time


class OdeSolution:
    """Accepted-step trajectory with cubic Hermite dense output."""

    def __init__(self, t: np.ndarray, y: np.ndarray, f: np.ndarray):
        self.t = t          # (n_nodes,)
        self.y = y          # (n_nodes, dim)
        self.f = f          # derivative at each node, same shape as y
        self.n_steps = t.size - 1

    def sample(self, t_query) -> np.ndarray:
        """State at the query times, shape (len(t_query), dim)."""
        tq = np.atleast_1d(np.asarray(t_query, dtype=float))
        if tq.min() < self.t[0] - 1e-12 or tq.max() > self.t[-1] + 1e-12:
            raise ValueError("query time outside the integrated span")
        idx = np.clip(np.searchsorted(self.t, tq, side="right") - 1,
                      0, self.n_steps - 1)
        t0 = self.t[idx]
        h = self.t[idx + 1] - t0
        s = ((tq - t0) / h)[:, None]
        y0, y1 = self.y[idx], self.y[idx + 1]
        f0, f1 = self.f[idx], self.f[idx + 1]
        h = h[:, None]
        h00 = (1 + 2 * s) * (1 - s) ** 2
        h10 = s * (1 - s) ** 2
        h01 = s ** 2 * (3 - 2 * s)
        h11 = s ** 2 * (s - 1)
        return h00 * y0 + h10 * h * f0 + h01 * y1 + h11 * h * f1


def integrate(rhs, state0, t_span, rel_tol: float = 1e-8,
              abs_tol: float = 1e-8) -> OdeSolution:
    """Integrate dy/dt = rhs(t, y) over t_span with embedded 4(5) step control."""
    if rel_tol <= 0 or abs_tol <= 0:
        raise ValueError("tolerances must be positive")
    t0, t1 = float(t_span[0]), float(t_span[1])
    if t1 <= t0:
        raise ValueError("t_span must be increasing")
    y = np.asarray(state0, dtype=float).copy()
    dim = y.size
    span = t1 - t0
    h_min = 1e-12 * span

    ts = [t0]
    ys = [y.copy()]
    f_now = np.asarray(rhs(t0, y), dtype=float)
    fs = [f_now.copy()]

    # conservative first step; the controller corrects it within a few steps
    scale0 = abs_tol + rel_tol * np.abs(y)
    d0 = np.sqrt(np.mean((y / scale0) ** 2))
    d1 = np.sqrt(np.mean((f_now / scale0) ** 2))
    h = min(span, 0.01 * d0 / d1) if d0 > 0 and d1 > 0 else span / 100
    h = max(h, h_min)

    t = t0
    k = np.empty((6, dim))
    for _ in range(_MAX_STEPS):
        if t >= t1:
            break
        h = min(h, t1 - t)
        if h < h_min:
            raise IntegrationError(
                f"step size underflow ({h:.3e}) at t={t:.6g}", t)
        k[0] = f_now
        for i in range(1, 6):
            k[i] = rhs(t + _C[i] * h, y + h * (_A[i] @ k[:i]))
        y4 = y + h * (_B4 @ k)
        err = h * (_ERR @ k)
        scale = abs_tol + rel_tol * np.maximum(np.abs(y), np.abs(y4))
        err_norm = np.sqrt(np.mean((err / scale) ** 2))
        factor = (_MAX_GROW if err_norm == 0 else
                  min(_MAX_GROW, max(_MIN_SHRINK, _SAFETY * err_norm ** -0.2)))
        if err_norm <= 1.0:
            t += h
            y = y4
            f_now = np.asarray(rhs(t, y), dtype=float)
            ts.append(t)
            ys.append(y.copy())
            fs.append(f_now.copy())
        h *= factor
    else:
        raise IntegrationError(f"exceeded {_MAX_STEPS} steps at t={t:.6g}", t)

    return OdeSolution(np.array(ts), np.array(ys), np.array(fs))
