import numpy as np
import pytest

from epinet.ode import IntegrationError, integrate


def test_zero_rhs_constant():
    sol = integrate(lambda t, y: 0.0 * y, np.array([3.0, -1.0]), (0, 10),
                    1e-8, 1e-8)
    assert np.all(sol.y == sol.y[0])


def test_exponential_decay_within_tolerance():
    rel = 1e-9
    sol = integrate(lambda t, y: -y, np.array([1.0]), (0, 1), rel, 1e-12)
    assert abs(sol.y[-1][0] - np.exp(-1)) <= 50 * rel


def test_dense_output_tracks_analytic_solution():
    # harmonic oscillator: y = (cos t, -sin t)
    def rhs(t, y):
        return np.array([y[1], -y[0]])

    sol = integrate(rhs, np.array([1.0, 0.0]), (0, 6.0), 1e-10, 1e-10)
    tq = np.linspace(0, 6.0, 137)
    out = sol.sample(tq)
    assert np.abs(out[:, 0] - np.cos(tq)).max() < 1e-6
    assert np.abs(out[:, 1] + np.sin(tq)).max() < 1e-6


def test_tolerances_must_be_positive():
    with pytest.raises(ValueError):
        integrate(lambda t, y: -y, np.array([1.0]), (0, 1), 0.0, 1e-8)
    with pytest.raises(ValueError):
        integrate(lambda t, y: -y, np.array([1.0]), (0, 1), 1e-8, -1.0)


def test_span_must_increase():
    with pytest.raises(ValueError):
        integrate(lambda t, y: -y, np.array([1.0]), (1, 1), 1e-8, 1e-8)


def test_blowup_reports_failure_time():
    # y' = y^2 from y(0)=1 blows up at t=1
    with pytest.raises(IntegrationError) as exc:
        integrate(lambda t, y: y * y, np.array([1.0]), (0, 2.0), 1e-10, 1e-10)
    assert exc.value.time == pytest.approx(1.0, abs=1e-3)


def test_sample_outside_span_rejected():
    sol = integrate(lambda t, y: -y, np.array([1.0]), (0, 1), 1e-8, 1e-8)
    with pytest.raises(ValueError):
        sol.sample([1.5])
