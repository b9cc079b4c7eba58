import numpy as np


def measured_growth_rate(sol, t0, t1):
    """Exponential growth rate of I between two times of an ODE solution."""
    I0 = sol.sample([t0])[0, 1]
    I1 = sol.sample([t1])[0, 1]
    return np.log(I1 / I0) / (t1 - t0)
