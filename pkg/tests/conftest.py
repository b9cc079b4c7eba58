import sys
from pathlib import Path

import pytest

from epinet import EpidemicParams, WeightClasses

sys.path.insert(0, str(Path(__file__).resolve().parent))


@pytest.fixture(scope="session")
def fig2_top_wc():
    return WeightClasses.random([5.0, 1.25], [0.2, 0.8], 5)


@pytest.fixture(scope="session")
def unit_params():
    return EpidemicParams(tau=1.0, gamma=1.0)
