import numpy as np
import pytest

from omniprice import COST_CASES, OracleConfig


@pytest.fixture(scope="session")
def case1():
    return COST_CASES[1]


@pytest.fixture(scope="session")
def case2():
    return COST_CASES[2]


@pytest.fixture(scope="session")
def case3():
    return COST_CASES[3]


@pytest.fixture(scope="session")
def small_oracle():
    """Reduced resolutions so unit tests stay fast; acceptance runs full scale."""
    return OracleConfig(d_resolution=801, p_resolution=401)


def random_params(rng: np.random.Generator, c_range=(0.5, 2.0), cost_frac=0.95):
    """One Assumption-5 parameter draw: costs strictly inside [0, c)."""
    from omniprice import ModelParams

    c = float(rng.uniform(*c_range))
    c_e, c_b, c_s = (float(v) for v in c * rng.uniform(0.0, cost_frac, size=3))
    return ModelParams(c, c_e, c_b, c_s)
