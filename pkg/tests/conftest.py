import numpy as np
import pytest

from intermittent.model import StateSpaceModel, make_scenario, Deviation


def scalar_model(a=1.0, b=1.0, c=1.0):
    return StateSpaceModel(np.array([[a]]), np.array([[b]]), np.array([[c]]), name="scalar")


def scalar_scenario(b, b_hat=1.0, a=1.0, rho=1.0):
    """One-state plant ``x' = a x + b u`` designed for gain `b_hat`."""
    dev = Deviation(np.zeros((1, 1)), np.array([[b_hat - b]]), np.zeros((1, 1)))
    return make_scenario(scalar_model(a, b_hat), dev, rho, np.eye(1), name=f"scalar_b{b:g}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
