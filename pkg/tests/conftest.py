import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from cfreg import ContinuedFractionModel, Dataset, LinearTerm

settings.register_profile(
    "default",
    deadline=None,
    max_examples=50,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def make_model(g_rows, h_rows, names, mask=None):
    """Build a model from (coeff list, constant) pairs."""
    p = len(names)
    if mask is None:
        mask = [True] * p
    g = tuple(LinearTerm(np.array(c, dtype=float), k) for c, k in g_rows)
    h = tuple(LinearTerm(np.array(c, dtype=float), k) for c, k in h_rows)
    return ContinuedFractionModel(g, h, tuple(names), np.array(mask, dtype=bool))


@pytest.fixture
def tiny_data():
    rng = np.random.default_rng(42)
    X = rng.normal(size=(30, 3))
    y = X @ np.array([1.0, -2.0, 0.5]) + 0.3
    return Dataset(tuple(f"s{i}" for i in range(30)), ("a", "b", "c"), X, y)
