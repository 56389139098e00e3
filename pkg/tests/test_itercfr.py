import numpy as np
import pytest

from cfreg import Dataset, MAConfig, SimplexConfig, fit, gen_sinc, mse, serialize

FAST_NM = SimplexConfig(restarts=2, max_iters_per_restart=60)

# verified: on the noiseless linear task below, this seed stops at depth 0
LINEAR_STOP_SEED = 3


def linear_data(n=50, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, 2))
    y = 2.0 * X[:, 0] - 3.0 * X[:, 1] + 1.0
    return Dataset(tuple(f"s{i}" for i in range(n)), ("u", "v"), X, y)


def cfg(seed=0, generations=4):
    return MAConfig(generations=generations, rng_seed=seed, simplex=FAST_NM)


class TestFit:
    def test_returns_model_and_history(self):
        data = gen_sinc(n=50, rng_seed=2)
        model, history = fit(data, cfg(), max_depth=1)
        assert model.depth in (0, 1)
        assert [d for d, _ in history] == list(range(len(history)))
        assert all(m >= 0 for _, m in history)

    def test_history_starts_at_depth_zero(self):
        data = linear_data()
        _, history = fit(data, cfg(), max_depth=0)
        assert len(history) == 1
        assert history[0][0] == 0

    def test_linear_truth_stops_at_depth_zero(self):
        data = linear_data(seed=3)
        model, history = fit(data, cfg(seed=LINEAR_STOP_SEED, generations=6), max_depth=5)
        assert model.depth == 0
        # depth 0 entry plus exactly one rejected attempt
        assert len(history) == 2
        assert history[1][1] >= history[0][1]
        assert history[0][1] < 1e-6

    def test_accepted_prefix_strictly_decreasing(self):
        data = gen_sinc(n=80, rng_seed=4)
        model, history = fit(data, cfg(seed=1, generations=5), max_depth=3)
        accepted = history[: model.depth + 1]
        for (_, a), (_, b) in zip(accepted, accepted[1:]):
            assert b < a

    def test_final_model_matches_best_history_entry(self):
        data = gen_sinc(n=60, rng_seed=5)
        model, history = fit(data, cfg(seed=2), max_depth=2)
        train = mse(model, data).mse
        assert train == pytest.approx(min(m for _, m in history), rel=1e-12)

    def test_deterministic(self):
        data = gen_sinc(n=50, rng_seed=6)
        m1, h1 = fit(data, cfg(seed=8), max_depth=1)
        m2, h2 = fit(data, cfg(seed=8), max_depth=1)
        assert serialize(m1) == serialize(m2)
        assert h1 == h2

    def test_rejects_negative_max_depth(self):
        with pytest.raises(ValueError):
            fit(linear_data(), cfg(), max_depth=-1)
