"""Iterative deepening of continued fraction models.

Training starts at depth 0 (a linear model) and adds one subfraction at a
time.  Each new depth warm-starts from the previous winner extended with
an identity level, so the search begins from a model that predicts
exactly as well as before and can only be kept if it strictly improves
training MSE.  The loop stops at the first depth that fails to improve,
or at max_depth.
"""

from __future__ import annotations

from .memetic import MAConfig, evolve, warm_start_config
from .model import mse
from .seeding import derive_seed

__all__ = ["fit"]


def fit(data, config: MAConfig = MAConfig(), max_depth: int = 5):
    """Train with iterative deepening.

    Returns
    -------
    (model, history) : the best model found and a list of
        ``(depth, train_mse)`` pairs, one per depth attempted.  When the
        loop stops early the final entry records the rejected depth, so
        the accepted trajectory is ``history[:-1]`` in that case.

    Each depth runs the memetic search with an independent seed derived
    from ``config.rng_seed``, so results are reproducible end to end.
    """
    if max_depth < 0:
        raise ValueError("max_depth must be non-negative")
    history = []
    best = evolve(data, 0, None, warm_start_config(config, derive_seed(config.rng_seed, 0)))
    best_mse = mse(best, data).mse
    history.append((0, best_mse))
    for depth in range(1, max_depth + 1):
        cand = evolve(data, depth, best, warm_start_config(config, derive_seed(config.rng_seed, depth)))
        cand_mse = mse(cand, data).mse
        history.append((depth, cand_mse))
        if cand_mse < best_mse:
            best, best_mse = cand, cand_mse
        else:
            break
    return best, history
