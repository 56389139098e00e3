"""Derivative-free local search by the Nelder-Mead simplex method.

The search runs a fixed number of restarts.  Within a restart, iterations
stop early once a stagnation window of consecutive iterations passes
without meaningful improvement of the best vertex; the next restart then
rebuilds the simplex around the best point found so far, with randomly
perturbed steps, which gives the method a chance to escape shallow basins.
The classical reflection / expansion / contraction / shrink coefficients
are the defaults.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["SimplexConfig", "minimize"]


@dataclass(frozen=True)
class SimplexConfig:
    restarts: int = 4
    max_iters_per_restart: int = 250
    stagnation_reset: int = 10
    reflection: float = 1.0
    expansion: float = 2.0
    contraction: float = 0.5
    shrink: float = 0.5
    # relative improvement below this does not reset the stagnation window
    improvement_tol: float = 1e-9

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")
        if self.max_iters_per_restart < 1:
            raise ValueError("max_iters_per_restart must be at least 1")
        if self.stagnation_reset < 1:
            raise ValueError("stagnation_reset must be at least 1")
        if self.reflection <= 0:
            raise ValueError("reflection must be positive")
        if self.expansion <= 1:
            raise ValueError("expansion must exceed 1")
        if not 0 < self.contraction < 1:
            raise ValueError("contraction must lie in (0, 1)")
        if not 0 < self.shrink < 1:
            raise ValueError("shrink must lie in (0, 1)")
        if self.improvement_tol < 0:
            raise ValueError("improvement_tol must be non-negative")


def _initial_steps(x0):
    return np.maximum(0.05 * np.abs(x0), 0.1)


def _build_simplex(center, steps):
    dim = center.shape[0]
    simplex = np.tile(center, (dim + 1, 1))
    for i in range(dim):
        simplex[i + 1, i] += steps[i]
    return simplex


def minimize(objective, start, config: SimplexConfig = SimplexConfig(), rng_seed: int = 0):
    """Minimize a scalar function of a real vector.

    Parameters
    ----------
    objective : callable mapping a 1-d ndarray to a float.  It must be
        finite at ``start``; elsewhere it may return +inf to mark bad
        regions.
    start : initial point, 1-d array-like with at least one entry.
    rng_seed : seed for the restart perturbations.

    Returns
    -------
    (x, value) : best point found and its objective value.  A constant
        objective terminates by the stagnation rule and returns ``start``.
    """
    x0 = np.asarray(start, dtype=np.float64).copy()
    if x0.ndim != 1 or x0.shape[0] == 0:
        raise ValueError("start must be a non-empty vector")
    f0 = float(objective(x0))
    if not np.isfinite(f0):
        raise ValueError("objective must be finite at the start point")

    rng = np.random.default_rng(rng_seed)
    alpha = config.reflection
    gamma = config.expansion
    beta = config.contraction
    sigma = config.shrink
    tol = config.improvement_tol

    best_x = x0.copy()
    best_f = f0
    base_steps = _initial_steps(x0)

    for run in range(config.restarts):
        if run == 0:
            steps = base_steps
        else:
            signs = rng.integers(0, 2, size=x0.shape[0]) * 2 - 1
            steps = base_steps * rng.uniform(0.5, 1.5, size=x0.shape[0]) * signs
        simplex = _build_simplex(best_x, steps)
        vals = np.array([best_f] + [float(objective(v)) for v in simplex[1:]])

        stagnant = 0
        for _ in range(config.max_iters_per_restart):
            order = np.argsort(vals, kind="stable")
            simplex = simplex[order]
            vals = vals[order]

            improved = vals[0] < best_f - tol * (1.0 + abs(best_f))
            if vals[0] < best_f:
                best_f = vals[0]
                best_x = simplex[0].copy()
            stagnant = 0 if improved else stagnant + 1
            if stagnant >= config.stagnation_reset:
                break

            centroid = simplex[:-1].mean(axis=0)
            xr = centroid + alpha * (centroid - simplex[-1])
            fr = float(objective(xr))
            if fr < vals[0]:
                xe = centroid + gamma * (xr - centroid)
                fe = float(objective(xe))
                if fe < fr:
                    simplex[-1], vals[-1] = xe, fe
                else:
                    simplex[-1], vals[-1] = xr, fr
            elif fr < vals[-2]:
                simplex[-1], vals[-1] = xr, fr
            else:
                if fr < vals[-1]:
                    xc = centroid + beta * (xr - centroid)
                else:
                    xc = centroid + beta * (simplex[-1] - centroid)
                fc = float(objective(xc))
                if fc < min(fr, vals[-1]):
                    simplex[-1], vals[-1] = xc, fc
                else:
                    simplex = simplex[0] + sigma * (simplex - simplex[0])
                    vals = np.array([vals[0]] + [float(objective(v)) for v in simplex[1:]])

        order = np.argsort(vals, kind="stable")
        if vals[order[0]] < best_f:
            best_f = vals[order[0]]
            best_x = simplex[order[0]].copy()

    return best_x.copy(), float(best_f)
