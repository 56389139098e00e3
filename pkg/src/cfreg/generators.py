"""Synthetic benchmark datasets.

gen_sinc builds the noisy cardinal-sine task: equally spaced points with
features x and x^2, so a learned fraction has to supply the oscillation
that a linear model in these features cannot.  gen_sparse_linear builds a
wide linear task where only a few features carry signal, for exercising
feature selection.
"""

from __future__ import annotations

import numpy as np

from .data import Dataset

__all__ = ["gen_sinc", "gen_sparse_linear"]


def _ids(n: int):
    width = max(4, len(str(n)))
    return tuple(f"s{i:0{width}d}" for i in range(n))


def gen_sinc(n: int = 500, lo: float = -10.0, hi: float = 10.0,
             noise_sd: float = 0.1, rng_seed: int = 0) -> Dataset:
    """Noisy samples of 1 + sin(x)/x on an equally spaced grid.

    The target is 1 + sin(x)/x (2 at x = 0, taking the limit before noise
    is added) plus N(0, noise_sd^2) noise.  Features are x and x^2.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if not lo < hi:
        raise ValueError("need lo < hi")
    if noise_sd < 0:
        raise ValueError("noise_sd must be non-negative")
    x = np.linspace(lo, hi, n)
    clean = np.full_like(x, 2.0)
    nz = x != 0
    clean[nz] = 1.0 + np.sin(x[nz]) / x[nz]
    rng = np.random.default_rng(rng_seed)
    y = clean + rng.normal(0.0, noise_sd, size=n) if noise_sd > 0 else clean.copy()
    X = np.column_stack([x, x * x])
    return Dataset(_ids(n), ("x", "x2"), X, y)


def gen_sparse_linear(n: int = 120, p: int = 50, n_informative: int = 5,
                      noise_sd: float = 0.5, rng_seed: int = 0):
    """Wide linear data where only a few features matter.

    Features are iid N(0, 1).  n_informative of them (chosen at random)
    get coefficients drawn uniformly from [2, 5] with random sign; the
    rest contribute nothing.  Returns (dataset, truth) where truth maps
    each informative feature name to its coefficient.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if p < 1:
        raise ValueError("p must be at least 1")
    if not 0 <= n_informative <= p:
        raise ValueError("n_informative must lie in [0, p]")
    if noise_sd < 0:
        raise ValueError("noise_sd must be non-negative")
    rng = np.random.default_rng(rng_seed)
    X = rng.normal(size=(n, p))
    names = tuple(f"f{j:03d}" for j in range(p))
    informative = np.sort(rng.choice(p, size=n_informative, replace=False))
    coeffs = rng.uniform(2.0, 5.0, size=n_informative)
    signs = rng.integers(0, 2, size=n_informative) * 2 - 1
    beta = np.zeros(p)
    beta[informative] = coeffs * signs
    y = X @ beta + rng.normal(0.0, noise_sd, size=n)
    truth = {names[j]: float(beta[j]) for j in informative}
    return Dataset(_ids(n), names, X, y), truth
