"""Feature construction and selection.

Covers turning raw word counts into per-document percentages, ranking
features by absolute Pearson correlation with the target, lasso fits by
coordinate descent with an unpenalized intercept, a repeated-subsample
lasso selection protocol, and square-root-rule binning of integer dates.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .data import Dataset

__all__ = [
    "LassoResult",
    "counts_to_percentages",
    "pearson_rank",
    "lasso_fit",
    "lasso_objective",
    "lasso_lambda_max",
    "lasso_selection_protocol",
    "date_bins",
]


def counts_to_percentages(counts, totals) -> np.ndarray:
    """Scale event counts to percentages of each row's total.

    counts has shape (n, p) with non-negative entries; totals has shape
    (n,) with positive entries.  Row i of the result is
    ``100 * counts[i] / totals[i]``, so entries lie in [0, 100] whenever
    each count is bounded by its row total.
    """
    counts = np.asarray(counts, dtype=np.float64)
    totals = np.asarray(totals, dtype=np.float64)
    if counts.ndim != 2:
        raise ValueError("counts must be a 2-d array")
    if totals.shape != (counts.shape[0],):
        raise ValueError("totals must have one entry per row of counts")
    if not np.all(np.isfinite(counts)) or np.any(counts < 0):
        raise ValueError("counts must be finite and non-negative")
    if not np.all(np.isfinite(totals)) or np.any(totals <= 0):
        raise ValueError("totals must be finite and positive")
    return 100.0 * counts / totals[:, None]


def pearson_rank(data: Dataset, k: int):
    """Top-k features by absolute Pearson correlation with the target.

    Returns a list of (name, r) pairs sorted by |r| descending, ties
    broken by feature name.  Zero-variance features cannot be correlated;
    they are dropped with a warning.
    """
    if not 1 <= k <= data.n_features:
        raise ValueError(f"k must lie in [1, {data.n_features}]")
    Xc = data.X - data.X.mean(axis=0)
    yc = data.y - data.y.mean()
    sy = float(yc @ yc)
    if sy == 0.0:
        raise ValueError("target has zero variance")
    sx = np.einsum("ij,ij->j", Xc, Xc)
    scored = []
    for j, name in enumerate(data.feature_names):
        if sx[j] == 0.0:
            warnings.warn(f"feature {name!r} has zero variance and was dropped from the ranking")
            continue
        r = float(Xc[:, j] @ yc) / math.sqrt(sx[j] * sy)
        scored.append((name, r))
    scored.sort(key=lambda t: (-abs(t[1]), t[0]))
    return scored[:k]


@dataclass(frozen=True)
class LassoResult:
    """Lasso fit: coefficient vector, intercept, penalty, surviving features."""

    beta: np.ndarray
    intercept: float
    lam: float
    selected: frozenset
    n_sweeps: int
    converged: bool

    def __post_init__(self):
        beta = np.array(self.beta, dtype=np.float64)
        beta.flags.writeable = False
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "selected", frozenset(self.selected))

    def predict(self, X) -> np.ndarray:
        return np.asarray(X, dtype=np.float64) @ self.beta + self.intercept


def lasso_objective(X, y, beta, intercept, lam) -> float:
    """Penalized sum of squares ||y - X beta - intercept||^2 + lam * ||beta||_1."""
    r = np.asarray(y, dtype=np.float64) - np.asarray(X, dtype=np.float64) @ beta - intercept
    return float(r @ r + lam * np.abs(beta).sum())


def lasso_fit(data, lam: float, max_sweeps: int = 10000, tol: float = 1e-8) -> LassoResult:
    """Fit the lasso by cyclic coordinate descent.

    The intercept is unpenalized, which centering both X and y enforces
    exactly.  Each sweep updates every coordinate once by soft
    thresholding; the fit stops when no coordinate moved by more than
    ``tol`` in a sweep, or after ``max_sweeps`` sweeps.  With ``lam`` at
    or above lasso_lambda_max(data) every coefficient is zero.
    """
    if lam < 0:
        raise ValueError("lam must be non-negative")
    if max_sweeps < 1:
        raise ValueError("max_sweeps must be at least 1")
    X = np.asarray(data.X, dtype=np.float64)
    y = np.asarray(data.y, dtype=np.float64)
    n, p = X.shape
    if n < 2:
        raise ValueError("lasso_fit needs at least two samples")
    xbar = X.mean(axis=0)
    ybar = float(y.mean())
    Xc = X - xbar
    yc = y - ybar
    norms = np.einsum("ij,ij->j", Xc, Xc)
    beta = np.zeros(p)
    resid = yc.copy()
    half = lam / 2.0
    sweeps = 0
    converged = False
    while sweeps < max_sweeps:
        sweeps += 1
        delta = 0.0
        for j in range(p):
            if norms[j] == 0.0:
                continue
            old = beta[j]
            rho = float(Xc[:, j] @ resid) + norms[j] * old
            if rho > half:
                new = (rho - half) / norms[j]
            elif rho < -half:
                new = (rho + half) / norms[j]
            else:
                new = 0.0
            if new != old:
                resid += Xc[:, j] * (old - new)
                beta[j] = new
                delta = max(delta, abs(new - old))
        if delta < tol:
            converged = True
            break
    intercept = ybar - float(xbar @ beta)
    selected = frozenset(n_ for n_, b in zip(data.feature_names, beta) if b != 0.0)
    return LassoResult(beta=beta, intercept=intercept, lam=lam, selected=selected,
                       n_sweeps=sweeps, converged=converged)


def lasso_lambda_max(data) -> float:
    """Smallest penalty that zeroes every coefficient.

    At beta = 0 the coordinate update keeps coordinate j at zero exactly
    when lam / 2 >= |x_j_centered . y_centered|, so the threshold is twice
    the largest absolute centered correlation sum.
    """
    X = np.asarray(data.X, dtype=np.float64)
    y = np.asarray(data.y, dtype=np.float64)
    Xc = X - X.mean(axis=0)
    yc = y - y.mean()
    return 2.0 * float(np.max(np.abs(Xc.T @ yc)))


def lasso_selection_protocol(data: Dataset, lam: float = 1.0, trials: int = 100,
                             subset_frac: float = 0.8, threshold: float = 0.9,
                             rng_seed: int = 0):
    """Stability selection: repeated lasso fits on random sample subsets.

    Each trial draws ``round(subset_frac * n)`` samples without
    replacement, fits the lasso at ``lam``, and records which features
    survive.  Returns (rows, selected) where rows is a list of
    (name, appearance_percentage) sorted by percentage descending then
    name, and selected is the set of names whose appearance fraction is
    at least ``threshold``.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if not 0 < subset_frac <= 1:
        raise ValueError("subset_frac must lie in (0, 1]")
    n = data.n_samples
    m = int(round(subset_frac * n))
    if m < 2:
        raise ValueError("subset_frac keeps too few samples for a lasso fit")
    rng = np.random.default_rng(rng_seed)
    counts = dict.fromkeys(data.feature_names, 0)
    for _ in range(trials):
        idx = rng.choice(n, size=m, replace=False)
        result = lasso_fit(data.subset(idx), lam)
        for name in result.selected:
            counts[name] += 1
    rows = [(name, 100.0 * c / trials) for name, c in counts.items()]
    rows.sort(key=lambda t: (-t[1], t[0]))
    selected = {name for name, c in counts.items() if c / trials >= threshold}
    return rows, selected


def date_bins(dates):
    """Bin integer dates into ceil(sqrt(n)) equal-width integer ranges.

    Returns a list of ((lo, hi), count) with inclusive bounds, covering
    from min(dates) in steps of ceil(span / bins) years.  Trailing bins
    may be empty; counts always sum to len(dates).
    """
    dates = [int(d) for d in dates]
    if not dates:
        raise ValueError("dates must be non-empty")
    n = len(dates)
    n_bins = math.ceil(math.sqrt(n))
    lo = min(dates)
    span = max(dates) - lo + 1
    width = math.ceil(span / n_bins)
    out = []
    for i in range(n_bins):
        b_lo = lo + i * width
        b_hi = b_lo + width - 1
        out.append(((b_lo, b_hi), sum(1 for d in dates if b_lo <= d <= b_hi)))
    return out
