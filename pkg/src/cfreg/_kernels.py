"""Compiled inner loops for continued fraction evaluation.

Both kernels share the same weight layout: for a depth-d model, W has
2d + 1 rows (g_0 .. g_d followed by h_0 .. h_{d-1}) and p + 1 columns,
the last column holding the constant of each affine term.  Xa is the
feature matrix with a trailing column of ones, so P = Xa @ W.T gives the
value of every term at every sample and the fraction folds from the
innermost level outward.
"""

import numpy as np
from numba import njit

# denominators inside (-GUARD, GUARD) are clamped to +/-GUARD
GUARD = 1e-12


@njit(cache=True)
def predict_terms(W, Xa):
    """Evaluate the fraction at every row of Xa.

    Returns (predictions, guarded) where guarded[s] is True when at least
    one denominator at sample s was clamped by the guard.
    """
    n = Xa.shape[0]
    d = (W.shape[0] - 1) // 2
    P = Xa @ W.T
    out = np.empty(n)
    guarded = np.zeros(n, np.bool_)
    for s in range(n):
        acc = P[s, d]
        for i in range(d - 1, -1, -1):
            den = acc
            if abs(den) < GUARD:
                den = GUARD if den >= 0 else -GUARD
                guarded[s] = True
            acc = P[s, i] + P[s, d + 1 + i] / den
        out[s] = acc
    return out, guarded


@njit(cache=True)
def mse_terms(W, Xa, y):
    """Mean squared error of the fraction on (Xa, y).

    Any overflow or invalid value collapses to +inf so callers can rank
    candidates without special-casing.
    """
    n = Xa.shape[0]
    d = (W.shape[0] - 1) // 2
    P = Xa @ W.T
    sse = 0.0
    for s in range(n):
        acc = P[s, d]
        for i in range(d - 1, -1, -1):
            den = acc
            if abs(den) < GUARD:
                den = GUARD if den >= 0 else -GUARD
            acc = P[s, i] + P[s, d + 1 + i] / den
        r = acc - y[s]
        sse += r * r
    m = sse / n
    if not np.isfinite(m):
        return np.inf
    return m


def augment(X):
    """Append the column of ones expected by the kernels."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    return np.ascontiguousarray(np.hstack([X, np.ones((X.shape[0], 1))]))
