"""Continued fraction models over affine terms.

A model of depth d computes

    f(x) = g_0(x) + h_0(x) / (g_1(x) + h_1(x) / (g_2(x) + ... + h_{d-1}(x) / g_d(x)))

where every g_i and h_i is affine in the feature vector.  Depth 0 is a
plain linear model.  Evaluation folds from the innermost level outward;
any denominator with magnitude below GUARD is clamped to +/-GUARD so the
result stays defined, and such samples are counted in EvalReport.

Models carry an active-feature mask.  Inactive features must have zero
coefficient in every term, which keeps the printed form of a model honest
about which inputs it uses.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ._kernels import GUARD, augment, mse_terms, predict_terms
from .errors import ModelDocumentError

__all__ = [
    "GUARD",
    "LinearTerm",
    "ContinuedFractionModel",
    "EvalReport",
    "ModelDocumentError",
    "evaluate",
    "mse",
    "serialize",
    "deserialize",
    "weights",
    "model_from_weights",
    "extend_depth",
]

_FORMAT = "cfreg-model"
_VERSION = 1


@dataclass(frozen=True, eq=False)
class LinearTerm:
    """Affine form coeffs . x + constant over the model's feature vector."""

    coeffs: np.ndarray
    constant: float

    def __post_init__(self):
        arr = np.array(self.coeffs, dtype=np.float64)
        if arr.ndim != 1:
            raise ValueError("coeffs must be one-dimensional")
        if not np.all(np.isfinite(arr)):
            raise ValueError("coeffs must be finite")
        c = float(self.constant)
        if not np.isfinite(c):
            raise ValueError("constant must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)
        object.__setattr__(self, "constant", c)

    def __call__(self, x) -> float:
        return float(self.coeffs @ np.asarray(x, dtype=np.float64) + self.constant)

    def __eq__(self, other):
        if not isinstance(other, LinearTerm):
            return NotImplemented
        return self.constant == other.constant and np.array_equal(self.coeffs, other.coeffs)

    def __repr__(self):
        return f"LinearTerm(coeffs={self.coeffs.tolist()}, constant={self.constant})"


@dataclass(frozen=True, eq=False)
class ContinuedFractionModel:
    """Immutable continued fraction regressor.

    g_terms holds g_0 .. g_d and h_terms holds h_0 .. h_{d-1}, so a model
    of depth d owns d + 1 numerator-side terms and d subfraction terms.
    """

    g_terms: tuple
    h_terms: tuple
    feature_names: tuple
    active_mask: np.ndarray

    def __post_init__(self):
        g = tuple(self.g_terms)
        h = tuple(self.h_terms)
        names = tuple(str(n) for n in self.feature_names)
        if len(g) != len(h) + 1:
            raise ValueError(f"need len(g_terms) == len(h_terms) + 1, got {len(g)} and {len(h)}")
        if not names:
            raise ValueError("feature_names must be non-empty")
        if len(set(names)) != len(names):
            raise ValueError("feature_names must be unique")
        p = len(names)
        for label, term in self._iter_terms(g, h):
            if not isinstance(term, LinearTerm):
                raise TypeError(f"{label} is not a LinearTerm")
            if term.coeffs.shape[0] != p:
                raise ValueError(f"{label} has {term.coeffs.shape[0]} coefficients, expected {p}")
        mask = np.array(self.active_mask, dtype=bool)
        if mask.shape != (p,):
            raise ValueError(f"active_mask must have shape ({p},)")
        for label, term in self._iter_terms(g, h):
            if np.any(term.coeffs[~mask] != 0.0):
                raise ValueError(f"{label} has a nonzero coefficient on an inactive feature")
        mask.flags.writeable = False
        object.__setattr__(self, "g_terms", g)
        object.__setattr__(self, "h_terms", h)
        object.__setattr__(self, "feature_names", names)
        object.__setattr__(self, "active_mask", mask)

    @staticmethod
    def _iter_terms(g, h):
        for i, t in enumerate(g):
            yield f"g{i}", t
        for i, t in enumerate(h):
            yield f"h{i}", t

    @property
    def depth(self) -> int:
        return len(self.h_terms)

    @property
    def n_features(self) -> int:
        return len(self.feature_names)

    @property
    def active_features(self) -> tuple:
        return tuple(n for n, a in zip(self.feature_names, self.active_mask) if a)

    def evaluate(self, x) -> float:
        return evaluate(self, x)

    def predict(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise ValueError(f"X must have shape (n, {self.n_features})")
        pred, _ = predict_terms(weights(self)[0], augment(X))
        return pred

    def __eq__(self, other):
        if not isinstance(other, ContinuedFractionModel):
            return NotImplemented
        return (
            self.feature_names == other.feature_names
            and np.array_equal(self.active_mask, other.active_mask)
            and self.g_terms == other.g_terms
            and self.h_terms == other.h_terms
        )

    def __repr__(self):
        return (
            f"ContinuedFractionModel(depth={self.depth}, n_features={self.n_features}, "
            f"active={self.active_features!r})"
        )


@dataclass(frozen=True)
class EvalReport:
    """Outcome of scoring a model on a dataset.

    undefined_count is the number of samples where at least one denominator
    was clamped by the GUARD threshold.
    """

    predictions: np.ndarray
    mse: float
    undefined_count: int

    def __post_init__(self):
        pred = np.array(self.predictions, dtype=np.float64)
        pred.flags.writeable = False
        object.__setattr__(self, "predictions", pred)
        if not 0 <= self.undefined_count <= pred.shape[0]:
            raise ValueError("undefined_count out of range")
        if np.isnan(self.mse) or self.mse < 0:
            raise ValueError("mse must be non-negative")


def evaluate(model: ContinuedFractionModel, x) -> float:
    """Evaluate the fraction at a single feature vector."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != model.n_features:
        raise ValueError(f"x must be a vector of {model.n_features} features")
    pred, _ = predict_terms(weights(model)[0], augment(x.reshape(1, -1)))
    return float(pred[0])


def mse(model: ContinuedFractionModel, data) -> EvalReport:
    """Score a model on a dataset, tracking guarded denominators.

    Parameters
    ----------
    data : Dataset or (X, y) pair of arrays.
    """
    X, y = _unpack(data)
    if X.shape[0] == 0:
        raise ValueError("cannot score a model on an empty dataset")
    if X.shape[1] != model.n_features:
        raise ValueError(f"dataset has {X.shape[1]} features, model expects {model.n_features}")
    W, _ = weights(model)
    Xa = augment(X)
    pred, guarded = predict_terms(W, Xa)
    value = float(mse_terms(W, Xa, np.ascontiguousarray(y, dtype=np.float64)))
    return EvalReport(predictions=pred, mse=value, undefined_count=int(guarded.sum()))


def _unpack(data):
    if hasattr(data, "X") and hasattr(data, "y"):
        return np.asarray(data.X, dtype=np.float64), np.asarray(data.y, dtype=np.float64)
    X, y = data
    return np.asarray(X, dtype=np.float64), np.asarray(y, dtype=np.float64)


def weights(model: ContinuedFractionModel):
    """Stack the model's terms into the kernel weight layout.

    Returns (W, mask) with W of shape (2 * depth + 1, n_features + 1); rows
    are g_0 .. g_d then h_0 .. h_{d-1} and the last column is the constants.
    """
    d = model.depth
    p = model.n_features
    W = np.zeros((2 * d + 1, p + 1))
    for i, t in enumerate(model.g_terms):
        W[i, :p] = t.coeffs
        W[i, p] = t.constant
    for i, t in enumerate(model.h_terms):
        W[d + 1 + i, :p] = t.coeffs
        W[d + 1 + i, p] = t.constant
    return W, model.active_mask.copy()


def model_from_weights(W, mask, feature_names) -> ContinuedFractionModel:
    """Inverse of weights(); coefficients of inactive features are zeroed."""
    W = np.asarray(W, dtype=np.float64)
    mask = np.asarray(mask, dtype=bool)
    p = len(feature_names)
    if W.ndim != 2 or W.shape[1] != p + 1 or W.shape[0] % 2 != 1:
        raise ValueError("W must have shape (2 * depth + 1, n_features + 1)")
    W = W.copy()
    W[:, :p][:, ~mask] = 0.0
    d = (W.shape[0] - 1) // 2
    g = tuple(LinearTerm(W[i, :p], W[i, p]) for i in range(d + 1))
    h = tuple(LinearTerm(W[d + 1 + i, :p], W[d + 1 + i, p]) for i in range(d))
    return ContinuedFractionModel(g, h, tuple(feature_names), mask)


def extend_depth(model: ContinuedFractionModel, new_depth: int) -> ContinuedFractionModel:
    """Deepen a model without changing its predictions.

    Each added level appends h_d = 0 and g_{d+1} = 1; a zero numerator makes
    the new subfraction vanish, so the extended model evaluates identically.
    """
    if new_depth < model.depth:
        raise ValueError(f"new_depth {new_depth} is below current depth {model.depth}")
    g = list(model.g_terms)
    h = list(model.h_terms)
    zeros = np.zeros(model.n_features)
    for _ in range(new_depth - model.depth):
        h.append(LinearTerm(zeros, 0.0))
        g.append(LinearTerm(zeros, 1.0))
    return ContinuedFractionModel(tuple(g), tuple(h), model.feature_names, model.active_mask)


def serialize(model: ContinuedFractionModel) -> str:
    """Render a model as a JSON document that round-trips bit-exactly."""
    doc = {
        "format": _FORMAT,
        "version": _VERSION,
        "depth": model.depth,
        "feature_names": list(model.feature_names),
        "active_mask": [bool(b) for b in model.active_mask],
        "g_terms": [_term_doc(t) for t in model.g_terms],
        "h_terms": [_term_doc(t) for t in model.h_terms],
    }
    return json.dumps(doc, indent=2)


def _term_doc(term: LinearTerm):
    return {"coeffs": term.coeffs.tolist(), "constant": term.constant}


def deserialize(text: str) -> ContinuedFractionModel:
    """Parse a model document, reporting the position or field of any defect."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelDocumentError(f"model document is not valid JSON at position {e.pos}: {e.msg}") from e
    if not isinstance(doc, dict):
        raise ModelDocumentError("model document must be a JSON object")
    if doc.get("format") != _FORMAT:
        raise ModelDocumentError(f"field 'format' must be {_FORMAT!r}, got {doc.get('format')!r}")
    if doc.get("version") != _VERSION:
        raise ModelDocumentError(f"field 'version' must be {_VERSION}, got {doc.get('version')!r}")
    for key in ("depth", "feature_names", "active_mask", "g_terms", "h_terms"):
        if key not in doc:
            raise ModelDocumentError(f"model document is missing field {key!r}")
    names = doc["feature_names"]
    if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
        raise ModelDocumentError("field 'feature_names' must be a list of strings")
    mask = doc["active_mask"]
    if not isinstance(mask, list) or not all(isinstance(b, bool) for b in mask):
        raise ModelDocumentError("field 'active_mask' must be a list of booleans")
    g = [_parse_term(t, f"g_terms[{i}]") for i, t in enumerate(_term_list(doc, "g_terms"))]
    h = [_parse_term(t, f"h_terms[{i}]") for i, t in enumerate(_term_list(doc, "h_terms"))]
    if doc["depth"] != len(h):
        raise ModelDocumentError(f"field 'depth' is {doc['depth']} but h_terms has {len(h)} entries")
    try:
        return ContinuedFractionModel(tuple(g), tuple(h), tuple(names), np.array(mask, dtype=bool))
    except (TypeError, ValueError) as e:
        raise ModelDocumentError(f"model document is inconsistent: {e}") from e


def _term_list(doc, key):
    val = doc[key]
    if not isinstance(val, list):
        raise ModelDocumentError(f"field {key!r} must be a list")
    return val


def _parse_term(obj, label) -> LinearTerm:
    if not isinstance(obj, dict) or "coeffs" not in obj or "constant" not in obj:
        raise ModelDocumentError(f"{label} must be an object with 'coeffs' and 'constant'")
    coeffs = obj["coeffs"]
    if not isinstance(coeffs, list) or not all(isinstance(c, (int, float)) for c in coeffs):
        raise ModelDocumentError(f"{label}.coeffs must be a list of numbers")
    if not isinstance(obj["constant"], (int, float)):
        raise ModelDocumentError(f"{label}.constant must be a number")
    try:
        return LinearTerm(np.array(coeffs, dtype=np.float64), float(obj["constant"]))
    except ValueError as e:
        raise ModelDocumentError(f"{label} is invalid: {e}") from e
