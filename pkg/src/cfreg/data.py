"""Dataset container and its CSV form.

The on-disk layout is one header row ``sample_id,target,<feature names...>``
followed by one row per sample.  Floats are written with shortest
round-trip formatting, so save followed by load reproduces the arrays
bit-exactly.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import SchemaError

__all__ = ["Dataset", "save_dataset", "load_dataset"]


@dataclass(frozen=True, eq=False)
class Dataset:
    """Immutable regression dataset with named samples and features."""

    sample_ids: tuple
    feature_names: tuple
    X: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        ids = tuple(str(s) for s in self.sample_ids)
        names = tuple(str(n) for n in self.feature_names)
        if not names:
            raise ValueError("feature_names must be non-empty")
        if len(set(ids)) != len(ids):
            raise ValueError("sample_ids must be unique")
        if len(set(names)) != len(names):
            raise ValueError("feature_names must be unique")
        X = np.array(self.X, dtype=np.float64)
        y = np.array(self.y, dtype=np.float64)
        if X.ndim != 2 or X.shape != (len(ids), len(names)):
            raise ValueError(f"X must have shape ({len(ids)}, {len(names)}), got {X.shape}")
        if y.shape != (len(ids),):
            raise ValueError(f"y must have shape ({len(ids)},), got {y.shape}")
        if not np.all(np.isfinite(X)):
            raise ValueError("X must be finite")
        if not np.all(np.isfinite(y)):
            raise ValueError("y must be finite")
        X.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "sample_ids", ids)
        object.__setattr__(self, "feature_names", names)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)

    @property
    def n_samples(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    def subset(self, indices) -> "Dataset":
        """New dataset holding the given sample rows, in the given order."""
        idx = np.asarray(indices, dtype=int)
        return Dataset(
            tuple(self.sample_ids[i] for i in idx),
            self.feature_names,
            self.X[idx],
            self.y[idx],
        )

    def select_features(self, names) -> "Dataset":
        """New dataset keeping only the named feature columns, in the given order."""
        names = list(names)
        pos = {n: j for j, n in enumerate(self.feature_names)}
        missing = [n for n in names if n not in pos]
        if missing:
            raise ValueError(f"unknown feature names: {missing}")
        cols = [pos[n] for n in names]
        return Dataset(self.sample_ids, tuple(names), self.X[:, cols], self.y)

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.sample_ids == other.sample_ids
            and self.feature_names == other.feature_names
            and np.array_equal(self.X, other.X)
            and np.array_equal(self.y, other.y)
        )

    def __repr__(self):
        return f"Dataset(n_samples={self.n_samples}, n_features={self.n_features})"


def save_dataset(data: Dataset, path) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["sample_id", "target", *data.feature_names])
        for i, sid in enumerate(data.sample_ids):
            w.writerow([sid, repr(float(data.y[i])), *(repr(float(v)) for v in data.X[i])])


def load_dataset(path) -> Dataset:
    """Read a dataset CSV, reporting the line number of any defect."""
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    if not rows:
        raise SchemaError(f"{path}: file is empty")
    header = rows[0]
    if len(header) < 3 or header[0] != "sample_id" or header[1] != "target":
        raise SchemaError(
            f"{path} line 1: header must start with 'sample_id,target' and name at least one feature"
        )
    names = header[2:]
    if len(set(names)) != len(names):
        raise SchemaError(f"{path} line 1: duplicate feature names in header")
    ids = []
    y = []
    X = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise SchemaError(f"{path} line {lineno}: has {len(row)} fields, expected {len(header)}")
        ids.append(row[0])
        y.append(_parse_float(row[1], path, lineno, "target"))
        X.append([_parse_float(v, path, lineno, names[j]) for j, v in enumerate(row[2:])])
    if len(set(ids)) != len(ids):
        dupes = sorted({s for s in ids if ids.count(s) > 1})
        raise SchemaError(f"{path}: duplicate sample_id values: {dupes[:5]}")
    try:
        return Dataset(tuple(ids), tuple(names), np.array(X, dtype=np.float64).reshape(len(ids), len(names)), np.array(y))
    except ValueError as e:
        raise SchemaError(f"{path}: {e}") from e


def _parse_float(text, path, lineno, col):
    try:
        v = float(text)
    except ValueError:
        raise SchemaError(f"{path} line {lineno}: could not parse {col} value {text!r}") from None
    if not np.isfinite(v):
        raise SchemaError(f"{path} line {lineno}: {col} value {text!r} is not finite")
    return v
