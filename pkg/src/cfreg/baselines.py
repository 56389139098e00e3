"""Ordinary least squares baseline and external prediction import.

Predictions produced by other toolkits join the comparison through a CSV
with header ``run_id,sample_id,prediction,split``; import and export are
inverse to each other bit-for-bit.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import SchemaError

__all__ = [
    "LinearModel",
    "ols_fit",
    "PredictionRow",
    "ImportedPredictions",
    "import_predictions",
    "export_predictions",
    "run_records_from_predictions",
]

_SPLITS = ("train", "test")
_RIDGE = 1e-10


@dataclass(frozen=True, eq=False)
class LinearModel:
    """Plain linear predictor.  ridged marks a rank-deficient fallback fit."""

    coeffs: np.ndarray
    intercept: float
    ridged: bool = False

    def __post_init__(self):
        arr = np.array(self.coeffs, dtype=np.float64)
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)
        object.__setattr__(self, "intercept", float(self.intercept))

    def predict(self, X) -> np.ndarray:
        return np.asarray(X, dtype=np.float64) @ self.coeffs + self.intercept

    def __eq__(self, other):
        if not isinstance(other, LinearModel):
            return NotImplemented
        return (
            self.intercept == other.intercept
            and self.ridged == other.ridged
            and np.array_equal(self.coeffs, other.coeffs)
        )


def ols_fit(data) -> LinearModel:
    """Least squares fit with intercept.

    A rank-deficient design falls back to a tiny ridge (1e-10) solve so
    the result stays deterministic; the fallback is flagged on the model.
    """
    X = np.asarray(data.X, dtype=np.float64)
    y = np.asarray(data.y, dtype=np.float64)
    if X.shape[0] == 0:
        raise ValueError("cannot fit on an empty dataset")
    A = np.hstack([X, np.ones((X.shape[0], 1))])
    sol, _, rank, _ = np.linalg.lstsq(A, y, rcond=None)
    ridged = rank < A.shape[1]
    if ridged:
        G = A.T @ A + _RIDGE * np.eye(A.shape[1])
        sol = np.linalg.solve(G, A.T @ y)
    return LinearModel(coeffs=sol[:-1], intercept=float(sol[-1]), ridged=ridged)


@dataclass(frozen=True)
class PredictionRow:
    run_id: int
    sample_id: str
    prediction: float
    split: str


@dataclass(frozen=True)
class ImportedPredictions:
    """External regressor output, one prediction per (run, sample, split)."""

    method: str
    rows: tuple

    def by_run(self):
        """Nested view: run_id -> split -> {sample_id: prediction}."""
        out = {}
        for r in self.rows:
            out.setdefault(r.run_id, {}).setdefault(r.split, {})[r.sample_id] = r.prediction
        return out

    @property
    def run_ids(self):
        return tuple(sorted({r.run_id for r in self.rows}))


def import_predictions(path, method: str) -> ImportedPredictions:
    """Read an external prediction CSV, reporting the line of any defect."""
    with open(path, newline="") as f:
        raw = list(csv.reader(f))
    if not raw:
        raise SchemaError(f"{path}: file is empty")
    if raw[0] != ["run_id", "sample_id", "prediction", "split"]:
        raise SchemaError(f"{path} line 1: header must be 'run_id,sample_id,prediction,split'")
    rows = []
    seen = set()
    for lineno, row in enumerate(raw[1:], start=2):
        if len(row) != 4:
            raise SchemaError(f"{path} line {lineno}: has {len(row)} fields, expected 4")
        try:
            run_id = int(row[0])
        except ValueError:
            raise SchemaError(f"{path} line {lineno}: could not parse run_id {row[0]!r}") from None
        if run_id < 0:
            raise SchemaError(f"{path} line {lineno}: run_id must be non-negative")
        try:
            pred = float(row[2])
        except ValueError:
            raise SchemaError(f"{path} line {lineno}: could not parse prediction {row[2]!r}") from None
        if not np.isfinite(pred):
            raise SchemaError(f"{path} line {lineno}: prediction {row[2]!r} is not finite")
        if row[3] not in _SPLITS:
            raise SchemaError(f"{path} line {lineno}: split must be 'train' or 'test', got {row[3]!r}")
        key = (run_id, row[1], row[3])
        if key in seen:
            raise SchemaError(f"{path} line {lineno}: duplicate prediction for {key}")
        seen.add(key)
        rows.append(PredictionRow(run_id, row[1], pred, row[3]))
    if not rows:
        raise SchemaError(f"{path}: no prediction rows")
    return ImportedPredictions(method=method, rows=tuple(rows))


def export_predictions(imported: ImportedPredictions, path) -> None:
    """Inverse of import_predictions; floats keep shortest round-trip form."""
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["run_id", "sample_id", "prediction", "split"])
        for r in imported.rows:
            w.writerow([r.run_id, r.sample_id, repr(float(r.prediction)), r.split])


def run_records_from_predictions(imported: ImportedPredictions, data):
    """Score imported predictions against a dataset's targets.

    Every run must cover the test split; the train split is optional and
    its MSE is reported as None when absent.  A prediction for a sample
    the dataset does not hold is a schema error.

    Returns a list of stats.RunRecord, one per run, ordered by run_id.
    """
    from .stats import RunRecord

    targets = dict(zip(data.sample_ids, data.y))
    for r in imported.rows:
        if r.sample_id not in targets:
            raise SchemaError(
                f"prediction for run {r.run_id} names sample {r.sample_id!r} "
                f"which the dataset does not contain"
            )
    records = []
    for run_id, splits in sorted(imported.by_run().items()):
        if "test" not in splits:
            raise SchemaError(f"run {run_id} has no test predictions")
        test_mse = _split_mse(splits["test"], targets)
        train_mse = _split_mse(splits["train"], targets) if "train" in splits else None
        records.append(RunRecord(run_id=run_id, method=imported.method,
                                 train_mse=train_mse, test_mse=test_mse))
    return records


def _split_mse(preds, targets) -> float:
    err = [(preds[sid] - targets[sid]) for sid in sorted(preds)]
    err = np.asarray(err, dtype=np.float64)
    return float(err @ err / err.shape[0])
