"""Run records, rank matrices, and multi-regressor comparison statistics.

Methods are compared per run by test MSE: rank 1 is the lowest error and
ties share the average of the ranks they span.  The Friedman test (with
tie correction) asks whether rank differences across methods are real;
the Nemenyi critical difference and pairwise studentized-range p-values
then locate them.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import chi2, studentized_range

from .data import Dataset
from .errors import SchemaError

__all__ = [
    "RunRecord",
    "RankMatrix",
    "DescribeRow",
    "PosthocResult",
    "FirstPlaceRow",
    "split_80_20",
    "out_of_domain_split",
    "describe",
    "rank_methods",
    "build_rank_matrix",
    "friedman_test",
    "nemenyi_cd",
    "posthoc_pairwise",
    "first_place_table",
    "save_run_records",
    "load_run_records",
]

# Studentized range quantiles divided by sqrt(2), indexed by the number of
# compared methods, for the two conventional significance levels.
_Q_CRIT = {
    0.05: {
        2: 1.959964, 3: 2.343701, 4: 2.569032, 5: 2.727774, 6: 2.849705,
        7: 2.94832, 8: 3.030879, 9: 3.101730, 10: 3.163684, 11: 3.218654,
        12: 3.268004, 13: 3.312739, 14: 3.353618, 15: 3.39123, 16: 3.426041,
        17: 3.458425, 18: 3.488685, 19: 3.517073, 20: 3.543799,
    },
    0.10: {
        2: 1.644854, 3: 2.052293, 4: 2.291341, 5: 2.459516, 6: 2.588521,
        7: 2.692732, 8: 2.779884, 9: 2.854606, 10: 2.919889, 11: 2.977768,
        12: 3.029694, 13: 3.076733, 14: 3.119693, 15: 3.159199, 16: 3.195743,
        17: 3.229723, 18: 3.261461, 19: 3.291224, 20: 3.319233,
    },
}


@dataclass(frozen=True)
class RunRecord:
    """One method's errors on one benchmark run.  train_mse may be None."""

    run_id: int
    method: str
    train_mse: object
    test_mse: float

    def __post_init__(self):
        if self.run_id < 0:
            raise ValueError("run_id must be non-negative")
        if not self.method:
            raise ValueError("method must be a non-empty name")
        if self.train_mse is not None:
            t = float(self.train_mse)
            if math.isnan(t) or t < 0:
                raise ValueError("train_mse must be non-negative")
            object.__setattr__(self, "train_mse", t)
        t = float(self.test_mse)
        if math.isnan(t) or t < 0:
            raise ValueError("test_mse must be non-negative")
        object.__setattr__(self, "test_mse", t)


@dataclass(frozen=True, eq=False)
class RankMatrix:
    """Per-run ranks, one row per run and one column per method."""

    methods: tuple
    ranks: np.ndarray
    run_ids: tuple

    def __post_init__(self):
        methods = tuple(self.methods)
        ranks = np.array(self.ranks, dtype=np.float64)
        k = len(methods)
        if k < 2:
            raise ValueError("a rank matrix needs at least two methods")
        if len(set(methods)) != k:
            raise ValueError("methods must be unique")
        if ranks.ndim != 2 or ranks.shape[1] != k:
            raise ValueError(f"ranks must have {k} columns")
        run_ids = tuple(self.run_ids)
        if len(run_ids) != ranks.shape[0]:
            raise ValueError("run_ids must match the number of rank rows")
        expected = k * (k + 1) / 2
        if np.any(ranks < 1) or np.any(ranks > k):
            raise ValueError("ranks must lie in [1, k]")
        if not np.allclose(ranks.sum(axis=1), expected, rtol=0, atol=1e-9):
            raise ValueError(f"every rank row must sum to {expected}")
        ranks.flags.writeable = False
        object.__setattr__(self, "methods", methods)
        object.__setattr__(self, "ranks", ranks)
        object.__setattr__(self, "run_ids", run_ids)

    @property
    def n_runs(self) -> int:
        return self.ranks.shape[0]

    @property
    def n_methods(self) -> int:
        return len(self.methods)

    def mean_ranks(self) -> dict:
        means = self.ranks.mean(axis=0)
        return {m: float(v) for m, v in zip(self.methods, means)}


def split_80_20(data: Dataset, rng_seed: int = 0):
    """Random 80/20 train/test split; returns (train, test) datasets.

    The train side takes round(0.8 * n) samples (capped so the test side
    keeps at least one).
    """
    n = data.n_samples
    if n < 2:
        raise ValueError("need at least two samples to split")
    n_train = min(int(round(0.8 * n)), n - 1)
    n_train = max(n_train, 1)
    perm = np.random.default_rng(rng_seed).permutation(n)
    return data.subset(np.sort(perm[:n_train])), data.subset(np.sort(perm[n_train:]))


def out_of_domain_split(data: Dataset, lo: float, hi: float, train_frac: float = 0.8,
                        rng_seed: int = 0):
    """Extrapolation split by target range.

    Training draws a random ``train_frac`` of the samples whose target
    lies in [lo, hi]; the test side is every sample outside that range.
    """
    if lo > hi:
        raise ValueError("lo must not exceed hi")
    if not 0 < train_frac <= 1:
        raise ValueError("train_frac must lie in (0, 1]")
    inside = np.flatnonzero((data.y >= lo) & (data.y <= hi))
    outside = np.flatnonzero((data.y < lo) | (data.y > hi))
    if inside.size == 0:
        raise ValueError("no samples have targets inside [lo, hi]")
    if outside.size == 0:
        raise ValueError("no samples have targets outside [lo, hi]")
    m = max(1, int(round(train_frac * inside.size)))
    perm = np.random.default_rng(rng_seed).permutation(inside.size)
    train_idx = np.sort(inside[perm[:m]])
    return data.subset(train_idx), data.subset(outside)


@dataclass(frozen=True)
class DescribeRow:
    method: str
    n_runs: int
    n_train_runs: int
    train_avg: object
    train_med: object
    train_std: object
    test_avg: float
    test_med: float
    test_std: float


def describe(records):
    """Per-method summary of run records.

    Standard deviations are sample standard deviations; a method with a
    single run reports 0.0, which n_runs = 1 flags for the reader.  Train
    columns are None for methods that never report a train MSE.
    """
    by_method = {}
    for r in records:
        by_method.setdefault(r.method, []).append(r)
    rows = []
    for method in sorted(by_method):
        rs = by_method[method]
        test = np.array([r.test_mse for r in rs])
        train = np.array([r.train_mse for r in rs if r.train_mse is not None])
        t_avg, t_med, t_std = _summary(test)
        if train.size:
            tr_avg, tr_med, tr_std = _summary(train)
        else:
            tr_avg = tr_med = tr_std = None
        rows.append(DescribeRow(
            method=method, n_runs=len(rs), n_train_runs=int(train.size),
            train_avg=tr_avg, train_med=tr_med, train_std=tr_std,
            test_avg=t_avg, test_med=t_med, test_std=t_std,
        ))
    return rows


def _summary(values):
    avg = float(values.mean())
    med = float(np.median(values))
    std = float(values.std(ddof=1)) if values.size > 1 else 0.0
    return avg, med, std


def _average_ranks(values):
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        shared = (i + j + 2) / 2.0
        for t in range(i, j + 1):
            ranks[order[t]] = shared
        i = j + 1
    return ranks


def rank_methods(records) -> dict:
    """Rank the methods of a single run by test MSE (rank 1 is best).

    Tied errors share the average of the ranks they span, e.g. errors
    (5, 7, 7, 9) rank as (1, 2.5, 2.5, 4).
    """
    records = list(records)
    if len({r.run_id for r in records}) > 1:
        raise ValueError("rank_methods expects records from a single run")
    methods = [r.method for r in records]
    if len(set(methods)) != len(methods):
        raise ValueError("each method must appear exactly once per run")
    ranks = _average_ranks([r.test_mse for r in records])
    return dict(zip(methods, ranks))


def build_rank_matrix(records) -> RankMatrix:
    """Group records by run and rank within each run.

    Every run must cover exactly the same set of methods.
    """
    by_run = {}
    for r in records:
        by_run.setdefault(r.run_id, []).append(r)
    if not by_run:
        raise ValueError("no records given")
    methods = tuple(sorted({r.method for r in records}))
    rows = []
    run_ids = tuple(sorted(by_run))
    for run_id in run_ids:
        rs = by_run[run_id]
        seen = {r.method for r in rs}
        if seen != set(methods) or len(rs) != len(methods):
            missing = sorted(set(methods) - seen)
            raise ValueError(f"run {run_id} does not cover every method (missing {missing})")
        ranked = rank_methods(rs)
        rows.append([ranked[m] for m in methods])
    return RankMatrix(methods=methods, ranks=np.array(rows), run_ids=run_ids)


def friedman_test(rank_matrix: RankMatrix):
    """Tie-corrected Friedman test on a rank matrix.

    Returns (statistic, p_value) with the statistic referred to the
    chi-squared distribution with k - 1 degrees of freedom.  When every
    run is one all-tied group the correction degenerates and the result
    is (0.0, 1.0).
    """
    R = rank_matrix.ranks
    n, k = R.shape
    if n < 2:
        raise ValueError("friedman_test needs at least two runs")
    mean_ranks = R.mean(axis=0)
    base = 12.0 * n / (k * (k + 1)) * float(((mean_ranks - (k + 1) / 2.0) ** 2).sum())
    ties = 0.0
    for row in R:
        _, counts = np.unique(row, return_counts=True)
        ties += float((counts.astype(np.float64) ** 3 - counts).sum())
    c = 1.0 - ties / (n * k * (k * k - 1))
    if c == 0.0:
        return 0.0, 1.0
    stat = base / c
    return stat, float(chi2.sf(stat, k - 1))


def nemenyi_cd(k: int, n: int, alpha: float = 0.05) -> float:
    """Critical difference of mean ranks for k methods over n runs.

    Two methods whose mean ranks differ by at least the returned value
    are distinguishable at the given level.  Quadrupling n halves the CD.
    """
    if not 2 <= k <= 20:
        raise ValueError("k must lie in [2, 20]")
    if n < 1:
        raise ValueError("n must be at least 1")
    table = _Q_CRIT.get(round(alpha, 10))
    if table is None:
        raise ValueError(f"alpha must be one of {sorted(_Q_CRIT)}")
    return table[k] * math.sqrt(k * (k + 1) / (6.0 * n))


@dataclass(frozen=True, eq=False)
class PosthocResult:
    """Pairwise mean-rank comparison: p-values and significance bands."""

    methods: tuple
    p_values: np.ndarray
    significance: tuple

    def band(self, a: str, b: str) -> str:
        i = self.methods.index(a)
        j = self.methods.index(b)
        return self.significance[i][j]


def _band(p: float) -> str:
    if p < 0.001:
        return "<0.001"
    if p < 0.01:
        return "<0.01"
    if p < 0.05:
        return "<0.05"
    return "NS"


def posthoc_pairwise(rank_matrix: RankMatrix) -> PosthocResult:
    """Pairwise p-values from the studentized range of mean-rank gaps."""
    k = rank_matrix.n_methods
    n = rank_matrix.n_runs
    means = rank_matrix.ranks.mean(axis=0)
    se = math.sqrt(k * (k + 1) / (6.0 * n))
    p = np.ones((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            z = abs(means[i] - means[j]) / se
            pij = float(studentized_range.sf(z * math.sqrt(2.0), k, np.inf))
            p[i, j] = p[j, i] = pij
    bands = tuple(tuple(_band(p[i, j]) if i != j else "NS" for j in range(k)) for i in range(k))
    p.flags.writeable = False
    return PosthocResult(methods=rank_matrix.methods, p_values=p, significance=bands)


@dataclass(frozen=True)
class FirstPlaceRow:
    method: str
    firsts: int
    best_rank: float
    worst_rank: float


def save_run_records(records, path) -> None:
    """Write records as CSV with header run_id,method,train_mse,test_mse.

    A missing train MSE becomes an empty field.  Floats keep shortest
    round-trip form, so save followed by load reproduces the records.
    """
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["run_id", "method", "train_mse", "test_mse"])
        for r in records:
            train = "" if r.train_mse is None else repr(float(r.train_mse))
            w.writerow([r.run_id, r.method, train, repr(float(r.test_mse))])


def load_run_records(path):
    """Read a run-record CSV, reporting the line number of any defect."""
    with open(path, newline="") as f:
        raw = list(csv.reader(f))
    if not raw:
        raise SchemaError(f"{path}: file is empty")
    if raw[0] != ["run_id", "method", "train_mse", "test_mse"]:
        raise SchemaError(f"{path} line 1: header must be 'run_id,method,train_mse,test_mse'")
    records = []
    for lineno, row in enumerate(raw[1:], start=2):
        if len(row) != 4:
            raise SchemaError(f"{path} line {lineno}: has {len(row)} fields, expected 4")
        try:
            run_id = int(row[0])
        except ValueError:
            raise SchemaError(f"{path} line {lineno}: could not parse run_id {row[0]!r}") from None
        try:
            train = None if row[2] == "" else float(row[2])
            test = float(row[3])
        except ValueError:
            raise SchemaError(f"{path} line {lineno}: could not parse an MSE field") from None
        try:
            records.append(RunRecord(run_id=run_id, method=row[1], train_mse=train, test_mse=test))
        except ValueError as e:
            raise SchemaError(f"{path} line {lineno}: {e}") from e
    if not records:
        raise SchemaError(f"{path}: no record rows")
    return records


def first_place_table(rank_matrix: RankMatrix):
    """How often each method took (or tied for) first place.

    A run's first place is its row minimum; every method achieving it is
    credited.  Rows are sorted by firsts descending, then method name.
    """
    R = rank_matrix.ranks
    row_min = R.min(axis=1)
    rows = []
    for j, m in enumerate(rank_matrix.methods):
        rows.append(FirstPlaceRow(
            method=m,
            firsts=int((R[:, j] == row_min).sum()),
            best_rank=float(R[:, j].min()),
            worst_rank=float(R[:, j].max()),
        ))
    rows.sort(key=lambda r: (-r.firsts, r.method))
    return rows
