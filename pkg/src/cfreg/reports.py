"""Deterministic rendering of models, tables, and comparison reports.

Every function returns a string built from its inputs alone, with floats
formatted deterministically, so identical results render to identical
bytes.  Human-readable tables and machine-readable CSV/JSON live side by
side: the CSV/JSON carries shortest round-trip floats, the text tables a
fixed six-significant-digit format.
"""

from __future__ import annotations

import csv
import io
import json

__all__ = [
    "format_p",
    "format_model",
    "describe_table_text",
    "describe_table_csv",
    "rank_summary_text",
    "rank_summary_json",
    "ranks_csv",
    "posthoc_text",
    "posthoc_csv",
    "first_place_text",
    "first_place_csv",
    "fit_report_text",
    "selection_csv",
    "selection_text",
]

_P_FLOOR = 1e-300


def _g6(v) -> str:
    return f"{float(v):.6g}"


def _r(v) -> str:
    return repr(float(v))


def format_p(p: float) -> str:
    """Shortest round-trip p-value, floored: below 1e-300 prints '<1e-300'."""
    p = float(p)
    if p < _P_FLOOR:
        return "<1e-300"
    return _r(p)


def _csv_string(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def _table(headers, rows) -> str:
    cells = [headers] + [[str(c) for c in row] for row in rows]
    widths = [max(len(r[j]) for r in cells) for j in range(len(headers))]
    def fmt(row):
        return "  ".join(c.ljust(w) if j == 0 else c.rjust(w)
                         for j, (c, w) in enumerate(zip(row, widths))).rstrip()
    lines = [fmt(cells[0]), fmt(["-" * w for w in widths])]
    lines += [fmt(row) for row in cells[1:]]
    return "\n".join(lines) + "\n"


def _affine_text(coeffs, constant, names) -> str:
    parts = [_g6(constant)]
    for name, c in zip(names, coeffs):
        if c == 0.0:
            continue
        sign = "-" if c < 0 else "+"
        parts.append(f"{sign} {_g6(abs(c))}*{name}")
    return " ".join(parts)


def format_model(model) -> str:
    """Printable form of a continued fraction model, one term per line."""
    names = model.feature_names
    lines = [
        f"continued fraction model: depth {model.depth}, "
        f"features {', '.join(names)} (active: {', '.join(model.active_features) or 'none'})"
    ]
    for i, t in enumerate(model.g_terms):
        lines.append(f"  g{i}(x) = {_affine_text(t.coeffs, t.constant, names)}")
    for i, t in enumerate(model.h_terms):
        lines.append(f"  h{i}(x) = {_affine_text(t.coeffs, t.constant, names)}")
    return "\n".join(lines) + "\n"


def _opt(v, fmt):
    return fmt(v) if v is not None else "-"


def describe_table_text(rows, title: str = "method comparison") -> str:
    """Fixed-width per-method summary, best test average first."""
    rows = sorted(rows, key=lambda r: (r.test_avg, r.method))
    body = [
        [r.method, r.n_runs,
         _opt(r.train_avg, _g6), _opt(r.train_med, _g6), _opt(r.train_std, _g6),
         _g6(r.test_avg), _g6(r.test_med), _g6(r.test_std)]
        for r in rows
    ]
    headers = ["method", "runs", "train_avg", "train_med", "train_std",
               "test_avg", "test_med", "test_std"]
    return f"{title}\n{_table(headers, body)}"


def describe_table_csv(rows) -> str:
    rows = sorted(rows, key=lambda r: (r.test_avg, r.method))
    out = [["method", "n_runs", "n_train_runs", "train_avg", "train_med", "train_std",
            "test_avg", "test_med", "test_std"]]
    for r in rows:
        out.append([
            r.method, r.n_runs, r.n_train_runs,
            "" if r.train_avg is None else _r(r.train_avg),
            "" if r.train_med is None else _r(r.train_med),
            "" if r.train_std is None else _r(r.train_std),
            _r(r.test_avg), _r(r.test_med), _r(r.test_std),
        ])
    return _csv_string(out)


def rank_summary_text(rank_matrix, stat: float, p: float, cd: float, alpha: float) -> str:
    """Mean ranks with the Friedman result and the Nemenyi critical difference."""
    means = sorted(rank_matrix.mean_ranks().items(), key=lambda t: (t[1], t[0]))
    body = [[m, _g6(v)] for m, v in means]
    lines = [
        f"mean ranks over {rank_matrix.n_runs} runs "
        f"({rank_matrix.n_methods} methods; rank 1 is best)",
        _table(["method", "mean_rank"], body).rstrip("\n"),
        "",
        f"Friedman chi-squared = {_g6(stat)}, p = {format_p(p)}",
        f"Nemenyi critical difference (alpha = {_g6(alpha)}) = {_g6(cd)}",
        "methods whose mean ranks differ by at least the critical difference"
        " are distinguishable at this level",
    ]
    return "\n".join(lines) + "\n"


def rank_summary_json(rank_matrix, stat: float, p: float, cd: float, alpha: float) -> str:
    doc = {
        "n_runs": rank_matrix.n_runs,
        "methods": list(rank_matrix.methods),
        "mean_ranks": rank_matrix.mean_ranks(),
        "friedman_statistic": float(stat),
        "friedman_p": float(p),
        "friedman_p_display": format_p(p),
        "nemenyi_alpha": float(alpha),
        "nemenyi_cd": float(cd),
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def ranks_csv(rank_matrix) -> str:
    out = [["run_id", *rank_matrix.methods]]
    for rid, row in zip(rank_matrix.run_ids, rank_matrix.ranks):
        out.append([rid, *(_r(v) for v in row)])
    return _csv_string(out)


def posthoc_text(result) -> str:
    """Significance bands for every method pair."""
    k = len(result.methods)
    body = []
    for i in range(k):
        for j in range(i + 1, k):
            body.append([result.methods[i], result.methods[j],
                         format_p(result.p_values[i, j]), result.significance[i][j]])
    return "pairwise mean-rank comparisons\n" + _table(
        ["method_a", "method_b", "p_value", "significance"], body)


def posthoc_csv(result) -> str:
    out = [["method", *result.methods]]
    for i, m in enumerate(result.methods):
        out.append([m, *(format_p(v) for v in result.p_values[i])])
    return _csv_string(out)


def first_place_text(rows) -> str:
    body = [[r.method, r.firsts, _g6(r.best_rank), _g6(r.worst_rank)] for r in rows]
    return "first places per method (ties credit every winner)\n" + _table(
        ["method", "firsts", "best_rank", "worst_rank"], body)


def first_place_csv(rows) -> str:
    out = [["method", "firsts", "best_rank", "worst_rank"]]
    for r in rows:
        out.append([r.method, r.firsts, _r(r.best_rank), _r(r.worst_rank)])
    return _csv_string(out)


def fit_report_text(model, history, train_mse: float, test_mse=None) -> str:
    """Model printout plus the depth trajectory of an iterative fit."""
    lines = [format_model(model).rstrip("\n"), ""]
    if history:
        body = [[d, _r(m)] for d, m in history]
        lines.append("depth trajectory (train MSE per attempted depth)")
        lines.append(_table(["depth", "train_mse"], body).rstrip("\n"))
        lines.append("")
    lines.append(f"train MSE = {_r(train_mse)}")
    if test_mse is not None:
        lines.append(f"test MSE = {_r(test_mse)}")
    return "\n".join(lines) + "\n"


def selection_csv(rows, value_name: str = "appearance_pct") -> str:
    out = [["feature", value_name]]
    for name, v in rows:
        out.append([name, _r(v)])
    return _csv_string(out)


def selection_text(rows, value_name: str = "appearance_pct", title: str = "feature selection") -> str:
    body = [[name, _g6(v)] for name, v in rows]
    return f"{title}\n" + _table(["feature", value_name], body)
