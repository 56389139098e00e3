"""Command line harness.

Subcommands generate benchmark datasets, fit single models, run repeated
or extrapolation benchmarks, recompute comparison statistics from saved
run records, and select features.  Every command is deterministic for a
given --seed: rerunning with the same inputs rewrites byte-identical
artifacts.  Human-readable reports and machine-readable CSV/JSON are
written side by side.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace

from . import reports
from .baselines import import_predictions, ols_fit, run_records_from_predictions
from .data import load_dataset, save_dataset
from .errors import ModelDocumentError, SchemaError
from .features import lasso_fit, lasso_selection_protocol, pearson_rank
from .generators import gen_sinc, gen_sparse_linear
from .harness import METHODS, run_benchmark, run_ood
from .itercfr import fit as iter_fit
from .memetic import MAConfig
from .model import mse, serialize
from .simplex import SimplexConfig
from .stats import (build_rank_matrix, describe, first_place_table, friedman_test,
                    load_run_records, nemenyi_cd, posthoc_pairwise, save_run_records)

__all__ = ["main"]


def _write(path, text):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", newline="") as f:
        f.write(text)


def _ma_flags(p: argparse.ArgumentParser):
    p.add_argument("--generations", type=int, default=200)
    p.add_argument("--mutation-rate", type=float, default=0.10)
    p.add_argument("--delta", type=float, default=0.10)
    p.add_argument("--root-stag", type=int, default=5, help="root reset patience in generations")
    p.add_argument("--tree-depth", type=int, default=3)
    p.add_argument("--nm-restarts", type=int, default=4)
    p.add_argument("--nm-iters", type=int, default=250)
    p.add_argument("--nm-stag", type=int, default=10)
    p.add_argument("--max-depth", type=int, default=5)
    p.add_argument("--lam", type=float, default=1.0, help="lasso penalty")


def _ma_config(args, seed: int) -> MAConfig:
    simplex = SimplexConfig(restarts=args.nm_restarts, max_iters_per_restart=args.nm_iters,
                            stagnation_reset=args.nm_stag)
    return MAConfig(generations=args.generations, mutation_rate=args.mutation_rate,
                    delta=args.delta, root_stagnation_reset=args.root_stag,
                    tree_depth=args.tree_depth, rng_seed=seed, simplex=simplex)


def cmd_gen_sinc(args) -> int:
    data = gen_sinc(n=args.n, lo=args.lo, hi=args.hi, noise_sd=args.noise_sd,
                    rng_seed=args.seed)
    save_dataset(data, args.out)
    print(f"wrote {data.n_samples} samples x {data.n_features} features to {args.out}")
    return 0


def cmd_gen_sparse_linear(args) -> int:
    data, truth = gen_sparse_linear(n=args.n, p=args.p, n_informative=args.informative,
                                    noise_sd=args.noise_sd, rng_seed=args.seed)
    save_dataset(data, args.out)
    truth_path = args.truth_out or args.out + ".truth.json"
    _write(truth_path, json.dumps({"informative": truth}, indent=2, sort_keys=True) + "\n")
    print(f"wrote {data.n_samples} samples x {data.n_features} features to {args.out}")
    print(f"wrote ground truth to {truth_path}")
    return 0


def cmd_fit(args) -> int:
    data = load_dataset(args.data)
    if args.method == "iter-cfr":
        model, history = iter_fit(data, _ma_config(args, args.seed), args.max_depth)
        train_mse = mse(model, data).mse
        report = reports.fit_report_text(model, history, train_mse)
        if args.model_out:
            _write(args.model_out, serialize(model) + "\n")
        metrics = {"method": args.method, "train_mse": train_mse,
                   "depth": model.depth, "history": [[d, m] for d, m in history]}
    elif args.method == "ols":
        fitted = ols_fit(data)
        err = fitted.predict(data.X) - data.y
        train_mse = float(err @ err / data.n_samples)
        lines = [f"linear model (ridged fallback: {fitted.ridged})"]
        lines += [f"  {n}: {c!r}" for n, c in zip(data.feature_names, fitted.coeffs)]
        lines.append(f"  intercept: {fitted.intercept!r}")
        lines.append(f"train MSE = {train_mse!r}")
        report = "\n".join(lines) + "\n"
        if args.model_out:
            doc = {"method": "ols", "coeffs": dict(zip(data.feature_names, fitted.coeffs.tolist())),
                   "intercept": fitted.intercept, "ridged": fitted.ridged}
            _write(args.model_out, json.dumps(doc, indent=2, sort_keys=True) + "\n")
        metrics = {"method": args.method, "train_mse": train_mse}
    else:
        fitted = lasso_fit(data, args.lam)
        err = fitted.predict(data.X) - data.y
        train_mse = float(err @ err / data.n_samples)
        lines = [f"lasso model (lambda = {args.lam!r}, converged: {fitted.converged})"]
        lines += [f"  {n}: {c!r}" for n, c in zip(data.feature_names, fitted.beta) if c != 0.0]
        lines.append(f"  intercept: {fitted.intercept!r}")
        lines.append(f"train MSE = {train_mse!r}")
        report = "\n".join(lines) + "\n"
        if args.model_out:
            doc = {"method": "lasso", "lambda": fitted.lam,
                   "coeffs": dict(zip(data.feature_names, fitted.beta.tolist())),
                   "intercept": fitted.intercept, "selected": sorted(fitted.selected)}
            _write(args.model_out, json.dumps(doc, indent=2, sort_keys=True) + "\n")
        metrics = {"method": args.method, "train_mse": train_mse, "lambda": args.lam}
    print(report, end="")
    if args.report_out:
        _write(args.report_out, report)
    if args.metrics_out:
        _write(args.metrics_out, json.dumps(metrics, indent=2, sort_keys=True) + "\n")
    return 0


def _comparison_artifacts(records, out_dir, alpha: float):
    """Write the full artifact family for a set of run records."""
    save_run_records(records, os.path.join(out_dir, "records.csv"))
    rows = describe(records)
    _write(os.path.join(out_dir, "describe.txt"), reports.describe_table_text(rows))
    _write(os.path.join(out_dir, "describe.csv"), reports.describe_table_csv(rows))
    methods = {r.method for r in records}
    if len(methods) < 2:
        return
    rm = build_rank_matrix(records)
    _write(os.path.join(out_dir, "ranks.csv"), reports.ranks_csv(rm))
    if rm.n_runs >= 2:
        stat, p = friedman_test(rm)
        cd = nemenyi_cd(rm.n_methods, rm.n_runs, alpha)
        _write(os.path.join(out_dir, "rank_summary.txt"),
               reports.rank_summary_text(rm, stat, p, cd, alpha))
        _write(os.path.join(out_dir, "rank_summary.json"),
               reports.rank_summary_json(rm, stat, p, cd, alpha))
        ph = posthoc_pairwise(rm)
        _write(os.path.join(out_dir, "posthoc.txt"), reports.posthoc_text(ph))
        _write(os.path.join(out_dir, "posthoc.csv"), reports.posthoc_csv(ph))
    fp = first_place_table(rm)
    _write(os.path.join(out_dir, "first_place.txt"), reports.first_place_text(fp))
    _write(os.path.join(out_dir, "first_place.csv"), reports.first_place_csv(fp))


def _parse_imports(specs):
    out = []
    for spec_str in specs or []:
        if "=" not in spec_str:
            raise SchemaError(f"--import expects method=path, got {spec_str!r}")
        method, path = spec_str.split("=", 1)
        if not method or not path:
            raise SchemaError(f"--import expects method=path, got {spec_str!r}")
        out.append((method, path))
    return out


def cmd_benchmark(args) -> int:
    data = load_dataset(args.data)
    methods = args.methods.split(",")
    records = run_benchmark(data, methods=methods, runs=args.runs, seed=args.seed,
                            ma_config=_ma_config(args, args.seed),
                            max_depth=args.max_depth, lam=args.lam)
    for method, path in _parse_imports(args.imports):
        imported = import_predictions(path, method)
        records.extend(run_records_from_predictions(imported, data))
    os.makedirs(args.out_dir, exist_ok=True)
    _comparison_artifacts(records, args.out_dir, args.alpha)
    print(f"wrote benchmark artifacts for {len(records)} records to {args.out_dir}")
    return 0


def cmd_ood(args) -> int:
    data = load_dataset(args.data)
    methods = args.methods.split(",")
    records = run_ood(data, args.lo, args.hi, methods=methods, runs=args.runs,
                      seed=args.seed, train_frac=args.train_frac,
                      ma_config=_ma_config(args, args.seed),
                      max_depth=args.max_depth, lam=args.lam)
    os.makedirs(args.out_dir, exist_ok=True)
    _comparison_artifacts(records, args.out_dir, args.alpha)
    print(f"wrote extrapolation artifacts for {len(records)} records to {args.out_dir}")
    return 0


def cmd_stats(args) -> int:
    records = []
    for path in args.records:
        records.extend(load_run_records(path))
    os.makedirs(args.out_dir, exist_ok=True)
    _comparison_artifacts(records, args.out_dir, args.alpha)
    print(f"wrote comparison artifacts for {len(records)} records to {args.out_dir}")
    return 0


def cmd_select(args) -> int:
    data = load_dataset(args.data)
    if args.mode == "pearson":
        ranked = pearson_rank(data, args.top_k)
        report_rows = ranked
        value_name = "pearson_r"
        keep = [name for name, _ in ranked]
        title = f"top {args.top_k} features by absolute correlation"
    else:
        rows, selected = lasso_selection_protocol(
            data, lam=args.lam, trials=args.trials, subset_frac=args.subset_frac,
            threshold=args.threshold, rng_seed=args.seed)
        report_rows = rows
        value_name = "appearance_pct"
        keep = sorted(selected)
        title = (f"lasso stability selection: lambda = {args.lam!r}, {args.trials} trials, "
                 f"threshold {args.threshold!r}")
        if not keep:
            print("no feature met the selection threshold; no reduced dataset written",
                  file=sys.stderr)
    text = reports.selection_text(report_rows, value_name, title)
    print(text, end="")
    if args.report_out:
        _write(args.report_out, reports.selection_csv(report_rows, value_name))
    if keep and args.out:
        save_dataset(data.select_features(keep), args.out)
        print(f"wrote reduced dataset with {len(keep)} features to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cfreg",
        description="continued fraction regression benchmark harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-sinc", help="generate the noisy 1 + sin(x)/x dataset")
    p.add_argument("--n", type=int, default=500)
    p.add_argument("--lo", type=float, default=-10.0)
    p.add_argument("--hi", type=float, default=10.0)
    p.add_argument("--noise-sd", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_sinc)

    p = sub.add_parser("gen-sparse-linear", help="generate wide linear data with few informative features")
    p.add_argument("--n", type=int, default=120)
    p.add_argument("--p", type=int, default=50)
    p.add_argument("--informative", type=int, default=5)
    p.add_argument("--noise-sd", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--truth-out", default=None)
    p.set_defaults(func=cmd_gen_sparse_linear)

    p = sub.add_parser("fit", help="fit one model on a dataset")
    p.add_argument("--data", required=True)
    p.add_argument("--method", choices=METHODS, default="iter-cfr")
    p.add_argument("--seed", type=int, default=0)
    _ma_flags(p)
    p.add_argument("--model-out", default=None)
    p.add_argument("--report-out", default=None)
    p.add_argument("--metrics-out", default=None)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("benchmark", help="repeated-split comparison of methods")
    p.add_argument("--data", required=True)
    p.add_argument("--methods", default="iter-cfr,ols,lasso",
                   help="comma-separated subset of " + ",".join(METHODS))
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--import", dest="imports", action="append", metavar="METHOD=PATH",
                   help="merge external predictions (repeatable)")
    _ma_flags(p)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("ood", help="train inside a target range, test outside it")
    p.add_argument("--data", required=True)
    p.add_argument("--lo", type=float, required=True)
    p.add_argument("--hi", type=float, required=True)
    p.add_argument("--train-frac", type=float, default=0.8)
    p.add_argument("--methods", default="iter-cfr,ols,lasso")
    p.add_argument("--runs", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--alpha", type=float, default=0.05)
    _ma_flags(p)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_ood)

    p = sub.add_parser("stats", help="recompute comparison statistics from run records")
    p.add_argument("--records", action="append", required=True,
                   help="run-record CSV (repeatable)")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("select", help="rank or select features")
    p.add_argument("--data", required=True)
    p.add_argument("--mode", choices=("pearson", "lasso"), required=True)
    p.add_argument("--top-k", type=int, default=50)
    p.add_argument("--lam", type=float, default=1.0)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--subset-frac", type=float, default=0.8)
    p.add_argument("--threshold", type=float, default=0.9)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="reduced dataset CSV")
    p.add_argument("--report-out", default=None, help="selection report CSV")
    p.set_defaults(func=cmd_select)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SchemaError, ModelDocumentError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
