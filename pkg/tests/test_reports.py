import csv
import io

import numpy as np

from cfreg import (RunRecord, build_rank_matrix, describe, first_place_table,
                   friedman_test, nemenyi_cd, posthoc_pairwise)
from cfreg.reports import (describe_table_csv, describe_table_text, first_place_csv,
                           first_place_text, fit_report_text, format_model, format_p,
                           posthoc_csv, posthoc_text, rank_summary_json,
                           rank_summary_text, ranks_csv, selection_csv)
from conftest import make_model


def records():
    out = []
    for run in range(6):
        out += [
            RunRecord(run_id=run, method="alpha", train_mse=0.1 + run * 0.01,
                      test_mse=0.2 + run * 0.01),
            RunRecord(run_id=run, method="beta", train_mse=None,
                      test_mse=0.5 + run * 0.01),
            RunRecord(run_id=run, method="gamma", train_mse=0.3,
                      test_mse=0.9 - run * 0.01),
        ]
    return out


class TestFormatP:
    def test_floor(self):
        assert format_p(0.0) == "<1e-300"
        assert format_p(1e-301) == "<1e-300"

    def test_regular_values_round_trip(self):
        for p in (1.0, 0.05, 4.539992976248486e-05, 2.74845e-176):
            assert float(format_p(p)) == p


class TestFormatModel:
    def test_layout(self):
        m = make_model(
            [([0.0, -0.016], 1.29), ([0.58, -3.55], 16.45)],
            [([0.0, -4.84], 33.84)],
            ("x", "x2"),
        )
        text = format_model(m)
        lines = text.splitlines()
        assert "depth 1" in lines[0]
        assert lines[1].startswith("  g0(x) = 1.29 - 0.016*x2")
        assert lines[2].startswith("  g1(x) = 16.45 + 0.58*x - 3.55*x2")
        assert lines[3].startswith("  h0(x) = 33.84 - 4.84*x2")

    def test_inactive_features_not_shown(self):
        m = make_model([([1.5, 0.0], 2.0)], [], ("a", "b"), mask=[True, False])
        text = format_model(m)
        assert "b" not in text.split("(active:")[1].split(")")[0]


class TestTables:
    def test_describe_text_sorted_by_test_avg(self):
        text = describe_table_text(describe(records()))
        lines = text.splitlines()
        order = [ln.split()[0] for ln in lines[3:]]
        assert order == ["alpha", "beta", "gamma"]
        assert "train_avg" in lines[1]
        beta_line = lines[4]
        assert " - " in beta_line  # absent train columns print as dashes

    def test_describe_csv_parses_back(self):
        text = describe_table_csv(describe(records()))
        rows = list(csv.reader(io.StringIO(text)))
        assert rows[0][:4] == ["method", "n_runs", "n_train_runs", "train_avg"]
        assert len(rows) == 4
        beta = [r for r in rows if r[0] == "beta"][0]
        assert beta[3] == ""  # no train mse
        assert float(beta[6]) > 0

    def test_deterministic_bytes(self):
        rows = describe(records())
        assert describe_table_text(rows) == describe_table_text(describe(records()))
        assert describe_table_csv(rows) == describe_table_csv(describe(records()))

    def test_rank_summary_mentions_everything(self):
        rm = build_rank_matrix(records())
        stat, p = friedman_test(rm)
        cd = nemenyi_cd(rm.n_methods, rm.n_runs, 0.05)
        text = rank_summary_text(rm, stat, p, cd, 0.05)
        assert "Friedman" in text
        assert "critical difference" in text
        assert "mean ranks" in text
        js = rank_summary_json(rm, stat, p, cd, 0.05)
        import json
        doc = json.loads(js)
        assert doc["friedman_statistic"] == stat
        assert doc["nemenyi_cd"] == cd
        assert set(doc["mean_ranks"]) == {"alpha", "beta", "gamma"}

    def test_ranks_csv_shape(self):
        rm = build_rank_matrix(records())
        rows = list(csv.reader(io.StringIO(ranks_csv(rm))))
        assert rows[0] == ["run_id", "alpha", "beta", "gamma"]
        assert len(rows) == 7
        for row in rows[1:]:
            assert sum(float(v) for v in row[1:]) == 6.0

    def test_posthoc_renderings(self):
        rm = build_rank_matrix(records())
        ph = posthoc_pairwise(rm)
        text = posthoc_text(ph)
        assert "alpha" in text and "significance" in text
        rows = list(csv.reader(io.StringIO(posthoc_csv(ph))))
        assert rows[0] == ["method", "alpha", "beta", "gamma"]
        assert float(rows[1][1]) == 1.0  # diagonal

    def test_first_place_renderings(self):
        rm = build_rank_matrix(records())
        table = first_place_table(rm)
        assert "firsts" in first_place_text(table)
        rows = list(csv.reader(io.StringIO(first_place_csv(table))))
        assert rows[0] == ["method", "firsts", "best_rank", "worst_rank"]

    def test_fit_report(self):
        m = make_model([([1.0], 0.5)], [], ("x",))
        text = fit_report_text(m, [(0, 0.25), (1, 0.3)], 0.25)
        assert "depth trajectory" in text
        assert "train MSE = 0.25" in text

    def test_selection_csv(self):
        text = selection_csv([("word", 97.0), ("other", 12.5)], "appearance_pct")
        rows = list(csv.reader(io.StringIO(text)))
        assert rows == [["feature", "appearance_pct"], ["word", "97.0"], ["other", "12.5"]]
