import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats as sps

from cfreg import (Dataset, RankMatrix, RunRecord, SchemaError, build_rank_matrix,
                   describe, first_place_table, friedman_test, load_run_records,
                   nemenyi_cd, out_of_domain_split, posthoc_pairwise, rank_methods,
                   save_run_records, split_80_20)
from oracles import friedman_scalar


def rec(run, method, test, train=None):
    return RunRecord(run_id=run, method=method, train_mse=train, test_mse=test)


def year_data(years, seed=0):
    rng = np.random.default_rng(seed)
    n = len(years)
    X = rng.normal(size=(n, 2))
    return Dataset(tuple(f"p{i}" for i in range(n)), ("w1", "w2"), X,
                   np.array(years, dtype=float))


class TestSplits:
    def test_sizes_181(self):
        data = year_data(range(1585, 1585 + 181))
        train, test = split_80_20(data, rng_seed=4)
        assert train.n_samples == 145
        assert test.n_samples == 36

    def test_sizes_5(self):
        data = year_data([1, 2, 3, 4, 5])
        train, test = split_80_20(data, rng_seed=0)
        assert (train.n_samples, test.n_samples) == (4, 1)

    def test_partition(self):
        data = year_data(range(100))
        train, test = split_80_20(data, rng_seed=7)
        ids = set(train.sample_ids) | set(test.sample_ids)
        assert len(ids) == 100
        assert not set(train.sample_ids) & set(test.sample_ids)

    def test_deterministic_and_seed_sensitive(self):
        data = year_data(range(50))
        a1, _ = split_80_20(data, rng_seed=1)
        a2, _ = split_80_20(data, rng_seed=1)
        b1, _ = split_80_20(data, rng_seed=2)
        assert a1.sample_ids == a2.sample_ids
        assert a1.sample_ids != b1.sample_ids

    def test_tiny_split_keeps_test_nonempty(self):
        data = year_data([1, 2])
        train, test = split_80_20(data)
        assert train.n_samples == 1
        assert test.n_samples == 1


class TestOutOfDomainSplit:
    def test_test_side_is_every_outside_sample(self):
        years = list(range(1585, 1611))
        data = year_data(years)
        train, test = out_of_domain_split(data, 1590, 1605, train_frac=0.8, rng_seed=3)
        assert np.all((train.y >= 1590) & (train.y <= 1605))
        assert np.all((test.y < 1590) | (test.y > 1605))
        outside = sum(1 for v in years if v < 1590 or v > 1605)
        assert test.n_samples == outside

    def test_train_fraction(self):
        data = year_data(range(100))
        train, _ = out_of_domain_split(data, 10, 59, train_frac=0.8, rng_seed=0)
        assert train.n_samples == 40  # 80% of the 50 in range

    def test_degenerate_ranges_rejected(self):
        data = year_data(range(10))
        with pytest.raises(ValueError):
            out_of_domain_split(data, -100, 100)  # nothing outside
        with pytest.raises(ValueError):
            out_of_domain_split(data, 50, 60)  # nothing inside
        with pytest.raises(ValueError):
            out_of_domain_split(data, 5, 2)


class TestDescribe:
    def test_hand_values(self):
        records = [rec(0, "m", 1.0, train=0.5), rec(1, "m", 3.0, train=0.7),
                   rec(2, "m", 2.0)]
        [row] = describe(records)
        assert row.n_runs == 3
        assert row.n_train_runs == 2
        assert row.test_avg == pytest.approx(2.0)
        assert row.test_med == pytest.approx(2.0)
        assert row.test_std == pytest.approx(1.0)  # sample std of 1,3,2
        assert row.train_avg == pytest.approx(0.6)

    def test_single_run_std_zero_and_flagged(self):
        [row] = describe([rec(0, "m", 4.0)])
        assert row.test_std == 0.0
        assert row.n_runs == 1

    def test_method_without_train(self):
        [row] = describe([rec(0, "m", 1.0), rec(1, "m", 2.0)])
        assert row.train_avg is None
        assert row.train_med is None
        assert row.train_std is None


class TestRanks:
    def test_tie_fixture(self):
        records = [rec(0, "a", 5.0), rec(0, "b", 7.0), rec(0, "c", 7.0), rec(0, "d", 9.0)]
        ranks = rank_methods(records)
        assert ranks == {"a": 1.0, "b": 2.5, "c": 2.5, "d": 4.0}

    def test_rank_one_is_lowest_error(self):
        ranks = rank_methods([rec(0, "good", 0.1), rec(0, "bad", 9.0)])
        assert ranks["good"] == 1.0
        assert ranks["bad"] == 2.0

    def test_duplicate_method_rejected(self):
        with pytest.raises(ValueError):
            rank_methods([rec(0, "a", 1.0), rec(0, "a", 2.0)])

    def test_mixed_runs_rejected(self):
        with pytest.raises(ValueError):
            rank_methods([rec(0, "a", 1.0), rec(1, "b", 2.0)])

    @given(st.lists(st.floats(0.0, 100.0), min_size=2, max_size=8))
    def test_rank_row_sums(self, values):
        records = [rec(0, f"m{i}", v) for i, v in enumerate(values)]
        ranks = rank_methods(records)
        k = len(values)
        assert sum(ranks.values()) == pytest.approx(k * (k + 1) / 2)
        assert all(1.0 <= r <= k for r in ranks.values())

    def test_build_rank_matrix(self):
        records = [rec(0, "a", 1.0), rec(0, "b", 2.0),
                   rec(1, "a", 5.0), rec(1, "b", 3.0)]
        rm = build_rank_matrix(records)
        assert rm.methods == ("a", "b")
        assert rm.run_ids == (0, 1)
        np.testing.assert_array_equal(rm.ranks, [[1.0, 2.0], [2.0, 1.0]])
        assert rm.mean_ranks() == {"a": 1.5, "b": 1.5}

    def test_incomplete_run_rejected(self):
        records = [rec(0, "a", 1.0), rec(0, "b", 2.0), rec(1, "a", 5.0)]
        with pytest.raises(ValueError, match="run 1"):
            build_rank_matrix(records)

    def test_matrix_validates_row_sums(self):
        with pytest.raises(ValueError):
            RankMatrix(("a", "b"), np.array([[1.0, 1.5]]), (0,))


class TestFriedman:
    def test_always_ordered_fixture(self):
        records = []
        for run in range(10):
            records += [rec(run, "a", 1.0 + run), rec(run, "b", 2.0 + run),
                        rec(run, "c", 3.0 + run)]
        stat, p = friedman_test(build_rank_matrix(records))
        assert stat == pytest.approx(20.0, rel=1e-12)
        assert p == pytest.approx(4.539992976248486e-05, rel=1e-7)

    def test_matches_scipy_on_tie_free_data(self):
        rng = np.random.default_rng(0)
        errs = rng.normal(size=(12, 4)) ** 2
        records = [rec(i, f"m{j}", errs[i, j]) for i in range(12) for j in range(4)]
        stat, p = friedman_test(build_rank_matrix(records))
        ref = sps.friedmanchisquare(*[errs[:, j] for j in range(4)])
        assert stat == pytest.approx(ref.statistic, rel=1e-12)
        assert p == pytest.approx(ref.pvalue, rel=1e-12)

    def test_matches_scalar_oracle_with_ties(self):
        rows = [[1.0, 2.5, 2.5, 4.0], [2.0, 2.0, 2.0, 4.0], [1.0, 2.0, 3.0, 4.0]]
        rm = RankMatrix(("a", "b", "c", "d"), np.array(rows), (0, 1, 2))
        stat, _ = friedman_test(rm)
        assert stat == pytest.approx(friedman_scalar(rows), rel=1e-12)

    def test_all_tied_degenerates(self):
        rows = np.full((5, 3), 2.0)
        rm = RankMatrix(("a", "b", "c"), rows, tuple(range(5)))
        assert friedman_test(rm) == (0.0, 1.0)

    def test_needs_two_runs(self):
        rm = RankMatrix(("a", "b"), np.array([[1.0, 2.0]]), (0,))
        with pytest.raises(ValueError):
            friedman_test(rm)


class TestNemenyi:
    def test_eleven_methods_hundred_runs(self):
        assert nemenyi_cd(11, 100, alpha=0.10) == pytest.approx(1.39669, abs=2e-4)
        assert nemenyi_cd(11, 100, alpha=0.05) == pytest.approx(1.50968, abs=2e-4)

    def test_matches_studentized_range_everywhere(self):
        for alpha in (0.05, 0.10):
            for k in range(2, 21):
                q = sps.studentized_range.ppf(1 - alpha, k, np.inf) / math.sqrt(2)
                expected = q * math.sqrt(k * (k + 1) / (6.0 * 50))
                assert nemenyi_cd(k, 50, alpha) == pytest.approx(expected, rel=2e-4)

    def test_quadrupling_n_halves_cd_exactly(self):
        for k in (3, 7, 11):
            for n in (10, 25, 100):
                assert nemenyi_cd(k, n) == 2.0 * nemenyi_cd(k, 4 * n)

    def test_rejects_unsupported_inputs(self):
        with pytest.raises(ValueError):
            nemenyi_cd(1, 10)
        with pytest.raises(ValueError):
            nemenyi_cd(21, 10)
        with pytest.raises(ValueError):
            nemenyi_cd(5, 0)
        with pytest.raises(ValueError):
            nemenyi_cd(5, 10, alpha=0.02)


class TestPosthoc:
    def _matrix(self, rows, k):
        names = tuple(f"m{j}" for j in range(k))
        return RankMatrix(names, np.array(rows, dtype=float), tuple(range(len(rows))))

    def test_two_methods_match_normal_oracle(self):
        # for k = 2 the studentized range reduces to a folded normal
        rows = [[1.0, 2.0]] * 16
        rm = self._matrix(rows, 2)
        res = posthoc_pairwise(rm)
        z = 1.0 / math.sqrt(2 * 3 / (6.0 * 16))
        expected = 2.0 * sps.norm.sf(z)
        assert res.p_values[0, 1] == pytest.approx(expected, rel=1e-9)

    def test_identical_methods_not_significant(self):
        rows = [[1.5, 1.5, 3.0], [1.5, 1.5, 3.0]] * 3
        res = posthoc_pairwise(self._matrix(rows, 3))
        assert res.p_values[0, 1] == pytest.approx(1.0)
        assert res.band("m0", "m1") == "NS"

    def test_bands_and_symmetry(self):
        rows = [[1.0, 2.0, 3.0]] * 40
        res = posthoc_pairwise(self._matrix(rows, 3))
        p = res.p_values
        np.testing.assert_array_equal(p, p.T)
        assert np.all(np.diag(p) == 1.0)
        assert res.band("m0", "m2") == "<0.001"
        assert res.significance[0][2] == res.significance[2][0]

    def test_gap_at_cd_threshold_has_p_alpha(self):
        # mean-rank gap exactly at the critical difference gives p = alpha
        k, n, alpha = 4, 25, 0.05
        cd = nemenyi_cd(k, n, alpha)
        se = math.sqrt(k * (k + 1) / (6.0 * n))
        z = cd / se
        p = float(sps.studentized_range.sf(z * math.sqrt(2), k, np.inf))
        assert p == pytest.approx(alpha, rel=2e-4)


class TestFirstPlace:
    def test_ties_credit_every_winner(self):
        rows = [[1.5, 1.5, 3.0], [1.0, 2.0, 3.0]]
        rm = RankMatrix(("a", "b", "c"), np.array(rows), (0, 1))
        table = first_place_table(rm)
        by_method = {r.method: r for r in table}
        assert by_method["a"].firsts == 2
        assert by_method["b"].firsts == 1
        assert by_method["c"].firsts == 0
        assert by_method["c"].best_rank == 3.0
        assert table[0].method == "a"


class TestRunRecordIO:
    def test_round_trip(self, tmp_path):
        records = [rec(0, "a", 1.25, train=0.5), rec(0, "b", 2.5),
                   rec(1, "a", 0.125, train=0.25), rec(1, "b", 1.0 / 3.0)]
        path = tmp_path / "records.csv"
        save_run_records(records, path)
        assert load_run_records(path) == records

    def test_header(self, tmp_path):
        path = tmp_path / "records.csv"
        save_run_records([rec(0, "a", 1.0)], path)
        assert path.read_text().splitlines()[0] == "run_id,method,train_mse,test_mse"

    def test_bad_header_rejected(self, tmp_path):
        path = tmp_path / "r.csv"
        path.write_text("run,method,train,test\n")
        with pytest.raises(SchemaError, match="line 1"):
            load_run_records(path)

    def test_bad_value_names_line(self, tmp_path):
        path = tmp_path / "r.csv"
        path.write_text("run_id,method,train_mse,test_mse\n0,a,,1.0\n1,b,,oops\n")
        with pytest.raises(SchemaError, match="line 3"):
            load_run_records(path)

    def test_negative_mse_rejected(self, tmp_path):
        path = tmp_path / "r.csv"
        path.write_text("run_id,method,train_mse,test_mse\n0,a,,-1.0\n")
        with pytest.raises(SchemaError, match="line 2"):
            load_run_records(path)


class TestRunRecordValidation:
    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            RunRecord(run_id=0, method="m", train_mse=None, test_mse=-0.5)
        with pytest.raises(ValueError):
            RunRecord(run_id=-1, method="m", train_mse=None, test_mse=0.5)
        with pytest.raises(ValueError):
            RunRecord(run_id=0, method="", train_mse=None, test_mse=0.5)
