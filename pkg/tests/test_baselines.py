import numpy as np
import pytest

from cfreg import (Dataset, SchemaError, export_predictions, import_predictions,
                   ols_fit, run_records_from_predictions)


def make_data(X, y):
    X = np.asarray(X, dtype=float)
    return Dataset(tuple(f"s{i}" for i in range(X.shape[0])),
                   tuple(f"f{j}" for j in range(X.shape[1])), X, y)


PRED_CSV = """run_id,sample_id,prediction,split
0,s0,1.5,train
0,s1,2.5,train
0,s2,3.25,test
1,s0,1.0,test
1,s1,2.0,test
"""


class TestOlsFit:
    def test_matches_normal_equations(self):
        rng = np.random.default_rng(0)
        X = rng.normal(size=(40, 3))
        y = X @ np.array([2.0, -1.0, 0.5]) + 4.0 + rng.normal(size=40) * 0.01
        data = make_data(X, y)
        fitted = ols_fit(data)
        A = np.hstack([X, np.ones((40, 1))])
        expected = np.linalg.solve(A.T @ A, A.T @ y)
        np.testing.assert_allclose(fitted.coeffs, expected[:3], rtol=1e-9)
        assert fitted.intercept == pytest.approx(expected[3], rel=1e-9)
        assert not fitted.ridged

    def test_exact_on_noiseless_data(self):
        X = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [2.0, -1.0]])
        y = 3.0 * X[:, 0] - 2.0 * X[:, 1] + 0.5
        fitted = ols_fit(make_data(X, y))
        np.testing.assert_allclose(fitted.coeffs, [3.0, -2.0], atol=1e-10)
        assert fitted.intercept == pytest.approx(0.5, abs=1e-10)

    def test_rank_deficient_falls_back_to_ridge(self):
        x = np.arange(5.0)
        X = np.column_stack([x, 2 * x])  # exactly collinear
        y = x * 3.0
        fitted = ols_fit(make_data(X, y))
        assert fitted.ridged
        pred = fitted.predict(X)
        np.testing.assert_allclose(pred, y, atol=1e-4)

    def test_more_features_than_samples_is_flagged(self):
        rng = np.random.default_rng(1)
        data = make_data(rng.normal(size=(4, 10)), rng.normal(size=4))
        assert ols_fit(data).ridged


class TestImportExport:
    def test_import_shape(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text(PRED_CSV)
        imp = import_predictions(path, "ext-a")
        assert imp.method == "ext-a"
        assert imp.run_ids == (0, 1)
        runs = imp.by_run()
        assert runs[0]["train"] == {"s0": 1.5, "s1": 2.5}
        assert runs[1]["test"] == {"s0": 1.0, "s1": 2.0}

    def test_round_trip_bit_exact(self, tmp_path):
        src = tmp_path / "in.csv"
        src.write_text(PRED_CSV)
        imp = import_predictions(src, "m")
        out = tmp_path / "out.csv"
        export_predictions(imp, out)
        assert import_predictions(out, "m") == imp
        # shortest round-trip floats survive odd values too
        imp2 = import_predictions(src, "m")
        assert imp2.rows == imp.rows

    def test_header_error(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("run,sample,pred,split\n")
        with pytest.raises(SchemaError, match="line 1"):
            import_predictions(path, "m")

    def test_bad_split_names_line(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("run_id,sample_id,prediction,split\n0,s0,1.0,validate\n")
        with pytest.raises(SchemaError, match="line 2.*split"):
            import_predictions(path, "m")

    def test_bad_run_id_names_line(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("run_id,sample_id,prediction,split\nx,s0,1.0,test\n")
        with pytest.raises(SchemaError, match="line 2"):
            import_predictions(path, "m")

    def test_duplicate_row_rejected(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text(
            "run_id,sample_id,prediction,split\n0,s0,1.0,test\n0,s0,2.0,test\n")
        with pytest.raises(SchemaError, match="duplicate"):
            import_predictions(path, "m")

    def test_non_finite_prediction_rejected(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("run_id,sample_id,prediction,split\n0,s0,nan,test\n")
        with pytest.raises(SchemaError, match="finite"):
            import_predictions(path, "m")


class TestRunRecordsFromPredictions:
    def _data(self):
        X = np.zeros((3, 1))
        y = np.array([1.0, 2.0, 3.0])
        return make_data(X, y)

    def test_mse_hand_value(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text(PRED_CSV)
        imp = import_predictions(path, "ext-a")
        records = run_records_from_predictions(imp, self._data())
        assert [r.run_id for r in records] == [0, 1]
        r0 = records[0]
        # train: (1.5-1)^2 and (2.5-2)^2; test: (3.25-3)^2
        assert r0.train_mse == pytest.approx((0.25 + 0.25) / 2)
        assert r0.test_mse == pytest.approx(0.0625)
        r1 = records[1]
        assert r1.train_mse is None
        assert r1.test_mse == pytest.approx(0.0)
        assert all(r.method == "ext-a" for r in records)

    def test_missing_test_split_rejected(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("run_id,sample_id,prediction,split\n0,s0,1.0,train\n")
        imp = import_predictions(path, "m")
        with pytest.raises(SchemaError, match="test"):
            run_records_from_predictions(imp, self._data())

    def test_unknown_sample_named(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("run_id,sample_id,prediction,split\n0,ghost,1.0,test\n")
        imp = import_predictions(path, "m")
        with pytest.raises(SchemaError, match="ghost"):
            run_records_from_predictions(imp, self._data())
