import numpy as np
import pytest

from cgboost import metrics
from cgboost.metrics import (MetricError, accuracy, precision_per_class,
                             rmse_per_target, avg_r2)


class TestAccuracy:
    def test_perfect(self):
        assert accuracy([0, 1, 2], [0, 1, 2]) == 100.0

    def test_disjoint(self):
        assert accuracy([0, 0, 0], [1, 1, 1]) == 0.0

    def test_two_of_three(self):
        assert accuracy([0, 1, 2], [0, 1, 0]) == pytest.approx(200 / 3)

    def test_relabeling_invariance(self):
        y_true = np.array([0, 1, 2, 1, 0])
        y_pred = np.array([0, 2, 2, 1, 1])
        perm = np.array([2, 0, 1])
        assert accuracy(perm[y_true], perm[y_pred]) == accuracy(y_true, y_pred)

    def test_length_mismatch(self):
        with pytest.raises(MetricError):
            accuracy([0, 1], [0])


class TestPrecision:
    def test_perfect(self):
        np.testing.assert_array_equal(
            precision_per_class([0, 1, 2], [0, 1, 2], 3), [1, 1, 1])

    def test_never_predicted_class_is_zero(self):
        p = precision_per_class([0, 1, 2], [0, 0, 0], 3)
        assert p[1] == 0.0 and p[2] == 0.0

    def test_hand_tally(self):
        p = precision_per_class([0, 0, 1], [0, 1, 1], 2)
        assert p[0] == pytest.approx(1.0)
        assert p[1] == pytest.approx(0.5)

    def test_bounded(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            t = rng.integers(0, 4, 30)
            p = rng.integers(0, 4, 30)
            vals = precision_per_class(t, p, 4)
            assert np.all((vals >= 0) & (vals <= 1))


class TestRmse:
    def test_zero_at_equality(self):
        Y = np.random.default_rng(1).standard_normal((6, 2))
        np.testing.assert_array_equal(rmse_per_target(Y, Y), [0.0, 0.0])

    def test_direct_formula(self):
        Y = np.array([[0.0], [0.0]])
        P = np.array([[3.0], [4.0]])
        assert rmse_per_target(Y, P)[0] == pytest.approx(np.sqrt(12.5))

    def test_constant_offset(self):
        Y = np.random.default_rng(2).standard_normal((10, 2))
        P = Y.copy()
        P[:, 1] += 1.75
        np.testing.assert_allclose(rmse_per_target(Y, P), [0.0, 1.75])

    def test_translation_equivariance(self):
        rng = np.random.default_rng(3)
        Y = rng.standard_normal((8, 2))
        P = rng.standard_normal((8, 2))
        np.testing.assert_allclose(rmse_per_target(Y + 3.0, P + 3.0),
                                   rmse_per_target(Y, P))


class TestAvgR2:
    def test_perfect_is_one(self):
        Y = np.random.default_rng(4).standard_normal((9, 3))
        assert avg_r2(Y, Y) == pytest.approx(1.0)

    def test_mean_prediction_is_zero(self):
        Y = np.random.default_rng(5).standard_normal((9, 2))
        P = np.tile(Y.mean(axis=0), (9, 1))
        assert avg_r2(Y, P) == pytest.approx(0.0, abs=1e-12)

    def test_worse_than_mean_is_negative(self):
        Y = np.array([[0.0], [1.0], [2.0]])
        P = np.array([[10.0], [-10.0], [10.0]])
        assert avg_r2(Y, P) < 0.0

    def test_constant_target_rejected_by_name(self):
        Y = np.column_stack([np.arange(5.0), np.full(5, 2.0)])
        with pytest.raises(MetricError, match="target 1"):
            avg_r2(Y, Y + 0.1)


class TestReports:
    def test_classification_report_format(self):
        rep = metrics.evaluate_classification([0, 1, 1], [0, 1, 0],
                                              ["a", "b"])
        text = rep.format()
        assert "accuracy:" in text and "precision[a]" in text
        assert rep.n_test == 3

    def test_regression_report_format(self):
        Y = np.array([[1.0, 2.0], [3.0, 4.0], [5.0, 0.0]])
        rep = metrics.evaluate_regression(Y, Y * 0.9, ["h", "c"])
        text = rep.format()
        assert "rmse[h]" in text and "avg_r2:" in text
