import numpy as np
import pytest

from cgboost import boosting, search
from cgboost.boosting import TrainConfig, CONDENSED, PER_CLASS
from cgboost.data import Dataset, make_blobs, make_folds
from cgboost.search import GridSpec, grid_search, run_benchmark


BASE = TrainConfig(n_stages=10, max_depth=3, seed=0)


class TestGridSpec:
    def test_full_grid_enumerates_150_points(self):
        assert len(search.GRID_FULL) == 150
        assert len(list(search.GRID_FULL.points())) == 150

    def test_lite_grid_size(self):
        assert len(search.GRID_LITE) == 12

    def test_points_in_sorted_order(self):
        g = GridSpec(max_depth=(5, 2), learning_rate=(0.5, 0.1))
        pts = list(g.points())
        assert pts[0][:2] == (2, 0.1)
        assert pts == sorted(pts)


class TestGridSearch:
    def test_singleton_grid_returns_that_config(self):
        ds = make_blobs(80, 3, 2, seed=1)
        g = GridSpec(max_depth=(3,), learning_rate=(0.2,))
        res = grid_search(ds, g, BASE, folds=2, seed=0)
        assert res.best_config.max_depth == 3
        assert res.best_config.learning_rate == 0.2
        assert res.model.n_stages == 10

    def test_deterministic_winner(self):
        ds = make_blobs(100, 3, 2, seed=2)
        g = GridSpec(max_depth=(1, 3), learning_rate=(0.1, 0.5))
        a = grid_search(ds, g, BASE, folds=2, seed=7)
        b = grid_search(ds, g, BASE, folds=2, seed=7)
        assert a.best_config == b.best_config
        assert a.best_score == b.best_score

    def test_two_folds_cover_every_row_once(self):
        assign = make_folds(31, 2, seed=3)
        assert np.sort(np.concatenate([np.flatnonzero(assign == f)
                                       for f in range(2)])).tolist() \
            == list(range(31))

    def test_failed_point_recorded_and_skipped(self, monkeypatch):
        ds = make_blobs(60, 3, 2, seed=4)
        real_fit = boosting.fit

        def flaky_fit(d, cfg):
            if cfg.max_depth == 1:
                raise ValueError("boom")
            return real_fit(d, cfg)

        monkeypatch.setattr(search.boosting, "fit", flaky_fit)
        g = GridSpec(max_depth=(1, 3))
        res = grid_search(ds, g, BASE, folds=2, seed=0)
        failed = [r for r in res.rows if r[1] is None]
        assert len(failed) == 1 and failed[0][0].max_depth == 1
        assert res.best_config.max_depth == 3

    def test_regression_scores_by_avg_r2(self):
        rng = np.random.default_rng(5)
        X = rng.standard_normal((80, 3))
        ds = Dataset(X, "regression", targets=X @ rng.standard_normal((3, 2)))
        res = grid_search(ds, GridSpec(max_depth=(3,)), BASE, folds=2, seed=0)
        assert res.best_score <= 1.0


class TestBenchmark:
    def test_reports_both_modes_with_positive_times(self):
        ds = make_blobs(120, 3, 2, seed=6)
        reports = run_benchmark(ds, TrainConfig(n_stages=5, max_depth=3),
                                repeat=1, dataset_id="blobs")
        assert [r.mode for r in reports] == [CONDENSED, PER_CLASS]
        for r in reports:
            assert r.training_seconds > 0
            assert r.prediction_seconds_per_1e5 > 0
            assert r.dataset_id == "blobs"

    def test_repeat_uses_median(self, monkeypatch):
        times = iter([10.0, 11.0, 100.0, 112.0, 1000.0, 1003.0,
                      10.0, 11.0, 100.0, 112.0, 1000.0, 1003.0])
        monkeypatch.setattr(search.time, "perf_counter", lambda: next(times))
        monkeypatch.setattr(search.boosting, "fit", lambda ds, cfg: "model")
        monkeypatch.setattr(search, "_time_prediction", lambda m, X: 0.5)
        ds = make_blobs(30, 2, 2, seed=7)
        reports = run_benchmark(ds, TrainConfig(n_stages=1), repeat=3)
        # per-mode training times are 1, 12, 3 -> median 3
        assert reports[0].training_seconds == 3.0
