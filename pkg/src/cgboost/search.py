"""Cross-validated grid search and the timing benchmark harness."""

from __future__ import annotations

import itertools
import statistics
import time
from dataclasses import dataclass, replace, field

import numpy as np

from . import boosting, metrics
from .boosting import TrainConfig, BoostedModel, CONDENSED, PER_CLASS
from .data import Dataset, CLASSIFICATION, make_folds


@dataclass(frozen=True)
class GridSpec:
    max_depth: tuple = (-1,)
    learning_rate: tuple = (0.1,)
    max_features: tuple = ("all",)
    subsample: tuple = (1.0,)

    def points(self):
        """Cartesian product in deterministic sorted order."""
        axes = (sorted(self.max_depth), sorted(self.learning_rate),
                sorted(self.max_features), sorted(self.subsample))
        yield from itertools.product(*axes)

    def __len__(self):
        return (len(self.max_depth) * len(self.learning_rate)
                * len(self.max_features) * len(self.subsample))


# Table-style full grid and the reduced preset used for desk-scale runs.
GRID_FULL = GridSpec(max_depth=(-1, 2, 5, 10, 20),
                     learning_rate=(0.025, 0.05, 0.1, 0.5, 1.0),
                     max_features=("sqrt", "all"),
                     subsample=(0.75, 0.5, 1.0))
GRID_LITE = GridSpec(max_depth=(2, 5, 10),
                     learning_rate=(0.1, 0.5),
                     max_features=("all",),
                     subsample=(0.75, 1.0))

PRESETS = {"full": GRID_FULL, "lite": GRID_LITE}


@dataclass
class GridResult:
    rows: list            # (config, mean score or None, per-fold scores or error)
    best_config: TrainConfig
    best_score: float
    model: BoostedModel   # winner retrained on the full training set


def _fold_score(model: BoostedModel, ds_val: Dataset) -> float:
    pred = boosting.predict(model, ds_val.features)
    if ds_val.task == CLASSIFICATION:
        return metrics.accuracy(ds_val.labels, pred)
    return metrics.avg_r2(ds_val.targets, pred)


def grid_search(ds: Dataset, grid: GridSpec, base: TrainConfig,
                folds: int = 2, seed: int = 0) -> GridResult:
    """Pick the grid point with the best mean validation score.

    Classification scores by accuracy, regression by average R^2.  Ties
    break by grid order; a grid point whose training fails is recorded
    and skipped.
    """
    assign = make_folds(ds.n_rows, folds, seed)
    splits = []
    for f in range(folds):
        val = np.flatnonzero(assign == f)
        trn = np.flatnonzero(assign != f)
        splits.append((ds.take(trn), ds.take(val)))

    rows = []
    best_i, best_score = None, -np.inf
    for i, (depth, lr, feats, sub) in enumerate(grid.points()):
        cfg = replace(base, max_depth=depth, learning_rate=lr,
                      max_features=feats, subsample=sub)
        try:
            scores = [_fold_score(boosting.fit(trn, cfg), val)
                      for trn, val in splits]
        except (ValueError, FloatingPointError) as e:
            rows.append((cfg, None, str(e)))
            continue
        mean = float(np.mean(scores))
        rows.append((cfg, mean, scores))
        if mean > best_score:
            best_i, best_score = i, mean

    if best_i is None:
        raise ValueError("every grid point failed to train")
    best_cfg = rows[best_i][0]
    return GridResult(rows, best_cfg, best_score, boosting.fit(ds, best_cfg))


@dataclass
class BenchmarkReport:
    mode: str
    dataset_id: str
    training_seconds: float
    prediction_seconds_per_1e5: float
    config: dict = field(default_factory=dict)


def _time_prediction(model: BoostedModel, X: np.ndarray) -> float:
    """Wall time to predict, normalized to 1e5 rows (tiling small inputs)."""
    reps = max(1, -(-100_000 // X.shape[0]))
    X_big = np.tile(X, (reps, 1))
    t0 = time.perf_counter()
    boosting.predict(model, X_big)
    elapsed = time.perf_counter() - t0
    return elapsed * (100_000 / X_big.shape[0])


def run_benchmark(ds: Dataset, config: TrainConfig, repeat: int = 1,
                  dataset_id: str = "dataset",
                  modes=(CONDENSED, PER_CLASS)) -> list[BenchmarkReport]:
    """Train each mode with the given config; report median times over repeats."""
    reports = []
    for mode in modes:
        cfg = replace(config, mode=mode)
        train_times, pred_times = [], []
        for _ in range(max(1, repeat)):
            t0 = time.perf_counter()
            model = boosting.fit(ds, cfg)
            train_times.append(time.perf_counter() - t0)
            pred_times.append(_time_prediction(model, ds.features))
        reports.append(BenchmarkReport(
            mode=mode, dataset_id=dataset_id,
            training_seconds=statistics.median(train_times),
            prediction_seconds_per_1e5=statistics.median(pred_times),
            config=cfg.__dict__.copy(),
        ))
    return reports
