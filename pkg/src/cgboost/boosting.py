"""Condensed gradient boosting and the one-tree-per-class baseline.

Condensed mode trains a single multi-output tree per iteration on the
full residual matrix; per-class mode trains one scalar tree per output.
Stored leaf values are unscaled; shrinkage is applied when stage
contributions are accumulated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict

import numpy as np

from . import losses
from .data import Dataset, CLASSIFICATION, REGRESSION
from .tree import (MultiOutputTree, TreeConfig, fit_tree, apply_tree,
                   predict_tree, set_leaf_values)

CONDENSED = "condensed"
PER_CLASS = "per_class"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class TrainConfig:
    n_stages: int = 100
    learning_rate: float = 0.1
    max_depth: int = -1
    subsample: float = 1.0
    max_features: str = "all"
    min_samples_split: int = 2
    min_samples_leaf: int = 1
    seed: int = 0
    mode: str = CONDENSED
    loss: str | None = None      # default chosen from the task

    def validate(self):
        if self.n_stages < 1:
            raise ConfigError("n_stages must be >= 1")
        if not 0.0 < self.learning_rate <= 1.0:
            raise ConfigError("learning_rate must be in (0, 1]")
        if not 0.0 < self.subsample <= 1.0:
            raise ConfigError("subsample must be in (0, 1]")
        if self.mode not in (CONDENSED, PER_CLASS):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.loss is not None and self.loss not in (losses.SQUARED,
                                                       losses.MULTINOMIAL):
            raise ConfigError(f"unknown loss {self.loss!r}")
        self.tree_config().validate()

    def tree_config(self) -> TreeConfig:
        return TreeConfig(self.max_depth, self.max_features,
                          self.min_samples_split, self.min_samples_leaf)

    def resolved_loss(self, task: str) -> str:
        if self.loss is not None:
            return self.loss
        return losses.MULTINOMIAL if task == CLASSIFICATION else losses.SQUARED


@dataclass
class BoostedModel:
    task: str
    mode: str
    loss: str
    n_outputs: int
    n_features: int
    init: np.ndarray                       # (K,)
    learning_rate: float
    stages: list[list[MultiOutputTree]]    # 1 tree per stage (condensed) or K
    class_names: list[str] = field(default_factory=list)
    target_names: list[str] = field(default_factory=list)
    config: dict = field(default_factory=dict)

    @property
    def n_stages(self) -> int:
        return len(self.stages)

    @property
    def n_trees(self) -> int:
        return sum(len(s) for s in self.stages)


def _stage_output(stage: list[MultiOutputTree], X: np.ndarray) -> np.ndarray:
    """Unscaled K-column contribution of one stage."""
    if len(stage) == 1:
        return predict_tree(stage[0], X)
    return np.column_stack([predict_tree(t, X)[:, 0] for t in stage])


def _newton_leaves(tree: MultiOutputTree, X_sub, Y_sub, R_sub) -> MultiOutputTree:
    """Replace leaf means by the per-leaf Newton step for the log loss."""
    leaf_of = apply_tree(tree, X_sub)
    new_values = {}
    for leaf in tree.leaf_ids:
        rows = leaf_of == leaf
        new_values[leaf] = losses.leaf_newton_update(Y_sub[rows], R_sub[rows])
    return set_leaf_values(tree, new_values)


def fit(ds: Dataset, config: TrainConfig) -> BoostedModel:
    """Train a boosted ensemble on the dataset.

    Each stage draws its own subsample (without replacement) from a seed
    stream spawned per stage, fits trees to the pseudo-residuals of the
    subsample, applies the Newton leaf update for the log loss, and
    accumulates shrunken outputs into the scores of all rows.
    """
    config.validate()
    loss = config.resolved_loss(ds.task)
    if ds.task == CLASSIFICATION and len(np.unique(ds.labels)) < 2:
        raise ConfigError("training data contains a single class")
    if loss == losses.MULTINOMIAL and ds.task != CLASSIFICATION:
        raise ConfigError("multinomial loss requires a classification dataset")

    X = ds.features
    Y = ds.targets
    n, k = Y.shape
    f0 = losses.init_scores(loss, Y)
    F = np.tile(f0, (n, 1))
    tree_cfg = config.tree_config()
    n_sub = max(1, math.ceil(config.subsample * n))
    streams = np.random.SeedSequence(config.seed).spawn(config.n_stages)

    stages: list[list[MultiOutputTree]] = []
    for m in range(config.n_stages):
        rng = np.random.default_rng(streams[m])
        if n_sub < n:
            rows = np.sort(rng.choice(n, size=n_sub, replace=False))
        else:
            rows = np.arange(n)
        R = losses.negative_gradient(loss, Y[rows], F[rows])

        if config.mode == CONDENSED:
            tree = fit_tree(X[rows], R, np.arange(rows.size), tree_cfg, rng)
            if loss == losses.MULTINOMIAL:
                tree = _newton_leaves(tree, X[rows], Y[rows], R)
            stage = [tree]
        else:
            stage = []
            for j in range(k):
                tree = fit_tree(X[rows], R[:, j:j + 1], np.arange(rows.size),
                                tree_cfg, rng)
                if loss == losses.MULTINOMIAL:
                    tree = _newton_leaves(tree, X[rows], Y[rows][:, j:j + 1],
                                          R[:, j:j + 1])
                stage.append(tree)

        F += config.learning_rate * _stage_output(stage, X)
        stages.append(stage)

    return BoostedModel(
        task=ds.task, mode=config.mode, loss=loss, n_outputs=k,
        n_features=ds.n_features, init=f0,
        learning_rate=config.learning_rate, stages=stages,
        class_names=list(ds.class_names), target_names=list(ds.target_names),
        config=asdict(config),
    )


def _check_width(model: BoostedModel, X: np.ndarray) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != model.n_features:
        raise ConfigError(
            f"feature width {X.shape[1]} does not match model ({model.n_features})"
        )
    return X


def decision_function(model: BoostedModel, X, up_to_stage: int | None = None
                      ) -> np.ndarray:
    """Raw scores F0 + lr * sum of the first ``up_to_stage`` stages."""
    X = _check_width(model, X)
    if up_to_stage is None:
        up_to_stage = model.n_stages
    if not 0 <= up_to_stage <= model.n_stages:
        raise ConfigError(f"stage {up_to_stage} out of range")
    F = np.tile(model.init, (X.shape[0], 1))
    for stage in model.stages[:up_to_stage]:
        F += model.learning_rate * _stage_output(stage, X)
    return F


def staged_scores(model: BoostedModel, X):
    """Yield the score matrix after each stage, computed incrementally."""
    X = _check_width(model, X)
    F = np.tile(model.init, (X.shape[0], 1))
    for stage in model.stages:
        F += model.learning_rate * _stage_output(stage, X)
        yield F.copy()


def predict_proba(model: BoostedModel, X, up_to_stage=None) -> np.ndarray:
    if model.task != CLASSIFICATION:
        raise ConfigError("predict_proba requires a classification model")
    return losses.softmax(decision_function(model, X, up_to_stage))


def predict(model: BoostedModel, X, up_to_stage=None) -> np.ndarray:
    """Class labels (argmax, ties to the lowest index) or raw regression scores."""
    F = decision_function(model, X, up_to_stage)
    if model.task == CLASSIFICATION:
        return np.argmax(F, axis=1)
    return F


def training_loss(model: BoostedModel, ds: Dataset) -> float:
    return losses.loss_value(model.loss, ds.targets,
                             decision_function(model, ds.features))
