"""Condensed gradient boosting: one multi-output tree per iteration."""

from .data import (Dataset, DataError, load_csv, save_csv, one_hot,
                   train_test_split, make_folds, make_blobs, make_waveform,
                   CLASSIFICATION, REGRESSION)
from .tree import (MultiOutputTree, TreeConfig, SplitCandidate, TreeError,
                   node_quality, best_split, fit_tree, apply_tree,
                   predict_tree, predict_one, set_leaf_values, dump_tree)
from .losses import (SQUARED, MULTINOMIAL, LossError, softmax, softmax_row,
                     loss_value, negative_gradient, leaf_newton_update,
                     init_scores)
from .boosting import (TrainConfig as BoostConfig, TrainConfig, BoostedModel,
                       ConfigError, fit, decision_function, staged_scores,
                       predict, predict_proba, training_loss,
                       CONDENSED, PER_CLASS)
from .metrics import (EvalReport, MetricError, accuracy, precision_per_class,
                      rmse_per_target, avg_r2, evaluate_classification,
                      evaluate_regression)
from .model_io import save_model, load_model, ModelIOError
from .search import (GridSpec, GridResult, BenchmarkReport, grid_search,
                     run_benchmark, GRID_FULL, GRID_LITE)

__version__ = "0.1.0"
