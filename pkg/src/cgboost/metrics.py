"""Evaluation measures: accuracy, per-class precision, per-target RMSE, aR^2."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class MetricError(ValueError):
    pass


@dataclass
class EvalReport:
    task: str
    n_test: int
    accuracy: float | None = None                  # percentage
    precision_per_class: list[float] | None = None
    rmse_per_target: list[float] | None = None
    avg_r2: float | None = None
    class_names: list[str] = field(default_factory=list)
    target_names: list[str] = field(default_factory=list)

    def format(self) -> str:
        lines = [f"task: {self.task}", f"n_test: {self.n_test}"]
        if self.accuracy is not None:
            lines.append(f"accuracy: {self.accuracy:.2f}")
        if self.precision_per_class is not None:
            for name, p in zip(self.class_names, self.precision_per_class):
                lines.append(f"precision[{name}]: {p:.4f}")
        if self.rmse_per_target is not None:
            for name, r in zip(self.target_names, self.rmse_per_target):
                lines.append(f"rmse[{name}]: {r:.4f}")
        if self.avg_r2 is not None:
            lines.append(f"avg_r2: {self.avg_r2:.4f}")
        return "\n".join(lines)


def _as_labels(y) -> np.ndarray:
    return np.asarray(y, dtype=np.int64).ravel()


def accuracy(y_true, y_pred) -> float:
    """Percentage of matching labels."""
    y_true, y_pred = _as_labels(y_true), _as_labels(y_pred)
    if y_true.shape != y_pred.shape or y_true.size == 0:
        raise MetricError("label vectors must be non-empty and equal length")
    return 100.0 * float(np.mean(y_true == y_pred))


def precision_per_class(y_true, y_pred, k: int) -> np.ndarray:
    """TP / (TP + FP) per class; 0 for classes that are never predicted."""
    y_true, y_pred = _as_labels(y_true), _as_labels(y_pred)
    if y_true.shape != y_pred.shape:
        raise MetricError("label vectors must have equal length")
    out = np.zeros(k)
    for c in range(k):
        detected = y_pred == c
        if detected.any():
            out[c] = np.mean(y_true[detected] == c)
    return out


def rmse_per_target(Y_true, Y_pred) -> np.ndarray:
    Y_true = np.atleast_2d(np.asarray(Y_true, dtype=np.float64))
    Y_pred = np.atleast_2d(np.asarray(Y_pred, dtype=np.float64))
    if Y_true.shape != Y_pred.shape:
        raise MetricError(f"shape mismatch: {Y_true.shape} vs {Y_pred.shape}")
    return np.sqrt(np.mean((Y_true - Y_pred) ** 2, axis=0))


def avg_r2(Y_true, Y_pred) -> float:
    """Coefficient of determination averaged over targets (1.0 is perfect)."""
    Y_true = np.atleast_2d(np.asarray(Y_true, dtype=np.float64))
    Y_pred = np.atleast_2d(np.asarray(Y_pred, dtype=np.float64))
    if Y_true.shape != Y_pred.shape:
        raise MetricError(f"shape mismatch: {Y_true.shape} vs {Y_pred.shape}")
    ss_res = ((Y_true - Y_pred) ** 2).sum(axis=0)
    ss_tot = ((Y_true - Y_true.mean(axis=0)) ** 2).sum(axis=0)
    if np.any(ss_tot == 0.0):
        j = int(np.flatnonzero(ss_tot == 0.0)[0])
        raise MetricError(f"target {j} is constant; R^2 is undefined")
    return float(np.mean(1.0 - ss_res / ss_tot))


def evaluate_classification(y_true, y_pred, class_names) -> EvalReport:
    k = len(class_names)
    return EvalReport(
        task="classification", n_test=len(_as_labels(y_true)),
        accuracy=accuracy(y_true, y_pred),
        precision_per_class=list(precision_per_class(y_true, y_pred, k)),
        class_names=list(class_names),
    )


def evaluate_regression(Y_true, Y_pred, target_names) -> EvalReport:
    return EvalReport(
        task="regression", n_test=np.atleast_2d(Y_true).shape[0],
        rmse_per_target=list(rmse_per_target(Y_true, Y_pred)),
        avg_r2=avg_r2(Y_true, Y_pred),
        target_names=list(target_names),
    )
