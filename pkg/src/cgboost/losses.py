"""Loss functions, pseudo-residuals and per-leaf Newton updates."""

from __future__ import annotations

import numpy as np

SQUARED = "squared"
MULTINOMIAL = "multinomial_log_loss"

_P_CLIP = 1e-15          # probability clip for loss reporting
_DEN_CLAMP = 1e-150      # Newton denominator clamp
_STEP_BOUND = 4.0        # per-leaf Newton step bound (LogitBoost convention)


class LossError(ValueError):
    pass


def _check_shapes(Y, F):
    if Y.shape != F.shape:
        raise LossError(f"shape mismatch: targets {Y.shape} vs scores {F.shape}")


def softmax(F: np.ndarray) -> np.ndarray:
    """Row-wise softmax with max-shift overflow guard."""
    F = np.asarray(F, dtype=np.float64)
    z = F - F.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def softmax_row(f) -> np.ndarray:
    return softmax(np.asarray(f, dtype=np.float64))


def loss_value(kind: str, Y: np.ndarray, F: np.ndarray) -> float:
    """Mean loss over samples.

    Both losses sum over the K outputs of a row and average over rows, so
    the entrywise derivative of (N * loss) is the negated pseudo-residual.

    Multinomial: negative log-likelihood -sum_k y_k ln p_k per row.
    Squared: sum_k (y_k - f_k)^2 / 2 per row.
    """
    Y = np.asarray(Y, dtype=np.float64)
    F = np.asarray(F, dtype=np.float64)
    _check_shapes(Y, F)
    if kind == SQUARED:
        return float(0.5 * np.sum((Y - F) ** 2) / Y.shape[0])
    if kind == MULTINOMIAL:
        P = np.clip(softmax(F), _P_CLIP, 1.0 - _P_CLIP)
        return float(-np.mean(np.sum(Y * np.log(P), axis=1)))
    raise LossError(f"unknown loss {kind!r}")


def negative_gradient(kind: str, Y: np.ndarray, F: np.ndarray) -> np.ndarray:
    """Pseudo-residual matrix, same shape as the score matrix."""
    Y = np.asarray(Y, dtype=np.float64)
    F = np.asarray(F, dtype=np.float64)
    _check_shapes(Y, F)
    if kind == SQUARED:
        return Y - F
    if kind == MULTINOMIAL:
        return Y - softmax(F)
    raise LossError(f"unknown loss {kind!r}")


def leaf_newton_update(Y_leaf: np.ndarray, R_leaf: np.ndarray) -> np.ndarray:
    """Second-order leaf value for the multinomial loss.

    gamma_k = sum_i r_ik / sum_i p_ik (1 - p_ik) with p = y - r; a
    vanishing denominator (all probabilities saturated) yields 0.  The
    step is bounded to [-4, 4]: a confidently misclassified sample alone
    in a leaf makes the raw ratio ~1/p(1-p), which diverges as scores
    saturate and destroys the ensemble at large learning rates.
    """
    Y_leaf = np.atleast_2d(np.asarray(Y_leaf, dtype=np.float64))
    R_leaf = np.atleast_2d(np.asarray(R_leaf, dtype=np.float64))
    if Y_leaf.shape[0] == 0:
        raise LossError("empty leaf")
    _check_shapes(Y_leaf, R_leaf)
    P = Y_leaf - R_leaf
    num = R_leaf.sum(axis=0)
    den = (P * (1.0 - P)).sum(axis=0)
    gamma = np.zeros_like(num)
    ok = np.abs(den) >= _DEN_CLAMP
    gamma[ok] = num[ok] / den[ok]
    return np.clip(gamma, -_STEP_BOUND, _STEP_BOUND)


def init_scores(kind: str, Y: np.ndarray) -> np.ndarray:
    """Initial score vector F0.

    Multinomial: log class priors (clipped away from zero); squared:
    per-output target means.
    """
    Y = np.asarray(Y, dtype=np.float64)
    if Y.ndim != 2 or Y.shape[0] < 1:
        raise LossError("targets must be a non-empty 2-D matrix")
    if kind == SQUARED:
        return Y.mean(axis=0)
    if kind == MULTINOMIAL:
        priors = np.clip(Y.mean(axis=0), 1e-12, 1.0)
        return np.log(priors)
    raise LossError(f"unknown loss {kind!r}")
