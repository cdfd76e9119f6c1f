"""Dataset container, CSV ingestion, splitting and synthetic generators."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

CLASSIFICATION = "classification"
REGRESSION = "regression"


class DataError(ValueError):
    """Raised on malformed input data or invalid dataset arguments."""


@dataclass(frozen=True)
class Dataset:
    """Feature matrix plus targets (class labels or multi-target reals).

    For classification ``labels`` is the source of truth and ``targets``
    caches the one-hot encoding.  For regression ``targets`` holds the
    real-valued target matrix and ``labels`` is None.
    """

    features: np.ndarray                 # (n, d) float64
    task: str                            # CLASSIFICATION or REGRESSION
    labels: np.ndarray | None = None     # (n,) int in [0, k)
    targets: np.ndarray | None = None    # (n, k) float64
    class_names: list[str] = field(default_factory=list)
    target_names: list[str] = field(default_factory=list)

    def __post_init__(self):
        X = np.asarray(self.features, dtype=np.float64)
        if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
            raise DataError("features must be a non-empty 2-D matrix")
        if not np.all(np.isfinite(X)):
            raise DataError("features contain non-finite values")
        object.__setattr__(self, "features", X)
        if self.task == CLASSIFICATION:
            if self.labels is None:
                raise DataError("classification dataset requires labels")
            y = np.asarray(self.labels, dtype=np.int64)
            if y.shape != (X.shape[0],):
                raise DataError("labels length does not match feature rows")
            k = len(self.class_names) if self.class_names else int(y.max()) + 1
            if k < 2:
                raise DataError("classification requires at least 2 classes")
            if y.min() < 0 or y.max() >= k:
                raise DataError("labels out of range [0, K)")
            object.__setattr__(self, "labels", y)
            if not self.class_names:
                object.__setattr__(self, "class_names", [str(c) for c in range(k)])
            if self.targets is None:
                object.__setattr__(self, "targets", one_hot(y, k))
        elif self.task == REGRESSION:
            if self.targets is None:
                raise DataError("regression dataset requires targets")
            Y = np.asarray(self.targets, dtype=np.float64)
            if Y.ndim == 1:
                Y = Y[:, None]
            if Y.shape[0] != X.shape[0]:
                raise DataError("targets rows do not match feature rows")
            if not np.all(np.isfinite(Y)):
                raise DataError("targets contain non-finite values")
            object.__setattr__(self, "targets", Y)
            if not self.target_names:
                object.__setattr__(
                    self, "target_names", [f"t{j}" for j in range(Y.shape[1])]
                )
        else:
            raise DataError(f"unknown task {self.task!r}")

    @property
    def n_rows(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @property
    def n_outputs(self) -> int:
        if self.task == CLASSIFICATION:
            return len(self.class_names)
        return self.targets.shape[1]

    def take(self, rows) -> "Dataset":
        """Row-subset dataset (rows is any numpy index)."""
        rows = np.asarray(rows)
        if self.task == CLASSIFICATION:
            return Dataset(
                self.features[rows], CLASSIFICATION,
                labels=self.labels[rows], class_names=list(self.class_names),
            )
        return Dataset(
            self.features[rows], REGRESSION,
            targets=self.targets[rows], target_names=list(self.target_names),
        )


def one_hot(labels, k: int) -> np.ndarray:
    """N x K 0/1 matrix with a single 1 per row at the label position."""
    labels = np.asarray(labels, dtype=np.int64)
    if k < 2:
        raise DataError("one_hot requires K >= 2")
    out = np.zeros((labels.shape[0], k), dtype=np.float64)
    out[np.arange(labels.shape[0]), labels] = 1.0
    return out


def _parse_cell(text: str, row: int, col: int) -> float:
    try:
        v = float(text)
    except ValueError:
        raise DataError(
            f"non-numeric value {text!r} at row {row}, column {col}"
        ) from None
    if not math.isfinite(v):
        raise DataError(f"non-finite value {text!r} at row {row}, column {col}")
    return v


def load_csv(path, target_columns, task: str,
             has_header: bool = True, delimiter: str = ",") -> Dataset:
    """Load a dataset from a delimited text file.

    ``target_columns`` names (header required) or 0-based indices of the
    target columns; every remaining column is taken as a numeric feature,
    in file order.  Classification expects exactly one target column whose
    distinct values are mapped to integer labels in sorted order.
    """
    try:
        fh = open(path, newline="")
    except OSError as e:
        raise DataError(f"cannot read {path}: {e.strerror}") from None
    with fh:
        rows = [r for r in csv.reader(fh, delimiter=delimiter) if r]
    if not rows:
        raise DataError(f"{path}: empty file")

    header = rows[0] if has_header else None
    body = rows[1:] if has_header else rows
    if len(body) < 2:
        raise DataError(f"{path}: fewer than 2 data rows")
    n_cols = len(body[0])

    tgt_idx = []
    for t in target_columns:
        if isinstance(t, int) or (isinstance(t, str) and t.lstrip("-").isdigit()):
            i = int(t)
            if i < 0:
                i += n_cols
            if not 0 <= i < n_cols:
                raise DataError(f"target column index {t} out of range")
        else:
            if header is None:
                raise DataError("named target columns require a header row")
            if t not in header:
                raise DataError(f"target column {t!r} not found in header")
            i = header.index(t)
        tgt_idx.append(i)
    if not tgt_idx:
        raise DataError("at least one target column is required")
    if len(set(tgt_idx)) != len(tgt_idx):
        raise DataError("duplicate target columns")

    feat_idx = [j for j in range(n_cols) if j not in tgt_idx]
    if not feat_idx:
        raise DataError("no feature columns left after removing targets")

    X = np.empty((len(body), len(feat_idx)))
    for i, r in enumerate(body):
        if len(r) != n_cols:
            raise DataError(f"row {i} has {len(r)} columns, expected {n_cols}")
        for jj, j in enumerate(feat_idx):
            X[i, jj] = _parse_cell(r[j], i, j)

    if task == CLASSIFICATION:
        if len(tgt_idx) != 1:
            raise DataError("classification expects exactly one target column")
        raw = [r[tgt_idx[0]] for r in body]
        names = sorted(set(raw))
        if len(names) < 2:
            raise DataError("classification requires at least 2 distinct labels")
        index = {c: i for i, c in enumerate(names)}
        y = np.array([index[v] for v in raw], dtype=np.int64)
        return Dataset(X, CLASSIFICATION, labels=y, class_names=names)

    Y = np.empty((len(body), len(tgt_idx)))
    for i, r in enumerate(body):
        for jj, j in enumerate(tgt_idx):
            Y[i, jj] = _parse_cell(r[j], i, j)
    tnames = [header[j] if header else f"t{j}" for j in tgt_idx]
    return Dataset(X, REGRESSION, targets=Y, target_names=tnames)


def save_csv(ds: Dataset, path, delimiter: str = ",") -> None:
    """Write a dataset back out with a header and trailing target column(s)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, delimiter=delimiter)
        feat_names = [f"x{j}" for j in range(ds.n_features)]
        if ds.task == CLASSIFICATION:
            w.writerow(feat_names + ["label"])
            for i in range(ds.n_rows):
                w.writerow([repr(float(v)) for v in ds.features[i]]
                           + [ds.class_names[ds.labels[i]]])
        else:
            w.writerow(feat_names + list(ds.target_names))
            for i in range(ds.n_rows):
                w.writerow([repr(float(v)) for v in ds.features[i]]
                           + [repr(float(v)) for v in ds.targets[i]])


def train_test_split(ds: Dataset, test_fraction: float, seed: int):
    """Deterministic disjoint split; stratified per class for classification."""
    if not 0.0 < test_fraction < 1.0:
        raise DataError("test_fraction must be in (0, 1)")
    n = ds.n_rows
    n_test = int(round(n * test_fraction))
    if n_test < 1 or n_test >= n:
        raise DataError("split would leave an empty train or test set")
    rng = np.random.default_rng(seed)

    if ds.task == CLASSIFICATION:
        k = ds.n_outputs
        counts = np.bincount(ds.labels, minlength=k)
        # largest-remainder allocation of n_test across classes
        exact = counts * (n_test / n)
        alloc = np.floor(exact).astype(int)
        rem = exact - alloc
        short = n_test - alloc.sum()
        for c in np.argsort(-rem, kind="stable")[:short]:
            alloc[c] += 1
        # a class cannot contribute more rows than it has
        alloc = np.minimum(alloc, counts)
        deficit = n_test - alloc.sum()
        if deficit > 0:
            order = np.argsort(-(counts - alloc), kind="stable")
            for c in order:
                if deficit == 0:
                    break
                extra = min(deficit, counts[c] - alloc[c])
                alloc[c] += extra
                deficit -= extra
        test_rows = []
        for c in range(k):
            idx = np.flatnonzero(ds.labels == c)
            idx = rng.permutation(idx)
            test_rows.append(idx[: alloc[c]])
        test_rows = np.sort(np.concatenate(test_rows))
    else:
        perm = rng.permutation(n)
        test_rows = np.sort(perm[:n_test])

    mask = np.zeros(n, dtype=bool)
    mask[test_rows] = True
    train_rows = np.flatnonzero(~mask)
    return ds.take(train_rows), ds.take(test_rows)


def make_folds(n: int, folds: int, seed: int) -> np.ndarray:
    """Fold assignment per row; fold sizes differ by at most one."""
    if folds < 2:
        raise DataError("folds must be >= 2")
    if folds > n:
        raise DataError("more folds than rows")
    rng = np.random.default_rng(seed)
    assign = np.arange(n) % folds
    return assign[rng.permutation(n)]


def make_blobs(n: int, k_classes: int, n_features: int,
               cluster_std: float = 1.0, seed: int = 0) -> Dataset:
    """Gaussian clusters, one per class, centers on a fixed grid.

    Per-class sample counts are balanced to within one.
    """
    if k_classes < 2:
        raise DataError("need at least 2 classes")
    if n < k_classes:
        raise DataError("need at least one sample per class")
    if n_features < 1 or cluster_std <= 0:
        raise DataError("invalid generator arguments")
    rng = np.random.default_rng(seed)
    side = math.ceil(math.sqrt(k_classes))
    sep = 8.0
    centers = np.zeros((k_classes, n_features))
    for c in range(k_classes):
        centers[c, 0] = sep * (c % side)
        if n_features > 1:
            centers[c, 1] = sep * (c // side)
    counts = [n // k_classes + (1 if c < n % k_classes else 0)
              for c in range(k_classes)]
    X = np.empty((n, n_features))
    y = np.empty(n, dtype=np.int64)
    at = 0
    for c, m in enumerate(counts):
        X[at:at + m] = centers[c] + cluster_std * rng.standard_normal((m, n_features))
        y[at:at + m] = c
        at += m
    perm = rng.permutation(n)
    return Dataset(X[perm], CLASSIFICATION, labels=y[perm],
                   class_names=[str(c) for c in range(k_classes)])


def make_waveform(n: int, seed: int = 0) -> Dataset:
    """Classic three-class waveform generator (21 features).

    Each sample is a random convex combination of two of three triangular
    base waves, chosen by class, plus unit Gaussian noise.
    """
    rng = np.random.default_rng(seed)
    t = np.arange(1, 22, dtype=np.float64)
    h1 = np.maximum(6.0 - np.abs(t - 11.0), 0.0)
    h2 = np.maximum(6.0 - np.abs(t - 7.0), 0.0)
    h3 = np.maximum(6.0 - np.abs(t - 15.0), 0.0)
    pairs = [(h1, h2), (h1, h3), (h2, h3)]
    y = rng.integers(0, 3, size=n)
    u = rng.random(n)
    X = np.empty((n, 21))
    for c, (a, b) in enumerate(pairs):
        m = y == c
        X[m] = u[m, None] * a + (1.0 - u[m, None]) * b
    X += rng.standard_normal((n, 21))
    return Dataset(X, CLASSIFICATION, labels=y, class_names=["0", "1", "2"])
