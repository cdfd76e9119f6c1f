"""Multi-output CART regression tree with exact split search.

Split quality is the mean squared error averaged over the K outputs of a
node; the chosen split maximizes the size-weighted reduction of that
quality.  Leaves hold K-vectors (per-output means of the rows they cover,
until replaced by a loss-specific update).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from numba import njit

_GAIN_EPS = 1e-12


class TreeError(ValueError):
    pass


@dataclass(frozen=True)
class TreeConfig:
    max_depth: int = -1              # -1 = unlimited
    max_features: str = "all"        # "all" | "sqrt"
    min_samples_split: int = 2
    min_samples_leaf: int = 1

    def validate(self):
        if self.max_depth < -1:
            raise TreeError("max_depth must be -1 (unlimited) or >= 0")
        if self.max_features not in ("all", "sqrt"):
            raise TreeError("max_features must be 'all' or 'sqrt'")
        if self.min_samples_split < 2 or self.min_samples_leaf < 1:
            raise TreeError("invalid minimum sample constraints")


@dataclass(frozen=True)
class SplitCandidate:
    feature: int
    threshold: float
    quality_after: float    # size-weighted child quality
    improvement: float      # parent quality minus quality_after


@dataclass(frozen=True)
class Node:
    """Internal node (feature >= 0) or leaf (feature == -1, value set)."""
    feature: int
    threshold: float
    left: int
    right: int
    value: np.ndarray | None
    quality: float
    n_samples: int

    @property
    def is_leaf(self) -> bool:
        return self.feature < 0


@dataclass(frozen=True)
class MultiOutputTree:
    nodes: tuple[Node, ...]
    n_outputs: int
    n_features: int

    @property
    def leaf_ids(self) -> list[int]:
        return [i for i, nd in enumerate(self.nodes) if nd.is_leaf]

    @property
    def leaf_count(self) -> int:
        return len(self.leaf_ids)

    @property
    def max_node_depth(self) -> int:
        depth = {0: 0}
        best = 0
        for i, nd in enumerate(self.nodes):
            if not nd.is_leaf:
                depth[nd.left] = depth[nd.right] = depth[i] + 1
            best = max(best, depth[i])
        return best


def node_quality(R: np.ndarray) -> float:
    """Average over outputs of the MSE around the per-output mean."""
    R = np.atleast_2d(np.asarray(R, dtype=np.float64))
    n, k = R.shape
    if n == 0:
        raise TreeError("empty node")
    mu = R.mean(axis=0)
    return float(((R - mu) ** 2).sum() / (n * k))


def _node_sse(R: np.ndarray) -> float:
    n = R.shape[0]
    s = R.sum(axis=0)
    return float((R ** 2).sum() - (s @ s) / n)


@njit(cache=True)
def _scan_splits(Xc, R, min_leaf):
    """Best (feature column, threshold) over all midpoint cuts.

    Returns (column, threshold, children SSE, parent SSE); column -1 when
    no valid cut exists.  Ties keep the first candidate found, i.e. the
    lowest column and then the lowest threshold.
    """
    n, f = Xc.shape
    k = R.shape[1]

    tot = np.zeros(k)
    tot_sq = 0.0
    row_sq = np.zeros(n)
    for i in range(n):
        s = 0.0
        for c in range(k):
            v = R[i, c]
            tot[c] += v
            s += v * v
        row_sq[i] = s
        tot_sq += s
    tot_nrm = 0.0
    for c in range(k):
        tot_nrm += tot[c] * tot[c]
    parent_sse = tot_sq - tot_nrm / n

    best_score = np.inf
    best_col = -1
    best_thr = 0.0
    # near-ties (splits that are mathematically equal but rounded
    # differently) must keep the first candidate, i.e. the lowest column
    tie_eps = 1e-12 * max(1.0, tot_sq)
    s_l = np.zeros(k)
    for j in range(f):
        order = np.argsort(Xc[:, j])
        for c in range(k):
            s_l[c] = 0.0
        for pos in range(n - 1):
            idx = order[pos]
            for c in range(k):
                s_l[c] += R[idx, c]
            n_l = pos + 1
            n_r = n - n_l
            if n_l < min_leaf or n_r < min_leaf:
                continue
            a = Xc[idx, j]
            b = Xc[order[pos + 1], j]
            if a >= b:
                continue
            mid = 0.5 * (a + b)
            if not (a < mid < b):
                continue
            left_nrm = 0.0
            right_nrm = 0.0
            for c in range(k):
                left_nrm += s_l[c] * s_l[c]
                d = tot[c] - s_l[c]
                right_nrm += d * d
            score = tot_sq - left_nrm / n_l - right_nrm / n_r
            if score < best_score - tie_eps:
                best_score = score
                best_col = j
                best_thr = mid
    return best_col, best_thr, best_score, parent_sse


def best_split(Xn: np.ndarray, Rn: np.ndarray, candidate_features,
               min_samples_leaf: int = 1) -> SplitCandidate | None:
    """Exact scan over all candidate features and midpoint thresholds.

    Returns None when no threshold separates the rows, no split leaves
    ``min_samples_leaf`` rows on both sides, or the best improvement is
    not positive.  Ties break toward the lowest feature index and then
    the lowest threshold.
    """
    Xn = np.ascontiguousarray(np.asarray(Xn, dtype=np.float64))
    Rn = np.ascontiguousarray(np.atleast_2d(np.asarray(Rn, dtype=np.float64)))
    n, k = Rn.shape
    if n < 2 * min_samples_leaf or n < 2:
        return None
    feats = np.sort(np.asarray(list(candidate_features), dtype=np.int64))

    Xc = np.ascontiguousarray(Xn[:, feats])
    col, thr, child_sse, parent_sse = _scan_splits(Xc, Rn, min_samples_leaf)
    if col < 0:
        return None
    gain = parent_sse - child_sse
    if gain <= _GAIN_EPS * max(1.0, abs(parent_sse)):
        return None
    return SplitCandidate(
        feature=int(feats[col]),
        threshold=float(thr),
        quality_after=float(child_sse) / (n * k),
        improvement=gain / (n * k),
    )


def _candidate_features(d: int, mode: str, rng) -> np.ndarray:
    if mode == "sqrt":
        m = math.ceil(math.sqrt(d))
        return np.sort(rng.choice(d, size=m, replace=False))
    return np.arange(d)


def fit_tree(X: np.ndarray, R: np.ndarray, rows, config: TreeConfig,
             rng=None) -> MultiOutputTree:
    """Grow a tree on the residual rows indexed by ``rows``.

    Leaf values are per-output residual means.  Feature subsampling (when
    configured) draws a fresh candidate set per node from ``rng``.
    """
    config.validate()
    X = np.asarray(X, dtype=np.float64)
    R = np.atleast_2d(np.asarray(R, dtype=np.float64))
    rows = np.asarray(rows, dtype=np.int64)
    if rows.size == 0:
        raise TreeError("empty row subset")
    if rng is None:
        rng = np.random.default_rng(0)
    d = X.shape[1]
    k = R.shape[1]

    nodes: list[Node] = []
    # work items: (row indices, depth, parent id, is_left); preorder so a
    # parent always has a lower id than its children
    stack = [(rows, 0, -1, False)]
    while stack:
        idx, depth, parent, is_left = stack.pop()
        Ri = R[idx]
        n = idx.size
        sse = _node_sse(Ri)
        q = sse / (n * k)
        nid = len(nodes)
        if parent >= 0:
            p = nodes[parent]
            nodes[parent] = replace(p, left=nid) if is_left else replace(p, right=nid)

        split = None
        depth_ok = config.max_depth < 0 or depth < config.max_depth
        if depth_ok and n >= config.min_samples_split and sse > _GAIN_EPS:
            feats = _candidate_features(d, config.max_features, rng)
            split = best_split(X[idx], Ri, feats, config.min_samples_leaf)

        if split is None:
            nodes.append(Node(-1, 0.0, -1, -1, Ri.mean(axis=0), q, n))
            continue
        nodes.append(Node(split.feature, split.threshold, -1, -1, None, q, n))
        go_left = X[idx, split.feature] <= split.threshold
        # right pushed first so the left subtree is numbered first
        stack.append((idx[~go_left], depth + 1, nid, False))
        stack.append((idx[go_left], depth + 1, nid, True))

    return MultiOutputTree(tuple(nodes), n_outputs=k, n_features=d)


def apply_tree(tree: MultiOutputTree, X: np.ndarray) -> np.ndarray:
    """Leaf node id for every row."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != tree.n_features:
        raise TreeError(
            f"feature width {X.shape[1]} does not match tree ({tree.n_features})"
        )
    out = np.zeros(X.shape[0], dtype=np.int64)
    stack = [(0, np.arange(X.shape[0]))]
    while stack:
        nid, idx = stack.pop()
        nd = tree.nodes[nid]
        if nd.is_leaf:
            out[idx] = nid
            continue
        go_left = X[idx, nd.feature] <= nd.threshold
        stack.append((nd.left, idx[go_left]))
        stack.append((nd.right, idx[~go_left]))
    return out


def predict_tree(tree: MultiOutputTree, X: np.ndarray) -> np.ndarray:
    """(n, K) leaf values for every row."""
    leaf_ids = apply_tree(tree, X)
    values = np.zeros((len(tree.nodes), tree.n_outputs))
    for i in tree.leaf_ids:
        values[i] = tree.nodes[i].value
    return values[leaf_ids]


def predict_one(tree: MultiOutputTree, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (tree.n_features,):
        raise TreeError(f"expected a vector of {tree.n_features} features")
    nd = tree.nodes[0]
    while not nd.is_leaf:
        nd = tree.nodes[nd.left if x[nd.feature] <= nd.threshold else nd.right]
    return nd.value.copy()


def set_leaf_values(tree: MultiOutputTree, new_values) -> MultiOutputTree:
    """Same structure with every leaf output replaced from the id -> vector map."""
    leaf_ids = set(tree.leaf_ids)
    missing = leaf_ids - set(new_values)
    if missing:
        raise TreeError(f"missing leaf values for nodes {sorted(missing)}")
    unknown = set(new_values) - leaf_ids
    if unknown:
        raise TreeError(f"unknown leaf ids {sorted(unknown)}")
    nodes = []
    for i, nd in enumerate(tree.nodes):
        if nd.is_leaf:
            v = np.asarray(new_values[i], dtype=np.float64)
            if v.shape != (tree.n_outputs,):
                raise TreeError(f"leaf {i}: expected {tree.n_outputs} outputs")
            nodes.append(replace(nd, value=v))
        else:
            nodes.append(nd)
    return MultiOutputTree(tuple(nodes), tree.n_outputs, tree.n_features)


def dump_tree(tree: MultiOutputTree, feature_names=None) -> str:
    """Indented per-node report: split rule or leaf vector, quality, samples."""
    lines = []

    def name(j):
        return feature_names[j] if feature_names else f"x{j}"

    def walk(nid, depth):
        nd = tree.nodes[nid]
        pad = "  " * depth
        if nd.is_leaf:
            vec = "[" + ", ".join(f"{v:.4f}" for v in nd.value) + "]"
            lines.append(f"{pad}leaf value={vec} mse={nd.quality:.4f} "
                         f"samples={nd.n_samples}")
        else:
            lines.append(f"{pad}{name(nd.feature)} <= {nd.threshold:.4f} "
                         f"mse={nd.quality:.4f} samples={nd.n_samples}")
            walk(nd.left, depth + 1)
            walk(nd.right, depth + 1)

    walk(0, 0)
    return "\n".join(lines)
