"""C4.5-style binary decision tree over numeric features.

Split rule (mirrored by the brute-force test oracle):

1. For each candidate feature, thresholds sit at midpoints between
   consecutive distinct sorted values; a threshold is valid only if both
   sides keep at least ``min_obj`` instances.  The feature's best threshold
   maximises information gain (ties go to the smaller threshold).
2. Features whose best gain exceeds 1e-12 are the split candidates.
3. Candidates with gain >= mean(candidate gains) - 1e-12 are admissible.
4. The admissible candidate with the highest gain ratio wins; ties go to
   the lowest feature index.

Growth stops at pure nodes, nodes smaller than ``2 * min_obj``, or nodes
with no admissible split.  Optional pessimistic-error pruning collapses a
subtree whenever the collapsed leaf's estimated error does not exceed the
subtree's.  Leaf class distributions are Laplace-smoothed at prediction
time.  With ``feature_subset`` set, each node scores only a random subset
of features (random-forest mode); the per-node subsets come from numba's
MT19937 stream seeded per tree, so growth is reproducible.
"""

from __future__ import annotations

import math
from statistics import NormalDist

import numpy as np
from numba import njit

__all__ = ["DecisionTree", "pessimistic_extra_errors"]

_GAIN_EPS = 1e-12


@njit(cache=True)
def _entropy2(pos: np.int64, total: np.int64) -> np.float64:
    if pos <= 0 or pos >= total:
        return 0.0
    p = pos / total
    q = 1.0 - p
    return -(p * np.log2(p) + q * np.log2(q))


@njit(cache=True)
def _grow(X, y, min_obj, subset_size, seed):
    """Build tree arrays with an explicit stack; returns
    (feature, threshold, left, right, count, positives, n_nodes)."""
    n, p = X.shape
    cap = 2 * n + 1
    feature = np.full(cap, -1, np.int64)
    threshold = np.zeros(cap, np.float64)
    left = np.full(cap, -1, np.int64)
    right = np.full(cap, -1, np.int64)
    count = np.zeros(cap, np.int64)
    positives = np.zeros(cap, np.int64)

    order = np.arange(n)
    scratch = np.empty(n, np.int64)
    feats = np.arange(p)
    cand_f = np.empty(p, np.int64)
    cand_gain = np.empty(p, np.float64)
    cand_si = np.empty(p, np.float64)
    cand_thr = np.empty(p, np.float64)

    use_subset = subset_size < p
    if use_subset:
        np.random.seed(seed)

    stack_node = np.empty(cap, np.int64)
    stack_lo = np.empty(cap, np.int64)
    stack_hi = np.empty(cap, np.int64)
    top = 0
    stack_node[0], stack_lo[0], stack_hi[0] = 0, 0, n
    top = 1
    n_nodes = 1

    while top > 0:
        top -= 1
        node = stack_node[top]
        lo = stack_lo[top]
        hi = stack_hi[top]
        cnt = hi - lo
        pos = np.int64(0)
        for i in range(lo, hi):
            pos += y[order[i]]
        count[node] = cnt
        positives[node] = pos
        if pos == 0 or pos == cnt or cnt < 2 * min_obj:
            continue

        if use_subset:
            # partial Fisher-Yates: first subset_size entries of feats
            for i in range(subset_size):
                j = i + np.random.randint(0, p - i)
                feats[i], feats[j] = feats[j], feats[i]
            n_try = subset_size
        else:
            for i in range(p):
                feats[i] = i
            n_try = p

        h_parent = _entropy2(pos, cnt)
        n_cand = 0
        for fi in range(n_try):
            f = feats[fi]
            vals = np.empty(cnt, np.float64)
            ys = np.empty(cnt, np.int64)
            for i in range(cnt):
                row = order[lo + i]
                vals[i] = X[row, f]
            sidx = np.argsort(vals)
            best_gain = -1.0
            best_si = 0.0
            best_thr = 0.0
            left_pos = np.int64(0)
            for i in range(cnt):
                ys[i] = y[order[lo + sidx[i]]]
            for i in range(cnt - 1):
                left_pos += ys[i]
                v_here = vals[sidx[i]]
                v_next = vals[sidx[i + 1]]
                if v_next <= v_here:
                    continue
                nl = i + 1
                nr = cnt - nl
                if nl < min_obj or nr < min_obj:
                    continue
                h_l = _entropy2(left_pos, nl)
                h_r = _entropy2(pos - left_pos, nr)
                gain = h_parent - (nl * h_l + nr * h_r) / cnt
                if gain > best_gain:
                    best_gain = gain
                    pl = nl / cnt
                    pr = nr / cnt
                    best_si = -(pl * np.log2(pl) + pr * np.log2(pr))
                    best_thr = (v_here + v_next) / 2.0
                    if best_thr >= v_next:  # midpoint rounded up between adjacent floats
                        best_thr = v_here
            if best_gain > 1e-12:
                cand_f[n_cand] = f
                cand_gain[n_cand] = best_gain
                cand_si[n_cand] = best_si
                cand_thr[n_cand] = best_thr
                n_cand += 1

        if n_cand == 0:
            continue
        mean_gain = 0.0
        for i in range(n_cand):
            mean_gain += cand_gain[i]
        mean_gain /= n_cand
        best_ratio = -1.0
        best_i = -1
        for i in range(n_cand):
            if cand_gain[i] + 1e-12 < mean_gain:
                continue
            ratio = cand_gain[i] / cand_si[i]
            if ratio > best_ratio or (ratio == best_ratio and cand_f[i] < cand_f[best_i]):
                best_ratio = ratio
                best_i = i
        if best_i < 0:
            continue

        f = cand_f[best_i]
        thr = cand_thr[best_i]
        li = 0
        ri = 0
        for i in range(lo, hi):
            row = order[i]
            if X[row, f] <= thr:
                order[lo + li] = row
                li += 1
            else:
                scratch[ri] = row
                ri += 1
        for i in range(ri):
            order[lo + li + i] = scratch[i]

        feature[node] = f
        threshold[node] = thr
        lchild = n_nodes
        rchild = n_nodes + 1
        n_nodes += 2
        left[node] = lchild
        right[node] = rchild
        stack_node[top], stack_lo[top], stack_hi[top] = lchild, lo, lo + li
        top += 1
        stack_node[top], stack_lo[top], stack_hi[top] = rchild, lo + li, hi
        top += 1

    return feature, threshold, left, right, count, positives, n_nodes


@njit(cache=True)
def _predict_positive(feature, threshold, left, right, count, positives, X):
    n = X.shape[0]
    out = np.empty(n, np.float64)
    for i in range(n):
        node = 0
        while feature[node] >= 0:
            if X[i, feature[node]] <= threshold[node]:
                node = left[node]
            else:
                node = right[node]
        out[i] = (positives[node] + 1.0) / (count[node] + 2.0)
    return out


def pessimistic_extra_errors(n: int, errors: int, confidence: float) -> float:
    """Extra errors added to a node's observed errors by the pessimistic
    upper confidence bound on the binomial error rate."""
    if n <= 0:
        return 0.0
    if errors == 0:
        return n * (1.0 - confidence ** (1.0 / n))
    if errors + 0.5 >= n:
        return float(n - errors)
    z = NormalDist().inv_cdf(1.0 - confidence)
    f = (errors + 0.5) / n
    term = f / n - (f * f) / n + z * z / (4.0 * n * n)
    upper = (f + z * z / (2.0 * n) + z * math.sqrt(term)) / (1.0 + z * z / n)
    return upper * n - errors


class DecisionTree:
    """Binary classifier; ``predict_proba`` returns Laplace-smoothed leaf
    distributions ordered (class 0, class 1)."""

    def __init__(
        self,
        confidence: float = 0.25,
        min_obj: int = 2,
        prune: bool = True,
        feature_subset: int | None = None,
        seed: int = 0,
    ):
        if not 0.0 < confidence <= 0.5:
            raise ValueError("confidence must lie in (0, 0.5]")
        if min_obj < 1:
            raise ValueError("min_obj must be at least 1")
        if feature_subset is not None and feature_subset < 1:
            raise ValueError("feature_subset must be at least 1")
        self.confidence = confidence
        self.min_obj = min_obj
        self.prune = prune
        self.feature_subset = feature_subset
        self.seed = seed
        self.n_features_: int | None = None
        # each entry: (node, collapsed_leaf_error, subtree_error)
        self.prune_log: list[tuple[int, float, float]] = []

    def fit(self, X: np.ndarray, y: np.ndarray) -> "DecisionTree":
        X = np.ascontiguousarray(X, dtype=np.float64)
        y = np.ascontiguousarray(y, dtype=np.int64)
        if X.ndim != 2 or X.shape[0] != y.shape[0]:
            raise ValueError("X must be (n, p) with matching labels")
        if not ((y == 0).any() and (y == 1).any()):
            raise ValueError("training data must contain both classes")
        p = X.shape[1]
        subset = p if self.feature_subset is None else min(self.feature_subset, p)
        arrays = _grow(X, y, self.min_obj, subset, np.uint32(self.seed & 0xFFFFFFFF))
        (self._feature, self._threshold, self._left, self._right,
         self._count, self._positives, self._n_nodes) = arrays
        self.n_features_ = p
        self.prune_log = []
        if self.prune:
            self._prune_node(0)
        return self

    def _estimated_leaf_error(self, node: int) -> float:
        n = int(self._count[node])
        errors = int(min(self._positives[node], n - self._positives[node]))
        return errors + pessimistic_extra_errors(n, errors, self.confidence)

    def _prune_node(self, node: int) -> float:
        if self._feature[node] < 0:
            return self._estimated_leaf_error(node)
        subtree = self._prune_node(int(self._left[node])) + self._prune_node(
            int(self._right[node])
        )
        as_leaf = self._estimated_leaf_error(node)
        if as_leaf <= subtree:
            self._feature[node] = -1
            self.prune_log.append((node, as_leaf, subtree))
            return as_leaf
        return subtree

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        X = np.ascontiguousarray(np.atleast_2d(X), dtype=np.float64)
        if self.n_features_ is None:
            raise RuntimeError("tree is not fitted")
        if X.shape[1] != self.n_features_:
            raise ValueError(f"expected {self.n_features_} features, got {X.shape[1]}")
        p1 = _predict_positive(
            self._feature, self._threshold, self._left, self._right,
            self._count, self._positives, X,
        )
        return np.column_stack((1.0 - p1, p1))

    # introspection used by tests and diagnostics

    @property
    def root_split(self) -> tuple[int, float] | None:
        if self._feature[0] < 0:
            return None
        return int(self._feature[0]), float(self._threshold[0])

    def _walk(self, node: int, depth: int) -> tuple[int, int]:
        if self._feature[node] < 0:
            return 1, depth
        l_leaves, l_depth = self._walk(int(self._left[node]), depth + 1)
        r_leaves, r_depth = self._walk(int(self._right[node]), depth + 1)
        return l_leaves + r_leaves, max(l_depth, r_depth)

    @property
    def n_leaves(self) -> int:
        return self._walk(0, 0)[0]

    @property
    def depth(self) -> int:
        return self._walk(0, 0)[1]
