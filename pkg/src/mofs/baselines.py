"""Reference selectors: greedy forward selection on AUC, and RELIEF ranking."""

from dataclasses import dataclass

import numpy as np

from .evaluator import MaskEvaluator

SFS_MIN_GAIN = 1e-6


@dataclass(frozen=True)
class Ranking:
    weights: np.ndarray
    order: np.ndarray

    def top(self, k):
        mask = np.zeros(self.weights.shape[0], dtype=bool)
        mask[self.order[:k]] = True
        return mask


def sfs_auc(data, folds, max_features=None, gamma=None, ridge=1.0, evaluator=None, trace=None):
    """Add one feature at a time, always the one giving the best cross-validated AUC.

    Stops once no candidate improves AUC by more than ``SFS_MIN_GAIN`` or
    ``max_features`` are selected. If ``trace`` is a list, the AUC after each
    addition is appended to it.
    """
    n = data.n_features
    max_features = n if max_features is None else max_features
    if max_features < 1:
        raise ValueError("max_features must be at least 1")
    evaluator = evaluator or MaskEvaluator(data, folds, gamma, ridge)
    mask = np.zeros(n, dtype=bool)
    current = -np.inf
    while mask.sum() < min(max_features, n):
        best_auc, best_f = -np.inf, -1
        for f in np.flatnonzero(~mask):
            trial = mask.copy()
            trial[f] = True
            a = evaluator(trial).auc
            if a > best_auc:
                best_auc, best_f = a, f
        if best_auc <= current + SFS_MIN_GAIN:
            break
        mask[best_f] = True
        current = best_auc
        if trace is not None:
            trace.append(best_auc)
    return mask


def relief_rank(data, seed=0, n_probes=None):
    """Classic two-class RELIEF.

    Neighbours are found by Euclidean distance on z-scored features; per-feature
    differences are divided by the feature's range. With ``n_probes`` equal to
    the sample count every sample is probed once, in order.
    """
    X, y = data.X, data.y
    n, d = X.shape
    if min(int((y == 0).sum()), int((y == 1).sum())) < 2:
        raise ValueError("each class needs two samples so every probe has a nearest hit")
    n_probes = n if n_probes is None else n_probes
    if n_probes < 1:
        raise ValueError("n_probes must be at least 1")
    if n_probes == n:
        probes = np.arange(n)
    else:
        rng = np.random.default_rng(seed)
        probes = rng.choice(n, size=n_probes, replace=n_probes > n)

    span = X.max(axis=0) - X.min(axis=0)
    scale = np.where(span > 0, span, 1.0)
    mean, std = X.mean(axis=0), X.std(axis=0)
    Z = (X - mean) / np.where(std > 0, std, 1.0)
    sq = (Z * Z).sum(axis=1)

    w = np.zeros(d)
    for i in probes:
        dist = sq + sq[i] - 2.0 * (Z @ Z[i])
        dist[i] = np.inf
        same = y == y[i]
        hit = int(np.argmin(np.where(same, dist, np.inf)))
        miss = int(np.argmin(np.where(~same, dist, np.inf)))
        w += (np.abs(X[i] - X[miss]) - np.abs(X[i] - X[hit])) / scale
    w /= n_probes
    w[span == 0] = 0.0
    return Ranking(w, np.argsort(-w, kind="stable"))


def relief_select(ranking):
    """Features with positive RELIEF weight (the single best one if none is positive)."""
    mask = ranking.weights > 0
    if not mask.any():
        mask = ranking.top(1)
    return mask
