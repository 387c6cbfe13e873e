"""Pure numpy implementations of the hot kernels.

These are the reference fallback for :mod:`mofs._ckernels`; both modules
expose the same functions with the same signatures.
"""

import numpy as np
from scipy.linalg import cho_factor, cho_solve

# Scale below which a feature is treated as constant when z-scoring.
_STD_FLOOR = 1e-12


def zscore_stats(X):
    """Per-column mean and population std; near-constant columns get std 1."""
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    std = np.where(std <= _STD_FLOOR * (1.0 + np.abs(mean)), 1.0, std)
    return mean, std


def rbf_gram(A, B, gamma):
    sq = (A * A).sum(axis=1)[:, None] + (B * B).sum(axis=1)[None, :] - 2.0 * (A @ B.T)
    np.maximum(sq, 0.0, out=sq)
    return np.exp(-gamma * sq)


def kernel_ridge_scores(X_train, y_pm, X_test, features, gamma, ridge):
    """Fit RBF kernel ridge on ``X_train[:, features]`` and score ``X_test``.

    Features are z-scored with training statistics. ``y_pm`` holds +/-1
    targets. Returns one real score per test row.
    """
    A = X_train[:, features]
    B = X_test[:, features]
    mean, std = zscore_stats(A)
    A = (A - mean) / std
    B = (B - mean) / std
    G = rbf_gram(A, A, gamma)
    G[np.diag_indices_from(G)] += ridge
    alpha = cho_solve(cho_factor(G, lower=True), y_pm)
    return rbf_gram(B, A, gamma) @ alpha


def front_ranks(obj):
    """Pareto front index (0 = non-dominated) of each row, maximizing all columns."""
    obj = np.asarray(obj, dtype=np.float64)
    n = obj.shape[0]
    ge = (obj[:, None, :] >= obj[None, :, :]).all(axis=2)
    gt = (obj[:, None, :] > obj[None, :, :]).any(axis=2)
    dominates = ge & gt
    count = dominates.sum(axis=0)
    ranks = np.full(n, -1, dtype=np.int64)
    front = np.flatnonzero(count == 0)
    r = 0
    while front.size:
        ranks[front] = r
        count = count - dominates[front].sum(axis=0)
        count[ranks >= 0] = -1
        front = np.flatnonzero(count == 0)
        r += 1
    return ranks


def crowding_distance(obj):
    """NSGA-II crowding distance; boundary points get ``inf``."""
    obj = np.asarray(obj, dtype=np.float64)
    n, m = obj.shape
    dist = np.zeros(n)
    if n == 0:
        return dist
    for j in range(m):
        order = np.argsort(obj[:, j], kind="stable")
        v = obj[order, j]
        dist[order[0]] = np.inf
        dist[order[-1]] = np.inf
        span = v[-1] - v[0]
        if n > 2 and span > 0:
            dist[order[1:-1]] += (v[2:] - v[:-2]) / span
    return dist


def mutation_probabilities(mask, R):
    """Correlation-driven flip probability of every bit of ``mask``.

    Selected bit: summed |r| to the other selected features over K.
    Unselected bit: one minus summed |r| to the selected features over K.
    """
    mask = np.asarray(mask, dtype=bool)
    k = int(mask.sum())
    if k == 0:
        return np.ones(mask.shape[0])
    s = R[:, mask].sum(axis=1)
    return np.where(mask, (s - np.diag(R)) / k, 1.0 - s / k)


def auc_mann_whitney(scores, labels):
    """Mann-Whitney AUC with ties counted as one half, computed exactly."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels).astype(bool)
    n = scores.shape[0]
    n_pos = int(labels.sum())
    n_neg = n - n_pos
    order = np.argsort(scores, kind="mergesort")
    s = scores[order]
    # Tie groups [start, end); twice the 1-based midrank is start + 1 + end.
    starts = np.flatnonzero(np.r_[True, s[1:] != s[:-1]])
    ends = np.r_[starts[1:], n]
    twice_rank = np.repeat(starts + 1 + ends, ends - starts)
    twice_pos_sum = int(twice_rank[labels[order]].sum())
    twice_u = twice_pos_sum - n_pos * (n_pos + 1)
    return twice_u / (2.0 * n_pos * n_neg)
