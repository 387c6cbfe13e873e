"""Cross-validated fitness of a feature mask under an RBF kernel ridge classifier."""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from . import kernels


@dataclass(frozen=True)
class Fitness:
    sensitivity: float
    specificity: float
    auc: float
    accuracy: float

    @property
    def objectives(self):
        return (self.sensitivity, self.specificity)


ZERO_FITNESS = Fitness(0.0, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def sensitivity(self):
        return self.tp / (self.tp + self.fn) if self.tp + self.fn else 0.0

    @property
    def specificity(self):
        return self.tn / (self.tn + self.fp) if self.tn + self.fp else 0.0

    @property
    def accuracy(self):
        total = self.tp + self.fp + self.tn + self.fn
        return (self.tp + self.tn) / total if total else 0.0


@dataclass(frozen=True)
class ClassifierModel:
    """A fitted RBF kernel ridge classifier over a fixed set of features."""

    support_matrix: np.ndarray
    dual_weights: np.ndarray
    kernel_width: float
    ridge: float
    train_means: np.ndarray
    train_stds: np.ndarray
    features: np.ndarray

    def decision_function(self, X):
        Z = (np.asarray(X, dtype=np.float64)[:, self.features] - self.train_means) / self.train_stds
        return kernels.rbf_gram(Z, self.support_matrix, self.kernel_width) @ self.dual_weights


def _features(mask):
    return np.flatnonzero(np.asarray(mask, dtype=bool))


def default_gamma(n_selected):
    return 1.0 / n_selected


def fit_classifier(X, y, mask, gamma=None, ridge=1.0):
    """Solve ``(K + ridge*I) alpha = y_pm`` on z-scored, masked training rows."""
    features = _features(mask)
    if features.size == 0:
        raise ValueError("mask selects no features")
    if ridge <= 0:
        raise ValueError("ridge must be positive")
    gamma = default_gamma(features.size) if gamma is None else gamma
    A = np.asarray(X, dtype=np.float64)[:, features]
    mean, std = kernels.zscore_stats(np.ascontiguousarray(A))
    Z = (A - mean) / std
    G = kernels.rbf_gram(Z, Z, gamma)
    G[np.diag_indices_from(G)] += ridge
    y_pm = np.where(np.asarray(y) == 1, 1.0, -1.0)
    alpha = cho_solve(cho_factor(G, lower=True), y_pm)
    return ClassifierModel(Z, alpha, gamma, ridge, mean, std, features)


def fit_score(train, test, mask, gamma=None, ridge=1.0):
    """Train on ``train`` restricted to ``mask`` and return scores for ``test`` rows.

    Higher scores mean more likely positive. Accepts :class:`Dataset`
    objects or ``(X, y)`` / bare ``X`` arrays.
    """
    X_train, y_train = (train.X, train.y) if hasattr(train, "X") else train
    X_test = test.X if hasattr(test, "X") else np.asarray(test)
    features = _features(mask)
    if features.size == 0:
        raise ValueError("mask selects no features")
    if ridge <= 0:
        raise ValueError("ridge must be positive")
    gamma = default_gamma(features.size) if gamma is None else gamma
    y_pm = np.where(np.asarray(y_train) == 1, 1.0, -1.0)
    return kernels.kernel_ridge_scores(
        np.ascontiguousarray(X_train, dtype=np.float64),
        y_pm,
        np.ascontiguousarray(X_test, dtype=np.float64),
        features,
        float(gamma),
        float(ridge),
    )


def confusion(scores, labels, threshold=0.0):
    """Confusion counts; a score equal to the threshold is a negative prediction."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    if scores.shape != labels.shape:
        raise ValueError("scores and labels differ in length")
    pred = scores > threshold
    pos = labels == 1
    return ConfusionMatrix(
        tp=int((pred & pos).sum()),
        fp=int((pred & ~pos).sum()),
        tn=int((~pred & ~pos).sum()),
        fn=int((~pred & pos).sum()),
    )


def auc(scores, labels):
    """Area under the ROC curve as the Mann-Whitney statistic (ties count half)."""
    labels = np.asarray(labels)
    n_pos = int((labels == 1).sum())
    if n_pos == 0 or n_pos == labels.size:
        raise ValueError("auc needs both classes")
    return float(kernels.auc_mann_whitney(np.asarray(scores, dtype=np.float64), labels == 1))


def metrics(scores, labels, threshold=0.0):
    """(Fitness, ConfusionMatrix) of a score vector."""
    cm = confusion(scores, labels, threshold)
    fit = Fitness(cm.sensitivity, cm.specificity, auc(scores, labels), cm.accuracy)
    return fit, cm


class MaskEvaluator:
    """Pooled cross-validated fitness of feature masks on one dataset.

    Pure apart from a memo of already-evaluated masks, so a mask is never
    refitted. ``gamma=None`` uses one over the selected feature count.
    """

    def __init__(self, data, folds, gamma=None, ridge=1.0):
        if ridge <= 0:
            raise ValueError("ridge must be positive")
        if gamma is not None and gamma <= 0:
            raise ValueError("gamma must be positive")
        self.data = data
        self.folds = folds
        self.gamma = gamma
        self.ridge = ridge
        self._parts = [
            (
                np.ascontiguousarray(data.X[tr]),
                np.where(data.y[tr] == 1, 1.0, -1.0),
                np.ascontiguousarray(data.X[va]),
            )
            for tr, va in folds.folds
        ]
        self._labels = np.concatenate([data.y[va] for _, va in folds.folds])
        self._cache = {}

    @property
    def n_evaluations(self):
        return len(self._cache)

    def pooled_scores(self, mask):
        """Validation scores of every fold concatenated in fold order, with labels."""
        features = _features(mask)
        gamma = default_gamma(features.size) if self.gamma is None else self.gamma
        scores = np.concatenate(
            [
                kernels.kernel_ridge_scores(Xtr, ytr, Xva, features, gamma, self.ridge)
                for Xtr, ytr, Xva in self._parts
            ]
        )
        return scores, self._labels

    def evaluate(self, mask):
        mask = np.asarray(mask, dtype=bool)
        key = np.packbits(mask).tobytes()
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if not mask.any():
            fit = ZERO_FITNESS
        else:
            fit, _ = metrics(*self.pooled_scores(mask))
        self._cache[key] = fit
        return fit

    __call__ = evaluate

    def confusion(self, mask):
        if not np.asarray(mask, dtype=bool).any():
            n_pos = int(self._labels.sum())
            return ConfusionMatrix(0, 0, self._labels.size - n_pos, n_pos)
        return confusion(*self.pooled_scores(mask))


def evaluate_mask(mask, data, folds, gamma=None, ridge=1.0):
    """Cross-validated Fitness of one mask; the empty mask scores all zeros."""
    return MaskEvaluator(data, folds, gamma, ridge).evaluate(mask)
