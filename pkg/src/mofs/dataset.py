"""Tabular binary-classification data: loading, synthesis, folds, correlation."""

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

_LABEL_WORDS = {"0": 0, "1": 1, "benign": 0, "malignant": 1}


class DataError(ValueError):
    """Raised for malformed or unusable input data."""


def _frozen(a, dtype):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Dataset:
    """Samples ``X`` (n_samples x n_features) with binary labels ``y``.

    ``groups`` optionally names the case/patient each row belongs to; rows
    sharing a group always land on the same side of a split.
    """

    X: np.ndarray
    y: np.ndarray
    feature_names: tuple
    groups: np.ndarray | None = None

    def __post_init__(self):
        X = _frozen(self.X, np.float64)
        y = _frozen(self.y, np.int64)
        names = tuple(str(n) for n in self.feature_names)
        if X.ndim != 2:
            raise DataError("X must be a 2-D matrix")
        if y.shape != (X.shape[0],):
            raise DataError("y length does not match the number of samples")
        if not np.isfinite(X).all():
            raise DataError("X contains NaN or Inf")
        if not np.isin(y, (0, 1)).all():
            raise DataError("label not binary")
        if y.sum() == 0 or y.sum() == y.size:
            raise DataError("both classes must be present")
        if len(names) != X.shape[1]:
            raise DataError("feature_names length does not match n_features")
        if len(set(names)) != len(names):
            raise DataError("duplicate feature names")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "feature_names", names)
        if self.groups is not None:
            groups = np.asarray(self.groups).astype(str)
            if groups.shape != y.shape:
                raise DataError("groups length does not match the number of samples")
            object.__setattr__(self, "groups", _frozen(groups, groups.dtype))

    @property
    def n_samples(self):
        return self.X.shape[0]

    @property
    def n_features(self):
        return self.X.shape[1]

    def subset(self, rows):
        rows = np.asarray(rows)
        groups = None if self.groups is None else self.groups[rows]
        return Dataset(self.X[rows], self.y[rows], self.feature_names, groups)


@dataclass(frozen=True)
class FoldPlan:
    """Stratified k-fold partition as (train_indices, validation_indices) pairs."""

    folds: tuple
    k: int
    seed: int = field(default=0)


def _parse_label(raw, line):
    key = raw.strip().lower()
    if key in _LABEL_WORDS:
        return _LABEL_WORDS[key]
    try:
        value = float(key)
    except ValueError:
        raise DataError(f"line {line}: label not binary: {raw!r}") from None
    if value in (0.0, 1.0):
        return int(value)
    raise DataError(f"line {line}: label not binary: {raw!r}")


def load_csv(path, label_column, group_column=None):
    """Read a comma-separated file with a header row into a :class:`Dataset`.

    Every column other than the label (and optional group) column must be
    numeric. Labels may be 0/1 or benign/malignant in any case.
    """
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise DataError(f"{path} is empty")
    header = [h.strip() for h in rows[0]]
    if label_column not in header:
        raise DataError(f"missing label column {label_column!r}")
    if group_column is not None and group_column not in header:
        raise DataError(f"missing group column {group_column!r}")
    if len(set(header)) != len(header):
        raise DataError("duplicate feature names")
    label_at = header.index(label_column)
    group_at = header.index(group_column) if group_column is not None else None
    feature_at = [i for i in range(len(header)) if i not in (label_at, group_at)]

    X, y, groups = [], [], []
    for line, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise DataError(f"line {line}: expected {len(header)} fields, got {len(row)}")
        try:
            X.append([float(row[i]) for i in feature_at])
        except ValueError:
            raise DataError(f"line {line}: non-numeric cell") from None
        y.append(_parse_label(row[label_at], line))
        if group_at is not None:
            groups.append(row[group_at].strip())
    if not X:
        raise DataError(f"{path} has no data rows")
    X = np.array(X, dtype=np.float64).reshape(len(y), len(feature_at))
    return Dataset(X, y, [header[i] for i in feature_at], groups if group_at is not None else None)


def write_csv(data, path, label_column="label"):
    """Write ``data`` in the same dialect :func:`load_csv` reads."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([*data.feature_names, label_column])
        for row, label in zip(data.X, data.y):
            writer.writerow([*(repr(float(v)) for v in row), int(label)])


def generate_synthetic(n_samples, n_informative, n_redundant, n_noise, delta, rho, seed):
    """Class-conditional Gaussian benchmark data.

    Columns are ordered informative, redundant, noise. Informative features
    have class means -delta/2 and +delta/2 with unit variance. Each redundant
    feature is ``rho * source + sqrt(1 - rho**2) * noise`` for a randomly drawn
    informative source. Noise features are standard normal.
    """
    if n_samples < 4:
        raise DataError("n_samples must be at least 4")
    if n_informative < 1 or n_redundant < 0 or n_noise < 0:
        raise DataError("invalid feature counts")
    if not 0.0 <= rho < 1.0:
        raise DataError("rho must lie in [0, 1)")
    rng = np.random.default_rng(seed)
    y = np.zeros(n_samples, dtype=np.int64)
    y[: n_samples // 2] = 1
    y = rng.permutation(y)
    shift = np.where(y == 1, delta / 2.0, -delta / 2.0)
    informative = rng.standard_normal((n_samples, n_informative)) + shift[:, None]
    sources = rng.integers(0, n_informative, size=n_redundant)
    redundant = rho * informative[:, sources] + np.sqrt(1.0 - rho**2) * rng.standard_normal(
        (n_samples, n_redundant)
    )
    noise = rng.standard_normal((n_samples, n_noise))
    X = np.hstack([informative, redundant, noise])
    return Dataset(X, y, [f"f{i}" for i in range(X.shape[1])])


def correlation_matrix(data):
    """Absolute Pearson correlation between every pair of features.

    A constant feature correlates 0 with every other feature and 1 with itself.
    """
    X = data.X if isinstance(data, Dataset) else np.asarray(data, dtype=np.float64)
    if X.shape[0] < 2:
        raise DataError("correlation needs at least 2 samples")
    centered = X - X.mean(axis=0)
    norms = np.sqrt((centered * centered).sum(axis=0))
    constant = norms <= 1e-12 * (1.0 + np.abs(X).max(axis=0))
    safe = np.where(constant, 1.0, norms)
    R = np.abs((centered.T @ centered) / np.outer(safe, safe))
    R[constant, :] = 0.0
    R[:, constant] = 0.0
    R = np.clip((R + R.T) / 2.0, 0.0, 1.0)
    np.fill_diagonal(R, 1.0)
    R.setflags(write=False)
    return R


def _group_units(data, rows):
    """Split ``rows`` into indivisible units: one per group, or one per row."""
    if data.groups is None:
        return [np.array([r]) for r in rows]
    units = {}
    for r in rows:
        units.setdefault(data.groups[r], []).append(r)
    return [np.array(v) for _, v in sorted(units.items())]


def _stratified_assign(data, n_parts, rng):
    """Round-robin units of each class over ``n_parts`` buckets after shuffling.

    Groups are stratified by their majority label. Returns a bucket id per row.
    """
    assign = np.empty(data.n_samples, dtype=np.int64)
    units = _group_units(data, np.arange(data.n_samples))
    majority = np.array([int(data.y[u].mean() >= 0.5) for u in units])
    offset = 0
    for cls in (1, 0):
        members = [units[i] for i in np.flatnonzero(majority == cls)]
        for pos, i in enumerate(rng.permutation(len(members))):
            assign[members[i]] = (offset + pos) % n_parts
        offset += len(members)
    return assign


def stratified_folds(data, k, seed, use_groups=True):
    """Stratified k-fold plan; deterministic for a fixed seed."""
    if k < 2:
        raise DataError("k must be at least 2")
    for cls in (0, 1):
        if int((data.y == cls).sum()) < k:
            raise DataError(f"class {cls} has fewer than {k} samples")
    if not use_groups and data.groups is not None:
        data = Dataset(data.X, data.y, data.feature_names)
    rng = np.random.default_rng(seed)
    assign = _stratified_assign(data, k, rng)
    folds = []
    for f in range(k):
        val = np.flatnonzero(assign == f)
        train = np.flatnonzero(assign != f)
        if len(np.unique(data.y[val])) < 2 or len(np.unique(data.y[train])) < 2:
            raise DataError("a fold lacks one of the classes; use fewer folds")
        folds.append((train, val))
    return FoldPlan(tuple(folds), k, seed)


def train_test_split(data, test_fraction, seed):
    """Stratified (and group-respecting) hold-out split into (train, test)."""
    if not 0.0 < test_fraction < 1.0:
        raise DataError("test_fraction must lie in (0, 1)")
    rng = np.random.default_rng(seed)
    units = _group_units(data, np.arange(data.n_samples))
    majority = np.array([int(data.y[u].mean() >= 0.5) for u in units])
    test_rows = []
    for cls in (1, 0):
        members = [units[i] for i in np.flatnonzero(majority == cls)]
        order = rng.permutation(len(members))
        n_test = int(round(test_fraction * len(members)))
        n_test = min(max(n_test, 1), len(members) - 1)
        test_rows.extend(members[i] for i in order[:n_test])
    test = np.sort(np.concatenate(test_rows))
    train = np.setdiff1d(np.arange(data.n_samples), test)
    return data.subset(train), data.subset(test)
