"""Entropy-based termination: histogram successive generations and stop when
the running mean and spread of their dissimilarity settle.
"""

from dataclasses import dataclass, field

import numpy as np


def cell_id(objectives, n_b):
    """Histogram cell of an objective vector whose entries are rates in [0, 1].

    Each objective is bucketed into ``[k/n_b, (k+1)/n_b)``; 1.0 falls in the
    top bucket. The first objective is the least significant digit.
    """
    c = 0
    for j, value in enumerate(objectives):
        k = min(max(int(np.floor(value * n_b)), 0), n_b - 1)
        c += k * n_b**j
    return c


@dataclass(eq=False)
class GenerationSnapshot:
    """A population plus its objective-cell histogram and per-cell feature usage.

    ``feature_bin_probs`` is dense: row ``c`` is the feature probability
    vector of cell ``c`` (all zeros for an empty cell).
    """

    population: object
    n_b: int
    cell_counts: np.ndarray
    feature_bin_probs: np.ndarray
    dissimilarity_to_prev: float | None = None
    objective_dissimilarity: float | None = None
    stop: bool = False

    @property
    def cell_histogram(self):
        return {int(c): int(n) for c, n in enumerate(self.cell_counts) if n}

    @property
    def cell_probs(self):
        return self.cell_counts / self.cell_counts.sum()


def distributions(pop, n_b):
    members = pop.members if hasattr(pop, "members") else list(pop)
    if not members:
        raise ValueError("empty population")
    n_features = members[0].mask.shape[0]
    counts = np.zeros(n_b * n_b, dtype=np.int64)
    sums = np.zeros((n_b * n_b, n_features))
    for sol in members:
        c = cell_id(sol.fitness.objectives, n_b)
        counts[c] += 1
        sums[c] += sol.mask
    probs = np.zeros_like(sums)
    nonempty = counts > 0
    probs[nonempty] = sums[nonempty] / (counts[nonempty, None] * n_features)
    return GenerationSnapshot(pop, n_b, counts, probs)


def dissimilarity_pair(p, q):
    """Symmetric relative-entropy dissimilarity of two non-negative vectors.

    Indices positive in both contribute halved KL terms in each direction;
    indices positive in only one contribute their halved entropy term.
    """
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape:
        raise ValueError("p and q differ in shape")
    if (p < 0).any() or (q < 0).any():
        raise ValueError("negative probability")
    both = (p > 0) & (q > 0)
    only_p = (p > 0) & ~both
    only_q = (q > 0) & ~both
    pb, qb = p[both], q[both]
    shared = np.sum(pb / 2.0 * np.log(pb / qb)) + np.sum(qb / 2.0 * np.log(qb / pb))
    lone = -np.sum(p[only_p] / 2.0 * np.log(p[only_p])) - np.sum(q[only_q] / 2.0 * np.log(q[only_q]))
    return float(shared + lone)


def _check_compatible(prev, curr):
    if prev.n_b != curr.n_b or prev.feature_bin_probs.shape != curr.feature_bin_probs.shape:
        raise ValueError("snapshots differ in n_b or feature count")


def objective_dissimilarity(prev, curr):
    _check_compatible(prev, curr)
    return dissimilarity_pair(prev.cell_probs, curr.cell_probs)


def total_dissimilarity(prev, curr):
    """Objective-cell dissimilarity plus the per-cell feature dissimilarities."""
    d = objective_dissimilarity(prev, curr)
    for pf, qf in zip(prev.feature_bin_probs, curr.feature_bin_probs):
        d += dissimilarity_pair(pf, qf)
    return d


@dataclass
class TerminationState:
    n_s: int = 2
    n_p: int = 2
    D_history: list = field(default_factory=list)

    @property
    def M_history(self):
        d = np.asarray(self.D_history, dtype=np.float64)
        return [float(d[:t].mean()) for t in range(1, d.size + 1)]

    @property
    def S_history(self):
        # Mean squared deviation from the running mean, as written in the
        # stop rule (no square root).
        d = np.asarray(self.D_history, dtype=np.float64)
        return [float(np.mean((d[:t] - d[:t].mean()) ** 2)) for t in range(1, d.size + 1)]

    def push(self, d):
        self.D_history.append(float(d))
        return should_terminate(self)


def should_terminate(state):
    """True once the last ``n_s + 1`` running means and spreads agree to ``n_p`` decimals."""
    window = state.n_s + 1
    if len(state.D_history) < window:
        return False
    for series in (state.M_history[-window:], state.S_history[-window:]):
        if len({round(v, state.n_p) for v in series}) != 1:
            return False
    return True
