"""Phase two: pick one Pareto solution by evidential reasoning over four rules.

The rules are sensitivity, specificity, AUC (higher is better) and the
squared sensitivity/specificity gap (lower is better). Each rule value is
spread over ``N`` equally spaced reference grades, the four assessments are
fused with the analytic evidential-reasoning formula, and the solution with
the largest expected grade utility wins.
"""

from dataclasses import dataclass

import numpy as np

DEFAULT_WEIGHTS = (0.3, 0.3, 0.2, 0.2)
DEFAULT_N = 5
# Rule 4 (relative distance) improves downward.
HIGHER_IS_BETTER = (True, True, True, False)


@dataclass(frozen=True)
class SmolerResult:
    index: int
    utility: float
    utilities: np.ndarray
    rules: np.ndarray
    grid: np.ndarray
    beliefs: np.ndarray  # K x 4 x N
    combined: np.ndarray  # K x N


def _fitness(sol):
    return getattr(sol, "fitness", sol)


def build_rules(pareto):
    """K x 4 matrix of (sensitivity, specificity, auc, |sensitivity - specificity|^2)."""
    rows = []
    for sol in pareto:
        f = _fitness(sol)
        rows.append((f.sensitivity, f.specificity, f.auc, abs(f.sensitivity - f.specificity) ** 2))
    if not rows:
        raise ValueError("empty Pareto set")
    return np.array(rows, dtype=np.float64)


def reference_values(rules, N):
    """4 x N grid of reference values; ascending for rules 1-3, descending for rule 4."""
    if N < 2:
        raise ValueError("N must be at least 2")
    rules = np.asarray(rules, dtype=np.float64)
    lo, hi = rules.min(axis=0), rules.max(axis=0)
    steps = np.arange(N)[None, :] * ((hi - lo) / (N - 1))[:, None]
    grid = np.empty((rules.shape[1], N))
    for i, up in enumerate(HIGHER_IS_BETTER):
        grid[i] = lo[i] + steps[i] if up else hi[i] - steps[i]
        # Pin the far end to the exact extreme so the column maximum stays on the grid.
        grid[i, -1] = hi[i] if up else lo[i]
    return grid


def _rule_belief(value, H, up):
    N = H.shape[0]
    beta = np.zeros(N)
    if H[0] == H[-1]:
        beta[-1] = 1.0  # a rule that cannot discriminate is neutral
        return beta
    asc = H if up else H[::-1]
    if not asc[0] <= value <= asc[-1]:
        raise ValueError(f"rule value {value!r} lies outside its reference grid")
    j = int(np.searchsorted(asc, value, side="right")) - 1
    j = min(j, N - 2)
    if up:
        w = (asc[j + 1] - value) / (asc[j + 1] - asc[j])
        beta[j], beta[j + 1] = w, 1.0 - w
    else:
        # Grade g on the descending grid corresponds to asc index N-1-g.
        g = N - 2 - j
        w = (value - H[g + 1]) / (H[g] - H[g + 1])
        beta[g], beta[g + 1] = w, 1.0 - w
    return beta


def belief_matrix(rules, grid, k):
    """4 x N belief degrees of solution ``k``; at most two adjacent grades per rule."""
    rules = np.asarray(rules, dtype=np.float64)
    return np.array([_rule_belief(rules[k, i], grid[i], up) for i, up in enumerate(HIGHER_IS_BETTER)])


def er_combine(belief, weights):
    """Fuse the rows of a belief matrix into one distribution over the grades.

    ``belief`` is L x N (one row per rule), ``weights`` has length L.
    """
    beta = np.asarray(belief, dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64)[:, None]
    N = beta.shape[1]
    assessed = beta.sum(axis=1, keepdims=True)
    a = np.prod(w * beta + 1.0 - w * assessed, axis=0)
    b = np.prod(1.0 - w * assessed)
    c = np.prod(1.0 - w)
    mu = 1.0 / (a.sum() - (N - 1) * b)
    return mu * (a - b) / (1.0 - mu * c)


def grade_utilities(N):
    return np.arange(N) / (N - 1)


def utility_select(pareto, weights=DEFAULT_WEIGHTS, N=DEFAULT_N):
    """Maximum-utility solution; ties go to fewer features, then the lower index."""
    pareto = list(pareto)
    rules = build_rules(pareto)
    grid = reference_values(rules, N)
    beliefs = np.array([belief_matrix(rules, grid, k) for k in range(len(pareto))])
    combined = np.array([er_combine(b, weights) for b in beliefs])
    utilities = combined @ grade_utilities(N)

    def size(k):
        mask = getattr(pareto[k], "mask", None)
        return 0 if mask is None else int(np.count_nonzero(mask))

    best = min(range(len(pareto)), key=lambda k: (-utilities[k], size(k), k))
    return SmolerResult(best, float(utilities[best]), utilities, rules, grid, beliefs, combined)
