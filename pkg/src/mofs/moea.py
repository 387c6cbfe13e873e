"""Phase one: evolve binary feature masks against (sensitivity, specificity).

Each generation clones the population in proportion to crowding distance,
mutates the clones with correlation-driven flip probabilities, merges them
with the parents, drops solutions that repeat an objective pair, and keeps
the best ``P`` by non-dominated sorting.
"""

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .dataset import correlation_matrix, stratified_folds
from .evaluator import MaskEvaluator
from .metc import TerminationState, distributions, objective_dissimilarity, total_dissimilarity

# Rounding used when deciding two solutions share an objective pair.
OBJECTIVE_DECIMALS = 9


@dataclass(eq=False)
class Solution:
    mask: np.ndarray
    fitness: object = None

    def __post_init__(self):
        mask = np.array(self.mask, dtype=bool)
        mask.setflags(write=False)
        self.mask = mask

    @property
    def n_selected(self):
        return int(self.mask.sum())

    @property
    def features(self):
        return np.flatnonzero(self.mask)


@dataclass(eq=False)
class Population:
    members: list = field(default_factory=list)
    generation: int = 0

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i):
        return self.members[i]

    def objectives(self):
        return np.array([s.fitness.objectives for s in self.members], dtype=np.float64).reshape(-1, 2)


def _as_rng(rng):
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


def _repair(mask, rng):
    if not mask.any():
        mask = mask.copy()
        mask[rng.integers(mask.shape[0])] = True
    return mask


def random_solution(n_features, rng):
    mask = rng.random(n_features) < 0.5
    return Solution(_repair(mask, rng))


def initialize(P, N, seed):
    """``P`` random masks over ``N`` features, each bit a fair coin, none empty."""
    if P < 2 or N < 1:
        raise ValueError("need P >= 2 and N >= 1")
    rng = _as_rng(seed)
    return Population([random_solution(N, rng) for _ in range(P)], generation=0)


def evaluate_population(pop, evaluator):
    for sol in pop:
        if sol.fitness is None:
            sol.fitness = evaluator(sol.mask)
    return pop


def clone_counts(distances, clone_budget):
    """Copies per solution, proportional to crowding distance, at least one each.

    Infinite (boundary) distances count as the largest finite distance plus
    one; if every distance is zero the budget is split evenly.
    """
    d = np.asarray(distances, dtype=np.float64).copy()
    finite = np.isfinite(d)
    top = d[finite].max() if finite.any() else 0.0
    d[~finite] = top + 1.0
    total = d.sum()
    if total <= 0:
        d = np.ones_like(d)
        total = d.sum()
    return np.maximum(1, np.rint(clone_budget * d / total).astype(np.int64))


def clone_proportional(pop, clone_budget):
    if len(pop) == 0:
        raise ValueError("cannot clone an empty population")
    counts = clone_counts(kernels.crowding_distance(pop.objectives()), clone_budget)
    clones = [Solution(sol.mask, sol.fitness) for sol, c in zip(pop, counts) for _ in range(c)]
    return Population(clones, pop.generation)


def mutation_probabilities(mask, R):
    return kernels.mutation_probabilities(np.ascontiguousarray(mask, dtype=np.uint8), R)


def adaptive_mutation(sol, R, rng):
    """Flip each bit whose correlation-driven probability beats a uniform draw.

    Probabilities all come from the mask as it stood on entry. An emptied
    mask is repaired with one random bit.
    """
    rng = _as_rng(rng)
    mp = mutation_probabilities(sol.mask, R)
    flips = mp > rng.random(mp.shape[0])
    if not flips.any():
        return sol
    return Solution(_repair(sol.mask ^ flips, rng))


def _objective_key(sol):
    return tuple(round(v, OBJECTIVE_DECIMALS) for v in sol.fitness.objectives)


def dedupe_keep_best_auc(pool):
    """Keep one solution per objective pair: highest AUC, then fewest features, then first."""
    members = list(pool)
    best = {}
    for i, sol in enumerate(members):
        key = _objective_key(sol)
        rank = (-sol.fitness.auc, sol.n_selected, i)
        if key not in best or rank < best[key][0]:
            best[key] = (rank, i)
    keep = sorted(i for _, i in best.values())
    return Population([members[i] for i in keep], getattr(pool, "generation", 0))


def nondominated_sort_auc(pool, P):
    """Select ``P`` solutions by front rank; the cut front is thinned by crowding, then AUC."""
    members = list(pool)
    if len(members) < P:
        raise ValueError("pool smaller than target size")
    obj = np.array([s.fitness.objectives for s in members], dtype=np.float64).reshape(-1, 2)
    ranks = kernels.front_ranks(obj)
    chosen = []
    for r in range(int(ranks.max()) + 1 if len(members) else 0):
        front = np.flatnonzero(ranks == r)
        if len(chosen) + front.size <= P:
            chosen.extend(front.tolist())
            continue
        crowd = kernels.crowding_distance(obj[front])
        order = sorted(range(front.size), key=lambda t: (-crowd[t], -members[front[t]].fitness.auc, front[t]))
        chosen.extend(int(front[t]) for t in order[: P - len(chosen)])
        break
    chosen.sort()
    return Population([members[i] for i in chosen], getattr(pool, "generation", 0))


def pareto_front(pop):
    """Members of front 0, in population order."""
    ranks = kernels.front_ranks(pop.objectives())
    return [sol for sol, r in zip(pop, ranks) if r == 0]


def _substream(seed, generation, round_, index):
    return np.random.default_rng([seed, generation, round_, index])


def evolve(data, cfg, evaluator=None, mutation=adaptive_mutation):
    """Run phase one and return one snapshot per generation, initial included.

    The last snapshot has ``stop`` set when the termination criterion fired;
    otherwise the generation cap ended the run.
    """
    if evaluator is None:
        folds = stratified_folds(data, cfg.cv_folds, cfg.effective_fold_seed)
        evaluator = MaskEvaluator(data, folds, cfg.gamma, cfg.ridge)
    R = np.ascontiguousarray(correlation_matrix(data))
    rng = np.random.default_rng(cfg.seed)
    P = cfg.population_size
    budget = cfg.effective_clone_budget
    measure = total_dissimilarity if cfg.termination_mode == "metc" else objective_dissimilarity

    pop = evaluate_population(initialize(P, data.n_features, rng), evaluator)
    snapshots = [distributions(pop, cfg.n_b)]
    state = TerminationState(cfg.n_s, cfg.n_p)

    for gen in range(1, cfg.max_generations + 1):
        pool = pop
        for round_ in range(cfg.max_refill_rounds + 1):
            clones = clone_proportional(pool, budget)
            mutated = Population(
                [mutation(c, R, _substream(cfg.seed, gen, round_, i)) for i, c in enumerate(clones)]
            )
            evaluate_population(mutated, evaluator)
            pool = dedupe_keep_best_auc(Population(pool.members + mutated.members))
            if len(pool) >= P:
                break
        if len(pool) < P:
            pad = Population([random_solution(data.n_features, rng) for _ in range(P - len(pool))])
            pool = Population(pool.members + evaluate_population(pad, evaluator).members)
        pop = nondominated_sort_auc(pool, P)
        pop.generation = gen

        snap = distributions(pop, cfg.n_b)
        prev = snapshots[-1]
        snap.objective_dissimilarity = objective_dissimilarity(prev, snap)
        snap.dissimilarity_to_prev = measure(prev, snap)
        snap.stop = state.push(snap.dissimilarity_to_prev)
        snapshots.append(snap)
        if snap.stop:
            break
    return snapshots
