"""End-to-end feature selection runs, reports and selector sensitivity sweeps."""

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from .config import Config, ConfigError
from .dataset import DataError, stratified_folds
from .evaluator import ConfusionMatrix, Fitness, MaskEvaluator, fit_score, metrics
from .moea import evolve, pareto_front
from .smoler import utility_select

REPORT_KEYS = (
    "run_id",
    "seed",
    "config",
    "generations_run",
    "terminated_by",
    "dissimilarity_trace",
    "pareto_front",
    "selected",
    "confusion",
)
METRIC_KEYS = ("sensitivity", "specificity", "auc", "accuracy")
WEIGHT_SWEEP = (0.25, 0.30, 0.35, 0.40)
REFPOINT_SWEEP = tuple(range(5, 12))


@dataclass(eq=False)
class ParetoEntry:
    mask: np.ndarray
    fitness: Fitness
    utility: float = 0.0
    belief: list = field(default_factory=list)  # 4 x N belief degrees

    def to_dict(self):
        f = self.fitness
        return {
            "mask": "".join("1" if b else "0" for b in self.mask),
            "sen": f.sensitivity,
            "spe": f.specificity,
            "auc": f.auc,
            "acc": f.accuracy,
            "utility": self.utility,
            "belief": self.belief,
        }

    @classmethod
    def from_dict(cls, d):
        mask = np.array([c == "1" for c in d["mask"]], dtype=bool)
        fit = Fitness(d["sen"], d["spe"], d["auc"], d["acc"])
        return cls(mask, fit, d["utility"], d["belief"])


@dataclass(frozen=True)
class Selected:
    index: int
    utility: float
    feature_indices: tuple
    metrics: Fitness
    evaluated_on: str  # "test" or "cv"


@dataclass(eq=False)
class RunResult:
    run_id: str
    seed: int
    config: Config
    generations_run: int
    terminated_by: str
    dissimilarity_trace: list
    pareto_front: list
    selected: Selected
    confusion: ConfusionMatrix
    snapshots: list = field(default=None, repr=False)

    @property
    def selected_mask(self):
        return self.pareto_front[self.selected.index].mask

    def to_dict(self):
        s = self.selected
        return {
            "run_id": self.run_id,
            "seed": self.seed,
            "config": self.config.to_dict(),
            "generations_run": self.generations_run,
            "terminated_by": self.terminated_by,
            "dissimilarity_trace": list(self.dissimilarity_trace),
            "pareto_front": [e.to_dict() for e in self.pareto_front],
            "selected": {
                "index": s.index,
                "utility": s.utility,
                "feature_indices": list(s.feature_indices),
                "metrics": {k: getattr(s.metrics, k) for k in METRIC_KEYS},
                "evaluated_on": s.evaluated_on,
            },
            "confusion": {k: getattr(self.confusion, k) for k in ("tp", "fp", "tn", "fn")},
        }

    @classmethod
    def from_dict(cls, d):
        s = d["selected"]
        selected = Selected(
            s["index"],
            s["utility"],
            tuple(s["feature_indices"]),
            Fitness(**s["metrics"]),
            s["evaluated_on"],
        )
        return cls(
            run_id=d["run_id"],
            seed=d["seed"],
            config=Config.from_dict(d["config"]),
            generations_run=d["generations_run"],
            terminated_by=d["terminated_by"],
            dissimilarity_trace=list(d["dissimilarity_trace"]),
            pareto_front=[ParetoEntry.from_dict(e) for e in d["pareto_front"]],
            selected=selected,
            confusion=ConfusionMatrix(**d["confusion"]),
        )


def _digest(*parts):
    h = hashlib.sha256()
    for p in parts:
        h.update(p if isinstance(p, bytes) else str(p).encode())
        h.update(b"\x00")
    return h.hexdigest()[:16]


def _data_bytes(data):
    if data is None:
        return b""
    return data.X.tobytes() + data.y.tobytes() + "\x1f".join(data.feature_names).encode()


def make_run_id(data, test, cfg):
    return _digest(_data_bytes(data), _data_bytes(test), json.dumps(cfg.to_dict(), sort_keys=True))


def run_pipeline(data, test=None, cfg=None):
    """Evolve, extract the Pareto front, select one solution, and score it.

    The selected mask is scored on ``test`` after training on all of
    ``data`` when a test set is given, otherwise by pooled cross-validation.
    """
    cfg = cfg or Config()
    if test is not None and tuple(test.feature_names) != tuple(data.feature_names):
        raise DataError("test set has different feature columns")
    folds = stratified_folds(data, cfg.cv_folds, cfg.effective_fold_seed)
    evaluator = MaskEvaluator(data, folds, cfg.gamma, cfg.ridge)
    snapshots = evolve(data, cfg, evaluator=evaluator)
    final = snapshots[-1]
    front = pareto_front(final.population)
    choice = utility_select(front, cfg.smoler_weights, cfg.smoler_N)
    entries = [
        ParetoEntry(sol.mask, sol.fitness, float(choice.utilities[k]), choice.beliefs[k].tolist())
        for k, sol in enumerate(front)
    ]
    mask = front[choice.index].mask
    if test is not None:
        scores = fit_score(data, test, mask, cfg.gamma, cfg.ridge)
        fit, cm = metrics(scores, test.y)
        where = "test"
    else:
        fit, cm = metrics(*evaluator.pooled_scores(mask))
        where = "cv"
    selected = Selected(choice.index, choice.utility, tuple(int(i) for i in np.flatnonzero(mask)), fit, where)
    trace = [s.dissimilarity_to_prev for s in snapshots[1:]]
    return RunResult(
        run_id=make_run_id(data, test, cfg),
        seed=cfg.seed,
        config=cfg,
        generations_run=len(trace),
        terminated_by="metc" if final.stop else "cap",
        dissimilarity_trace=trace,
        pareto_front=entries,
        selected=selected,
        confusion=cm,
        snapshots=snapshots,
    )


def run_repeats(data, test, cfg, repeats):
    """``repeats`` independent runs with seeds ``cfg.seed, cfg.seed + 1, ...``."""
    if repeats < 1:
        raise ConfigError("repeats must be at least 1")
    return [run_pipeline(data, test, cfg.replace(seed=cfg.seed + r)) for r in range(repeats)]


def aggregate(results):
    """Mean and population standard deviation of the selected metrics over runs."""
    out = {}
    for key in METRIC_KEYS:
        values = np.array([getattr(r.selected.metrics, key) for r in results])
        out[key] = {"mean": float(values.mean()), "std": float(values.std())}
    sizes = np.array([len(r.selected.feature_indices) for r in results], dtype=float)
    out["n_features"] = {"mean": float(sizes.mean()), "std": float(sizes.std())}
    return out


def dumps(doc):
    return json.dumps(doc, indent=2) + "\n"


def emit_report(result, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(result.to_dict()))


def load_report(path):
    with open(path, encoding="utf-8") as fh:
        return RunResult.from_dict(json.load(fh))


def sweep_settings(param, cfg):
    """(label, weights, N) for every setting of a selector sensitivity sweep."""
    if param == "weights":
        return [(w, (w, w, (1 - 2 * w) / 2, (1 - 2 * w) / 2), cfg.smoler_N) for w in WEIGHT_SWEEP]
    if param == "refpoints":
        return [(n, cfg.smoler_weights, n) for n in REFPOINT_SWEEP]
    raise ConfigError(f"unknown sweep parameter {param!r}")


def sweep_front(front, param, cfg):
    """Re-run the selector over one fixed Pareto set for every sweep setting."""
    rows = []
    for label, weights, n in sweep_settings(param, cfg):
        choice = utility_select(front, weights, n)
        fit = front[choice.index].fitness
        rows.append(
            {
                "setting": label,
                "weights": list(weights),
                "N": n,
                "index": choice.index,
                "utility": choice.utility,
                "feature_indices": [int(i) for i in np.flatnonzero(front[choice.index].mask)],
                **{k: getattr(fit, k) for k in METRIC_KEYS},
            }
        )
    return rows


def sweep(data, cfg, param):
    """Evolve once, then vary only the selector's weights or reference count."""
    sweep_settings(param, cfg)
    snapshots = evolve(data, cfg)
    front = pareto_front(snapshots[-1].population)
    return sweep_front(front, param, cfg)
