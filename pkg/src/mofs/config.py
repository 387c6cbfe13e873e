"""Run configuration and its validation."""

import json
import math
from dataclasses import asdict, dataclass, fields


class ConfigError(ValueError):
    """Raised for an invalid or unreadable configuration."""


@dataclass(frozen=True)
class Config:
    population_size: int = 100
    clone_budget: int | None = None  # None: population_size
    n_b: int = 4
    n_s: int = 2
    n_p: int = 2
    termination_mode: str = "metc"
    max_generations: int = 500
    max_refill_rounds: int = 10
    smoler_weights: tuple = (0.3, 0.3, 0.2, 0.2)
    smoler_N: int = 5
    cv_folds: int = 2
    gamma: float | None = None  # None: 1 / selected feature count
    ridge: float = 1.0
    seed: int = 0
    fold_seed: int | None = None  # None: seed

    def __post_init__(self):
        object.__setattr__(self, "smoler_weights", tuple(float(w) for w in self.smoler_weights))
        self.validate()

    @property
    def effective_clone_budget(self):
        return self.population_size if self.clone_budget is None else self.clone_budget

    @property
    def effective_fold_seed(self):
        return self.seed if self.fold_seed is None else self.fold_seed

    def validate(self):
        def need(ok, msg):
            if not ok:
                raise ConfigError(msg)

        for name in ("population_size", "n_b", "n_s", "n_p", "max_generations",
                     "max_refill_rounds", "smoler_N", "cv_folds", "seed"):
            value = getattr(self, name)
            need(isinstance(value, int) and not isinstance(value, bool), f"{name} must be an integer")
        need(self.population_size >= 2, "population_size must be at least 2")
        need(self.clone_budget is None or (isinstance(self.clone_budget, int)
                                           and self.clone_budget >= self.population_size),
             "clone_budget must be an integer >= population_size")
        need(self.n_b >= 2, "n_b must be at least 2")
        need(self.n_s >= 1, "n_s must be at least 1")
        need(self.n_p >= 0, "n_p must be non-negative")
        need(self.termination_mode in ("metc", "etc"), "termination_mode must be 'metc' or 'etc'")
        need(self.max_generations >= 0, "max_generations must be non-negative")
        need(self.max_refill_rounds >= 0, "max_refill_rounds must be non-negative")
        need(len(self.smoler_weights) == 4, "smoler_weights needs four entries")
        need(all(0.0 <= w <= 1.0 for w in self.smoler_weights), "smoler_weights must lie in [0, 1]")
        need(math.isclose(sum(self.smoler_weights), 1.0, abs_tol=1e-9), "smoler_weights must sum to 1")
        need(self.smoler_N >= 2, "smoler_N must be at least 2")
        need(self.cv_folds >= 2, "cv_folds must be at least 2")
        need(self.gamma is None or (isinstance(self.gamma, (int, float)) and self.gamma > 0),
             "gamma must be positive")
        need(isinstance(self.ridge, (int, float)) and self.ridge > 0, "ridge must be positive")
        need(self.seed >= 0, "seed must be non-negative")
        need(self.fold_seed is None or (isinstance(self.fold_seed, int) and self.fold_seed >= 0),
             "fold_seed must be a non-negative integer")

    def to_dict(self):
        d = asdict(self)
        d["smoler_weights"] = list(self.smoler_weights)
        return d

    @classmethod
    def from_dict(cls, d):
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(d) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        try:
            return cls(**d)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_json(cls, path):
        try:
            with open(path, encoding="utf-8") as fh:
                d = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(d, dict):
            raise ConfigError("config must be a JSON object")
        return cls.from_dict(d)

    def replace(self, **changes):
        d = self.to_dict()
        d.update(changes)
        return Config.from_dict(d)
