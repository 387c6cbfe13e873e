import hashlib

import numpy as np
import pytest

from mofs.dataset import Dataset, generate_synthetic
from mofs.evaluator import Fitness


@pytest.fixture
def toy_data():
    rng = np.random.default_rng(7)
    y = np.array([1] * 10 + [0] * 10)
    X = rng.standard_normal((20, 4))
    X[:, 0] += 2.0 * y
    return Dataset(X, y, ["a", "b", "c", "d"])


@pytest.fixture(scope="session")
def easy_synthetic():
    return generate_synthetic(120, 2, 2, 6, 3.0, 0.8, seed=3)


class HashEvaluator:
    """Deterministic stand-in evaluator: pseudo-random fitness keyed by the mask."""

    def __init__(self):
        self.calls = 0

    def __call__(self, mask):
        self.calls += 1
        digest = hashlib.sha256(np.packbits(np.asarray(mask, dtype=bool)).tobytes()).digest()
        u = np.frombuffer(digest[:24], dtype=np.uint64) / float(2**64)
        return Fitness(float(u[0]), float(u[1]), float(u[2]), float((u[0] + u[1]) / 2))


@pytest.fixture
def hash_evaluator():
    return HashEvaluator()


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
