"""Backend selection for the hot kernels.

The compiled extension is used when it imports; otherwise the numpy
fallback is used. Set ``MOFS_PURE_PYTHON=1`` to force the fallback.
"""

import importlib
import os

__all__ = [
    "BACKEND",
    "auc_mann_whitney",
    "crowding_distance",
    "front_ranks",
    "get_backend",
    "kernel_ridge_scores",
    "mutation_probabilities",
    "rbf_gram",
    "zscore_stats",
]


def get_backend(name):
    """Return the kernel module for ``"cython"`` or ``"python"``."""
    if name == "cython":
        return importlib.import_module("mofs._ckernels")
    if name == "python":
        return importlib.import_module("mofs._pykernels")
    raise ValueError(f"unknown kernel backend {name!r}")


def _select():
    if os.environ.get("MOFS_PURE_PYTHON", "") not in ("", "0"):
        return "python", get_backend("python")
    try:
        return "cython", get_backend("cython")
    except ImportError:
        return "python", get_backend("python")


BACKEND, _impl = _select()

auc_mann_whitney = _impl.auc_mann_whitney
crowding_distance = _impl.crowding_distance
front_ranks = _impl.front_ranks
kernel_ridge_scores = _impl.kernel_ridge_scores
mutation_probabilities = _impl.mutation_probabilities
rbf_gram = _impl.rbf_gram
zscore_stats = _impl.zscore_stats
