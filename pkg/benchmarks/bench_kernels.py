"""Time the compiled and pure-Python kernel backends on representative inputs.

Usage: python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from mofs.kernels import get_backend


def cases(rng):
    X = rng.normal(size=(200, 50))
    y = np.where(rng.random(100) < 0.5, 1.0, -1.0)
    feats = np.flatnonzero(rng.random(50) < 0.4)
    obj = rng.integers(0, 21, size=(80, 2)) / 20.0
    scores = rng.normal(size=200)
    labels = np.r_[1, 0, rng.integers(0, 2, 198)]
    R = np.abs(np.corrcoef(X.T))
    mask = rng.random(50) < 0.3
    return {
        "kernel_ridge_scores": lambda b: b.kernel_ridge_scores(X[:100], y, X[100:], feats, 1 / feats.size, 1.0),
        "front_ranks": lambda b: b.front_ranks(obj),
        "crowding_distance": lambda b: b.crowding_distance(obj),
        "auc_mann_whitney": lambda b: b.auc_mann_whitney(scores, labels),
        "mutation_probabilities": lambda b: b.mutation_probabilities(mask.astype(np.uint8), R),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    backends = {"python": get_backend("python")}
    try:
        backends["cython"] = get_backend("cython")
    except ImportError:
        print("compiled backend not built; timing the fallback only")

    print(f"{'kernel':<26}" + "".join(f"{name:>14}" for name in backends) + f"{'speedup':>10}")
    for name, fn in cases(np.random.default_rng(0)).items():
        times = {}
        for bname, backend in backends.items():
            timer = timeit.Timer(lambda: fn(backend))
            n, _ = timer.autorange()
            times[bname] = min(timer.repeat(args.repeat, n)) / n
        row = f"{name:<26}" + "".join(f"{t * 1e6:>12.1f}us" for t in times.values())
        if len(times) == 2:
            row += f"{times['python'] / times['cython']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
