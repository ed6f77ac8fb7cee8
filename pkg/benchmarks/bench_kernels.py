"""Compare the compiled kernels against the NumPy fallback.

Run with ``python benchmarks/bench_kernels.py [--repeat N]``. Each kernel is
timed on identical inputs for both backends; outputs are checked for exact
equality before timings are reported.
"""
import argparse
import timeit

import numpy as np

from mlcplan import _pykernels

try:
    from mlcplan import _ckernels
except ImportError:
    _ckernels = None


def cases(rng):
    X = rng.standard_normal((2000, 20))
    y = rng.integers(0, 3, 2000)
    order = np.argsort(X, axis=0, kind="stable")
    A = rng.standard_normal((500, 30))
    B = rng.standard_normal((800, 30))
    masks = rng.integers(0, 1 << 16, 400).tolist()
    return {
        "best_split 2000x20": lambda mod: mod.best_split(X, y, order, 3, 1),
        "pairwise euclidean 500x800x30": lambda mod: mod.pairwise_distances(A, B, 0),
        "pairwise manhattan 500x800x30": lambda mod: mod.pairwise_distances(A, B, 1),
        "subset_mismatch m=16 k=4": lambda mod: mod.subset_mismatch_counts(masks, 16, 4),
    }


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if _ckernels is None:
        print("compiled extension not built; only the fallback is available")
        return
    rng = np.random.default_rng(0)
    print(f"{'kernel':<32}{'python ms':>12}{'cython ms':>12}{'speedup':>10}")
    for name, call in cases(rng).items():
        if not same(call(_pykernels), call(_ckernels)):
            raise SystemExit(f"{name}: backends disagree")
        t_py = min(timeit.repeat(lambda: call(_pykernels), number=1, repeat=args.repeat)) * 1e3
        t_c = min(timeit.repeat(lambda: call(_ckernels), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<32}{t_py:>12.2f}{t_c:>12.2f}{t_py / t_c:>10.1f}x")


if __name__ == "__main__":
    main()
