"""Time each kernel on the compiled and the pure-Python backend.

    python benchmarks/bench_kernels.py [--repeat 3]

Both backends get identical inputs; the script also checks that they
return identical results before reporting the speedup.
"""

import argparse
import time

import numpy as np

from lincsp import greedy_maximal_hypergraph, kernels
from lincsp.generator import random_csp
from lincsp.rng import seed_state


def _resample_case():
    f = random_csp(3000, 9000, 6, 2, seed=1)
    a = f.arrays
    return (a.offsets, a.lvars, a.lvals, *a.incidence(), a.nv, f.d, seed_state(3), 10**6)


def _backtrack_case():
    f = random_csp(22, 70, 4, 2, seed=2)
    a = f.arrays
    return (a.offsets, a.lvars, a.lvals, a.nv, f.d, 10**7, True)


def _overlap_case():
    h = greedy_maximal_hypergraph(60, 5, 3, seed=5, backend="cython")
    return (np.ascontiguousarray(h.edges, dtype=np.int32), 60, 3)


CASES = {
    "rng_stream": lambda: (seed_state(7), 200_000, 1000),
    "resample": _resample_case,
    "backtrack": _backtrack_case,
    "greedy_packing": lambda: (22, 4, 3, seed_state(11), -1, 128, True),
    "find_overlap": _overlap_case,
}


def _same(a, b):
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    if isinstance(a, tuple):
        return len(a) == len(b) and all(_same(x, y) for x, y in zip(a, b))
    return a == b


def _best(fn, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--only", choices=sorted(CASES), action="append")
    args = p.parse_args(argv)
    if "cython" not in kernels.available():
        raise SystemExit("compiled kernels are not built; run pip install -e . first")

    print(f"{'kernel':<16}{'python s':>12}{'cython s':>12}{'speedup':>10}  same")
    for name in args.only or CASES:
        inputs = CASES[name]()
        t_py, out_py = _best(getattr(kernels.get("python"), name), inputs, args.repeat)
        t_cy, out_cy = _best(getattr(kernels.get("cython"), name), inputs, args.repeat)
        print(f"{name:<16}{t_py:>12.4f}{t_cy:>12.5f}{t_py / t_cy:>9.0f}x  {_same(out_py, out_cy)}")


if __name__ == "__main__":
    main()
