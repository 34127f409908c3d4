"""Compare the compiled and pure-Python kernels on realistic workloads.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
from __future__ import annotations

import argparse
import random
import statistics
import time

from hyperquot import _pykernels
from hyperquot.fock import ModelParams
from hyperquot.series import generator_degrees

try:
    from hyperquot import _kernels
except ImportError:  # extension not built
    _kernels = None


def workloads():
    rng = random.Random(0)
    params = ModelParams(3, 3, 2, bound=5)
    nc = params.ncolors
    seqs = [tuple(rng.randrange(3 * 3 * nc) for _ in range(rng.randint(2, 6))) for _ in range(20000)]
    degs, odd = generator_degrees(params)
    sizes = [(1, 2, 2), (2, 2, 1), (0, 3, 2)]

    def sort_job(mod):
        for s in seqs:
            mod.koszul_sort(s, nc, params.g)

    def enum_job(mod):
        for triple in sizes:
            layers = [mod.layer_cohdegs(degs, odd, k) for k in triple]
            mod.product_histogram(layers, 2 * params.r * sum(triple))

    return {"koszul_sort x20000": sort_job, "betti tally (n,r,g)=(3,3,2), d_n=5": enum_job}


def timeit(fn, mod, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(mod)
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"{'workload':40s} {'python [s]':>11s} {'cython [s]':>11s} {'speedup':>8s}")
    for name, job in workloads().items():
        py = timeit(job, _pykernels, args.repeat)
        if _kernels is None:
            print(f"{name:40s} {py:11.4f} {'n/a':>11s} {'n/a':>8s}")
            continue
        cy = timeit(job, _kernels, args.repeat)
        print(f"{name:40s} {py:11.4f} {cy:11.4f} {py / cy:7.1f}x")


if __name__ == "__main__":
    main()
