"""Compare the numba-jitted candidate-scan kernel against the pure-numpy
fallback across directory sizes.

Usage: python3 benchmarks/bench_scan.py [--dim 128] [--repeats 20]
"""
import argparse
import time

import numpy as np

from reunite.embedding.kernels import distances_numba, distances_numpy


def bench(fn, query, candidates, repeats):
    fn(query, candidates)  # warm up (jit compile / cache touch)
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(query, candidates)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--dim", type=int, default=128)
    parser.add_argument("--repeats", type=int, default=20)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    query = rng.standard_normal(args.dim)

    print(f"{'n_candidates':>12} {'numpy (us)':>12} {'numba (us)':>12} {'speedup':>8}")
    for n in (100, 1_000, 10_000, 100_000):
        candidates = rng.standard_normal((n, args.dim))
        t_np = bench(distances_numpy, query, candidates, args.repeats)
        if distances_numba is None:
            print(f"{n:>12} {t_np * 1e6:>12.1f} {'n/a':>12} {'n/a':>8}")
            continue
        t_nb = bench(distances_numba, query, candidates, args.repeats)
        out_np = distances_numpy(query, candidates)
        out_nb = distances_numba(query, candidates)
        assert np.allclose(out_np, out_nb, atol=1e-12)
        print(f"{n:>12} {t_np * 1e6:>12.1f} {t_nb * 1e6:>12.1f} {t_np / t_nb:>8.2f}")


if __name__ == "__main__":
    main()
