"""Time the numba kernels against the pure-numpy fallback and check they agree.

    python3 benchmarks/compare_backends.py --sizes 8 12 16 20 --repeat 3
"""
import argparse
import time

import numpy as np

from vulngraph import (
    HAVE_NUMBA, AnnealParams, build_dual, encode_mvc, random_vuln_graph, sample_annealing,
    solve_brute_force,
)


def best_of(fn, repeat):
    times, out = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[8, 12, 16, 20])
    ap.add_argument("--p", type=float, default=0.3334)
    ap.add_argument("--reads", type=int, default=100)
    ap.add_argument("--sweeps", type=int, default=1000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--brute-max", type=int, default=20, help="skip brute force above this size")
    args = ap.parse_args()

    if not HAVE_NUMBA:
        raise SystemExit("numba is not available (or VULNGRAPH_DISABLE_NUMBA is set)")

    params = AnnealParams(num_reads=args.reads, num_sweeps=args.sweeps, seed=1)
    # compile outside the timed region
    warm = encode_mvc(build_dual(random_vuln_graph(4, 4, 1.0, 0)))
    sample_annealing(warm, AnnealParams(num_reads=1, num_sweeps=2), backend="numba")
    solve_brute_force(warm, backend="numba")

    print(f"{'kernel':<8} {'n':>3} {'numba ms':>10} {'numpy ms':>10} {'speedup':>8}  agree")
    for n in args.sizes:
        q = encode_mvc(build_dual(random_vuln_graph(n, n, args.p, n)))
        t_jit, a = best_of(lambda: sample_annealing(q, params, backend="numba"), args.repeat)
        t_np, b = best_of(lambda: sample_annealing(q, params, backend="numpy"), args.repeat)
        print(f"{'anneal':<8} {n:>3} {t_jit * 1e3:>10.1f} {t_np * 1e3:>10.1f} "
              f"{t_np / t_jit:>7.1f}x  {a == b}")
        if n > args.brute_max:
            continue
        t_jit, a = best_of(lambda: solve_brute_force(q, backend="numba"), args.repeat)
        t_np, b = best_of(lambda: solve_brute_force(q, backend="numpy"), args.repeat)
        same = np.array_equal(a[0], b[0]) and a[1] == b[1]
        print(f"{'brute':<8} {n:>3} {t_jit * 1e3:>10.1f} {t_np * 1e3:>10.1f} "
              f"{t_np / t_jit:>7.1f}x  {same}")


if __name__ == "__main__":
    main()
