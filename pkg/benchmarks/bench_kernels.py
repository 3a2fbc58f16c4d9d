"""Compare the numba and numpy kernels on batch canonicalization.

    python benchmarks/bench_kernels.py [--batch 10000] [--degree 64] [--repeat 3]
"""

import argparse
import time

import numpy as np

from fundom import _kernels
from fundom.actions import Plain, dihedral, symmetric
from fundom.project import Projector


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--batch", type=int, default=10_000)
    ap.add_argument("--degree", type=int, default=64)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    X = np.random.default_rng(0).standard_normal((args.batch, args.degree))
    eps = np.arange(1, args.degree + 1) / (2 * args.degree)
    for name, group in (("dihedral", dihedral(args.degree)), ("symmetric", symmetric(args.degree))):
        P = Projector(Plain(group))
        arrays = P.chain.kernel_arrays()
        hats = _kernels.rank_batch_numpy(X, eps)
        if _kernels.HAVE_NUMBA:  # compile outside the timed region
            _kernels.rank_batch_numba(X[:1], eps)
            _kernels.phi_batch_numba(hats[:1], *arrays, False)
        rows = [("rank", lambda: _kernels.rank_batch_numpy(X, eps),
                 lambda: _kernels.rank_batch_numba(X, eps)),
                ("phi", lambda: _kernels.phi_batch_numpy(hats, *arrays, False),
                 lambda: _kernels.phi_batch_numba(hats, *arrays, False))]
        for kernel, f_np, f_nb in rows:
            t_np, out_np = best_of(f_np, args.repeat)
            line = f"{name:9s} {kernel:4s} numpy {t_np * 1e3:8.1f} ms"
            if _kernels.HAVE_NUMBA:
                t_nb, out_nb = best_of(f_nb, args.repeat)
                same = np.array_equal(out_np, out_nb)
                line += f"  numba {t_nb * 1e3:8.1f} ms  speedup {t_np / t_nb:5.1f}x  equal={same}"
            print(line)
        t, _ = best_of(lambda: P.project_batch(X, "asc"), args.repeat)
        print(f"{name:9s} end-to-end project_batch ({'numba' if _kernels.USE_NUMBA else 'numpy'}) {t * 1e3:.1f} ms")


if __name__ == "__main__":
    main()
