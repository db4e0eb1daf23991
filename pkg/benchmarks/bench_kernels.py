"""Compare the numba and numpy kernel paths on a batch of random states.

    python benchmarks/bench_kernels.py [--states N] [--repeat R]
"""

import argparse
import time

import numpy as np

from fts_entangle import _kernels as K
from fts_entangle import classifier as clf


def best_of(fn, arg, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(arg)
        times.append(time.perf_counter() - t0)
    return min(times)


def _as_tuple(x):
    return x if isinstance(x, tuple) else (x,)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--states", type=int, default=100_000)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    s = rng.standard_normal((args.states, 8)) + 1j * rng.standard_normal((args.states, 8))
    oracle_n = min(args.states, 20_000)

    rows = [("covariants (q, T, gammas)", K.covariants_numpy, K.covariants_numba if K.NUMBA_AVAILABLE else None, s)]
    rows.append(
        ("hyperdet oracle (4096 terms)", K.hyperdet_oracle_numpy,
         K.hyperdet_oracle_numba if K.NUMBA_AVAILABLE else None, s[:oracle_n])
    )
    if K.NUMBA_AVAILABLE:
        # compile outside the timed region
        K.covariants_numba(s[:2])
        K.hyperdet_oracle_numba(s[:2])

    print(f"backend available: {K.backend_name()}")
    print(f"{'kernel':32s} {'states':>8s} {'numpy s':>10s} {'numba s':>10s} {'speedup':>8s}")
    for name, np_fn, nb_fn, arg in rows:
        t_np = best_of(np_fn, arg, args.repeat)
        if nb_fn is None:
            print(f"{name:32s} {len(arg):8d} {t_np:10.4f} {'-':>10s} {'-':>8s}")
            continue
        t_nb = best_of(nb_fn, arg, args.repeat)
        for a, b in zip(_as_tuple(np_fn(arg[:100])), _as_tuple(nb_fn(arg[:100]))):
            assert np.allclose(a, b), f"{name}: backends disagree"
        print(f"{name:32s} {len(arg):8d} {t_np:10.4f} {t_nb:10.4f} {t_np / t_nb:8.1f}x")

    t0 = time.perf_counter()
    clf.classify_fts_batch(s)
    print(f"classify_fts_batch on {args.states} states (dispatching backend): {time.perf_counter() - t0:.3f} s")


if __name__ == "__main__":
    main()
