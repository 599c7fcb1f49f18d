"""Time the numba kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 5]

The first numba call of each kernel is timed separately as compile/cache-load
time; the table reports the best of ``--repeat`` warm runs.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from nullfiliform import kernels
from nullfiliform.derive import linear_system
from nullfiliform.oracle import all_automorphisms, enumerate_structures, id_tensors, twelve_tensors


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    p = 7
    M = linear_system(6, "twelve_matching") % p
    yield "rref (n=6 twelve system, F_7)", (lambda: kernels.rref_mod_p_numba(M, p)), (lambda: kernels.rref_mod_p_numpy(M, p))

    n, p = 4, 7
    rows = enumerate_structures(n, "twelve_matching", 5)[:20000]
    S = twelve_tensors(rows)
    D = kernels.null_filiform_int(n)
    yield ("identity masks (20000 stars, n=4)", lambda: kernels._identity_masks_numba(S, D, 5),
           lambda: kernels._identity_masks_numpy(S, D, 5))

    As = all_automorphisms(n, p)
    Ms = kernels.auto_matrices(As, p)
    Minvs = kernels.lower_inverses(Ms, p)
    star = id_tensors(np.array([[0, 1, 3, 2]]))[0]
    yield ("transport batch (2058 autos, n=4)", lambda: kernels._transport_batch_numba(star, Ms, Minvs, p),
           lambda: kernels._transport_batch_numpy(star, Ms, Minvs, p))

    n, p = 5, 11
    a = id_tensors(np.array([[0, 1, 0, 1, 0]]))[0]
    b = id_tensors(np.array([[0, 2, 0, 1, 0]]))[0]  # not isomorphic: full scan
    yield ("isomorphism search, no witness (n=5, F_11)", lambda: kernels.find_isomorphism_numba(a, b, p),
           lambda: kernels.find_isomorphism_numpy(a, b, p))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if not kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed")
    print(f"{'kernel':45s} {'first call':>11s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s}")
    for name, fast, slow in cases():
        t0 = time.perf_counter()
        r1 = fast()
        first = time.perf_counter() - t0
        r2 = slow()
        if isinstance(r1, tuple):
            assert all(np.array_equal(x, y) for x, y in zip(r1, r2)), name
        else:
            assert np.array_equal(r1, r2), name
        tf, ts = best_of(fast, args.repeat), best_of(slow, args.repeat)
        print(f"{name:45s} {first:10.3f}s {tf:9.4f}s {ts:9.4f}s {ts / tf:7.1f}x")


if __name__ == "__main__":
    main()
