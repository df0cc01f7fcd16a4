"""Benchmark the compiled kernels against the pure-numpy fallback.

Checks agreement to 1e-12 on every kernel, then reports wall-clock timings.

Run:  python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from hjflow._kernels import _fallback

try:
    from hjflow._kernels import _core
except ImportError:
    _core = None


def timeit(fn, *args, repeat=20):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def check_agreement(name, a, b, atol=1e-12):
    err = float(np.max(np.abs(np.asarray(a) - np.asarray(b))))
    status = "ok" if err <= atol else "MISMATCH"
    print(f"  agreement {name}: max|diff| = {err:.3e}  [{status}]")
    if err > atol:
        raise SystemExit(f"backend mismatch in {name}")


def main():
    if _core is None:
        raise SystemExit("compiled core not available; build the package first")
    rng = np.random.default_rng(0)

    n = 8192
    v1 = rng.normal(size=n + 1)
    w = rng.uniform(size=257)
    w /= w.sum()
    v2 = np.ascontiguousarray(rng.normal(size=(513, 513)))
    w2 = rng.uniform(size=65)
    w2 /= w2.sum()
    k = 301
    offsets = rng.integers(-n // 8, n // 8, size=k).astype(np.int64)
    fracs = rng.uniform(0, 1, size=k)
    pens = rng.uniform(0, 1, size=k)
    pens[0] = 0.0
    k2 = 61
    ro = rng.integers(-64, 64, size=k2).astype(np.int64)
    co = rng.integers(-64, 64, size=k2).astype(np.int64)
    rf = rng.uniform(0, 1, size=k2)
    cf = rng.uniform(0, 1, size=k2)
    p2 = rng.uniform(0, 1, size=k2)
    p2[0] = 0.0

    cases = [
        ("conv1d (n=8193, window=257)", (v1, w)),
        ("conv_axis (513x513, window=65, axis=0)", (v2, w2, 0)),
        ("shift_interp_max_1d (n=8193, 301 shifts)", (v1, offsets, fracs, pens)),
        ("shift_interp_max_2d (513x513, 61 shifts)", (v2, ro, co, rf, cf, p2)),
    ]

    print("backend agreement")
    for name, args in cases:
        fn = name.split(" ")[0]
        check_agreement(name, getattr(_core, fn)(*args), getattr(_fallback, fn)(*args))

    print("\ntimings (best of 20)")
    print(f"{'kernel':44s} {'compiled':>10s} {'fallback':>10s} {'speedup':>8s}")
    for name, args in cases:
        fn = name.split(" ")[0]
        tc = timeit(getattr(_core, fn), *args)
        tf = timeit(getattr(_fallback, fn), *args)
        print(f"{name:44s} {tc*1e3:9.3f}ms {tf*1e3:9.3f}ms {tf/tc:7.1f}x")


if __name__ == "__main__":
    main()
