"""Benchmark of the compiled kernels against the pure-numpy fallback."""

import time

import numpy as np

from uqdbench import _kernels_py


def _time(fn, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def run_benchmark(size=200_000):
    try:
        from uqdbench import _kernels
    except ImportError:
        _kernels = None

    ids = np.arange(1, size + 1, dtype=np.uint64)
    words = _kernels_py.philox_blocks(1, 2, 0, size)
    units = _kernels_py.u64_to_unit(words)
    angles = (units[: (size // 8) * 8].reshape(-1, 8) * 2.0 - 1.0) * np.pi
    lengths = np.full(8, 1.0 / 8.0)
    samples = units[: (size // 32) * 32].reshape(-1, 32)

    cases = [
        ("philox_many (1 block/stream)", lambda k: k.philox_many(42, ids, 1)),
        ("gauss_from_unit", lambda k: k.gauss_from_unit(units)),
        ("fk_xy (8 joints)", lambda k: k.fk_xy(lengths, angles)),
        ("seq_mean_var (32 samples)", lambda k: k.seq_mean_var(samples)),
    ]

    print(f"kernel benchmark, {size} elements per call (best of 5)")
    print(f"{'kernel':<32}{'numpy':>12}{'compiled':>12}{'speedup':>10}")
    for name, fn in cases:
        t_py = _time(lambda: fn(_kernels_py))
        if _kernels is None:
            print(f"{name:<32}{t_py * 1e3:>10.2f}ms{'-':>12}{'-':>10}")
            continue
        t_c = _time(lambda: fn(_kernels))
        print(f"{name:<32}{t_py * 1e3:>10.2f}ms{t_c * 1e3:>10.2f}ms"
              f"{t_py / t_c:>9.1f}x")
    if _kernels is None:
        print("compiled backend not built; showing numpy timings only")
