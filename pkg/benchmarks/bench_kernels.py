"""Time the numba kernels against the pure-numpy fallback.

Run with the default backend (numba) to see both paths; with
RAWSIM_BACKEND=numpy both columns measure the same implementation.
"""

import time

import numpy as np

from rawsim import kernels


def bench(label, fn, *args, repeat=5):
    fn(*args)  # warmup / jit compile
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn(*args)
    dt = (time.perf_counter() - t0) / repeat
    print(f"{label:40s} {dt * 1e3:10.2f} ms")
    return dt


def main():
    print(f"selected backend: {kernels.BACKEND}")
    rng = np.random.default_rng(0)

    n = 4000
    xs = rng.uniform(0, 1000, n)
    ys = rng.uniform(0, 1000, n)
    t_fast = bench(f"adjacency n={n} ({kernels.BACKEND})", kernels.adjacency_csr, xs, ys, 250.0)
    t_np = bench(f"adjacency n={n} (numpy)", kernels.adjacency_csr_numpy, xs, ys, 250.0)
    print(f"speedup: {t_np / t_fast:.2f}x\n")

    phases = rng.uniform(0, 10, 20000)
    times = np.arange(0.0, 2001.0)
    t_fast = bench(
        f"active_counts 20000x2001 ({kernels.BACKEND})",
        kernels.active_counts, phases, 10.0, 1.0, times,
    )
    t_np = bench(
        "active_counts 20000x2001 (numpy)",
        kernels.active_counts_numpy, phases, 10.0, 1.0, times,
    )
    print(f"speedup: {t_np / t_fast:.2f}x")


if __name__ == "__main__":
    main()
