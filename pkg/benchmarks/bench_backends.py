"""Time the compiled and pure-numpy step kernels on identical inputs.

Usage: python3 benchmarks/bench_backends.py
"""
import time

import numpy as np

from dataclasses import replace

from overloadsim import _kernels_py
from overloadsim.config import UNIFORM, SimConfig
from overloadsim.core import build_population, consume_seeds_for_step, produce_documents

try:
    from overloadsim import _kernels
except ImportError:
    _kernels = None


def bench(kernel, cfg, steps=40):
    pop = build_population(cfg)
    positions = pop.positions.copy()
    n, dims = positions.shape
    out = np.empty_like(positions)
    consumed = np.zeros(n, dtype=np.int64)
    curated = np.zeros(n, dtype=np.int64)
    t0 = time.perf_counter()
    for t in range(steps):
        pool = produce_documents(positions, cfg, t)
        cseeds = consume_seeds_for_step(cfg, t, n)
        kernel.step_kernel(
            positions, pop.committed.view(np.uint8), pop.kinds, pool.positions,
            cfg.visibility_radius, cfg.capacity_k, cfg.alpha,
            cfg.epsilon_influence, cseeds, out, consumed, curated,
        )
        positions, out = out, positions
    elapsed = time.perf_counter() - t0
    return elapsed / steps, positions


def main():
    cases = [
        ("defaults (K=1, N=1600)", SimConfig()),
        ("K=2, N=6400", replace(SimConfig(), dims=2, n_docs=6400)),
        ("uniform consumers", replace(SimConfig(), consumer_kind=UNIFORM)),
    ]
    print(f"{'case':<24} {'python ms/step':>15} {'compiled ms/step':>17} {'speedup':>8}")
    for name, cfg in cases:
        t_py, pos_py = bench(_kernels_py, cfg)
        if _kernels is None:
            print(f"{name:<24} {t_py * 1e3:>15.2f} {'n/a':>17} {'n/a':>8}")
            continue
        t_c, pos_c = bench(_kernels, cfg)
        same = np.array_equal(pos_py, pos_c)
        print(
            f"{name:<24} {t_py * 1e3:>15.2f} {t_c * 1e3:>17.2f} "
            f"{t_py / t_c:>7.1f}x  bitwise={'yes' if same else 'NO'}"
        )


if __name__ == "__main__":
    main()
