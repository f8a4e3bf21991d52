"""Deterministic (N, r) grid sweeps with replicates.

Every run's seed is derived from the cell's identity and the replicate
index, never from execution order, so any scheduling (serial, threaded,
reordered, or a subset of the grid) produces bitwise-identical rows.

Seed derivation (stable contract, same mixer as rng.mix64):

    cell_index(N, r) = mix64(uint64(N) XOR mix64(ieee754_bits(r)))
    seed             = mix64(base_seed XOR (cell_index * GOLDEN) XOR replicate)

with GOLDEN = 0x9e3779b97f4a7c15 (2^64 / golden ratio, odd).
"""
import math
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

from .config import SimConfig, SweepSpec, validate_config
from .engine import initialize, run
from .metrics import polarization_Q
from .rng import MASK64, derive_seed, mix64


def cell_index(n_docs: int, misinfo_ratio: float) -> int:
    """Stable 64-bit identity of a grid cell, independent of grid layout."""
    rbits = struct.unpack("<Q", struct.pack("<d", float(misinfo_ratio)))[0]
    return mix64((n_docs & MASK64) ^ mix64(rbits))


@dataclass(frozen=True)
class SweepRow:
    N: int
    r: float
    replicate: int
    seed: int
    Q_final: float
    mean_extremity_final: float
    steps_run: int
    converged: bool


@dataclass(frozen=True)
class AggregateRow:
    N: int
    r: float
    mean_Q: float
    stddev_Q: float
    mean_extremity: float
    n_replicates: int


def _cell_config(base: SimConfig, n: int, r: float, seed: int) -> SimConfig:
    return replace(base, n_docs=n, misinfo_ratio=r, seed=seed)


def _run_one(task: tuple) -> SweepRow:
    cfg, n, r, rep = task
    state = initialize(cfg)
    final, _traces, converged, steps_run = run(state, cfg)
    free = final.free_positions
    q, _ = polarization_Q(free)
    ext = float(((free * free).sum(axis=1) ** 0.5).mean()) if free.size else 0.0
    return SweepRow(
        N=n,
        r=r,
        replicate=rep,
        seed=cfg.seed,
        Q_final=q,
        mean_extremity_final=ext,
        steps_run=steps_run,
        converged=converged,
    )


def run_sweep(spec: SweepSpec, parallelism: int = 1) -> list[SweepRow]:
    """One run per (N, r, replicate), rows sorted by (N, r, replicate).

    Every cell is validated before any run starts; output is identical for
    any parallelism level.
    """
    if parallelism < 1:
        raise ValueError("parallelism must be >= 1")
    for n in spec.n_values:
        for r in spec.r_values:
            validate_config(_cell_config(spec.base, n, r, spec.base_seed))

    tasks = []
    for n in spec.n_values:
        for r in spec.r_values:
            cell = cell_index(n, r)
            for rep in range(spec.replicates):
                seed = derive_seed(spec.base_seed, cell, rep)
                tasks.append((_cell_config(spec.base, n, r, seed), n, r, rep))

    if parallelism == 1:
        return [_run_one(t) for t in tasks]
    with ThreadPoolExecutor(max_workers=parallelism) as pool:
        return list(pool.map(_run_one, tasks))


def aggregate(rows: list[SweepRow]) -> list[AggregateRow]:
    """Per-cell sample mean and sample stddev (n-1); one replicate -> 0."""
    cells: dict[tuple, list[SweepRow]] = {}
    for row in rows:
        cells.setdefault((row.N, row.r), []).append(row)
    out = []
    for (n, r), group in cells.items():
        qs = [g.Q_final for g in group]
        exts = [g.mean_extremity_final for g in group]
        cnt = len(qs)
        mean_q = sum(qs) / cnt
        mean_ext = sum(exts) / cnt
        if cnt > 1:
            var = sum((q - mean_q) ** 2 for q in qs) / (cnt - 1)
            std_q = math.sqrt(var)
        else:
            std_q = 0.0
        out.append(
            AggregateRow(
                N=n, r=r, mean_Q=mean_q, stddev_Q=std_q,
                mean_extremity=mean_ext, n_replicates=cnt,
            )
        )
    return out
