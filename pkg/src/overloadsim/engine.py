"""Simulation state and the synchronous step/run loop.

Each step freezes the time-t positions, produces one document pool from
them, lets every free agent curate/consume/update against that same pool,
then advances time. All randomness comes from counter-derived streams keyed
by (seed, step, agent), so results are independent of evaluation order.
"""
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import backend
from .config import SimConfig
from .core import build_population, consume_seeds_for_step, produce_documents
from .metrics import StepTrace, has_converged, polarization_Q


@dataclass
class SimState:
    """Positions plus bookkeeping at a single time step.

    Rows 0..n_free-1 are free agents, the rest committed. `kinds` holds the
    per-agent consumer kind (0 biased, 1 uniform).
    """

    time: int
    positions: np.ndarray
    committed: np.ndarray
    kinds: np.ndarray

    @property
    def n_agents(self) -> int:
        return self.positions.shape[0]

    @property
    def free_positions(self) -> np.ndarray:
        return self.positions[~self.committed]


def initialize(cfg: SimConfig) -> SimState:
    pop = build_population(cfg)
    return SimState(
        time=0,
        positions=pop.positions,
        committed=pop.committed,
        kinds=pop.kinds,
    )


def step(state: SimState, cfg: SimConfig) -> tuple[SimState, StepTrace]:
    """Advance one synchronous step and report its metrics.

    The trace's `t` is the new time (the first step yields t=1).
    """
    n = state.n_agents
    dims = cfg.dims
    pool = produce_documents(state.positions, cfg, state.time)
    cseeds = consume_seeds_for_step(cfg, state.time, n)

    out = np.empty((n, dims), dtype=np.float64)
    consumed = np.zeros(n, dtype=np.int64)
    curated = np.zeros(n, dtype=np.int64)
    backend.step_kernel(
        state.positions,
        state.committed.view(np.uint8),
        state.kinds,
        pool.positions,
        cfg.visibility_radius,
        cfg.capacity_k,
        cfg.alpha,
        cfg.epsilon_influence,
        cseeds,
        out,
        consumed,
        curated,
    )

    free = ~state.committed
    free_new = out[free]
    norms = np.sqrt((free_new * free_new).sum(axis=1))
    # unit-ball preservation: the update is a convex combination of points
    # in the ball, so drift past 1 means a kernel bug
    assert norms.size == 0 or norms.max() <= 1.0 + 1e-9

    diff = out - state.positions
    deltas = np.sqrt((diff * diff).sum(axis=1))
    max_delta = float(deltas.max()) if n else 0.0

    q, centroids = polarization_Q(free_new)
    mean_ext = float(norms.mean()) if norms.size else 0.0
    # exact integer ratio so full-visibility coverage equals k/N to the bit
    total_consumed = int(consumed[free].sum())
    coverage = total_consumed / (int(free.sum()) * pool.size) if norms.size else 0.0

    trace = StepTrace(
        t=state.time + 1,
        Q=q,
        mean_extremity=mean_ext,
        mean_coverage=coverage,
        max_delta=max_delta,
        cluster_centroids=centroids,
    )
    new_state = SimState(
        time=state.time + 1,
        positions=out,
        committed=state.committed,
        kinds=state.kinds,
    )
    return new_state, trace


SnapshotHook = Callable[[int, SimState], None]


def run(
    state: SimState,
    cfg: SimConfig,
    snapshot_hook: Optional[SnapshotHook] = None,
) -> tuple[SimState, list[StepTrace], bool, int]:
    """Iterate steps until t_max, or until max_delta stays under conv_tol
    for conv_window consecutive steps.

    snapshot_hook(t, state) fires on the initial state, every
    snapshot_every steps, and the final state (no duplicates).
    """
    traces: list[StepTrace] = []
    last_snap = -1

    def snap(s: SimState) -> None:
        nonlocal last_snap
        if snapshot_hook is not None and s.time != last_snap:
            snapshot_hook(s.time, s)
            last_snap = s.time

    snap(state)
    converged = False
    while state.time < cfg.t_max:
        state, trace = step(state, cfg)
        traces.append(trace)
        if state.time % cfg.snapshot_every == 0:
            snap(state)
        if has_converged(traces, cfg.conv_tol, cfg.conv_window):
            converged = True
            break
    snap(state)
    return state, traces, converged, len(traces)
