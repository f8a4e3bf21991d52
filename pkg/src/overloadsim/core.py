"""Model core: geometry, population setup, document production, and the
reference per-agent consumption/update semantics.

Positions live in the K-dimensional unit ball. Each step every free agent
produces content at its own position; a committed agent contributes fixed
extreme content instead and never moves. Per agent, the visible pool is
radius-filtered, capacity k is filled either with the k nearest documents
(biased) or k uniform draws (uniform), and the belief moves toward the
norm-weighted mean of what was consumed.

The functions here are the readable single-agent reference; the engine
runs the same arithmetic through vectorized/compiled kernels that must
match these bit for bit (see tests).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import SimConfig
from .rng import (
    child,
    child_array,
    consume_stream_base,
    init_stream,
    pool_stream,
    uniform01,
)


def norm(v: np.ndarray) -> float:
    """Euclidean norm, dims accumulated in index order."""
    acc = 0.0
    for x in v:
        acc += float(x) * float(x)
    return math.sqrt(acc)


def distance(a: np.ndarray, b: np.ndarray) -> float:
    acc = 0.0
    for d in range(len(a)):
        diff = float(a[d]) - float(b[d])
        acc += diff * diff
    return math.sqrt(acc)


def clamp_to_unit_ball(v: np.ndarray) -> np.ndarray:
    """Rescale onto the unit ball; idempotent in floating point.

    Rescales repeatedly until the rounded norm is <= 1, so a second
    application never moves the result.
    """
    out = np.asarray(v, dtype=np.float64).copy()
    n = norm(out)
    while n > 1.0:
        out = out / n
        n = norm(out)
    return out


def round_half_up(x: float) -> int:
    """Round with .5 going up: round_half_up(1.5) = 2, round_half_up(-0.5) = 0."""
    return int(math.floor(x + 0.5))


def misinfo_count(misinfo_ratio: float, genuine_base: int) -> int:
    return round_half_up(misinfo_ratio * genuine_base)


# ---------------------------------------------------------------------------
# Population


KIND_BIASED = 0
KIND_UNIFORM = 1


@dataclass
class Population:
    """Agent arrays. Rows 0..n_free-1 are free agents; committed rows follow."""

    positions: np.ndarray  # (n_agents, dims) float64
    committed: np.ndarray  # (n_agents,) bool
    kinds: np.ndarray  # (n_agents,) int8; meaningful for free agents only


def _free_positions(cfg: SimConfig) -> np.ndarray:
    """Uniform draws from the ball of radius init_spread, one RNG path.

    K = 1 uses one uniform per agent (x = spread * (2u - 1)). K >= 2 uses
    a normalized Gaussian direction (Box-Muller, cosine branch, two
    uniforms per coordinate) and radius spread * u^(1/K).
    """
    n_free, k = cfg.n_free, cfg.dims
    seed = init_stream(cfg.seed)
    if n_free == 0:
        return np.zeros((0, k), dtype=np.float64)
    if k == 1:
        u = uniform01(child_array(seed, np.arange(n_free, dtype=np.uint64)))
        return (cfg.init_spread * (2.0 * u - 1.0)).reshape(n_free, 1)
    draws = 2 * k + 1
    u = uniform01(child_array(seed, np.arange(n_free * draws, dtype=np.uint64)))
    u = u.reshape(n_free, draws)
    gauss = np.empty((n_free, k), dtype=np.float64)
    for d in range(k):
        r = np.sqrt(-2.0 * np.log1p(-u[:, 2 * d]))
        gauss[:, d] = r * np.cos(2.0 * np.pi * u[:, 2 * d + 1])
    dir_norm = np.zeros(n_free, dtype=np.float64)
    for d in range(k):
        dir_norm += gauss[:, d] * gauss[:, d]
    dir_norm = np.sqrt(dir_norm)
    degenerate = dir_norm < 1e-300
    if degenerate.any():
        gauss[degenerate] = 0.0
        gauss[degenerate, 0] = 1.0
        dir_norm[degenerate] = 1.0
    radius = cfg.init_spread * u[:, 2 * k] ** (1.0 / k)
    return gauss / dir_norm[:, None] * radius[:, None]


def committed_positions(cfg: SimConfig) -> np.ndarray:
    """Alternating +/- committed_magnitude along the first axis."""
    pos = np.zeros((cfg.n_committed, cfg.dims), dtype=np.float64)
    for j in range(cfg.n_committed):
        pos[j, 0] = cfg.committed_magnitude if j % 2 == 0 else -cfg.committed_magnitude
    return pos


def build_population(cfg: SimConfig) -> Population:
    if cfg.n_committed > cfg.n_agents:
        raise ValueError("n_committed exceeds n_agents")
    free = _free_positions(cfg)
    comm = committed_positions(cfg)
    positions = np.concatenate([free, comm], axis=0)
    committed = np.zeros(cfg.n_agents, dtype=bool)
    committed[cfg.n_free :] = True
    kinds = np.zeros(cfg.n_agents, dtype=np.int8)
    ck = cfg.consumer_kind
    if ck.kind == "uniform":
        kinds[: cfg.n_free] = KIND_UNIFORM
    elif ck.kind == "mixed":
        n_biased = round_half_up(ck.p_biased * cfg.n_free)
        kinds[n_biased : cfg.n_free] = KIND_UNIFORM
    return Population(positions=positions, committed=committed, kinds=kinds)


# ---------------------------------------------------------------------------
# Document production


@dataclass
class DocumentPool:
    """One step's documents. Row index is the document id; genuine documents
    come first, misinformation last."""

    positions: np.ndarray  # (pool_size, dims) float64
    misinfo: np.ndarray  # (pool_size,) bool
    step: int

    @property
    def size(self) -> int:
        return self.positions.shape[0]


def produce_documents(positions: np.ndarray, cfg: SimConfig, t: int) -> DocumentPool:
    """Build the step-t pool from time-t agent positions.

    sampled: n_docs total; round-half-up(r * n_docs) misinformation copies
    of uniformly chosen committed agents, the rest genuine copies of
    uniformly chosen free agents (with replacement).
    mirror: one genuine document per free agent in agent order, plus
    round-half-up(r * n_free) misinformation cycling over committed agents.
    """
    n_free = cfg.n_free
    if cfg.misinfo_ratio > 0 and cfg.n_committed == 0:
        raise ValueError("misinfo_ratio > 0 requires at least one committed agent")
    comm = positions[n_free:]
    if cfg.production_mode == "mirror":
        n_mis = misinfo_count(cfg.misinfo_ratio, n_free)
        genuine = positions[:n_free].copy()
        mis = np.empty((n_mis, cfg.dims), dtype=np.float64)
        for j in range(n_mis):
            mis[j] = comm[j % cfg.n_committed]
    else:
        n_mis = misinfo_count(cfg.misinfo_ratio, cfg.n_docs)
        n_genuine = cfg.n_docs - n_mis
        if n_genuine > 0 and n_free == 0:
            raise ValueError("sampled production requires at least one free agent")
        seed = pool_stream(cfg.seed, t)
        idx = child_array(seed, np.arange(n_genuine, dtype=np.uint64)) % np.uint64(
            max(n_free, 1)
        )
        genuine = positions[idx.astype(np.int64)].copy()
        cidx = child_array(
            seed, np.arange(n_genuine, n_genuine + n_mis, dtype=np.uint64)
        ) % np.uint64(max(cfg.n_committed, 1))
        mis = comm[cidx.astype(np.int64)].copy()
    pool_positions = np.concatenate([genuine, mis], axis=0)
    misinfo = np.zeros(pool_positions.shape[0], dtype=bool)
    misinfo[genuine.shape[0] :] = True
    return DocumentPool(positions=pool_positions, misinfo=misinfo, step=t)


# ---------------------------------------------------------------------------
# Reference consumption and update (single-agent, readability over speed)


@dataclass
class ConsumptionRecord:
    agent_id: int
    curated_count: int
    consumed_ids: list  # ascending document ids
    coverage: float


def curate_for_agent(agent_pos: np.ndarray, pool: DocumentPool, radius: float) -> list:
    """Document ids within the visibility radius, ascending."""
    out = []
    for doc_id in range(pool.size):
        if distance(agent_pos, pool.positions[doc_id]) <= radius:
            out.append(doc_id)
    return out


def consume_biased(
    agent_id: int, agent_pos: np.ndarray, curated: list, pool: DocumentPool, k: int
) -> ConsumptionRecord:
    """The min(k, |curated|) curated documents nearest the agent; distance
    ties break toward the lower document id."""
    keyed = sorted(
        (distance(agent_pos, pool.positions[doc_id]), doc_id) for doc_id in curated
    )
    chosen = sorted(doc_id for _, doc_id in keyed[: min(k, len(curated))])
    return ConsumptionRecord(
        agent_id=agent_id,
        curated_count=len(curated),
        consumed_ids=chosen,
        coverage=len(chosen) / pool.size,
    )


def consume_uniform(
    agent_id: int, curated: list, pool: DocumentPool, k: int, cseed: int
) -> ConsumptionRecord:
    """min(k, |curated|) distinct curated documents, uniform without
    replacement via a partial Fisher-Yates pass keyed by cseed."""
    ids = list(curated)
    cnt = len(ids)
    take = min(k, cnt)
    for j in range(take):
        m = j + child(cseed, j) % (cnt - j)
        ids[j], ids[m] = ids[m], ids[j]
    chosen = sorted(ids[:take])
    return ConsumptionRecord(
        agent_id=agent_id,
        curated_count=cnt,
        consumed_ids=chosen,
        coverage=take / pool.size,
    )


def influence_weight(doc_pos: np.ndarray, epsilon: float) -> float:
    """Outlying content weighs more: norm of the document plus epsilon."""
    return norm(doc_pos) + epsilon


def update_belief(
    agent_pos: np.ndarray,
    consumed_positions: np.ndarray,
    alpha: float,
    epsilon: float,
    committed: bool = False,
) -> np.ndarray:
    """Convex move toward the influence-weighted mean of consumed documents.

    Committed agents and agents that consumed nothing keep their position
    bitwise unchanged. Accumulation runs in consumed-id order.
    """
    if committed or consumed_positions.shape[0] == 0:
        return agent_pos.copy()
    dims = agent_pos.shape[0]
    num = [0.0] * dims
    den = 0.0
    for j in range(consumed_positions.shape[0]):
        w = influence_weight(consumed_positions[j], epsilon)
        for d in range(dims):
            num[d] += w * float(consumed_positions[j, d])
        den += w
    am = 1.0 - alpha
    out = np.empty(dims, dtype=np.float64)
    for d in range(dims):
        out[d] = alpha * float(agent_pos[d]) + am * (num[d] / den)
    return out


def consume_seeds_for_step(cfg: SimConfig, t: int, n_agents: int) -> np.ndarray:
    """Per-agent uniform-consumer stream seeds for step t (uint64).

    Matches rng.consume_stream(seed, t, agent_id) element for element.
    """
    base = consume_stream_base(cfg.seed, t)
    return child_array(base, np.arange(n_agents, dtype=np.uint64))
