"""Document pool production: counts, ordering, sources, determinism."""
from dataclasses import replace

import numpy as np
import pytest

from overloadsim.config import SimConfig
from overloadsim.core import build_population, produce_documents


def _pop(cfg):
    return build_population(cfg).positions


def test_sampled_counts_and_id_order():
    cfg = SimConfig(seed=3)
    pool = produce_documents(_pop(cfg), cfg, t=0)
    assert pool.size == 1600
    # genuine documents first, misinformation last
    assert not pool.misinfo[:1520].any()
    assert pool.misinfo[1520:].all()
    assert pool.misinfo.sum() == 80  # round_half_up(0.05 * 1600)


def test_sampled_genuine_docs_copy_free_agents():
    cfg = SimConfig(n_agents=20, n_committed=2, n_docs=50, misinfo_ratio=0.2, seed=1)
    positions = _pop(cfg)
    pool = produce_documents(positions, cfg, t=4)
    free_vals = set(positions[:18, 0])
    for row in pool.positions[~pool.misinfo]:
        assert row[0] in free_vals


def test_sampled_misinfo_docs_copy_committed_agents():
    cfg = SimConfig(n_agents=20, n_committed=2, n_docs=50, misinfo_ratio=0.2, seed=1)
    positions = _pop(cfg)
    pool = produce_documents(positions, cfg, t=4)
    mis = pool.positions[pool.misinfo]
    assert mis.shape[0] == 10
    assert set(mis[:, 0]) <= {0.95, -0.95}
    assert (np.abs(mis[:, 0]) == 0.95).all()


def test_sampled_deterministic_per_step():
    cfg = SimConfig(seed=11)
    positions = _pop(cfg)
    a = produce_documents(positions, cfg, t=7)
    b = produce_documents(positions, cfg, t=7)
    c = produce_documents(positions, cfg, t=8)
    assert np.array_equal(a.positions, b.positions)
    assert not np.array_equal(a.positions, c.positions)


def test_mirror_r0_reproduces_population_exactly():
    cfg = SimConfig(
        n_agents=50, n_committed=2, production_mode="mirror", n_docs=48,
        misinfo_ratio=0.0, seed=2,
    )
    positions = _pop(cfg)
    pool = produce_documents(positions, cfg, t=0)
    assert pool.size == 48
    assert np.array_equal(pool.positions, positions[:48])
    assert not pool.misinfo.any()


def test_mirror_misinfo_cycles_committed():
    cfg = SimConfig(
        n_agents=12, n_committed=2, production_mode="mirror", n_docs=10,
        misinfo_ratio=0.5, seed=2,
    )
    positions = _pop(cfg)
    pool = produce_documents(positions, cfg, t=3)
    # 10 genuine + round_half_up(0.5 * 10) = 5 misinformation
    assert pool.size == 15
    mis = pool.positions[pool.misinfo]
    m = cfg.committed_magnitude
    assert np.array_equal(mis[:, 0], [m, -m, m, -m, m])


def test_mirror_is_rng_free_across_steps():
    cfg = SimConfig(
        n_agents=12, n_committed=2, production_mode="mirror", n_docs=10,
        misinfo_ratio=0.5, seed=2,
    )
    positions = _pop(cfg)
    a = produce_documents(positions, cfg, t=0)
    b = produce_documents(positions, cfg, t=99)
    assert np.array_equal(a.positions, b.positions)


def test_sampled_requires_free_agents_for_genuine_docs():
    cfg = SimConfig(n_agents=2, n_committed=2, n_docs=10, misinfo_ratio=0.5, seed=0)
    positions = _pop(cfg)
    with pytest.raises(ValueError):
        produce_documents(positions, cfg, t=0)


def test_sampled_all_misinfo_without_free_agents():
    # r=1: every document is misinformation, no free agents needed
    cfg = SimConfig(n_agents=2, n_committed=2, n_docs=10, misinfo_ratio=1.0, seed=0)
    positions = _pop(cfg)
    pool = produce_documents(positions, cfg, t=0)
    assert pool.size == 10
    assert pool.misinfo.all()


def test_misinfo_requires_committed():
    # constructing the invalid combination directly (it never parses)
    cfg = SimConfig(n_agents=5, n_committed=0, misinfo_ratio=0.0, n_docs=10)
    positions = _pop(cfg)
    bad = replace(cfg, misinfo_ratio=0.3)
    with pytest.raises(ValueError):
        produce_documents(positions, bad, t=0)
