"""Initial population: placement, distribution, consumer-kind assignment."""
import numpy as np
import pytest
from scipy import stats

from overloadsim.config import SimConfig, UNIFORM, mixed
from overloadsim.core import (
    KIND_BIASED,
    KIND_UNIFORM,
    build_population,
    committed_positions,
    norm,
)


def test_layout_free_rows_first():
    cfg = SimConfig(n_agents=10, n_committed=3, misinfo_ratio=0.0)
    pop = build_population(cfg)
    assert pop.positions.shape == (10, 1)
    assert not pop.committed[:7].any()
    assert pop.committed[7:].all()


def test_committed_alternate_extremes_on_first_axis():
    cfg = SimConfig(n_agents=10, n_committed=4, dims=2, misinfo_ratio=0.0)
    comm = committed_positions(cfg)
    m = cfg.committed_magnitude
    assert np.array_equal(comm[:, 0], [m, -m, m, -m])
    assert np.array_equal(comm[:, 1], [0.0, 0.0, 0.0, 0.0])


def test_initial_positions_deterministic_in_seed():
    a = build_population(SimConfig(seed=5)).positions
    b = build_population(SimConfig(seed=5)).positions
    c = build_population(SimConfig(seed=6)).positions
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_k1_free_positions_uniform_on_interval():
    # KS test against Uniform(-spread, spread) at alpha = 0.01
    n = 100_002
    cfg = SimConfig(n_agents=n, n_committed=2, init_spread=0.25, seed=123)
    pop = build_population(cfg)
    xs = pop.positions[: n - 2, 0]
    assert abs(xs).max() <= 0.25
    res = stats.kstest(xs, stats.uniform(loc=-0.25, scale=0.5).cdf)
    assert res.pvalue > 0.01


def test_k3_ball_radial_law_and_containment():
    # mean norm of a uniform ball draw is K/(K+1) * spread
    n = 20_002
    cfg = SimConfig(n_agents=n, n_committed=2, dims=3, init_spread=0.8, seed=9)
    pop = build_population(cfg)
    free = pop.positions[: n - 2]
    norms = np.sqrt((free * free).sum(axis=1))
    assert norms.max() <= 0.8 + 1e-12
    expected = 3.0 / 4.0 * 0.8
    assert abs(norms.mean() - expected) / expected < 0.05


def test_k2_directions_isotropic():
    n = 20_002
    cfg = SimConfig(n_agents=n, n_committed=2, dims=2, init_spread=1.0, seed=4)
    free = build_population(cfg).positions[: n - 2]
    # mean direction should vanish for an isotropic cloud
    assert abs(free[:, 0].mean()) < 0.02
    assert abs(free[:, 1].mean()) < 0.02
    # sign balance per axis
    assert abs((free[:, 0] > 0).mean() - 0.5) < 0.02


def test_spread_zero_collapses_to_origin():
    cfg = SimConfig(n_agents=20, n_committed=0, misinfo_ratio=0.0, init_spread=0.0)
    pop = build_population(cfg)
    assert np.array_equal(pop.positions, np.zeros((20, 1)))


def test_kind_assignment_biased_default():
    pop = build_population(SimConfig(n_agents=10, n_committed=2, misinfo_ratio=0.0))
    assert (pop.kinds[:8] == KIND_BIASED).all()


def test_kind_assignment_uniform():
    cfg = SimConfig(n_agents=10, n_committed=2, misinfo_ratio=0.0, consumer_kind=UNIFORM)
    pop = build_population(cfg)
    assert (pop.kinds[:8] == KIND_UNIFORM).all()


@pytest.mark.parametrize("p,n_free,expect_biased", [
    (0.5, 10, 5),
    (0.5, 9, 5),   # 4.5 rounds up
    (1.0, 8, 8),
    (0.0, 8, 0),
    (0.25, 10, 3),  # 2.5 rounds up
])
def test_kind_assignment_mixed_rounding(p, n_free, expect_biased):
    cfg = SimConfig(
        n_agents=n_free + 2, n_committed=2, misinfo_ratio=0.0,
        consumer_kind=mixed(p),
    )
    pop = build_population(cfg)
    kinds = pop.kinds[:n_free]
    assert (kinds[:expect_biased] == KIND_BIASED).all()
    assert (kinds[expect_biased:] == KIND_UNIFORM).all()


def test_committed_magnitude_row_norm():
    cfg = SimConfig(n_agents=5, n_committed=2, dims=4, misinfo_ratio=0.0)
    pop = build_population(cfg)
    for row in pop.positions[3:]:
        assert norm(row) == cfg.committed_magnitude
