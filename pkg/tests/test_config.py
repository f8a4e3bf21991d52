"""Config dataclass, plain-text grammar, validation, serialization."""
import pytest

from overloadsim.config import (
    BIASED,
    UNIFORM,
    ConfigError,
    SimConfig,
    build_sweep_spec,
    mixed,
    parse_config_text,
    serialize_config,
    validate_config,
)


def test_default_values():
    cfg = SimConfig()
    assert cfg.n_agents == 200
    assert cfg.n_committed == 2
    assert cfg.dims == 1
    assert cfg.n_docs == 1600
    assert cfg.misinfo_ratio == 0.05
    assert cfg.alpha == 0.8
    assert cfg.capacity_k == 10
    assert cfg.visibility_radius == 0.6
    assert cfg.consumer_kind == BIASED
    assert cfg.production_mode == "sampled"
    assert cfg.committed_magnitude == 0.95
    assert cfg.epsilon_influence == 1e-6
    assert cfg.init_spread == 0.25
    assert cfg.t_max == 1000
    assert cfg.conv_tol is None
    assert cfg.conv_window == 10
    assert cfg.snapshot_every == 100
    assert cfg.seed == 0
    validate_config(cfg)


def test_n_free():
    assert SimConfig().n_free == 198


@pytest.mark.parametrize("cfg", [
    SimConfig(),
    SimConfig(consumer_kind=UNIFORM, conv_tol=0.001, seed=(1 << 64) - 1),
    SimConfig(consumer_kind=mixed(0.25), dims=3, epsilon_influence=1e-9),
    SimConfig(production_mode="mirror", n_docs=198),
])
def test_serialize_round_trip(cfg):
    text = serialize_config(cfg)
    parsed, sweep = parse_config_text(text)
    assert parsed == cfg
    assert sweep == {}


def test_serialize_lists_every_key_once():
    text = serialize_config(SimConfig())
    keys = [line.split("=")[0].strip() for line in text.strip().splitlines()]
    assert sorted(keys) == sorted(set(keys))
    assert set(keys) == {
        "n_agents", "n_committed", "dims", "n_docs", "misinfo_ratio", "alpha",
        "capacity_k", "visibility_radius", "consumer_kind", "production_mode",
        "committed_magnitude", "epsilon_influence", "init_spread", "t_max",
        "conv_tol", "conv_window", "snapshot_every", "seed",
    }


def test_parse_comments_whitespace_and_case():
    text = """
# full-line comment
  n_agents =  50   # trailing comment
  consumer_kind = UNIFORM
  conv_tol = NONE
"""
    cfg, _ = parse_config_text(text)
    assert cfg.n_agents == 50
    assert cfg.consumer_kind == UNIFORM
    assert cfg.conv_tol is None


def test_parse_mixed_kind():
    cfg, _ = parse_config_text("consumer_kind = mixed(0.5)\n")
    assert cfg.consumer_kind == mixed(0.5)


def test_parse_sweep_keys_separated():
    cfg, sweep = parse_config_text("n_values = 100, 400\nr_values = 0.0,0.1\nreplicates = 3\n")
    assert cfg == SimConfig()
    assert sweep == {"n_values": (100, 400), "r_values": (0.0, 0.1), "replicates": 3}


@pytest.mark.parametrize("text,needle", [
    ("bogus_key = 1\n", "line 1"),
    ("n_agents = 10\nn_agents = 20\n", "line 2: duplicate"),
    ("n_agents =\n", "empty value"),
    ("n_agents ten\n", "expected 'key = value'"),
    ("n_agents = ten\n", "integer"),
    ("alpha = fast\n", "real"),
    ("production_mode = streamed\n", "production_mode"),
    ("consumer_kind = sideways\n", "consumer_kind"),
])
def test_parse_errors_carry_line_numbers(text, needle):
    with pytest.raises(ConfigError) as err:
        parse_config_text(text)
    assert needle in str(err.value)


@pytest.mark.parametrize("kwargs", [
    dict(n_agents=0),
    dict(n_committed=-1),
    dict(n_committed=300),
    dict(dims=0),
    dict(n_docs=0),
    dict(misinfo_ratio=-0.1),
    dict(misinfo_ratio=1.5),
    dict(alpha=0.0),
    dict(alpha=1.0),
    dict(capacity_k=0),
    dict(visibility_radius=-1.0),
    dict(committed_magnitude=1.5),
    dict(epsilon_influence=0.0),
    dict(init_spread=-0.5),
    dict(init_spread=1.5),
    dict(t_max=-1),
    dict(conv_tol=0.0),
    dict(conv_window=0),
    dict(snapshot_every=0),
    dict(seed=1 << 64),
    dict(seed=-1),
    dict(production_mode="mirror", n_docs=100),
    dict(misinfo_ratio=0.1, n_committed=0),
])
def test_validate_rejects(kwargs):
    with pytest.raises(ConfigError):
        validate_config(SimConfig(**kwargs))


def test_validate_accepts_boundaries():
    validate_config(SimConfig(t_max=0))
    validate_config(SimConfig(misinfo_ratio=0.0, n_committed=0))
    validate_config(SimConfig(production_mode="mirror", n_docs=198))
    validate_config(SimConfig(visibility_radius=0.0))


def test_build_sweep_spec_defaults():
    spec = build_sweep_spec(SimConfig(), {"n_values": (100,), "r_values": (0.0,)})
    assert spec.replicates == 10
    assert spec.base_seed == 0


@pytest.mark.parametrize("sweep", [
    {},
    {"n_values": (100,)},
    {"r_values": (0.0,)},
    {"n_values": (), "r_values": (0.0,)},
    {"n_values": (100, 100), "r_values": (0.0,)},
    {"n_values": (400, 100), "r_values": (0.0,)},
    {"n_values": (100,), "r_values": (0.1, 0.0)},
    {"n_values": (100,), "r_values": (1.5,)},
    {"n_values": (-5,), "r_values": (0.0,)},
    {"n_values": (100,), "r_values": (0.0,), "replicates": 0},
    {"n_values": (100,), "r_values": (0.0,), "base_seed": 1 << 64},
])
def test_build_sweep_spec_rejects(sweep):
    with pytest.raises(ConfigError):
        build_sweep_spec(SimConfig(), sweep)


def test_sweep_cells_prevalidated():
    # mirror mode pins n_docs to the free population; other N values
    # must be rejected before any run
    cfg = SimConfig(production_mode="mirror", n_docs=198)
    with pytest.raises(ConfigError) as err:
        build_sweep_spec(cfg, {"n_values": (100, 198), "r_values": (0.0,)})
    assert "cell" in str(err.value)
    # misinfo needs a committed agent in every cell
    cfg2 = SimConfig(n_committed=0, misinfo_ratio=0.0)
    with pytest.raises(ConfigError):
        build_sweep_spec(cfg2, {"n_values": (100,), "r_values": (0.0, 0.1)})
