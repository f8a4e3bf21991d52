"""Run configuration: typed parameters, plain-text config grammar, defaults.

The config file format is line-oriented `key = value`; `#` starts a comment
anywhere on a line; lists are comma-separated. Unknown and duplicate keys
are rejected with line-numbered messages, and all parameter constraints are
checked at parse time.
"""
from __future__ import annotations

from dataclasses import dataclass, fields, replace
from typing import Optional

MAX_SEED = (1 << 64) - 1


class ConfigError(ValueError):
    """Invalid configuration; message carries a line number when parsing."""


@dataclass(frozen=True)
class ConsumerKind:
    """How an agent fills its consumption capacity from curated documents.

    kind: "biased" (k nearest), "uniform" (k uniform without replacement),
    or "mixed" (a p_biased fraction of agents biased, the rest uniform).
    """

    kind: str
    p_biased: Optional[float] = None

    def __str__(self) -> str:
        if self.kind == "mixed":
            return f"mixed({self.p_biased!r})"
        return self.kind


BIASED = ConsumerKind("biased")
UNIFORM = ConsumerKind("uniform")


def mixed(p_biased: float) -> ConsumerKind:
    return ConsumerKind("mixed", p_biased)


@dataclass(frozen=True)
class SimConfig:
    n_agents: int = 200
    n_committed: int = 2
    dims: int = 1
    n_docs: int = 1600
    misinfo_ratio: float = 0.05
    alpha: float = 0.8
    capacity_k: int = 10
    visibility_radius: float = 0.6
    consumer_kind: ConsumerKind = BIASED
    production_mode: str = "sampled"  # "sampled" or "mirror"
    committed_magnitude: float = 0.95
    epsilon_influence: float = 1e-6
    init_spread: float = 0.25
    t_max: int = 1000
    conv_tol: Optional[float] = None  # None: never stop early
    conv_window: int = 10
    snapshot_every: int = 100
    seed: int = 0

    @property
    def n_free(self) -> int:
        return self.n_agents - self.n_committed


@dataclass(frozen=True)
class SweepSpec:
    base: SimConfig
    n_values: tuple
    r_values: tuple
    replicates: int
    base_seed: int


def validate_config(cfg: SimConfig) -> None:
    def fail(msg: str):
        raise ConfigError(msg)

    if cfg.n_agents <= 0:
        fail("n_agents must be positive")
    if cfg.n_committed < 0:
        fail("n_committed must be non-negative")
    if cfg.n_committed > cfg.n_agents:
        fail("n_committed exceeds n_agents")
    if cfg.dims <= 0:
        fail("dims must be positive")
    if cfg.n_docs <= 0:
        fail("n_docs must be positive")
    if not 0.0 <= cfg.misinfo_ratio <= 1.0:
        fail("misinfo_ratio must lie in [0, 1]")
    if not 0.0 < cfg.alpha < 1.0:
        fail("alpha must lie strictly between 0 and 1")
    if cfg.capacity_k <= 0:
        fail("capacity_k must be positive")
    if cfg.visibility_radius < 0:
        fail("visibility_radius must be non-negative")
    if cfg.consumer_kind.kind not in ("biased", "uniform", "mixed"):
        fail(f"unknown consumer_kind {cfg.consumer_kind.kind!r}")
    if cfg.consumer_kind.kind == "mixed":
        p = cfg.consumer_kind.p_biased
        if p is None or not 0.0 <= p <= 1.0:
            fail("mixed consumer_kind needs p_biased in [0, 1]")
    if cfg.production_mode not in ("sampled", "mirror"):
        fail(f"unknown production_mode {cfg.production_mode!r}")
    if not 0.0 <= cfg.committed_magnitude <= 1.0:
        fail("committed_magnitude must lie in [0, 1]")
    if cfg.epsilon_influence <= 0:
        fail("epsilon_influence must be positive")
    if not 0.0 <= cfg.init_spread <= 1.0:
        fail("init_spread must lie in [0, 1]")
    if cfg.t_max < 0:
        fail("t_max must be non-negative")
    if cfg.conv_tol is not None and cfg.conv_tol <= 0:
        fail("conv_tol must be positive or none")
    if cfg.conv_window <= 0:
        fail("conv_window must be positive")
    if cfg.snapshot_every <= 0:
        fail("snapshot_every must be positive")
    if not 0 <= cfg.seed <= MAX_SEED:
        fail("seed must fit in 64 bits")
    if cfg.production_mode == "mirror" and cfg.n_docs != cfg.n_agents - cfg.n_committed:
        fail(
            "mirror mode requires n_docs = n_agents - n_committed "
            f"({cfg.n_agents - cfg.n_committed}), got {cfg.n_docs}"
        )
    if cfg.misinfo_ratio > 0 and cfg.n_committed == 0:
        fail("misinfo_ratio > 0 requires at least one committed agent")


_SIM_KEYS = tuple(f.name for f in fields(SimConfig))
_SWEEP_KEYS = ("n_values", "r_values", "replicates", "base_seed")


def _parse_int(text: str, key: str, line_no: int) -> int:
    try:
        return int(text, 10)
    except ValueError:
        raise ConfigError(f"line {line_no}: {key} expects an integer, got {text!r}")


def _parse_real(text: str, key: str, line_no: int) -> float:
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"line {line_no}: {key} expects a real number, got {text!r}")


def _parse_consumer_kind(text: str, line_no: int) -> ConsumerKind:
    low = text.strip().lower()
    if low == "biased":
        return BIASED
    if low == "uniform":
        return UNIFORM
    if low.startswith("mixed(") and low.endswith(")"):
        inner = low[len("mixed(") : -1]
        return mixed(_parse_real(inner, "consumer_kind p_biased", line_no))
    raise ConfigError(
        f"line {line_no}: consumer_kind must be biased, uniform, or mixed(p), got {text!r}"
    )


def _parse_value(key: str, text: str, line_no: int):
    if key in ("n_agents", "n_committed", "dims", "n_docs", "capacity_k",
               "t_max", "conv_window", "snapshot_every", "seed", "replicates",
               "base_seed"):
        return _parse_int(text, key, line_no)
    if key in ("misinfo_ratio", "alpha", "visibility_radius",
               "committed_magnitude", "epsilon_influence", "init_spread"):
        return _parse_real(text, key, line_no)
    if key == "conv_tol":
        if text.strip().lower() == "none":
            return None
        return _parse_real(text, key, line_no)
    if key == "consumer_kind":
        return _parse_consumer_kind(text, line_no)
    if key == "production_mode":
        low = text.strip().lower()
        if low not in ("sampled", "mirror"):
            raise ConfigError(
                f"line {line_no}: production_mode must be sampled or mirror, got {text!r}"
            )
        return low
    if key == "n_values":
        items = [s for s in (p.strip() for p in text.split(",")) if s]
        return tuple(_parse_int(s, key, line_no) for s in items)
    if key == "r_values":
        items = [s for s in (p.strip() for p in text.split(",")) if s]
        return tuple(_parse_real(s, key, line_no) for s in items)
    raise AssertionError(key)


def parse_config_text(text: str) -> tuple[SimConfig, dict]:
    """Parse config text into (SimConfig, sweep-key dict).

    Sweep keys (n_values, r_values, replicates, base_seed) are collected
    separately; single-run commands ignore them.
    """
    sim_kwargs: dict = {}
    sweep_kwargs: dict = {}
    seen: set = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {line_no}: expected 'key = value', got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _SIM_KEYS and key not in _SWEEP_KEYS:
            raise ConfigError(f"line {line_no}: unknown key {key!r}")
        if key in seen:
            raise ConfigError(f"line {line_no}: duplicate key {key!r}")
        seen.add(key)
        if not value:
            raise ConfigError(f"line {line_no}: empty value for {key!r}")
        parsed = _parse_value(key, value, line_no)
        if key in _SWEEP_KEYS:
            sweep_kwargs[key] = parsed
        else:
            sim_kwargs[key] = parsed
    cfg = SimConfig(**sim_kwargs)
    validate_config(cfg)
    return cfg, sweep_kwargs


def build_sweep_spec(cfg: SimConfig, sweep_kwargs: dict) -> SweepSpec:
    """Assemble and validate a SweepSpec from parsed sweep keys."""
    if "n_values" not in sweep_kwargs:
        raise ConfigError("sweep config requires n_values")
    if "r_values" not in sweep_kwargs:
        raise ConfigError("sweep config requires r_values")
    n_values = tuple(sweep_kwargs["n_values"])
    r_values = tuple(sweep_kwargs["r_values"])
    replicates = sweep_kwargs.get("replicates", 10)
    base_seed = sweep_kwargs.get("base_seed", 0)
    if not n_values:
        raise ConfigError("n_values must be non-empty")
    if not r_values:
        raise ConfigError("r_values must be non-empty")
    if len(set(n_values)) != len(n_values):
        raise ConfigError("n_values must not contain duplicates")
    if len(set(r_values)) != len(r_values):
        raise ConfigError("r_values must not contain duplicates")
    if list(n_values) != sorted(n_values):
        raise ConfigError("n_values must be ascending")
    if list(r_values) != sorted(r_values):
        raise ConfigError("r_values must be ascending")
    if any(n <= 0 for n in n_values):
        raise ConfigError("n_values must be positive")
    if any(not 0.0 <= r <= 1.0 for r in r_values):
        raise ConfigError("r_values must lie in [0, 1]")
    if replicates <= 0:
        raise ConfigError("replicates must be positive")
    if not 0 <= base_seed <= MAX_SEED:
        raise ConfigError("base_seed must fit in 64 bits")
    # Fail before any run starts if some cell would be invalid.
    for n in n_values:
        for r in r_values:
            cell = replace(cfg, n_docs=n, misinfo_ratio=r)
            try:
                validate_config(cell)
            except ConfigError as exc:
                raise ConfigError(f"sweep cell N={n}, r={r!r} invalid: {exc}")
    return SweepSpec(base=cfg, n_values=n_values, r_values=r_values,
                     replicates=replicates, base_seed=base_seed)


def _format_value(key: str, value) -> str:
    if key == "conv_tol" and value is None:
        return "none"
    if isinstance(value, ConsumerKind):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def serialize_config(cfg: SimConfig) -> str:
    """Render a config file that parses back to exactly cfg."""
    lines = [f"{f.name} = {_format_value(f.name, getattr(cfg, f.name))}"
             for f in fields(SimConfig)]
    return "\n".join(lines) + "\n"
