"""Agent-based simulator of opinion dynamics under information overload.

Agents hold beliefs in the unit ball; each step a document pool is
produced from agent positions (optionally laced with misinformation from
committed agents), a radius filter curates it per agent, and each agent
consumes up to k documents (nearest-first or uniformly) whose
norm-weighted mean pulls the agent's belief. Deterministic by
construction: every random draw comes from counter-based streams keyed by
(seed, step, agent).
"""
__version__ = "0.1.0"

from .backend import BACKEND_NAME, available_backends
from .config import ConfigError, ConsumerKind, SimConfig, SweepSpec
from .engine import SimState, initialize, run, step
from .metrics import StepTrace, belief_histogram, has_converged, polarization_Q, principal_axis
from .sweep import AggregateRow, SweepRow, aggregate, cell_index, run_sweep

__all__ = [
    "__version__",
    "BACKEND_NAME",
    "available_backends",
    "ConfigError",
    "ConsumerKind",
    "SimConfig",
    "SweepSpec",
    "SimState",
    "initialize",
    "run",
    "step",
    "StepTrace",
    "belief_histogram",
    "has_converged",
    "polarization_Q",
    "principal_axis",
    "AggregateRow",
    "SweepRow",
    "aggregate",
    "cell_index",
    "run_sweep",
]
