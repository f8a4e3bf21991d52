"""Command-line front end: `sim run`, `sim sweep`, `sim defaults`.

Exit codes: 0 success, 1 config error (message on stderr), 2 I/O error.
The SIM_SEED environment variable overrides the config seed (run) or
base_seed (sweep); an explicit --seed flag beats both. All CSV floats use
the shortest round-trip decimal form and lines end with \\n. Output files
are written through temp names and renamed, so a file either appears
complete or not at all.
"""
import argparse
import os
import sys
from dataclasses import replace

from . import __version__, backend
from .config import (
    ConfigError,
    SimConfig,
    build_sweep_spec,
    parse_config_text,
    serialize_config,
    validate_config,
)
from .engine import initialize, run
from .metrics import belief_histogram, principal_axis
from .sweep import aggregate, run_sweep

HISTOGRAM_BINS = 40


class _ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; the CLI contract reserves
    # 2 for I/O errors, so route usage problems through the config path
    def error(self, message):
        raise _ArgumentError(f"{self.prog}: {message}")


def _fmt_float(x) -> str:
    return repr(float(x))


def _fmt_bool(b) -> str:
    return "true" if b else "false"


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value <= 0xFFFFFFFFFFFFFFFF:
        raise ValueError("seed out of 64-bit range")
    return value


def _resolve_seed(file_seed: int, cli_seed) -> int:
    seed = file_seed
    env = os.environ.get("SIM_SEED")
    if env is not None and env.strip() != "":
        try:
            seed = _u64(env.strip())
        except ValueError:
            raise ConfigError(f"SIM_SEED is not a valid 64-bit seed: {env!r}")
    if cli_seed is not None:
        seed = cli_seed
    return seed


def _read_config(path: str):
    if path == "-":
        raise ConfigError("reading config from stdin is not supported; pass a file path")
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}")
    return parse_config_text(text)


def _write_outputs(out_dir: str, files: dict) -> None:
    """Write every (name -> text) atomically; on failure remove temp files."""
    os.makedirs(out_dir, exist_ok=True)
    tmp_paths = []
    try:
        for name, text in files.items():
            tmp = os.path.join(out_dir, f".tmp-{name}")
            with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
            tmp_paths.append((tmp, os.path.join(out_dir, name)))
        for tmp, final in tmp_paths:
            os.replace(tmp, final)
    except OSError:
        for tmp, _final in tmp_paths:
            try:
                os.remove(tmp)
            except OSError:
                pass
        raise


def _meta_text(cfg: SimConfig) -> str:
    head = f"artifact_version = {__version__}\nbackend = {backend.BACKEND_NAME}\n\n"
    return head + serialize_config(cfg)


def _cmd_run(args) -> int:
    cfg, _sweep_keys = _read_config(args.config)
    seed = _resolve_seed(cfg.seed, args.seed)
    cfg = replace(cfg, seed=seed)
    if args.snapshot_every is not None:
        cfg = replace(cfg, snapshot_every=args.snapshot_every)
    validate_config(cfg)

    snapshots = []

    def hook(t, state):
        snapshots.append((t, state.positions.copy()))

    state = initialize(cfg)
    final, traces, _converged, _steps = run(state, cfg, snapshot_hook=hook)

    traj = ["t,Q,mean_extremity,mean_coverage,max_delta"]
    for tr in traces:
        traj.append(
            f"{tr.t},{_fmt_float(tr.Q)},{_fmt_float(tr.mean_extremity)},"
            f"{_fmt_float(tr.mean_coverage)},{_fmt_float(tr.max_delta)}"
        )

    dims = cfg.dims
    dim_cols = ",".join(f"dim{d}" for d in range(dims))
    pos = [f"t,agent_id,committed,{dim_cols}"]
    hist = ["t,bin_lo,bin_hi,count"]
    committed = final.committed
    for t, positions in snapshots:
        for i in range(positions.shape[0]):
            coords = ",".join(_fmt_float(positions[i, d]) for d in range(dims))
            pos.append(f"{t},{i},{_fmt_bool(bool(committed[i]))},{coords}")
        free = positions[~committed]
        axis = principal_axis(free)
        counts = belief_histogram(free, axis, HISTOGRAM_BINS)
        for b, count in enumerate(counts):
            lo = -1.0 + 2.0 * b / HISTOGRAM_BINS
            hi = -1.0 + 2.0 * (b + 1) / HISTOGRAM_BINS
            hist.append(f"{t},{_fmt_float(lo)},{_fmt_float(hi)},{count}")

    files = {
        "trajectory.csv": "\n".join(traj) + "\n",
        "positions.csv": "\n".join(pos) + "\n",
        "histogram.csv": "\n".join(hist) + "\n",
        "run_meta.txt": _meta_text(cfg),
    }
    _write_outputs(args.out, files)
    return 0


def _cmd_sweep(args) -> int:
    cfg, sweep_keys = _read_config(args.config)
    base_seed_default = sweep_keys.get("base_seed", 0)
    sweep_keys = dict(sweep_keys)
    sweep_keys["base_seed"] = _resolve_seed(base_seed_default, None)
    spec = build_sweep_spec(cfg, sweep_keys)
    if args.threads < 1:
        raise ConfigError("--threads must be >= 1")

    rows = run_sweep(spec, parallelism=args.threads)
    agg = aggregate(rows)

    sw = ["N,r,replicate,seed,Q_final,mean_extremity_final,steps_run,converged"]
    for row in rows:
        sw.append(
            f"{row.N},{_fmt_float(row.r)},{row.replicate},{row.seed},"
            f"{_fmt_float(row.Q_final)},{_fmt_float(row.mean_extremity_final)},"
            f"{row.steps_run},{_fmt_bool(row.converged)}"
        )
    ag = ["N,r,mean_Q,stddev_Q,mean_extremity,n_replicates"]
    for row in agg:
        ag.append(
            f"{row.N},{_fmt_float(row.r)},{_fmt_float(row.mean_Q)},"
            f"{_fmt_float(row.stddev_Q)},{_fmt_float(row.mean_extremity)},"
            f"{row.n_replicates}"
        )

    files = {
        "sweep.csv": "\n".join(sw) + "\n",
        "sweep_agg.csv": "\n".join(ag) + "\n",
        "run_meta.txt": _meta_text(spec.base),
    }
    _write_outputs(args.out, files)
    return 0


def _cmd_defaults(_args) -> int:
    sys.stdout.write(serialize_config(SimConfig()))
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="sim", description="Opinion-dynamics simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="single simulation run")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--out", required=True)
    p_run.add_argument("--seed", type=_u64, default=None)
    p_run.add_argument("--snapshot-every", type=int, default=None)
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="(N, r) grid sweep")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--out", required=True)
    p_sweep.add_argument("--threads", type=int, default=1)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_def = sub.add_parser("defaults", help="print the default config")
    p_def.set_defaults(func=_cmd_defaults)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _ArgumentError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
