"""Command-line driver: fluid runs, Monte Carlo ensembles, sweeps, diffs.

Each subcommand writes deterministic CSV plus a plain-text manifest into
--out.  CSV schemas:

* survival: mode,source_policy,peer_rule,m,k,alpha,p1,p2,q,trials,seed,step,dim,fraction,stderr
  (fluid rows leave source_policy/peer_rule/q/trials/seed/stderr empty)
* quorum:   mode,source_policy,peer_rule,m,k,alpha,p1,p2,phi,reached,steps,seconds
  (unreached rows leave steps/seconds empty)
* diff:     m,k,alpha,p1,p2,step,dim,delta

Fractions carry 12 significant digits; rows are ordered by (step, dim) —
sweeps by grid position with no_turbo before peer_turbo per point.  Rerunning
a command with the same flags reproduces the CSV bodies byte for byte (the
manifest timestamp is the only thing that moves).
"""

from __future__ import annotations

import argparse
import csv
import sys
from datetime import datetime, timezone
from pathlib import Path

from starcast import __version__
from starcast.fluid import NO_TURBO, PEER_TURBO, FluidParams, Trajectory, run
from starcast.mc import EnsembleSurvival, McConfig, run_ensemble
from starcast.metrics import QuorumResult, quorum_time, quorum_table

SURVIVAL_HEADER = [
    "mode", "source_policy", "peer_rule", "m", "k", "alpha", "p1", "p2",
    "q", "trials", "seed", "step", "dim", "fraction", "stderr",
]
QUORUM_HEADER = [
    "mode", "source_policy", "peer_rule", "m", "k", "alpha", "p1", "p2",
    "phi", "reached", "steps", "seconds",
]
DIFF_HEADER = ["m", "k", "alpha", "p1", "p2", "step", "dim", "delta"]

_MODE_MAP = {"no-turbo": NO_TURBO, "peer-turbo": PEER_TURBO}
_POLICY_MAP = {"bernoulli-fluid": "bernoulli_fluid", "integer-schedule": "integer_schedule"}
_RULE_MAP = {"conservative": "conservative", "rlnc-exact": "rlnc_exact"}


class CliError(Exception):
    pass


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _probability(text: str) -> float:
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"must be in [0, 1] (got {text})")
    return value


def _phi_value(text: str) -> float:
    value = float(text)
    if not 0.0 < value <= 1.0:
        raise argparse.ArgumentTypeError(f"must be in (0, 1] (got {text})")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1 (got {text})")
    return value


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0 (got {text})")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be > 0 (got {text})")
    return value


def _positive_float_list(text: str) -> list[float]:
    parts = [p for p in text.split(",") if p.strip()]
    if not parts:
        raise argparse.ArgumentTypeError("expected a comma-separated list")
    return [_positive_float(p) for p in parts]


def _positive_int_list(text: str) -> list[int]:
    parts = [p for p in text.split(",") if p.strip()]
    if not parts:
        raise argparse.ArgumentTypeError("expected a comma-separated list")
    return [_positive_int(p) for p in parts]


def _add_model_flags(sub: argparse.ArgumentParser, with_mode: bool = True) -> None:
    if with_mode:
        sub.add_argument("--mode", choices=sorted(_MODE_MAP), required=True)
    sub.add_argument("--m", type=_positive_int, required=True, help="number of target nodes")
    sub.add_argument("--k", type=_positive_int, required=True, help="degrees of freedom to decode")
    sub.add_argument("--alpha", type=_positive_float, required=True, help="source shards per round")
    sub.add_argument("--p1", type=_probability, required=True, help="source link success probability")
    sub.add_argument("--p2", type=_probability, required=True, help="peer link success probability")
    sub.add_argument("--dt", type=_positive_float, default=1.0, help="seconds per round")


def _add_out_flag(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--out", type=Path, default=Path("."), help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="starcast", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"starcast {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p_fluid = subs.add_parser("fluid", help="run the fluid recurrence at one parameter point")
    _add_model_flags(p_fluid)
    p_fluid.add_argument("--horizon", type=_nonneg_int, required=True)
    p_fluid.add_argument("--phi", type=_phi_value, required=True)
    _add_out_flag(p_fluid)
    p_fluid.set_defaults(func=cmd_fluid)

    p_mc = subs.add_parser("mc", help="run the packet-level Monte Carlo ensemble")
    _add_model_flags(p_mc)
    p_mc.add_argument("--horizon", type=_nonneg_int, required=True)
    p_mc.add_argument("--phi", type=_phi_value, required=True)
    p_mc.add_argument("--q", type=int, choices=(2, 256), default=256)
    p_mc.add_argument("--l", type=_positive_int, default=32, help="symbols per shard")
    p_mc.add_argument("--trials", type=_positive_int, required=True)
    p_mc.add_argument("--seed", type=_nonneg_int, default=0)
    p_mc.add_argument("--source-policy", choices=sorted(_POLICY_MAP), default="bernoulli-fluid")
    p_mc.add_argument("--peer-rule", choices=sorted(_RULE_MAP), default="conservative")
    _add_out_flag(p_mc)
    p_mc.set_defaults(func=cmd_mc)

    p_sweep = subs.add_parser("sweep", help="quorum table over an alpha and/or m grid, both regimes")
    _add_model_flags(p_sweep, with_mode=False)
    p_sweep.add_argument("--horizon", type=_nonneg_int, required=True)
    p_sweep.add_argument("--phi", type=_phi_value, required=True)
    p_sweep.add_argument("--alpha-list", type=_positive_float_list)
    p_sweep.add_argument("--m-list", type=_positive_int_list)
    _add_out_flag(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    p_diff = subs.add_parser("diff", help="difference of two survival CSVs (B minus A)")
    p_diff.add_argument("survival_a", type=Path)
    p_diff.add_argument("survival_b", type=Path)
    _add_out_flag(p_diff)
    p_diff.set_defaults(func=cmd_diff)

    return parser


def _write_csv(path: Path, header: list[str], rows: list[list[str]]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _write_manifest(path: Path, command: str, entries: dict[str, object], outputs: list[str]) -> None:
    lines = [f"tool: starcast {__version__}", f"command: {command}"]
    stamp = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
    lines.append(f"created_utc: {stamp}")
    for key, value in entries.items():
        if isinstance(value, float):
            value = _fmt(value)
        lines.append(f"{key}: {value}")
    lines.append(f"outputs: {','.join(outputs)}")
    path.write_text("\n".join(lines) + "\n")


def _param_block(params: FluidParams) -> list[str]:
    return [str(params.m), str(params.k), _fmt(params.alpha), _fmt(params.p1), _fmt(params.p2)]


def _fluid_survival_rows(traj: Trajectory) -> list[list[str]]:
    params = traj.params
    block = _param_block(params)
    rows = []
    for step in range(len(traj)):
        for dim in range(traj.k + 1):
            rows.append(
                [params.regime, "", ""] + block
                + ["", "", "", str(step), str(dim), _fmt(traj.F[step, dim]), ""]
            )
    return rows


def _mc_survival_rows(ens: EnsembleSurvival, cfg: McConfig) -> list[list[str]]:
    params = cfg.fluid
    block = _param_block(params)
    tail = [str(cfg.q), str(cfg.trials), str(cfg.seed)]
    rows = []
    for step in range(ens.horizon + 1):
        for dim in range(ens.k + 1):
            rows.append(
                [params.regime, cfg.source_policy, cfg.peer_rule] + block + tail
                + [str(step), str(dim), _fmt(ens.mean_F[dim, step]), _fmt(ens.stderr_F[dim, step])]
            )
    return rows


def _quorum_row(
    params: FluidParams, result: QuorumResult, source_policy: str = "", peer_rule: str = ""
) -> list[str]:
    return (
        [params.regime, source_policy, peer_rule] + _param_block(params)
        + [
            _fmt(result.phi),
            "true" if result.reached else "false",
            str(result.steps) if result.reached else "",
            _fmt(result.seconds) if result.reached else "",
        ]
    )


def _fluid_entries(params: FluidParams) -> dict[str, object]:
    return {
        "mode": params.regime,
        "m": params.m,
        "k": params.k,
        "alpha": params.alpha,
        "p1": params.p1,
        "p2": params.p2,
        "dt": params.dt,
    }


def cmd_fluid(args: argparse.Namespace) -> int:
    params = FluidParams(
        m=args.m, k=args.k, alpha=args.alpha, p1=args.p1, p2=args.p2,
        dt=args.dt, regime=_MODE_MAP[args.mode],
    )
    traj = run(params, args.horizon)
    result = quorum_time(traj, args.phi)
    out = args.out
    out.mkdir(parents=True, exist_ok=True)
    _write_csv(out / "survival.csv", SURVIVAL_HEADER, _fluid_survival_rows(traj))
    _write_csv(out / "quorum.csv", QUORUM_HEADER, [_quorum_row(params, result)])
    entries = _fluid_entries(params)
    entries.update(horizon=args.horizon, phi=args.phi)
    _write_manifest(out / "manifest.txt", "fluid", entries, ["survival.csv", "quorum.csv"])
    return 0


def cmd_mc(args: argparse.Namespace) -> int:
    params = FluidParams(
        m=args.m, k=args.k, alpha=args.alpha, p1=args.p1, p2=args.p2,
        dt=args.dt, regime=_MODE_MAP[args.mode],
    )
    cfg = McConfig(
        fluid=params, q=args.q, l=args.l, trials=args.trials, seed=args.seed,
        source_policy=_POLICY_MAP[args.source_policy], peer_rule=_RULE_MAP[args.peer_rule],
        horizon=args.horizon,
    )
    ens = run_ensemble(cfg)
    result = quorum_time(ens, args.phi, dt=params.dt)
    out = args.out
    out.mkdir(parents=True, exist_ok=True)
    _write_csv(out / "survival.csv", SURVIVAL_HEADER, _mc_survival_rows(ens, cfg))
    _write_csv(
        out / "quorum.csv",
        QUORUM_HEADER,
        [_quorum_row(params, result, cfg.source_policy, cfg.peer_rule)],
    )
    entries = _fluid_entries(params)
    entries.update(
        horizon=args.horizon, phi=args.phi, q=cfg.q, l=cfg.l, trials=cfg.trials,
        seed=cfg.seed, source_policy=cfg.source_policy, peer_rule=cfg.peer_rule,
    )
    _write_manifest(out / "manifest.txt", "mc", entries, ["survival.csv", "quorum.csv"])
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    if not args.alpha_list and not args.m_list:
        raise CliError("sweep needs at least one of --alpha-list / --m-list")
    m_values = args.m_list or [args.m]
    alpha_values = args.alpha_list or [args.alpha]
    grid = [
        FluidParams(m=m, k=args.k, alpha=alpha, p1=args.p1, p2=args.p2, dt=args.dt)
        for m in m_values
        for alpha in alpha_values
    ]
    rows = [
        _quorum_row(entry.params, entry.result)
        for entry in quorum_table(grid, args.phi, args.horizon)
    ]
    out = args.out
    out.mkdir(parents=True, exist_ok=True)
    _write_csv(out / "quorum.csv", QUORUM_HEADER, rows)
    entries: dict[str, object] = {
        "k": args.k, "p1": args.p1, "p2": args.p2, "dt": args.dt,
        "m_list": ",".join(str(m) for m in m_values),
        "alpha_list": ",".join(_fmt(a) for a in alpha_values),
        "horizon": args.horizon, "phi": args.phi,
    }
    _write_manifest(out / "manifest.txt", "sweep", entries, ["quorum.csv"])
    return 0


def _read_survival(path: Path) -> tuple[list[str], dict[tuple[int, int], float]]:
    """Returns (param block, {(step, dim): fraction}) after schema validation."""
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from exc
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != SURVIVAL_HEADER:
            raise CliError(f"{path} does not have the survival CSV schema")
        block: list[str] | None = None
        grid: dict[tuple[int, int], float] = {}
        for line in reader:
            if len(line) != len(SURVIVAL_HEADER):
                raise CliError(f"{path} is truncated or malformed")
            params = line[3:8]
            if block is None:
                block = params
            elif params != block:
                raise CliError(f"{path} mixes parameter blocks")
            grid[(int(line[11]), int(line[12]))] = float(line[13])
        if block is None:
            raise CliError(f"{path} contains no data rows")
    return block, grid


def cmd_diff(args: argparse.Namespace) -> int:
    block_a, grid_a = _read_survival(args.survival_a)
    block_b, grid_b = _read_survival(args.survival_b)
    if block_a != block_b:
        raise CliError(
            f"parameter blocks differ: {args.survival_a} has (m,k,alpha,p1,p2) = {block_a}, "
            f"{args.survival_b} has {block_b}"
        )
    if grid_a.keys() != grid_b.keys():
        raise CliError(f"step/dim grids differ between {args.survival_a} and {args.survival_b}")
    rows = [
        block_a + [str(step), str(dim), _fmt(grid_b[(step, dim)] - grid_a[(step, dim)])]
        for step, dim in sorted(grid_a)
    ]
    out = args.out
    out.mkdir(parents=True, exist_ok=True)
    _write_csv(out / "diff.csv", DIFF_HEADER, rows)
    entries = {"a": str(args.survival_a), "b": str(args.survival_b)}
    _write_manifest(out / "manifest.txt", "diff", entries, ["diff.csv"])
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ValueError) as exc:
        print(f"starcast: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
