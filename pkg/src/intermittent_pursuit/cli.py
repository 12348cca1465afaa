"""Command-line front end: simulations, table exports, verification, degradation.

Commands: ``simulate``, ``value-grid``, ``compare-nmax``, ``degradation``,
``verify``.  Exit codes: 0 on success, 1 when a verification or assertion
fails, 2 on usage or configuration errors.  Every file-writing run also
writes a ``<out>.manifest.json`` recording the command, resolved inputs,
seed, and tool version; re-running from a manifest's inputs reproduces the
outputs byte for byte.  All numbers are printed with 9 significant digits.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import __version__
from .core import GameConfig, PayoffSpec, RegionNotCoveredError, Vec2, fmt_g
from .engine import simulate, write_trajectory_csv
from .strategies import build_evader, build_pursuer
from .value import (
    degradation_report,
    sense_count_arrival,
    sense_count_self_triggered,
    value_bound,
)
from .verify import SUITE_NAMES, run_suite

__all__ = ["main", "RunManifest"]


class CliError(Exception):
    """User-facing error with an exit code."""

    def __init__(self, message: str, code: int = 2):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True, slots=True)
class RunManifest:
    """Reproducibility record written alongside every output file."""

    command: str
    argv: tuple[str, ...]
    config: dict
    seed: Optional[int]
    version: str
    outputs: tuple[str, ...]
    duration_s: float

    def to_json_dict(self) -> dict:
        return {
            "command": self.command,
            "argv": list(self.argv),
            "config": self.config,
            "seed": self.seed,
            "version": self.version,
            "outputs": list(self.outputs),
            "duration_s": self.duration_s,
        }


def _write_manifest(base_path: str, command: str, argv, config: dict,
                    seed: Optional[int], outputs: list[str], started: float) -> None:
    manifest = RunManifest(
        command=command,
        argv=tuple(argv),
        config=config,
        seed=seed,
        version=__version__,
        outputs=tuple(outputs),
        duration_s=time.monotonic() - started,
    )
    path = f"{base_path}.manifest.json"
    Path(path).write_text(json.dumps(manifest.to_json_dict(), indent=2) + "\n")


def _load_json_object(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except FileNotFoundError:
        raise CliError(f"{path}: no such file") from None
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror or exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise CliError(f"{path}: top level must be a JSON object")
    return data


def _config_from_file(path: str, seed_override: Optional[int]):
    """Load a game config plus optional strategy entries.

    Returns (config, pursuer_choice, evader_choice, resolved_dict).
    """
    data = _load_json_object(path)
    pursuer_choice = data.pop("pursuer", "thm1")
    evader_choice = data.pop("evader", "equilibrium")
    if seed_override is not None:
        data["seed"] = seed_override
    try:
        config = GameConfig.from_dict(data)
    except ValueError as exc:
        raise CliError(f"{path}: {exc}") from None
    resolved = config.to_dict()
    resolved["pursuer"] = pursuer_choice
    resolved["evader"] = evader_choice
    return config, pursuer_choice, evader_choice, resolved


def _write_csv_rows(path: str, header: list[str], rows: list[list[str]]) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        writer.writerows(rows)


def _bool_str(flag: bool) -> str:
    return "true" if flag else "false"


def cmd_simulate(args, argv) -> int:
    started = time.monotonic()
    config, pursuer_choice, evader_choice, resolved = _config_from_file(args.config, args.seed)
    try:
        pursuer = build_pursuer(pursuer_choice, config)
        evader = build_evader(evader_choice, config)
    except ValueError as exc:
        raise CliError(f"{args.config}: {exc}") from None
    result = simulate(config, pursuer, evader)
    outcome = result.outcome
    if outcome.captured:
        print(f"captured t={fmt_g(outcome.capture_time)} payoff={fmt_g(outcome.payoff)}")
    else:
        print(f"no capture final_distance={fmt_g(outcome.final_distance)} "
              f"payoff={fmt_g(outcome.payoff)}")
    if args.out:
        outcome_path = f"{args.out}.outcome.json"
        traj_path = f"{args.out}.trajectory.csv"
        Path(outcome_path).write_text(
            json.dumps(outcome.to_json_dict(), indent=2) + "\n"
        )
        write_trajectory_csv(traj_path, result)
        _write_manifest(args.out, "simulate", argv, resolved, config.seed,
                        [outcome_path, traj_path], started)
    return 0


def _parse_ell(raw: str) -> list[int]:
    try:
        if ":" in raw:
            lo_s, hi_s = raw.split(":", 1)
            lo, hi = int(lo_s), int(hi_s)
            if lo < 0 or hi < lo:
                raise ValueError
            return list(range(lo, hi + 1))
        value = int(raw)
        if value < 0:
            raise ValueError
        return [value]
    except ValueError:
        raise CliError(f"--ell must be a nonnegative integer or lo:hi range, got {raw!r}") from None


def _linspace(lo: float, hi: float, steps: int, what: str) -> list[float]:
    if steps < 1:
        raise CliError(f"{what}: steps must be at least 1, got {steps}")
    if hi < lo:
        raise CliError(f"{what}: max {hi} is below min {lo}")
    if steps == 1:
        return [lo]
    return [lo + (hi - lo) * i / (steps - 1) for i in range(steps)]


def cmd_value_grid(args, argv) -> int:
    started = time.monotonic()
    if not 0.0 < args.nu < 1.0:
        raise CliError(f"--nu must lie in (0, 1), got {args.nu}")
    if args.r_cap <= 0.0:
        raise CliError(f"--r-cap must be positive, got {args.r_cap}")
    if args.rho_min < 0.0 or args.tau_min < 0.0:
        raise CliError("--rho-min and --tau-min must be nonnegative")
    ells = _parse_ell(args.ell)
    rhos = _linspace(args.rho_min, args.rho_max, args.rho_steps, "rho range")
    taus = _linspace(args.tau_min, args.tau_max, args.tau_steps, "tau range")
    phi = PayoffSpec(args.phi, args.r_cap)
    rows = []
    for ell in ells:
        for rho in rhos:
            for tau in taus:
                bound = value_bound(rho, tau, ell, phi, args.nu)
                rows.append([
                    fmt_g(rho), fmt_g(tau), str(ell),
                    fmt_g(bound.value), bound.case_tag, _bool_str(bound.is_tight),
                ])
    _write_csv_rows(args.out, ["rho", "tau", "ell", "value", "case_tag", "is_tight"], rows)
    config = {
        "nu": args.nu, "r_cap": args.r_cap, "phi": {"kind": args.phi},
        "rho": [args.rho_min, args.rho_max, args.rho_steps],
        "tau": [args.tau_min, args.tau_max, args.tau_steps],
        "ell": args.ell,
    }
    _write_manifest(args.out, "value-grid", argv, config, args.seed, [args.out], started)
    print(f"{len(rows)} rows -> {args.out}")
    return 0


def cmd_compare_nmax(args, argv) -> int:
    started = time.monotonic()
    if not 0.0 < args.nu_min <= args.nu_max < 1.0:
        raise CliError(
            f"--nu range must satisfy 0 < min <= max < 1, got [{args.nu_min}, {args.nu_max}]"
        )
    if not 0.0 < args.r_cap < args.rho0:
        raise CliError(f"need 0 < r_cap < rho0, got r_cap={args.r_cap}, rho0={args.rho0}")
    nus = _linspace(args.nu_min, args.nu_max, args.nu_steps, "nu range")
    rows = []
    for nu in nus:
        rows.append([
            fmt_g(nu),
            str(sense_count_self_triggered(args.rho0, args.r_cap, nu)),
            str(sense_count_arrival(args.rho0, args.r_cap, nu)),
        ])
    _write_csv_rows(args.out, ["nu", "aleem_n_max", "prop1_n_max"], rows)
    config = {
        "rho0": args.rho0, "r_cap": args.r_cap,
        "nu": [args.nu_min, args.nu_max, args.nu_steps],
    }
    _write_manifest(args.out, "compare-nmax", argv, config, args.seed, [args.out], started)
    print(f"{len(rows)} rows -> {args.out}")
    return 0


def _parse_nu_list(raw: str) -> list[float]:
    try:
        values = [float(tok) for tok in raw.split(",") if tok.strip()]
    except ValueError:
        raise CliError(f"--nu must be a comma-separated list of numbers, got {raw!r}") from None
    if not values:
        raise CliError("--nu list is empty")
    for nu in values:
        if not 0.0 < nu < 1.0:
            raise CliError(f"--nu values must lie in (0, 1), got {nu}")
    return values


def cmd_degradation(args, argv) -> int:
    started = time.monotonic()
    if not 0.0 < args.r_cap < args.rho0:
        raise CliError(f"need 0 < r_cap < rho0, got r_cap={args.r_cap}, rho0={args.rho0}")
    if args.tf_frac <= 0.0:
        raise CliError(f"--tf-frac must be positive, got {args.tf_frac}")
    nus = _parse_nu_list(args.nu)
    phi_kind = args.phi
    rows = []
    violated = False
    for nu in nus:
        t_f = args.tf_frac * (args.rho0 - args.r_cap) / (1.0 - nu)
        phi = PayoffSpec(phi_kind, args.r_cap)
        try:
            report = degradation_report(args.rho0, t_f, nu, phi)
        except RegionNotCoveredError as exc:
            print(f"warning: nu={fmt_g(nu)} skipped: {exc}", file=sys.stderr)
            continue
        for n, delta in enumerate(report.deltas):
            beta = report.betas[n] if n < len(report.betas) else None
            if beta is not None:
                floor = beta * report.continuous_payoff
                if delta < floor - 1e-9 * max(1.0, abs(floor)):
                    violated = True
                    print(
                        f"violation: nu={fmt_g(nu)} n={n}: delta {fmt_g(delta)} "
                        f"below beta*continuous_payoff {fmt_g(floor)}",
                        file=sys.stderr,
                    )
            rows.append([
                fmt_g(nu), str(n),
                fmt_g(beta) if beta is not None else "",
                fmt_g(delta),
                fmt_g(report.continuous_payoff),
                str(report.n_star),
            ])
    _write_csv_rows(
        args.out,
        ["nu", "n", "beta", "delta", "continuous_payoff", "n_star"],
        rows,
    )
    config = {
        "rho0": args.rho0, "r_cap": args.r_cap, "tf_frac": args.tf_frac,
        "nu": nus, "phi": {"kind": phi_kind},
    }
    _write_manifest(args.out, "degradation", argv, config, args.seed, [args.out], started)
    print(f"{len(rows)} rows -> {args.out}")
    return 1 if violated else 0


def cmd_verify(args, argv) -> int:
    started = time.monotonic()
    config = None
    resolved: dict = {}
    if args.config is not None:
        config, _, _, resolved = _config_from_file(args.config, args.seed)
    seed = args.seed if args.seed is not None else 0
    names = list(SUITE_NAMES) if args.suite == "all" else [args.suite]
    reports = []
    for name in names:
        reports.extend(run_suite(name, config=config, trials=args.trials,
                                 seed=seed, dt=args.dt))
    payload = json.dumps([r.to_json_dict() for r in reports], indent=2)
    print(payload)
    for report in reports:
        status = "PASS" if report.passed else "FAIL"
        print(f"{report.suite}: {status} "
              f"(trials={report.trials}, worst={fmt_g(report.worst_violation)})",
              file=sys.stderr)
    if args.out:
        Path(args.out).write_text(payload + "\n")
        _write_manifest(args.out, "verify", argv, resolved or {"suite": args.suite},
                        seed, [args.out], started)
    return 0 if all(r.passed for r in reports) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="intermittent-pursuit",
        description="Pursuit game with an intermittently sensing pursuer: "
                    "simulation, closed-form value bounds, and verification.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run one game from a JSON config")
    p_sim.add_argument("--config", required=True, help="game config JSON path")
    p_sim.add_argument("--seed", type=int, default=None, help="override the config seed")
    p_sim.add_argument("--out", default=None,
                       help="output base path; writes <out>.outcome.json and "
                            "<out>.trajectory.csv")
    p_sim.set_defaults(func=cmd_simulate)

    p_grid = sub.add_parser("value-grid", help="emit the closed-form value bound on a grid")
    p_grid.add_argument("--nu", type=float, required=True)
    p_grid.add_argument("--r-cap", type=float, required=True, dest="r_cap")
    p_grid.add_argument("--phi", choices=["hinge", "quadratic-above-capture"],
                        default="hinge")
    p_grid.add_argument("--rho-min", type=float, default=0.0)
    p_grid.add_argument("--rho-max", type=float, required=True)
    p_grid.add_argument("--rho-steps", type=int, default=300)
    p_grid.add_argument("--tau-min", type=float, default=0.0)
    p_grid.add_argument("--tau-max", type=float, required=True)
    p_grid.add_argument("--tau-steps", type=int, default=300)
    p_grid.add_argument("--ell", default="0", help="budget: integer or lo:hi range")
    p_grid.add_argument("--seed", type=int, default=0)
    p_grid.add_argument("--out", required=True, help="CSV output path")
    p_grid.set_defaults(func=cmd_value_grid)

    p_cmp = sub.add_parser("compare-nmax",
                           help="sensing counts of both schemes across nu")
    p_cmp.add_argument("--rho0", type=float, default=5.0)
    p_cmp.add_argument("--r-cap", type=float, default=0.1, dest="r_cap")
    p_cmp.add_argument("--nu-min", type=float, required=True)
    p_cmp.add_argument("--nu-max", type=float, required=True)
    p_cmp.add_argument("--nu-steps", type=int, default=19)
    p_cmp.add_argument("--seed", type=int, default=0)
    p_cmp.add_argument("--out", required=True, help="CSV output path")
    p_cmp.set_defaults(func=cmd_compare_nmax)

    p_deg = sub.add_parser("degradation",
                           help="payoff degradation vs. sensing budget")
    p_deg.add_argument("--rho0", type=float, default=5.0)
    p_deg.add_argument("--r-cap", type=float, default=0.1, dest="r_cap")
    p_deg.add_argument("--tf-frac", type=float, default=0.9, dest="tf_frac",
                       help="horizon as a fraction of the capture-time bound")
    p_deg.add_argument("--nu", required=True,
                       help="comma-separated evader speeds, e.g. 0.5,0.6,0.7,0.8")
    p_deg.add_argument("--phi", choices=["hinge", "quadratic-above-capture"],
                       default="hinge")
    p_deg.add_argument("--seed", type=int, default=0)
    p_deg.add_argument("--out", required=True, help="CSV output path")
    p_deg.set_defaults(func=cmd_degradation)

    p_ver = sub.add_parser("verify", help="run verification suites")
    p_ver.add_argument("suite", choices=list(SUITE_NAMES) + ["all"])
    p_ver.add_argument("--trials", type=int, default=1000)
    p_ver.add_argument("--seed", type=int, default=None)
    p_ver.add_argument("--dt", type=float, default=1e-3,
                       help="oracle sampling step")
    p_ver.add_argument("--config", default=None,
                       help="optional game config JSON for the suite")
    p_ver.add_argument("--out", default=None, help="write the report JSON here")
    p_ver.set_defaults(func=cmd_verify)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, argv)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
