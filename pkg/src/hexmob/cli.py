"""Command-line front end: ``hexmob {run,sweep,validate}``.

Exit codes: 0 success, 1 usage or configuration error, 2 runtime failure
(including invariant violations found by ``validate``).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Union

from .errors import HexmobError, InvariantViolation
from .schemes import SchemeConfig, SchemeKind
from .sim_engine import SimConfig, SimReport, SweepReport, run, sweep

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2

SUMMARY_HEADER = "station_id,updates"
LOG_HEADER = "time,user_id,cell_id,trigger,state,velocity,direction"
SWEEP_HEADER = "velocity,stations,mean_updates_ready,mean_updates_standby,mean_total,std_total,runs"

_BASE = SimConfig()

# flag dest -> (default, type, help)
OPTIONS: Dict[str, tuple] = {
    "stations": (_BASE.stations, int, "number of mobile stations"),
    "rows": (_BASE.rows, int, "grid rows"),
    "cols": (_BASE.cols, int, "grid columns"),
    "cell_radius": (_BASE.cell_radius, float, "hexagon circumradius"),
    "radio_range": (_BASE.coverage_radius, float, "coverage radius in cell radii"),
    "la_size": (_BASE.la_size, int, "cells per location area"),
    "scheme": ("distance", str, "update scheme: distance or la"),
    "threshold": (_BASE.scheme.distance_threshold_d, int, "distance threshold D in hops"),
    "max_speed": (_BASE.max_speed, float, "station speed, length units per 1000 time units"),
    "motion_timescale": (_BASE.motion_timescale, float, "mean time between heading changes"),
    "avg_tx_time": (_BASE.avg_tx_time, float, "mean packet session duration"),
    "session_interarrival": (_BASE.session_interarrival_mean, float, "mean time between sessions"),
    "sim_time": (_BASE.sim_time, float, "simulated time"),
    "dt": (_BASE.dt, float, "tick length"),
    "ready_timer": (_BASE.ready_timer, float, "READY timer"),
    "standby_timer": (_BASE.standby_timer, float, "STANDBY timer"),
    "seed": (_BASE.seed, int, "base seed (falls back to $HEXMOB_SEED)"),
    "runs": (30, int, "seeds per velocity (sweep)"),
    "velocities": ("1,2,4,8", str, "comma-separated speeds (sweep)"),
    "workers": (1, int, "worker processes (sweep)"),
}


class UsageError(HexmobError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


@dataclass
class CliConfig:
    subcommand: str
    sim: SimConfig
    runs: int = 30
    velocities: List[float] = field(default_factory=lambda: [1.0, 2.0, 4.0, 8.0])
    workers: int = 1
    out: Optional[str] = None
    log: Optional[str] = None
    validate: bool = False
    config_path: Optional[str] = None


def _add_common(p: argparse.ArgumentParser) -> None:
    for dest, (default, _typ, help_) in OPTIONS.items():
        flag = "--" + dest.replace("_", "-")
        kw = {"dest": dest, "default": None, "help": f"{help_} (default: {default})"}
        if dest == "scheme":
            kw["choices"] = ["distance", "la"]
        elif dest != "velocities":
            kw["type"] = _typ
        p.add_argument(flag, **kw)
    p.add_argument("--config", dest="config_path", help="JSON file of option values")
    p.add_argument("--out", help="CSV destination for the summary or sweep (default: stdout)")
    p.add_argument("--log", help="CSV destination for the HLR update log (run only)")
    p.add_argument("--validate", action="store_true", help="check invariants every tick")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hexmob", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", metavar="{run,sweep,validate}", parser_class=_Parser)
    for name, help_ in (
        ("run", "simulate once and write per-station update counts"),
        ("sweep", "mean HLR updates versus velocity over many seeds"),
        ("validate", "simulate with per-tick invariant checks"),
    ):
        _add_common(sub.add_parser(name, help=help_))
    return parser


def _parse_velocities(text: str) -> List[float]:
    try:
        vals = [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"--velocities must be comma-separated numbers, got {text!r}")
    if not vals:
        raise UsageError("--velocities must not be empty")
    return vals


def parse_args(argv: Sequence[str]) -> CliConfig:
    ns = build_parser().parse_args(list(argv))
    if not ns.subcommand:
        raise UsageError("missing subcommand (run, sweep or validate)")

    values = {dest: spec[0] for dest, spec in OPTIONS.items()}
    env_seed = os.environ.get("HEXMOB_SEED")
    if env_seed is not None:
        try:
            values["seed"] = int(env_seed)
        except ValueError:
            raise UsageError(f"HEXMOB_SEED must be an integer, got {env_seed!r}")
    if ns.config_path:
        try:
            with open(ns.config_path) as fh:
                from_file = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {ns.config_path}: {exc}")
        for key, val in from_file.items():
            dest = key.replace("-", "_")
            if dest not in OPTIONS:
                raise UsageError(f"unknown key {key!r} in {ns.config_path}")
            values[dest] = val
    for dest in OPTIONS:
        given = getattr(ns, dest)
        if given is not None:
            values[dest] = given

    try:
        kind = SchemeKind(values["scheme"])
        if kind is SchemeKind.DISTANCE:
            scheme = SchemeConfig.distance(int(values["threshold"]))
        else:
            scheme = SchemeConfig.location_area()
        sim = SimConfig(
            stations=int(values["stations"]),
            rows=int(values["rows"]),
            cols=int(values["cols"]),
            cell_radius=float(values["cell_radius"]),
            coverage_radius=float(values["radio_range"]),
            la_size=int(values["la_size"]),
            scheme=scheme,
            max_speed=float(values["max_speed"]),
            motion_timescale=float(values["motion_timescale"]),
            avg_tx_time=float(values["avg_tx_time"]),
            session_interarrival_mean=float(values["session_interarrival"]),
            sim_time=float(values["sim_time"]),
            dt=float(values["dt"]),
            seed=int(values["seed"]),
            ready_timer=float(values["ready_timer"]),
            standby_timer=float(values["standby_timer"]),
        )
        sim.validate()
    except ValueError as exc:
        # ConfigurationError is a ValueError too
        raise UsageError(str(exc))
    runs = int(values["runs"])
    if runs < 1:
        raise UsageError(f"--runs must be >= 1, got {runs}")
    return CliConfig(
        subcommand=ns.subcommand,
        sim=sim,
        runs=runs,
        velocities=_parse_velocities(values["velocities"]),
        workers=max(1, int(values["workers"])),
        out=ns.out,
        log=ns.log,
        validate=ns.validate,
        config_path=ns.config_path,
    )


def fmt(x) -> str:
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, int):
        return str(x)
    return f"{x:.6g}"


def _lines(rows) -> str:
    return "".join(",".join(fmt(v) if not isinstance(v, str) else v for v in row) + "\n" for row in rows)


def format_summary(report: SimReport) -> str:
    rows = [(i, n) for i, n in enumerate(report.per_station_updates)]
    rows.append(("total", report.total_updates))
    return SUMMARY_HEADER + "\n" + _lines(rows)


def format_log(report: SimReport) -> str:
    rows = [
        (r.time, r.user_id, r.cell_id, r.trigger.label, r.state_at_trigger.name, r.velocity, r.direction)
        for r in report.log
    ]
    return LOG_HEADER + "\n" + _lines(rows)


def format_sweep(report: SweepReport) -> str:
    rows = [
        (r.velocity, r.stations, r.mean_updates_ready, r.mean_updates_standby,
         r.mean_total, r.std_total, r.runs)
        for r in report.rows
    ]
    return SWEEP_HEADER + "\n" + _lines(rows)


def _write(text: str, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def emit_report(
    report: Union[SimReport, SweepReport],
    path: Optional[str],
    log_path: Optional[str] = None,
) -> None:
    """Write a report as CSV; ``log_path`` additionally receives a run's HLR log."""
    if isinstance(report, SweepReport):
        _write(format_sweep(report), path)
        return
    _write(format_summary(report), path)
    if log_path is not None:
        _write(format_log(report), log_path)


def validate(config: CliConfig) -> int:
    try:
        run(config.sim, validate=True)
    except InvariantViolation as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    print(f"ok: {config.sim.n_ticks} ticks x {config.sim.stations} stations, no violations")
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)

    try:
        if cfg.subcommand == "validate":
            return validate(cfg)
        if cfg.subcommand == "run":
            emit_report(run(cfg.sim, validate=cfg.validate), cfg.out, cfg.log)
        else:
            emit_report(sweep(cfg.sim, cfg.velocities, cfg.runs, workers=cfg.workers), cfg.out)
    except InvariantViolation as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (HexmobError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
