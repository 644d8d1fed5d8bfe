"""Command-line front end: ``reidlab {simulate,verify,parametric,kepler}``.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 numerical singularity. Logging verbosity comes from ``REIDLAB_LOG``
(error, warn, info, debug).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from . import __version__
from .emden_fowler import ef_residual, parametric_solution
from .errors import ConfigError, SingularityError
from .invariant import Formulation, drift_report, sample_invariant
from .linear import FrequencyModel, SuperpositionCoefficients, solve_basis
from .mechanics import KeplerParams, energy_terms, radial_invariant, radial_solution, radial_velocity
from .numerics import ToleranceConfig
from .reid import ReidParams, induced_ics, simulate_reid

log = logging.getLogger("reidlab")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_SINGULAR = 0, 1, 2, 3

SIMULATE_COLUMNS = ["t", "q", "q_t", "qtilde", "qtilde_t", "Y", "I"]
PARAMETRIC_COLUMNS = ["Qtilde", "Y", "rtilde", "check_r_eq_QsqrtY"]
KEPLER_COLUMNS = ["t", "R", "R_dot", "I", "kinetic", "nonlinear", "potential"]

_LOG_LEVELS = {"error": logging.ERROR, "warn": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}


@dataclass
class RunConfig:
    m: int = 2
    alpha: float = 1.0
    wronskian: float = 1.0
    frequency: Dict[str, Any] = field(default_factory=lambda: {"kind": "constant", "parameters": [1.0]})
    t0: float = 0.0
    t1: float = 10.0
    tol: Dict[str, Any] = field(default_factory=lambda: {"rel_tol": 1e-10, "abs_tol": 1e-12})
    ics: Dict[str, Any] = field(default_factory=lambda: {"a": 1.0, "b": 0.0})
    output: str = "csv"
    seed: int = 0

    def validate(self):
        self.params()
        self.freq()
        self.tolerance()
        self.coeffs()
        if not self.t1 > self.t0:
            raise ConfigError("t1 must exceed t0")
        if self.wronskian == 0:
            raise ConfigError("wronskian must be nonzero")
        if self.output not in ("csv", "json"):
            raise ConfigError("output must be csv or json")
        return self

    def params(self) -> ReidParams:
        return ReidParams(self.m, self.alpha)

    def freq(self) -> FrequencyModel:
        try:
            return FrequencyModel.from_dict(self.frequency)
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"bad frequency spec: {exc}") from exc

    def tolerance(self) -> ToleranceConfig:
        return ToleranceConfig(**self.tol)

    def coeffs(self) -> SuperpositionCoefficients:
        return SuperpositionCoefficients(float(self.ics.get("a", 1.0)), float(self.ics.get("b", 0.0)))


def _configure_logging():
    level = os.environ.get("REIDLAB_LOG", "warn").lower()
    logging.basicConfig(
        level=_LOG_LEVELS.get(level, logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def _fmt(x) -> str:
    if x is None or not np.isfinite(x):
        return ""
    return format(float(x), ".17g")


def _csv_text(columns: List[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _json_number(x):
    x = float(x)
    return x if np.isfinite(x) else None


def _timestamp() -> str:
    # SOURCE_DATE_EPOCH pins the timestamp for byte-identical reports
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    now = datetime.fromtimestamp(int(epoch), timezone.utc) if epoch else datetime.now(timezone.utc)
    return now.isoformat()


@dataclass
class Report:
    """Metadata, named tables and verdicts; serialised per ``report_schema.json``."""

    metadata: Dict[str, Any]
    tables: Dict[str, Dict[str, Any]]
    verdicts: List[Dict[str, Any]]

    def __post_init__(self):
        for v in self.verdicts:
            if "measured" not in v or "threshold" not in v:
                raise ValueError(f"verdict {v.get('name')!r} lacks measured value or threshold")

    def to_dict(self) -> dict:
        return {"metadata": self.metadata, "tables": self.tables, "verdicts": self.verdicts}


def make_report(command: str, config: dict, tables: dict, verdicts: List[dict]) -> dict:
    return Report(
        metadata={
            "command": command,
            "version": __version__,
            "created": _timestamp(),
            "config": config,
        },
        tables={
            name: {"columns": cols, "rows": [[_json_number(v) for v in row] for row in rows]}
            for name, (cols, rows) in tables.items()
        },
        verdicts=verdicts,
    ).to_dict()


def _verdict(name, measured, threshold, detail=""):
    ok = bool(np.isfinite(measured) and measured < threshold)
    return {
        "name": name,
        "measured": _json_number(measured),
        "threshold": float(threshold),
        "status": "pass" if ok else "fail",
        "detail": detail,
    }


def _emit(args, command, config, columns, rows, verdicts, extra_tables=None):
    tables = {"table": (columns, rows)}
    tables.update(extra_tables or {})
    report = make_report(command, config, tables, verdicts)
    if args.out is not None:
        Path(args.out).write_text(_csv_text(columns, rows))
    if args.report is not None:
        Path(args.report).write_text(json.dumps(report, indent=2))
    if args.output == "json":
        sys.stdout.write(json.dumps(report, indent=2) + "\n")
    elif args.out is None:
        sys.stdout.write(_csv_text(columns, rows))
    for v in verdicts:
        log.info("%s: %s (measured %s, threshold %s)", v["name"], v["status"], v["measured"], v["threshold"])
    return report


def build_run_config(args) -> RunConfig:
    """Defaults, then the ``--config`` JSON file, then explicit flags."""
    cfg = RunConfig()
    if args.config is not None:
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        unknown = set(data) - set(asdict(cfg))
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        for k, v in data.items():
            setattr(cfg, k, v)
    for name in ("m", "alpha", "wronskian", "t0", "t1", "output", "seed"):
        value = getattr(args, name)
        if value is not None:
            setattr(cfg, name, value)
    if args.frequency is not None or args.omega2 is not None:
        kind = args.frequency or cfg.frequency.get("kind", "constant")
        params = args.omega2 if args.omega2 is not None else cfg.frequency.get("parameters", [])
        if kind == "zero":
            params = []
        cfg.frequency = {"kind": kind, "parameters": list(params)}
    tol = dict(cfg.tol)
    if args.tol_rel is not None:
        tol["rel_tol"] = args.tol_rel
    if args.tol_abs is not None:
        tol["abs_tol"] = args.tol_abs
    cfg.tol = tol
    ics = dict(cfg.ics)
    for flag, key in (("a", "a"), ("b", "b"), ("qtilde0", "qtilde"), ("qtilde_t0", "qtilde_t")):
        value = getattr(args, flag)
        if value is not None:
            ics[key] = value
    cfg.ics = ics
    return cfg.validate()


def cmd_simulate(args) -> int:
    cfg = build_run_config(args)
    params, freq, tol, coeffs = cfg.params(), cfg.freq(), cfg.tolerance(), cfg.coeffs()
    W = float(cfg.wronskian)
    basis = solve_basis(freq, cfg.t0, cfg.t1, tol, wronskian=W)
    if "qtilde" in cfg.ics:
        ics = (float(cfg.ics["qtilde"]), float(cfg.ics.get("qtilde_t", 0.0)))
    else:
        ics = induced_ics(basis, params, cfg.t0)
    form = Formulation(args.formulation or ("m2_physical" if cfg.m == 2 else "higher_physical"))
    grid = np.linspace(cfg.t0, cfg.t1, args.samples)
    traj = simulate_reid(freq, params, basis, coeffs, ics, cfg.t0, cfg.t1, tol, t_eval=grid)
    report = drift_report(traj, form)
    I = sample_invariant(traj, form)
    q1, q2 = traj.basis.q1.component(0), traj.basis.q2.component(0)
    with np.errstate(divide="ignore", invalid="ignore"):
        Y = q2 / (W * q1)
    rows = np.column_stack(
        [traj.grid, traj.base.component(0), traj.base.component(1), traj.aux.component(0), traj.aux.component(1), Y, I]
    )
    config = asdict(cfg)
    config["formulation"] = form.value
    config["qtilde_ics"] = list(ics)
    drift = report.to_dict()
    verdicts = [_verdict("invariant_rel_drift", report.rel_drift, args.drift_threshold, form.value)]
    _emit(
        args,
        "simulate",
        config,
        SIMULATE_COLUMNS,
        rows.tolist(),
        verdicts,
        {"drift": (list(drift)[1:], [[drift[k] for k in list(drift)[1:]]])},
    )
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run

    results = run(args.suite, args.seed)
    verdicts = []
    for suite, items in results.items():
        for v in items:
            d = v.to_dict()
            d["suite"] = suite
            verdicts.append(d)
    report = make_report("verify", {"suite": args.suite, "seed": args.seed}, {}, verdicts)
    text = json.dumps(report, indent=2)
    if args.out is not None:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text + "\n")
    failed = [v["name"] for v in verdicts if v["status"] == "fail"]
    if failed:
        log.error("failed: %s", ", ".join(failed))
        return EXIT_FAIL
    return EXIT_OK


def cmd_parametric(args) -> int:
    from .invariant import polyanin_invariant

    params = ReidParams(args.m, args.alpha)
    W = float(args.wronskian)
    I = args.I if args.I is not None else polyanin_invariant(params, W)
    sol = parametric_solution(params, W, I, (args.q_lo, args.q_hi), args.branch, args.tau0, args.n)
    check = np.abs(sol.rtilde_of_Q - sol.Qtilde_grid * np.sqrt(sol.Y_of_Q))
    rows = np.column_stack([sol.Qtilde_grid, sol.Y_of_Q, sol.rtilde_of_Q, check]).tolist()
    resid = float(np.max(ef_residual(sol.as_path(), params, W)))
    verdicts = [
        _verdict("r_eq_Q_sqrtY", float(np.max(check)), 1e-10),
        _verdict("ef_residual", resid, 1e-4),
    ]
    config = {
        "m": args.m, "alpha": args.alpha, "wronskian": W, "I": I, "Q_lo": args.q_lo,
        "Q_hi": args.q_hi, "branch": args.branch, "tau0": args.tau0, "n": args.n,
    }
    _emit(args, "parametric", config, PARAMETRIC_COLUMNS, rows, verdicts)
    return EXIT_OK


def cmd_kepler(args) -> int:
    kp = KeplerParams(M=args.M, l=args.l, m=args.m)
    if not args.t1 > args.t0:
        raise ConfigError("t1 must exceed t0")
    t = np.linspace(args.t0, args.t1, args.n)
    R = radial_solution(t, kp)
    Rd = radial_velocity(t, kp)
    I = radial_invariant(R, Rd, kp)
    kin, nonlin, pot = energy_terms(R, Rd, kp)
    rows = np.column_stack([t, R, Rd, I, kin, nonlin, pot]).tolist()
    verdicts = [_verdict("invariant_zero", float(np.max(np.abs(I))), 1e-8, "Reid-formula solution")]
    config = {"m": args.m, "l": args.l, "M": args.M, "t0": args.t0, "t1": args.t1, "n": args.n}
    _emit(args, "kepler", config, KEPLER_COLUMNS, rows, verdicts)
    return EXIT_OK


def _add_output_flags(p: argparse.ArgumentParser, with_format: bool = True):
    if with_format:
        p.add_argument("--output", choices=["csv", "json"], default=None,
                       help="stdout format: the CSV table or the JSON report")
        p.add_argument("--report", type=Path, default=None, help="also write the JSON report here")
    p.add_argument("--out", type=Path, default=None, help="write the table (or verify report) to this file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="reidlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="integrate a Reid system and track its invariant")
    sim.add_argument("--config", type=Path, default=None, help="JSON file with RunConfig keys")
    sim.add_argument("--m", type=int, default=None)
    sim.add_argument("--alpha", type=float, default=None)
    sim.add_argument("--wronskian", type=float, default=None)
    sim.add_argument("--frequency", choices=["constant", "zero", "polynomial"], default=None)
    sim.add_argument("--omega2", type=float, nargs="+", default=None,
                     help="omega^2 value (constant) or ascending coefficients (polynomial)")
    sim.add_argument("--t0", type=float, default=None)
    sim.add_argument("--t1", type=float, default=None)
    sim.add_argument("--tol-rel", type=float, default=None)
    sim.add_argument("--tol-abs", type=float, default=None)
    sim.add_argument("--a", type=float, default=None, help="q = a q1 + b q2")
    sim.add_argument("--b", type=float, default=None)
    sim.add_argument("--qtilde0", type=float, default=None,
                     help="initial qtilde (default: value induced by the Reid superposition)")
    sim.add_argument("--qtilde-t0", type=float, default=None)
    sim.add_argument("--formulation", choices=[f.value for f in Formulation], default=None)
    sim.add_argument("--samples", type=int, default=201)
    sim.add_argument("--drift-threshold", type=float, default=1e-6)
    sim.add_argument("--seed", type=int, default=None)
    _add_output_flags(sim)
    sim.set_defaults(func=cmd_simulate)

    ver = sub.add_parser("verify", help="run property suites and report pass/fail")
    ver.add_argument("suite", nargs="?", default="all",
                     choices=["superposition", "invariants", "ef_chain", "abel", "mechanics", "all"])
    ver.add_argument("--seed", type=int, default=0)
    _add_output_flags(ver, with_format=False)
    ver.set_defaults(func=cmd_verify)

    par = sub.add_parser("parametric", help="tabulate the parametric Emden-Fowler solution")
    par.add_argument("--m", type=int, required=True)
    par.add_argument("--alpha", type=float, required=True)
    par.add_argument("--wronskian", type=float, default=1.0)
    par.add_argument("--I", type=float, default=None, help="invariant (default: the square-root-ray value)")
    par.add_argument("--q-lo", type=float, required=True)
    par.add_argument("--q-hi", type=float, required=True)
    par.add_argument("--branch", choices=["+", "-"], default="+")
    par.add_argument("--tau0", type=float, default=1.0)
    par.add_argument("--n", type=int, default=1001)
    _add_output_flags(par)
    par.set_defaults(func=cmd_parametric)

    kep = sub.add_parser("kepler", help="tabulate the hyperbolic radial oscillator")
    kep.add_argument("--m", type=int, default=2)
    kep.add_argument("--l", type=float, default=1.0)
    kep.add_argument("--M", type=float, default=1.0)
    kep.add_argument("--t0", type=float, default=-2.0)
    kep.add_argument("--t1", type=float, default=2.0)
    kep.add_argument("--n", type=int, default=201)
    _add_output_flags(kep)
    kep.set_defaults(func=cmd_kepler)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "output", None) is None and hasattr(args, "output"):
        args.output = None if args.command == "simulate" else "csv"
    try:
        code = args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SingularityError as exc:
        print(f"singularity: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    return code


if __name__ == "__main__":
    sys.exit(main())
