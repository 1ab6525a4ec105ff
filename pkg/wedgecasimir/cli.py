"""Command-line interface.

Subcommands:
  tensor    regularized stress tensor; --oracle images|split adds the oracle and its deviation
  force     wall surface-force density
  polder    Casimir-Polder potential and force over an (r, theta) grid
  string    vacuum tensor around a cosmic string, compared with the wedge p = beta
  validate  acceptance checks, one row per check
  sweep     any of tensor/force/polder over a grid of p, r and (for polder) theta
"""

import argparse
import itertools
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Union

import numpy as np

from . import casimir_polder as cp
from .closed_form import (
    SKIN_DEPTH_NOTE,
    ForceNormalization,
    StringParams,
    string_tensor,
    string_wedge_analogue,
    surface_force_density,
    theta_tensor,
)
from .config import OUTPUT_FORMATS, Config, load_config
from .errors import (
    EXIT_DESCRIPTIONS,
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_USAGE,
    UsageError,
    WedgeCasimirError,
)
from .geometry import ArbitraryWedge, Medium, UnitSystem, WedgeGeometry
from .mode_sum import Route, StressTensor, regularized_tensor_oracle
from .output import ResultTable, render
from .quadrature import ExtrapolationSpec, QuadratureSpec
from .validate import CHECKS, run_checks

log = logging.getLogger(__name__)

LENGTH_SUFFIXES = {
    "nm": 1e-9,
    "um": 1e-6,
    "mm": 1e-3,
    "cm": 1e-2,
    "m": 1.0,
}

DIAGONAL = ("rr", "thetatheta", "zz", "w", "trace")
TENSOR_COLUMNS = ("p", "r", *DIAGONAL, "unit")
ORACLE_TENSOR_COLUMNS = (
    "p", "r", *DIAGONAL, *(f"oracle_{name}" for name in DIAGONAL), "max_rel_deviation", "unit",
)
POLDER_COLUMNS = ("p", "r", "theta", "u", "force_r", "force_theta", "energy_unit", "force_unit")
ORACLE_POLDER_COLUMNS = (
    "p", "r", "theta", "u", "force_r", "force_theta", "u_oracle", "max_rel_deviation",
    "energy_unit", "force_unit",
)
FORCE_COLUMNS = ("p", "r", "sigma", "unit")
STRING_COLUMNS = ("beta", "r", *DIAGONAL[:4], "unit")
ANALOGUE_STRING_COLUMNS = (
    "beta", "r", *DIAGONAL[:4], *(f"wedge_{name}" for name in DIAGONAL[:4]), "max_rel_deviation",
    "unit",
)


class ArgumentParser(argparse.ArgumentParser):
    """argparse that raises UsageError instead of exiting."""

    def error(self, message: str) -> None:
        raise UsageError(message)


@dataclass
class RunConfig:
    """Effective settings after merging flags over the config file."""

    medium: Medium
    units: UnitSystem
    fmt: str
    quad: QuadratureSpec
    extrap: ExtrapolationSpec
    workers: int
    p_max: int

    @classmethod
    def from_args(cls, args: argparse.Namespace, config: Config) -> "RunConfig":
        if args.eps is not None:
            config.eps = args.eps
        if args.mu is not None:
            config.mu = args.mu
        if args.units is not None:
            config.units = args.units
        if args.format is not None:
            config.format = args.format
        if args.rel_tol is not None:
            config.rel_tol = args.rel_tol
        if args.abs_tol is not None:
            config.abs_tol = args.abs_tol
        if args.workers is not None:
            config.workers = args.workers
        if config.workers < 1:
            raise UsageError("--workers must be at least 1")
        return cls(
            medium=config.medium(),
            units=config.unit_system(),
            fmt=config.format,
            quad=config.quadrature_spec(),
            extrap=config.extrapolation_spec(),
            workers=config.workers,
            p_max=config.p_max,
        )


# ---------------------------------------------------------------------------
# Argument parsing helpers
# ---------------------------------------------------------------------------

def parse_length(text: str, units: UnitSystem) -> float:
    """A length in the unit system's length unit; suffixes need a dimensional system."""
    text = str(text).strip()
    for suffix, metres in LENGTH_SUFFIXES.items():
        if text.endswith(suffix):
            number = text[: -len(suffix)]
            if units.metres_per_length is None:
                raise UsageError(f"length {text!r} has a unit but --units is natural")
            return _number(number) * metres / units.metres_per_length
    return _number(text)


def _number(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise UsageError(f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise UsageError(f"not a finite number: {text!r}")
    return value


def parse_values(text: str, convert: Callable[[str], float] = _number) -> List[float]:
    """Comma list "1,2,5" or inclusive range "a:b:n" with n evenly spaced values."""
    text = str(text).strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"range must look like start:stop:count, got {text!r}")
        start, stop = convert(parts[0]), convert(parts[1])
        try:
            count = int(parts[2])
        except ValueError:
            raise UsageError(f"range count must be an integer, got {parts[2]!r}") from None
        if count < 1:
            raise UsageError("range count must be positive")
        values = [float(v) for v in np.linspace(start, stop, count)]
    else:
        values = [convert(part) for part in text.split(",") if part.strip()]
    if not values:
        raise UsageError(f"no values in {text!r}")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise UsageError(f"values must be strictly increasing, got {text!r}")
    return values


def parse_p_values(text: str) -> List[int]:
    values = parse_values(text)
    ints = [int(round(v)) for v in values]
    if any(abs(v - i) > 1e-9 for v, i in zip(values, ints)):
        raise UsageError(f"wedge parameter p must be integral, got {text!r}")
    return ints


def _wedge(args: argparse.Namespace, oracle: bool, run: RunConfig) -> Union[WedgeGeometry, ArbitraryWedge]:
    if args.alpha is not None:
        if oracle:
            raise UsageError("--alpha is only accepted by closed-form paths; oracles need --p")
        return ArbitraryWedge(args.alpha)
    if args.p is None:
        raise UsageError("one of --p or --alpha is required")
    return _integer_wedge(args.p, oracle, run)


def _integer_wedge(p: int, oracle: bool, run: RunConfig) -> WedgeGeometry:
    geom = WedgeGeometry(p)
    if oracle and geom.p > run.p_max:
        raise UsageError(f"p = {geom.p} exceeds p_max = {run.p_max} for oracle evaluation")
    return geom


def _route(name: Optional[str]) -> Optional[Route]:
    return None if name is None else Route(name)


def _meta(args: argparse.Namespace, run: RunConfig, **extra) -> dict:
    return {
        "command": args.command,
        "eps": run.medium.epsilon,
        "mu": run.medium.mu,
        "units": run.units.value,
        **extra,
    }


# ---------------------------------------------------------------------------
# Row builders, shared by the single-shot commands and sweeps
# ---------------------------------------------------------------------------

def _diagonal(tensor: StressTensor, scale: float) -> tuple:
    return (
        tensor.r_r * scale, tensor.theta_theta * scale, tensor.z_z * scale,
        tensor.energy_density * scale, tensor.trace * scale,
    )


def _tensor_row(geom, r: float, run: RunConfig, route: Optional[Route]) -> tuple:
    closed = theta_tensor(geom, run.medium, r)
    scale = run.units.hbar_c
    values = _diagonal(closed, scale)
    if route is not None:
        oracle = regularized_tensor_oracle(geom, run.medium, r, run.quad, run.extrap, route)
        values += (*_diagonal(oracle, scale), oracle.max_relative_deviation(closed))
    return (float(geom.p), r, *values, run.units.pressure_label)


def _force_row(geom, r: float, run: RunConfig, normalization: ForceNormalization) -> tuple:
    force = surface_force_density(geom, run.medium, r, run.units, normalization)
    return (float(geom.p), r, force.value, force.unit_label)


def _polder_row(geom, r: float, theta: float, alpha0: float, run: RunConfig,
                route: Optional[Route]) -> tuple:
    dip = cp.DipoleParams(alpha0)
    closed = cp.u_closed(geom, run.medium, dip, r, theta)
    scale = run.units.hbar_c
    values = (closed.u * scale, closed.force_r * scale, closed.force_theta * scale)
    if route is not None:
        u = cp.u_regularized_oracle(geom, run.medium, dip, r, theta, run.quad, run.extrap, route)
        values += (u * scale, abs(u - closed.u) / abs(closed.u))
    return (float(geom.p), r, theta, *values, run.units.energy_label, run.units.force_label)


def _polder_angles(args: argparse.Namespace, geom) -> List[float]:
    if args.theta is not None:
        return parse_values(args.theta)
    return [fraction * geom.alpha for fraction in parse_values(args.theta_fraction)]


def _evaluate(table: ResultTable, row: Callable[[tuple], tuple], grid: list, workers: int) -> None:
    # map preserves input order
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for values in pool.map(row, grid):
            table.add(*values)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_tensor(args: argparse.Namespace, run: RunConfig) -> ResultTable:
    route = _route(args.oracle)
    geom = _wedge(args, route is not None, run)
    r = parse_length(args.r, run.units)
    columns = TENSOR_COLUMNS if route is None else ORACLE_TENSOR_COLUMNS
    table = ResultTable(columns, meta=_meta(args, run, route=args.oracle or "closed"))
    table.add(*_tensor_row(geom, r, run, route))
    return table


def cmd_force(args: argparse.Namespace, run: RunConfig) -> ResultTable:
    geom = _wedge(args, False, run)
    r = parse_length(args.r, run.units)
    normalization = ForceNormalization(args.normalization)
    table = ResultTable(FORCE_COLUMNS, meta=_meta(args, run, normalization=normalization.value,
                                                  note=SKIN_DEPTH_NOTE))
    table.add(*_force_row(geom, r, run, normalization))
    return table


def cmd_polder(args: argparse.Namespace, run: RunConfig) -> ResultTable:
    """U and force over the product of --r and the angle list, r outermost."""
    route = _route(args.oracle)
    geom = _wedge(args, route is not None, run)
    r_values = parse_values(args.r, lambda text: parse_length(text, run.units))
    grid = list(itertools.product(r_values, _polder_angles(args, geom)))
    columns = POLDER_COLUMNS if route is None else ORACLE_POLDER_COLUMNS
    table = ResultTable(columns, meta=_meta(args, run, alpha0=args.alpha0,
                                            route=args.oracle or "closed"))

    def row(point):
        return _polder_row(geom, point[0], point[1], args.alpha0, run, route)

    _evaluate(table, row, grid, run.workers)
    return table


def cmd_string(args: argparse.Namespace, run: RunConfig) -> ResultTable:
    """String tensor; for integral beta also the matching wedge and their deviation."""
    if (args.beta is None) == (args.g_mu is None):
        raise UsageError("give exactly one of --beta or --g-mu")
    params = StringParams(args.beta) if args.beta is not None else StringParams.from_g_mu(args.g_mu)
    r = parse_length(args.r, run.units)
    tensor = string_tensor(params, r)
    wedge = string_wedge_analogue(params, run.medium, r)
    scale = run.units.hbar_c
    values = _diagonal(tensor, scale)[:4]
    if wedge is None:
        table = ResultTable(STRING_COLUMNS, meta=_meta(args, run))
    else:
        table = ResultTable(ANALOGUE_STRING_COLUMNS, meta=_meta(args, run, wedge_p=round(params.beta)))
        values += (*_diagonal(wedge, scale)[:4], wedge.max_relative_deviation(tensor))
    table.add(params.beta, r, *values, run.units.pressure_label)
    return table


def cmd_validate(args: argparse.Namespace, run: RunConfig) -> ResultTable:
    names = args.only or None
    if names:
        unknown = [n for n in names if n not in CHECKS]
        if unknown:
            raise UsageError(f"unknown check(s): {', '.join(unknown)}")
    results = run_checks(run.quad, run.extrap, names)
    table = ResultTable(("name", "measured", "tolerance", "passed"), meta=_meta(args, run))
    for res in results:
        table.add(res.name, res.measured, res.tolerance, res.passed)
    table.meta["failed"] = sum(1 for res in results if not res.passed)
    return table


def cmd_sweep(args: argparse.Namespace, run: RunConfig) -> ResultTable:
    route = _route(args.oracle)
    if route is not None and args.quantity == "force":
        raise UsageError("force has no oracle route")
    p_values = parse_p_values(args.p)
    r_values = parse_values(args.r, lambda text: parse_length(text, run.units))
    geoms = [_integer_wedge(p, route is not None, run) for p in p_values]

    if args.quantity == "tensor":
        columns = TENSOR_COLUMNS if route is None else ORACLE_TENSOR_COLUMNS
        grid = list(itertools.product(geoms, r_values))

        def row(point):
            return _tensor_row(point[0], point[1], run, route)
    elif args.quantity == "force":
        columns = FORCE_COLUMNS
        grid = list(itertools.product(geoms, r_values))
        normalization = ForceNormalization(args.normalization)

        def row(point):
            return _force_row(point[0], point[1], run, normalization)
    else:
        columns = POLDER_COLUMNS if route is None else ORACLE_POLDER_COLUMNS
        grid = [
            (geom, r, theta)
            for geom in geoms
            for r in r_values
            for theta in _polder_angles(args, geom)
        ]

        def row(point):
            geom, r, theta = point
            return _polder_row(geom, r, theta, args.alpha0, run, route)

    log.info("sweep %s over %d points with %d worker(s)", args.quantity, len(grid), run.workers)
    table = ResultTable(columns, meta=_meta(args, run, quantity=args.quantity,
                                            route=args.oracle or "closed"))
    _evaluate(table, row, grid, run.workers)
    return table


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _common_options() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="Config file (default: ~/.wedgecasimir/config.json)")
    common.add_argument("--eps", type=float, help="Permittivity of the filling medium")
    common.add_argument("--mu", type=float, help="Permeability of the filling medium")
    common.add_argument("--units", choices=[u.value for u in UnitSystem], help="Output unit system")
    common.add_argument("--format", choices=OUTPUT_FORMATS, help="Output format")
    common.add_argument("--rel-tol", type=float, help="Relative quadrature tolerance")
    common.add_argument("--abs-tol", type=float, help="Absolute quadrature tolerance")
    common.add_argument("--workers", type=int, help="Worker threads for sweeps")
    common.add_argument(
        "--loglevel",
        default="WARNING",
        metavar="LEVEL",
        help="Log level: DEBUG, INFO, WARNING, ERROR (default: WARNING)",
    )
    return common


def _wedge_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--p", type=int, help="Integer wedge parameter, alpha = pi/p")
    group.add_argument("--alpha", type=float, help="Opening angle in radians (closed form only)")


def _angle_options(parser: argparse.ArgumentParser) -> None:
    angle = parser.add_mutually_exclusive_group()
    angle.add_argument("--theta", help="Polar angles in radians: value, list or range")
    angle.add_argument("--theta-fraction", default="0.5",
                       help="Polar angles as fractions of alpha (default: 0.5)")


def build_parser() -> ArgumentParser:
    common = _common_options()
    parser = ArgumentParser(
        prog="wedgecasimir",
        description="Casimir stresses and Casimir-Polder energies in a medium-filled wedge",
        epilog="exit status: " + "; ".join(
            f"{code} {text.lower()}" for code, text in EXIT_DESCRIPTIONS.items()
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)

    p = sub.add_parser("tensor", parents=[common], help="Regularized stress tensor")
    _wedge_options(p)
    p.add_argument("--r", required=True, help="Distance from the cusp")
    p.add_argument("--oracle", choices=[r.value for r in Route], help="Evaluate with the mode-sum oracle")
    p.set_defaults(handler=cmd_tensor)

    p = sub.add_parser("force", parents=[common], help="Wall surface-force density")
    _wedge_options(p)
    p.add_argument("--r", required=True, help="Distance from the cusp")
    p.add_argument("--normalization", choices=[n.value for n in ForceNormalization],
                   default=ForceNormalization.COEFFICIENT.value)
    p.set_defaults(handler=cmd_force)

    p = sub.add_parser("polder", parents=[common], help="Casimir-Polder potential")
    _wedge_options(p)
    p.add_argument("--r", required=True, help="Distances from the cusp: value, list or range")
    _angle_options(p)
    p.add_argument("--alpha0", type=float, default=1.0, help="Static polarizability (a volume)")
    p.add_argument("--oracle", choices=[r.value for r in Route], help="Evaluate with the mode-sum oracle")
    p.set_defaults(handler=cmd_polder)

    p = sub.add_parser("string", parents=[common], help="Cosmic-string analogue")
    p.add_argument("--beta", type=float, help="Deficit parameter beta >= 1")
    p.add_argument("--g-mu", type=float, help="Dimensionless string tension G mu")
    p.add_argument("--r", required=True, help="Distance from the string")
    p.set_defaults(handler=cmd_string)

    p = sub.add_parser("validate", parents=[common], help="Run the acceptance checks")
    p.add_argument("--only", action="append", metavar="CHECK", choices=list(CHECKS),
                   help="Run only this check (repeatable)")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("sweep", parents=[common],
                       help="Evaluate over a grid of p and r (and angle for polder)")
    p.add_argument("quantity", choices=["tensor", "force", "polder"])
    p.add_argument("--p", required=True, help="Values of p: list 2,3,4 or range 2:6:5")
    p.add_argument("--r", required=True, help="Values of r: list or range start:stop:count")
    p.add_argument("--oracle", choices=[r.value for r in Route])
    p.add_argument("--normalization", choices=[n.value for n in ForceNormalization],
                   default=ForceNormalization.COEFFICIENT.value)
    _angle_options(p)
    p.add_argument("--alpha0", type=float, default=1.0)
    p.set_defaults(handler=cmd_sweep)
    return parser


def main(
    argv: Optional[Sequence[str]] = None,
    setup_logging: Optional[Callable[[str], None]] = None,
) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"wedgecasimir: error: {e}", file=sys.stderr)
        return EXIT_USAGE

    if setup_logging is not None:
        setup_logging(args.loglevel)

    try:
        config = load_config(args.config)
        run = RunConfig.from_args(args, config)
        table = args.handler(args, run)
    except WedgeCasimirError as e:
        log.error("%s failed: %s", args.command, e)
        print(f"wedgecasimir: error: {e}", file=sys.stderr)
        return e.exit_code

    sys.stdout.write(render(table, run.fmt))
    if table.meta.get("failed"):
        return EXIT_NUMERICAL
    return EXIT_OK
