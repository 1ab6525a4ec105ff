"""Acceptance suite: closed forms against the mode-sum oracle and the
numerical building blocks against known identities.

Each check returns a CheckResult with the worst measured deviation and the
tolerance it was held to.  ``run_checks`` runs them in a fixed order.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional

import numpy as np

from .casimir_polder import DipoleParams, u_closed, u_images, u_regularized_oracle
from .closed_form import (
    StringParams,
    inverse_sine_power_polynomials,
    inverse_sine_power_sums,
    string_tensor,
    surface_force_density,
    theta_tensor,
)
from .geometry import VACUUM, ArbitraryWedge, Medium, PointSplit, UnitSystem, WedgeGeometry
from .mode_sum import (
    graf_residual,
    regularized_tensor_oracle,
    s_thetatheta_images,
    s_thetatheta_modesum,
)
from .quadrature import ExtrapolationSpec, QuadratureSpec, integrate_semi_infinite
from .specfun import bessel_ik, bessel_k01, recurrence_residual

log = logging.getLogger(__name__)

# Worked numbers for a 1e-4 rad wedge at r = 1 cm in vacuum
FORCE_DYN_CM2 = 0.0043
COMPARISON_DYN_CM2 = 0.013

ORACLE_P = (2, 3, 4, 6)
ORACLE_MEDIA = (Medium(1.0, 1.0), Medium(2.25, 1.0), Medium(2.0, 2.0))
ORACLE_RADII = (0.5, 1.0, 2.0)
GRAF_P = (1, 2, 3, 4, 6)
GRAF_RHO = (0.5, 1.0, 5.0)
GRAF_XI = (0.5, 0.9)
GRAF_PSI = (0.0, 0.3)


@dataclass(frozen=True)
class CheckResult:
    name: str
    measured: float
    tolerance: float
    passed: bool


def _result(name: str, measured: float, tolerance: float) -> CheckResult:
    passed = bool(measured <= tolerance)
    log.info("check %s: measured %.3g tolerance %.3g %s",
             name, measured, tolerance, "ok" if passed else "FAILED")
    return CheckResult(name, float(measured), float(tolerance), passed)


def _rel(value: float, reference: float) -> float:
    return abs(value - reference) / abs(reference)


def check_wall_force(quad: QuadratureSpec, extrap: ExtrapolationSpec) -> CheckResult:
    force = surface_force_density(ArbitraryWedge(1e-4), VACUUM, 1.0, UnitSystem.CGS)
    return _result("wall_force", _rel(force.value, FORCE_DYN_CM2), 0.05)


def check_force_ratio(quad: QuadratureSpec, extrap: ExtrapolationSpec) -> CheckResult:
    force = surface_force_density(ArbitraryWedge(1e-4), VACUUM, 1.0, UnitSystem.CGS)
    ratio = force.value / COMPARISON_DYN_CM2
    return _result("force_ratio", _rel(ratio, 1.0 / 3.0), 0.10)


def check_oracle_tensor(quad: QuadratureSpec, extrap: ExtrapolationSpec) -> CheckResult:
    worst = 0.0
    for p in ORACLE_P:
        geom = WedgeGeometry(p)
        for medium in ORACLE_MEDIA:
            for r in ORACLE_RADII:
                oracle = regularized_tensor_oracle(geom, medium, r, quad, extrap)
                worst = max(worst, oracle.max_relative_deviation(theta_tensor(geom, medium, r)))
    return _result("oracle_tensor", worst, 1e-6)


def check_route_equivalence(quad: QuadratureSpec, extrap: ExtrapolationSpec) -> CheckResult:
    worst = 0.0
    for p in (1, 2, 3):
        geom = WedgeGeometry(p)
        split = PointSplit.from_ratio(1.0, 0.9, 0.5 * geom.alpha)
        modes = s_thetatheta_modesum(geom, VACUUM, split, quad).value
        images = s_thetatheta_images(geom, VACUUM, split, quad).value
        worst = max(worst, _rel(modes, images))
    return _result("route_equivalence", worst, 1e-8)


def check_graf(quad: QuadratureSpec, extrap: ExtrapolationSpec) -> CheckResult:
    worst = 0.0
    for p in GRAF_P:
        geom = WedgeGeometry(p)
        for xi in GRAF_XI:
            for psi in GRAF_PSI:
                split = PointSplit(1.0, xi, 0.5, 0.5 - psi)
                for rho in GRAF_RHO:
                    worst = max(worst, graf_residual(geom, rho, split))
    return _result("graf_identity", worst, 1e-10)


def check_trig_sums(quad: QuadratureSpec, extrap: ExtrapolationSpec) -> CheckResult:
    worst = 0.0
    for p in range(2, 51):
        brute = inverse_sine_power_sums(p)
        exact = inverse_sine_power_polynomials(p)
        worst = max(worst, _rel(brute[0], exact[0]), _rel(brute[1], exact[1]))
    return _result("trig_sums", worst, 1e-10)


def check_string(quad: QuadratureSpec, extrap: ExtrapolationSpec) -> CheckResult:
    worst = 0.0
    for p in (2, 3, 4, 6):
        geom = WedgeGeometry(p)
        for r in ORACLE_RADII:
            cosmic = string_tensor(StringParams(float(p)), r)
            worst = max(worst, cosmic.max_relative_deviation(theta_tensor(geom, VACUUM, r)))
            for medium in ORACLE_MEDIA:
                wedge = theta_tensor(geom, medium, r).scaled(medium.refractive_index)
                worst = max(worst, cosmic.max_relative_deviation(wedge))
    return _result("string_analogy", worst, 1e-12)


def _structure_cases(quad, extrap):
    for p in (2, 3):
        geom = WedgeGeometry(p)
        yield geom, regularized_tensor_oracle(geom, VACUUM, 1.0, quad, extrap)


def check_trace(quad: QuadratureSpec, extrap: ExtrapolationSpec) -> CheckResult:
    worst = 0.0
    for _, tensor in _structure_cases(quad, extrap):
        worst = max(worst, abs(tensor.trace) / abs(tensor.theta_theta))
    return _result("trace", worst, 1e-12)


def check_theta_independence(quad: QuadratureSpec, extrap: ExtrapolationSpec) -> CheckResult:
    worst = 0.0
    for geom, tensor in _structure_cases(quad, extrap):
        for theta in (geom.alpha / 3.0, 0.9 * geom.alpha):
            tilted = regularized_tensor_oracle(geom, VACUUM, 1.0, quad, extrap, theta=theta)
            worst = max(worst, tilted.max_relative_deviation(tensor))
    return _result("theta_independence", worst, 1e-6)


def check_radial_scaling(quad: QuadratureSpec, extrap: ExtrapolationSpec) -> CheckResult:
    worst = 0.0
    for geom, tensor in _structure_cases(quad, extrap):
        far = regularized_tensor_oracle(geom, VACUUM, 2.0, quad, extrap)
        worst = max(worst, far.scaled(16.0).max_relative_deviation(tensor))
    return _result("radial_scaling", worst, 1e-9)


def check_medium_scaling(quad: QuadratureSpec, extrap: ExtrapolationSpec) -> CheckResult:
    worst = 0.0
    for geom, tensor in _structure_cases(quad, extrap):
        for medium in ORACLE_MEDIA[1:]:
            dense = regularized_tensor_oracle(geom, medium, 1.0, quad, extrap)
            worst = max(worst, dense.scaled(medium.refractive_index).max_relative_deviation(tensor))
    return _result("medium_scaling", worst, 1e-9)


def check_plate_zero(quad: QuadratureSpec, extrap: ExtrapolationSpec) -> CheckResult:
    plate = regularized_tensor_oracle(WedgeGeometry(1), VACUUM, 1.0, quad, extrap)
    return _result("plate_zero", max(abs(v) for v in plate.diagonal()), 0.0)


def check_polder_oracle(quad: QuadratureSpec, extrap: ExtrapolationSpec) -> CheckResult:
    dip = DipoleParams(1.0)
    worst = 0.0
    for p in (2, 3):
        geom = WedgeGeometry(p)
        for theta in (geom.alpha / 3.0, geom.alpha / 2.0):
            oracle = u_regularized_oracle(geom, VACUUM, dip, 1.0, theta, quad, extrap)
            worst = max(worst, _rel(oracle, u_closed(geom, VACUUM, dip, 1.0, theta).u))
    return _result("polder_oracle", worst, 1e-3)


def check_polder_plate(quad: QuadratureSpec, extrap: ExtrapolationSpec) -> CheckResult:
    """Single plate: only the leading sin^-4 term survives."""
    dip = DipoleParams(1.0)
    plate = WedgeGeometry(1)
    worst = 0.0
    for theta in (math.pi / 6.0, math.pi / 2.0):
        split = PointSplit.coincident(1.0, theta)
        images = u_images(plate, VACUUM, dip, split, quad, skip_direct=True).value
        single = -3.0 * dip.alpha0 / (32.0 * math.pi ** 2 * math.sin(theta) ** 4)
        worst = max(worst, _rel(images, single), _rel(u_closed(plate, VACUUM, dip, 1.0, theta).u, single))
    return _result("polder_plate", worst, 1e-6)


def check_polder_medium(quad: QuadratureSpec, extrap: ExtrapolationSpec) -> CheckResult:
    dip = DipoleParams(1.0)
    worst = 0.0
    for medium in ORACLE_MEDIA[1:]:
        for p in (2, 3):
            geom = WedgeGeometry(p)
            inside = u_closed(geom, medium, dip, 1.0, 0.4 * geom.alpha).u
            outside = u_closed(geom, VACUUM, dip, 1.0, 0.4 * geom.alpha).u
            worst = max(worst, _rel(inside * medium.refractive_index * medium.epsilon, outside))
    return _result("polder_medium", worst, 1e-12)


def check_wronskian(
    quad: QuadratureSpec,
    extrap: ExtrapolationSpec,
    samples: int = 10000,
    seed: int = 20260101,
) -> CheckResult:
    """Worst x * |I K' - I' K + 1/x| over random nu <= 60, x in [1e-3, 100]."""
    rng = np.random.default_rng(seed)
    orders = rng.integers(0, 61, size=samples)
    args = 10.0 ** rng.uniform(-3.0, 2.0, size=samples)
    worst = max(
        bessel_ik(int(nu), float(x)).wronskian_residual * x for nu, x in zip(orders, args)
    )
    return _result("wronskian", worst, 1e-10)


def check_recurrence(
    quad: QuadratureSpec,
    extrap: ExtrapolationSpec,
    samples: int = 10000,
    seed: int = 20260102,
) -> CheckResult:
    rng = np.random.default_rng(seed)
    orders = rng.integers(1, 61, size=samples)
    args = 10.0 ** rng.uniform(-3.0, 2.0, size=samples)
    worst = max(recurrence_residual(int(nu), float(x)) for nu, x in zip(orders, args))
    return _result("recurrence", worst, 1e-10)


def k0_moment(j: int, a: float, quad: QuadratureSpec) -> float:
    """Numerical value of the integral of rho^(2j+1) K_0(a rho) over [0, inf)."""

    def integrand(rho: float) -> float:
        if rho <= 0.0:
            return 0.0
        return rho ** (2 * j + 1) * float(bessel_k01(a * rho)[0])

    return integrate_semi_infinite(integrand, a, quad).value


def check_k0_moments(quad: QuadratureSpec, extrap: ExtrapolationSpec) -> CheckResult:
    worst = 0.0
    for j in (0, 1, 2):
        for a in (0.5, 1.0, 2.0, 5.0):
            exact = 4.0 ** j * math.factorial(j) ** 2 / a ** (2 * j + 2)
            worst = max(worst, _rel(k0_moment(j, a, quad), exact))
    return _result("k0_moments", worst, quad.rel_tol)


CHECKS: Dict[str, Callable[[QuadratureSpec, ExtrapolationSpec], CheckResult]] = {
    "wall_force": check_wall_force,
    "force_ratio": check_force_ratio,
    "oracle_tensor": check_oracle_tensor,
    "route_equivalence": check_route_equivalence,
    "graf_identity": check_graf,
    "trace": check_trace,
    "theta_independence": check_theta_independence,
    "radial_scaling": check_radial_scaling,
    "medium_scaling": check_medium_scaling,
    "plate_zero": check_plate_zero,
    "trig_sums": check_trig_sums,
    "polder_oracle": check_polder_oracle,
    "polder_plate": check_polder_plate,
    "polder_medium": check_polder_medium,
    "string_analogy": check_string,
    "wronskian": check_wronskian,
    "recurrence": check_recurrence,
    "k0_moments": check_k0_moments,
}


def run_checks(
    quad: QuadratureSpec,
    extrap: ExtrapolationSpec,
    names: Optional[Iterable[str]] = None,
) -> List[CheckResult]:
    selected = list(CHECKS) if names is None else list(names)
    unknown = [n for n in selected if n not in CHECKS]
    if unknown:
        raise KeyError(f"unknown checks: {', '.join(unknown)}")
    return [CHECKS[name](quad, extrap) for name in selected]
