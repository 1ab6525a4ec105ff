"""Casimir-Polder potential of a static polarizable particle inside the wedge."""

import logging
import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from .errors import GeometryError, InputError
from .geometry import (
    ArbitraryWedge,
    Medium,
    PointSplit,
    WedgeGeometry,
    image_distances,
    reflected_image_distances,
)
from .mode_sum import MODE_BLOCK, MODE_SUM_TOL, Route, image_operator_terms
from .quadrature import (
    ExtrapolationSpec,
    Integral,
    QuadratureSpec,
    extrapolate_coincidence,
    integrate_semi_infinite,
    split_sample_spec,
    sum_primed,
)
from .specfun import ik_products

log = logging.getLogger(__name__)

Wedge = Union[WedgeGeometry, ArbitraryWedge]


@dataclass(frozen=True)
class DipoleParams:
    """Static polarizability alpha(0) in Heaviside-Lorentz units (a volume)."""

    alpha0: float

    def __post_init__(self) -> None:
        alpha0 = float(self.alpha0)
        if not math.isfinite(alpha0) or alpha0 <= 0.0:
            raise InputError(f"polarizability must be positive, got {alpha0!r}")
        object.__setattr__(self, "alpha0", alpha0)


@dataclass(frozen=True)
class PolderResult:
    u: float
    force_r: float       # -dU/dr
    force_theta: float   # -(1/r) dU/dtheta


def _check_point(geom: Wedge, r: float, theta: float) -> Tuple[float, float]:
    r, theta = float(r), float(theta)
    if not math.isfinite(r) or r <= 0.0:
        raise InputError(f"r must be positive, got {r!r}")
    if not 0.0 < theta < geom.alpha:
        raise GeometryError(
            f"theta = {theta!r} is on or outside the walls of the wedge (0, {geom.alpha!r})"
        )
    return r, theta


def _strength(medium: Medium, dip: DipoleParams) -> float:
    return dip.alpha0 / (16.0 * math.pi ** 2 * medium.refractive_index * medium.epsilon)


def _angular_factor(p: float, theta: float) -> Tuple[float, float]:
    """B(theta) and dB/dtheta with U = -strength * B / r^4."""
    p2 = p * p
    s = math.sin(p * theta)
    b = 1.5 * p2 * p2 / s ** 4 - p2 * (p2 - 1.0) / s ** 2 - (p2 + 11.0) * (p2 - 1.0) / 90.0
    db_ds = -6.0 * p2 * p2 / s ** 5 + 2.0 * p2 * (p2 - 1.0) / s ** 3
    return b, db_ds * p * math.cos(p * theta)


def u_closed(geom: Wedge, medium: Medium, dip: DipoleParams, r: float, theta: float) -> PolderResult:
    """Potential and force at (r, theta); analytic in p, so ArbitraryWedge is accepted."""
    r, theta = _check_point(geom, r, theta)
    k = _strength(medium, dip)
    b, db = _angular_factor(geom.p, theta)
    r4 = r ** 4
    return PolderResult(
        u=-k * b / r4,
        force_r=-4.0 * k * b / (r4 * r),
        force_theta=k * db / (r4 * r),
    )


def transverse_force(
    geom: Wedge, medium: Medium, dip: DipoleParams, r: float, theta: float
) -> Tuple[float, float]:
    result = u_closed(geom, medium, dip, r, theta)
    return result.force_r, result.force_theta


def _mode_terms(m: np.ndarray, p: int, rho: float, split: PointSplit) -> np.ndarray:
    nu = (m * p).astype(float)
    a, b = ik_products(nu, rho * split.r_less, rho * split.r_greater)
    reflected = np.cos(nu * (split.theta + split.theta_prime))
    direct = np.cos(nu * split.psi)
    rr = split.r * split.r_prime
    return (
        rho * rho * b * reflected
        - nu * nu * a * reflected / rr
        + rho * rho * a * (reflected - direct)
    )


def _mode_prefactor(p: int, medium: Medium, dip: DipoleParams) -> float:
    return -dip.alpha0 * p / (4.0 * math.pi ** 2 * medium.refractive_index * medium.epsilon)


def _mode_sum(p: int, rho: float, split: PointSplit) -> float:
    return sum_primed(lambda m: _mode_terms(m, p, rho, split), tol=MODE_SUM_TOL, block=MODE_BLOCK)


def u_modesum(
    geom: WedgeGeometry,
    medium: Medium,
    dip: DipoleParams,
    split: PointSplit,
    quad: QuadratureSpec,
) -> Integral:
    """Point-split potential from the mode sum over orders m p."""
    geom.check_interior(split)
    direct = image_distances(split, geom).nearest
    if direct == 0.0:
        raise GeometryError("point split is coincident; the unregularized sum diverges")
    if not split.is_radial:
        raise GeometryError("mode sums need a radial split (r != r'); at r = r' they do not converge")
    decay = min(direct, reflected_image_distances(split, geom).nearest)
    p = geom.p

    def integrand(rho: float) -> float:
        if rho <= 0.0:
            return 0.0
        return rho * _mode_sum(p, rho, split)

    result = integrate_semi_infinite(integrand, decay, quad)
    pref = _mode_prefactor(p, medium, dip)
    return Integral(pref * result.value, abs(pref) * result.error)


def u_images(
    geom: WedgeGeometry,
    medium: Medium,
    dip: DipoleParams,
    split: PointSplit,
    quad: QuadratureSpec,
    skip_direct: bool = False,
) -> Integral:
    """Point-split potential from the reflected and direct image sums.

    At coincidence with skip_direct this is the regularized potential.
    """
    geom.check_interior(split)
    radii = [reflected_image_distances(split, geom).nearest]
    direct = image_distances(split, geom).as_array()[1 if skip_direct else 0:]
    if direct.size:
        radii.append(float(direct.min()))
    decay = min(radii)
    if decay == 0.0:
        raise GeometryError("point split is coincident; pass skip_direct=True")

    def integrand(rho: float) -> float:
        if rho <= 0.0:
            return 0.0
        mirror = image_operator_terms(rho, split, geom, reflected=True)
        plain = image_operator_terms(rho, split, geom, skip_direct=skip_direct)
        bracket = math.fsum(np.concatenate([mirror.k0, mirror.d_r, mirror.d_theta, -plain.k0]))
        return rho * bracket

    result = integrate_semi_infinite(integrand, decay, quad)
    pref = -dip.alpha0 / (8.0 * math.pi ** 2 * medium.refractive_index * medium.epsilon)
    return Integral(pref * result.value, abs(pref) * result.error)


def _difference(geom, medium, dip, split, quad) -> Integral:
    """U_p - U_1 at a finite split, integrated as one difference."""
    geom.check_interior(split)
    decay = min(
        reflected_image_distances(split, geom).nearest,
        float(image_distances(split, geom).as_array()[1:].min()),
    )
    p = geom.p
    pref_p = _mode_prefactor(p, medium, dip)
    pref_1 = _mode_prefactor(1, medium, dip)

    def integrand(rho: float) -> float:
        if rho <= 0.0:
            return 0.0
        return rho * (pref_p * _mode_sum(p, rho, split) - pref_1 * _mode_sum(1, rho, split))

    return integrate_semi_infinite(integrand, decay, quad)


def u_regularized_oracle(
    geom: WedgeGeometry,
    medium: Medium,
    dip: DipoleParams,
    r: float,
    theta: float,
    quad: QuadratureSpec,
    extrap: ExtrapolationSpec,
    route: Route = Route.SPLIT,
) -> float:
    """Regularized potential at (r, theta) from the brute-force representations.

    SPLIT extrapolates the wedge-minus-plate difference to coincidence and
    adds the single-plate potential; IMAGES sums the coincident images.
    """
    r, theta = _check_point(geom, r, theta)
    log.info("polder oracle p=%d r=%g theta=%g route=%s", geom.p, r, theta, route.value)
    if route is Route.IMAGES:
        split = PointSplit.coincident(r, theta)
        return u_images(geom, medium, dip, split, quad, skip_direct=True).value

    plate = u_closed(WedgeGeometry(1), medium, dip, r, theta).u
    if geom.p == 1:
        return plate
    sample_quad = split_sample_spec(quad, extrap)
    samples = []
    for s in extrap.splittings:
        delta = _difference(geom, medium, dip, PointSplit.radial(r, s, theta), sample_quad).value
        log.debug("polder split s=%g: %.12g", s, delta)
        samples.append((s, delta))
    return extrapolate_coincidence(samples, extrap).value + plate
