"""Closed-form wedge results: stress tensor, wall force and the cosmic-string analogue."""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple, Union

import numpy as np

from .errors import GeometryError, InputError
from .geometry import VACUUM, ArbitraryWedge, Medium, UnitSystem, WedgeGeometry
from .mode_sum import StressTensor

log = logging.getLogger(__name__)

Wedge = Union[WedgeGeometry, ArbitraryWedge]

STRING_INTEGER_TOL = 1e-9

SKIN_DEPTH_NOTE = (
    "Perfect-conductor results assume the skin depth of the walls is small "
    "compared with r; near the cusp (r of order the skin depth) finite "
    "conductivity dominates and these formulas do not apply."
)


class ForceNormalization(Enum):
    """How the wall force density relates to the tensor coefficient C.

    COEFFICIENT: sigma = hbar c C, the dimensional wall formula.
    AZIMUTHAL_STRESS: sigma = -Theta_thetatheta = 3 hbar c C.
    """

    COEFFICIENT = "coefficient"
    AZIMUTHAL_STRESS = "azimuthal"

    @property
    def factor(self) -> float:
        return 1.0 if self is ForceNormalization.COEFFICIENT else 3.0


@dataclass(frozen=True)
class SurfaceForce:
    value: float
    r: float
    p: float
    medium: Medium
    units: UnitSystem
    normalization: ForceNormalization

    @property
    def unit_label(self) -> str:
        return self.units.pressure_label


@dataclass(frozen=True)
class StringParams:
    """Cosmic string with deficit parameter beta = (1 - 4 G mu)^-1 >= 1."""

    beta: float

    def __post_init__(self) -> None:
        beta = float(self.beta)
        if not math.isfinite(beta) or beta < 1.0:
            raise InputError(f"string parameter beta must be >= 1, got {beta!r}")
        object.__setattr__(self, "beta", beta)

    @classmethod
    def from_g_mu(cls, g_mu: float) -> "StringParams":
        g_mu = float(g_mu)
        if not 0.0 <= g_mu < 0.25:
            raise InputError(f"G mu must lie in [0, 1/4), got {g_mu!r}")
        return cls(1.0 / (1.0 - 4.0 * g_mu))


def _radius(r: float) -> float:
    r = float(r)
    if not math.isfinite(r) or r <= 0.0:
        raise InputError(f"r must be positive, got {r!r}")
    return r


def tensor_coefficient(p: float, medium: Medium, r: float) -> float:
    """C = (p^2 + 11)(p^2 - 1) / (720 pi^2 sqrt(eps mu) r^4)."""
    p = float(p)
    if p < 1.0:
        raise GeometryError(f"wedge parameter p must be >= 1, got {p!r}")
    r = _radius(r)
    p2 = p * p
    return (p2 + 11.0) * (p2 - 1.0) / (720.0 * math.pi ** 2 * medium.refractive_index * r ** 4)


def _diag(c: float) -> StressTensor:
    # diag(1, -3, 1, 1) C with the last entry -w
    return StressTensor(c, -3.0 * c, c, -c)


def theta_tensor(geom: Wedge, medium: Medium, r: float) -> StressTensor:
    return _diag(tensor_coefficient(geom.p, medium, r))


def surface_force_density(
    geom: Wedge,
    medium: Medium,
    r: float,
    units: UnitSystem = UnitSystem.NATURAL,
    normalization: ForceNormalization = ForceNormalization.COEFFICIENT,
) -> SurfaceForce:
    """Normal force per unit area on a wall at distance r from the cusp.

    r is in the length unit of ``units`` (cm for cgs, m for si).
    """
    c = tensor_coefficient(geom.p, medium, r)
    value = normalization.factor * units.hbar_c * c
    log.info("surface force p=%.6g r=%g: %.6g %s", geom.p, r, value, units.pressure_label)
    return SurfaceForce(value, float(r), float(geom.p), medium, units, normalization)


def string_tensor(params: StringParams, r: float) -> StressTensor:
    """Vacuum tensor around a cosmic string; the wedge tensor with p replaced by beta."""
    return _diag(tensor_coefficient(params.beta, VACUUM, r))


def string_wedge_analogue(params: StringParams, medium: Medium, r: float) -> Optional[StressTensor]:
    """sqrt(eps mu) times the tensor of the wedge with p = beta, or None for non-integral beta."""
    p = round(params.beta)
    if abs(params.beta - p) > STRING_INTEGER_TOL:
        return None
    return theta_tensor(WedgeGeometry(p), medium, r).scaled(medium.refractive_index)


def parallel_plate_pressure(
    a: float,
    medium: Medium = VACUUM,
    units: UnitSystem = UnitSystem.NATURAL,
) -> float:
    """Attractive pressure pi^2 hbar c / (240 sqrt(eps mu) a^4) between plates a apart."""
    a = _radius(a)
    return math.pi ** 2 * units.hbar_c / (240.0 * medium.refractive_index * a ** 4)


def inverse_sine_power_sums(p: int) -> Tuple[float, float]:
    """Brute-force sums of sin^-2 and sin^-4 of pi n / p over n = 1 .. p-1."""
    if p < 1:
        raise InputError(f"p must be >= 1, got {p!r}")
    s = np.sin(math.pi * np.arange(1, p) / p)
    inv2 = 1.0 / (s * s)
    return math.fsum(inv2), math.fsum(inv2 * inv2)


def inverse_sine_power_polynomials(p: int) -> Tuple[float, float]:
    """(p^2 - 1)/3 and (p^2 + 11)(p^2 - 1)/45."""
    p2 = float(p) ** 2
    return (p2 - 1.0) / 3.0, (p2 + 11.0) * (p2 - 1.0) / 45.0
