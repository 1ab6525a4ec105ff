"""Wedge, medium and evaluation-point model shared by every computation.

The wedge occupies 0 < theta < alpha between two perfectly conducting
half-planes meeting on the z axis.  The image-sum machinery needs
p = pi/alpha to be an integer, so ``WedgeGeometry`` only represents such
wedges; ``ArbitraryWedge`` carries a real opening angle for the closed-form
formulas, which are analytic in alpha.

Lengths are dimensionless (hbar = c = 1).  ``UnitSystem`` is consulted only
when results leave the package.
"""

import logging
import math
import numbers
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np
from scipy import constants

from .errors import GeometryError, InputError

log = logging.getLogger(__name__)

# Relative slack when recognising alpha = pi/p
ALPHA_MATCH_RTOL = 1e-9


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise InputError(f"{name} must be a positive finite number, got {value!r}")
    return value


@dataclass(frozen=True)
class WedgeGeometry:
    """Wedge of opening angle alpha = pi/p with integer p >= 1.

    p = 1 is the half-space bounded by a single plate.
    """

    p: int

    def __post_init__(self) -> None:
        if isinstance(self.p, bool) or not isinstance(self.p, numbers.Integral):
            raise GeometryError(
                f"wedge parameter p must be an integer, got {self.p!r}; "
                "use ArbitraryWedge for closed-form evaluation at other angles"
            )
        if self.p < 1:
            raise GeometryError(f"wedge parameter p must be >= 1, got {self.p}")
        object.__setattr__(self, "p", int(self.p))

    @property
    def alpha(self) -> float:
        return math.pi / self.p

    @classmethod
    def from_alpha(cls, alpha: float) -> "WedgeGeometry":
        """Build from an opening angle, which must equal pi/p for integer p."""
        alpha = _positive("alpha", alpha)
        p_real = math.pi / alpha
        p = round(p_real)
        if p < 1 or abs(p_real - p) > ALPHA_MATCH_RTOL * p_real:
            raise GeometryError(
                f"opening angle {alpha!r} rad gives pi/alpha = {p_real:.12g}, "
                "which is not an integer; only integer p is supported here"
            )
        return cls(p)

    def check_interior(self, split: "PointSplit") -> None:
        """Raise GeometryError unless both points lie strictly inside the wedge."""
        for name, angle in (("theta", split.theta), ("theta_prime", split.theta_prime)):
            if not 0.0 < angle < self.alpha:
                raise GeometryError(
                    f"{name} = {angle!r} is not inside the wedge (0, {self.alpha!r})"
                )


@dataclass(frozen=True)
class ArbitraryWedge:
    """Opening angle alpha in (0, pi] with real p = pi/alpha."""

    alpha: float

    def __post_init__(self) -> None:
        alpha = _positive("alpha", self.alpha)
        if alpha > math.pi:
            raise GeometryError(f"opening angle must not exceed pi, got {alpha!r}")
        object.__setattr__(self, "alpha", alpha)

    @property
    def p(self) -> float:
        return math.pi / self.alpha


@dataclass(frozen=True)
class Medium:
    """Nondispersive medium filling the wedge."""

    epsilon: float = 1.0
    mu: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "epsilon", _positive("epsilon", self.epsilon))
        object.__setattr__(self, "mu", _positive("mu", self.mu))

    @property
    def refractive_index(self) -> float:
        return math.sqrt(self.epsilon * self.mu)


VACUUM = Medium(1.0, 1.0)


@dataclass(frozen=True)
class PointSplit:
    """Two field points (r, theta) and (r', theta') at equal time and z."""

    r: float
    r_prime: float
    theta: float
    theta_prime: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "r", _positive("r", self.r))
        object.__setattr__(self, "r_prime", _positive("r_prime", self.r_prime))
        for name in ("theta", "theta_prime"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise InputError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)

    @classmethod
    def coincident(cls, r: float, theta: float) -> "PointSplit":
        return cls(r, r, theta, theta)

    @classmethod
    def radial(cls, r: float, s: float, theta: float) -> "PointSplit":
        """Symmetric radial split r_> = r*e**s, r_< = r*e**-s at a common angle."""
        s = float(s)
        if not math.isfinite(s) or s < 0.0:
            raise InputError(f"split parameter must be >= 0, got {s!r}")
        return cls(r * math.exp(s), r * math.exp(-s), theta, theta)

    @classmethod
    def from_ratio(cls, r_greater: float, xi: float, theta: float) -> "PointSplit":
        xi = float(xi)
        if not 0.0 < xi <= 1.0:
            raise InputError(f"radial ratio xi must lie in (0, 1], got {xi!r}")
        return cls(r_greater, xi * r_greater, theta, theta)

    @property
    def r_less(self) -> float:
        return min(self.r, self.r_prime)

    @property
    def r_greater(self) -> float:
        return max(self.r, self.r_prime)

    @property
    def xi(self) -> float:
        return self.r_less / self.r_greater

    @property
    def psi(self) -> float:
        return self.theta - self.theta_prime

    @property
    def is_coincident(self) -> bool:
        return self.r == self.r_prime and self.theta == self.theta_prime

    @property
    def is_radial(self) -> bool:
        return self.r != self.r_prime


@dataclass(frozen=True)
class ModeIndex:
    """Azimuthal mode m of a wedge with parameter p; Bessel order nu = m*p."""

    m: int
    p: int = 1

    def __post_init__(self) -> None:
        for name in ("m", "p"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, numbers.Integral):
                raise InputError(f"{name} must be an integer, got {value!r}")
        if self.m < 0 or self.p < 1:
            raise InputError(f"need m >= 0 and p >= 1, got m={self.m}, p={self.p}")

    @property
    def order(self) -> int:
        return self.m * self.p

    @property
    def weight(self) -> float:
        """Weight in a primed sum: the m = 0 term counts half."""
        return 0.5 if self.m == 0 else 1.0


@dataclass(frozen=True)
class ImageSet:
    distances: Tuple[float, ...]

    def __len__(self) -> int:
        return len(self.distances)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.distances, dtype=float)

    @property
    def nearest(self) -> float:
        return min(self.distances)


class UnitSystem(Enum):
    NATURAL = "natural"
    CGS = "cgs"
    SI = "si"

    @property
    def hbar(self) -> float:
        if self is UnitSystem.SI:
            return constants.hbar            # J s
        if self is UnitSystem.CGS:
            return constants.hbar * 1e7      # erg s
        return 1.0

    @property
    def c(self) -> float:
        if self is UnitSystem.SI:
            return constants.c               # m/s
        if self is UnitSystem.CGS:
            return constants.c * 1e2         # cm/s
        return 1.0

    @property
    def hbar_c(self) -> float:
        return self.hbar * self.c

    @property
    def pressure_label(self) -> str:
        return {
            UnitSystem.SI: "Pa",
            UnitSystem.CGS: "dyn/cm^2",
            UnitSystem.NATURAL: "length^-4",
        }[self]

    @property
    def energy_label(self) -> str:
        return {UnitSystem.SI: "J", UnitSystem.CGS: "erg", UnitSystem.NATURAL: "length^-1"}[self]

    @property
    def force_label(self) -> str:
        return {UnitSystem.SI: "N", UnitSystem.CGS: "dyn", UnitSystem.NATURAL: "length^-2"}[self]

    @property
    def metres_per_length(self) -> Optional[float]:
        """Size of the length unit in metres; None for natural units."""
        return {UnitSystem.SI: 1.0, UnitSystem.CGS: 1e-2, UnitSystem.NATURAL: None}[self]


def _image_radii(r: float, r_prime: float, angles: np.ndarray) -> np.ndarray:
    # (r - r')**2 + 4 r r' sin**2(phi/2) == r**2 + r'**2 - 2 r r' cos(phi)
    half = np.sin(0.5 * angles)
    return np.sqrt((r - r_prime) ** 2 + 4.0 * r * r_prime * half * half)


def image_angles(angle: float, geom: WedgeGeometry) -> np.ndarray:
    """angle + 2*pi*n/p for n = 0 .. p-1."""
    n = np.arange(geom.p)
    return angle + 2.0 * math.pi * n / geom.p


def image_distances(split: PointSplit, geom: WedgeGeometry) -> ImageSet:
    """Distances R_n from the image-sum form of the wedge Green function."""
    radii = _image_radii(split.r, split.r_prime, image_angles(split.psi, geom))
    return ImageSet(tuple(float(x) for x in radii))


def reflected_image_distances(split: PointSplit, geom: WedgeGeometry) -> ImageSet:
    """Like image_distances but with theta - theta' replaced by theta + theta'."""
    angles = image_angles(split.theta + split.theta_prime, geom)
    radii = _image_radii(split.r, split.r_prime, angles)
    return ImageSet(tuple(float(x) for x in radii))


def coincidence_images(r: float, geom: WedgeGeometry) -> ImageSet:
    """Nonzero image distances a_n = 2 r sin(pi n / p), n = 1 .. p-1, at coincidence."""
    r = _positive("r", r)
    if geom.p == 1:
        raise GeometryError(
            "a single plate (p = 1) has no nonzero coincident images; "
            "its regularized wedge term is identically zero"
        )
    n = np.arange(1, geom.p)
    return ImageSet(tuple(float(x) for x in 2.0 * r * np.sin(math.pi * n / geom.p)))
