"""Brute-force evaluation of the wedge stress tensor.

Two independent representations of the same point-split quantities:

* the imaginary-frequency mode sum over Bessel orders nu = m*p of products
  I_nu(rho r_<) K_nu(rho r_>), and
* the image form, a finite sum of K_0(rho R_n) over the p image distances,
  obtained from the mode sum through Graf's addition theorem.

Every diagonal component is a fixed linear combination of three spectral
basis terms, written here on the vector (rho^2 a, rho^2 b, nu^2 a/(r r')):

    a = I_nu(rho r_<) K_nu(rho r_>),   b = I'_nu(rho r_<) K'_nu(rho r_>)

times cos nu(theta - theta').  In the image form they become rho^2 K_0,
d_r d_r' K_0 and (1/(r r')) d_theta d_theta' K_0 of each image distance.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, NamedTuple, Optional, Tuple

import numpy as np

from .errors import GeometryError, InputError
from .geometry import (
    Medium,
    ModeIndex,
    PointSplit,
    WedgeGeometry,
    coincidence_images,
    image_distances,
)
from .quadrature import (
    ExtrapolationSpec,
    Integral,
    QuadratureSpec,
    extrapolate_coincidence,
    integrate_semi_infinite,
    split_sample_spec,
    sum_primed,
)
from .specfun import bessel_ik, bessel_k01, ik_products

log = logging.getLogger(__name__)

# Share of rho^2 carried by the axial wavenumber after angular averaging
DEFAULT_AXIAL_FRACTION = 0.5

# Relative tolerance and block size for the inner mode sums
MODE_SUM_TOL = 1e-14
MODE_BLOCK = 256

# Finite-difference steps (radial steps are relative to the radius)
FD_RADIAL_STEP = 1e-4
FD_ANGULAR_STEP = 1e-4


class Field(Enum):
    E_R = "E_r"
    E_THETA = "E_theta"
    E_Z = "E_z"
    H_R = "H_r"
    H_THETA = "H_theta"
    H_Z = "H_z"

    @property
    def electric(self) -> bool:
        return self.value.startswith("E")

    @property
    def direction(self) -> str:
        return self.value.split("_", 1)[1]


class Component(Enum):
    R_R = "rr"
    THETA_THETA = "thetatheta"
    Z_Z = "zz"
    ENERGY = "w"


class Route(Enum):
    IMAGES = "images"
    SPLIT = "split"


class DerivativeMode(Enum):
    ANALYTIC = "analytic"
    FINITE_DIFFERENCE = "fd"


# cos(nu theta)cos(nu theta') for these fields, sin sin for the others
_COSINE_FIELDS = {Field.E_THETA, Field.H_R, Field.H_Z}

# Signs applied to eps*E_i^2 + mu*H_i^2 for i = r, theta, z
_STRESS_SIGNS: Dict[Component, Tuple[int, int, int]] = {
    Component.R_R: (-1, 1, 1),
    Component.THETA_THETA: (1, -1, 1),
    Component.Z_Z: (1, 1, -1),
    Component.ENERGY: (1, 1, 1),
}

_DIRECTIONS = ("r", "theta", "z")


def _bracket(direction: str, axial_fraction: float) -> np.ndarray:
    f = axial_fraction
    if direction == "r":
        return np.array([0.0, -f, 1.0 - f])
    if direction == "theta":
        return np.array([0.0, 1.0 - f, -f])
    return np.array([-1.0, 0.0, 0.0])


def _check_fraction(axial_fraction: float) -> float:
    axial_fraction = float(axial_fraction)
    if not 0.0 <= axial_fraction <= 1.0:
        raise InputError(f"axial fraction must lie in [0, 1], got {axial_fraction!r}")
    return axial_fraction


@dataclass(frozen=True)
class StressTensor:
    """Diagonal of the regularized tensor, natural units (length^-4)."""

    r_r: float
    theta_theta: float
    z_z: float
    energy_density: float

    def diagonal(self) -> Tuple[float, float, float, float]:
        return (self.r_r, self.theta_theta, self.z_z, -self.energy_density)

    @property
    def trace(self) -> float:
        return math.fsum(self.diagonal())

    def component(self, which: Component) -> float:
        return {
            Component.R_R: self.r_r,
            Component.THETA_THETA: self.theta_theta,
            Component.Z_Z: self.z_z,
            Component.ENERGY: self.energy_density,
        }[which]

    def scaled(self, factor: float) -> "StressTensor":
        return StressTensor(
            self.r_r * factor,
            self.theta_theta * factor,
            self.z_z * factor,
            self.energy_density * factor,
        )

    def max_relative_deviation(self, reference: "StressTensor") -> float:
        """Largest componentwise |self - reference| / |reference|."""
        worst = 0.0
        for mine, ref in zip(self.diagonal(), reference.diagonal()):
            if ref == 0.0:
                dev = abs(mine)
            else:
                dev = abs(mine - ref) / abs(ref)
            worst = max(worst, dev)
        return worst


# ---------------------------------------------------------------------------
# Spectral kernels
# ---------------------------------------------------------------------------

def _products(orders: np.ndarray, rho: float, split: PointSplit):
    return ik_products(orders, rho * split.r_less, rho * split.r_greater)


def rotated_kernel(
    field: Field,
    mode: ModeIndex,
    rho: float,
    split: PointSplit,
    medium: Medium,
    axial_fraction: float = DEFAULT_AXIAL_FRACTION,
) -> float:
    """Imaginary-frequency field product for one mode, angular factor included."""
    f = _check_fraction(axial_fraction)
    nu = float(mode.order)
    a, b = _products(np.array([nu]), rho, split)
    basis = np.array([
        rho * rho * a[0],
        rho * rho * b[0],
        nu * nu * a[0] / (split.r * split.r_prime),
    ])
    value = float(np.dot(_bracket(field.direction, f), basis))
    if field in _COSINE_FIELDS:
        angle = math.cos(nu * split.theta) * math.cos(nu * split.theta_prime)
    else:
        angle = math.sin(nu * split.theta) * math.sin(nu * split.theta_prime)
    weight = 1.0 / (medium.epsilon if field.electric else medium.mu)
    return weight * value * angle


def assemble_component(
    component: Component,
    mode: ModeIndex,
    rho: float,
    split: PointSplit,
    medium: Medium,
    axial_fraction: float = DEFAULT_AXIAL_FRACTION,
) -> float:
    """Signed sum of eps*E_i^2 + mu*H_i^2 kernels for one mode."""
    signs = dict(zip(_DIRECTIONS, _STRESS_SIGNS[component]))
    total = 0.0
    for field in Field:
        scale = medium.epsilon if field.electric else medium.mu
        total += signs[field.direction] * scale * rotated_kernel(
            field, mode, rho, split, medium, axial_fraction
        )
    return total


def component_coefficients(
    component: Component,
    axial_fraction: float = DEFAULT_AXIAL_FRACTION,
) -> np.ndarray:
    """Coefficients on (rho^2 a, rho^2 b, nu^2 a/(r r')) multiplying cos nu(theta - theta').

    Electric and magnetic kernels of one direction share a bracket, and their
    angular factors add up to cos nu(theta - theta').
    """
    f = _check_fraction(axial_fraction)
    coeffs = np.zeros(3)
    for sign, direction in zip(_STRESS_SIGNS[component], _DIRECTIONS):
        coeffs += sign * _bracket(direction, f)
    return coeffs


def _basis_terms(orders: np.ndarray, rho: float, split: PointSplit) -> np.ndarray:
    nu = np.asarray(orders, dtype=float)
    a, b = _products(nu, rho, split)
    phase = np.cos(nu * split.psi)
    return np.stack([
        rho * rho * a * phase,
        rho * rho * b * phase,
        nu * nu * a * phase / (split.r * split.r_prime),
    ])


def spectral_terms(
    component: Component,
    orders,
    rho: float,
    split: PointSplit,
    axial_fraction: float = DEFAULT_AXIAL_FRACTION,
) -> np.ndarray:
    coeffs = component_coefficients(component, axial_fraction)
    return coeffs @ _basis_terms(orders, rho, split)


def thetatheta_spectral_term(mode: ModeIndex, rho: float, split: PointSplit) -> float:
    """{-rho^2 + nu^2/(r r') - d_r d_r'} I_nu K_nu cos nu(theta - theta'), direct scipy values."""
    nu = mode.order
    inner = bessel_ik(nu, rho * split.r_less)
    outer = bessel_ik(nu, rho * split.r_greater)
    a = inner.value_i * outer.value_k
    b = inner.deriv_i * outer.deriv_k
    bracket = -rho * rho * a - rho * rho * b + nu * nu * a / (split.r * split.r_prime)
    return bracket * math.cos(nu * split.psi)


def radial_mixed_derivative_fd(
    order: int,
    rho: float,
    split: PointSplit,
    step: Optional[float] = None,
) -> float:
    """Central-difference d_r d_r' of I_nu(rho r_<) K_nu(rho r_>)."""
    h = step if step is not None else FD_RADIAL_STEP * split.r_less
    if abs(split.r - split.r_prime) <= 2.0 * h:
        raise InputError("radial split too small for the finite-difference step")

    def product(r: float, rp: float) -> float:
        lo, hi = min(r, rp), max(r, rp)
        return bessel_ik(order, rho * lo).value_i * bessel_ik(order, rho * hi).value_k

    r, rp = split.r, split.r_prime
    return (
        product(r + h, rp + h) - product(r + h, rp - h)
        - product(r - h, rp + h) + product(r - h, rp - h)
    ) / (4.0 * h * h)


# ---------------------------------------------------------------------------
# Mode sums
# ---------------------------------------------------------------------------

def _mode_prefactor(p: int, medium: Medium) -> float:
    return p / (2.0 * math.pi ** 2 * medium.refractive_index)


def _image_prefactor(medium: Medium) -> float:
    return 1.0 / (4.0 * math.pi ** 2 * medium.refractive_index)


def _mode_sum(coeffs: np.ndarray, p: int, rho: float, split: PointSplit) -> float:
    return sum_primed(
        lambda m: coeffs @ _basis_terms(m * p, rho, split),
        tol=MODE_SUM_TOL,
        block=MODE_BLOCK,
    )


def _split_decay_length(split: PointSplit, geom: WedgeGeometry) -> float:
    nearest = image_distances(split, geom).nearest
    if nearest == 0.0:
        raise GeometryError("point split is coincident; the unregularized sum diverges")
    return nearest


def _modesum_integral(coeffs, geom, medium, split, quad) -> Integral:
    geom.check_interior(split)
    decay = _split_decay_length(split, geom)
    if not split.is_radial:
        raise GeometryError("mode sums need a radial split (r != r'); at r = r' they do not converge")
    p = geom.p

    def integrand(rho: float) -> float:
        if rho <= 0.0:
            return 0.0
        return rho * _mode_sum(coeffs, p, rho, split)

    result = integrate_semi_infinite(integrand, decay, quad)
    pref = _mode_prefactor(p, medium)
    return Integral(pref * result.value, pref * result.error)


def s_component_modesum(
    component: Component,
    geom: WedgeGeometry,
    medium: Medium,
    split: PointSplit,
    quad: QuadratureSpec,
    axial_fraction: float = DEFAULT_AXIAL_FRACTION,
) -> Integral:
    """Unregularized point-split component from the mode sum."""
    coeffs = component_coefficients(component, axial_fraction)
    result = _modesum_integral(coeffs, geom, medium, split, quad)
    log.debug("mode sum %s p=%d xi=%.6g: %.12g", component.value, geom.p, split.xi, result.value)
    return result


def s_thetatheta_modesum(
    geom: WedgeGeometry,
    medium: Medium,
    split: PointSplit,
    quad: QuadratureSpec,
) -> Integral:
    return s_component_modesum(Component.THETA_THETA, geom, medium, split, quad)


def contact_term(
    medium: Medium,
    split: PointSplit,
    quad: QuadratureSpec,
    component: Component = Component.THETA_THETA,
) -> Integral:
    """The same point-split component for the p = 1 wedge (a single plate)."""
    return s_component_modesum(component, WedgeGeometry(1), medium, split, quad)


# ---------------------------------------------------------------------------
# Image form
# ---------------------------------------------------------------------------

class ImageTerms(NamedTuple):
    k0: np.ndarray        # rho^2 K_0(rho R_n)
    d_r: np.ndarray       # d_r d_r' K_0(rho R_n)
    d_theta: np.ndarray   # (1/(r r')) d_theta d_theta' K_0(rho R_n)


def _selected(geom: WedgeGeometry, skip_direct: bool) -> np.ndarray:
    return np.arange(1 if skip_direct else 0, geom.p)


def _k0_images(rho, r, rp, base_angle, geom, n) -> np.ndarray:
    phi = base_angle + 2.0 * math.pi * n / geom.p
    half = np.sin(0.5 * phi)
    radii = np.sqrt((r - rp) ** 2 + 4.0 * r * rp * half * half)
    k0, _ = bessel_k01(rho * radii)
    return k0


def image_operator_terms(
    rho: float,
    split: PointSplit,
    geom: WedgeGeometry,
    derivatives: DerivativeMode = DerivativeMode.ANALYTIC,
    skip_direct: bool = False,
    reflected: bool = False,
) -> ImageTerms:
    """Basis terms for each image n (n >= 1 with skip_direct).

    With ``reflected`` the images are built on theta + theta' instead of
    theta - theta', so the angular derivative changes sign.
    """
    n = _selected(geom, skip_direct)
    r, rp = split.r, split.r_prime
    if reflected:
        base = split.theta + split.theta_prime
    else:
        base = split.psi
    phi = base + 2.0 * math.pi * n / geom.p
    half = np.sin(0.5 * phi)
    radius = np.sqrt((r - rp) ** 2 + 4.0 * r * rp * half * half)
    if np.any(radius == 0.0):
        raise GeometryError("coincident direct image; use skip_direct at coincidence")
    k0, k1 = bessel_k01(rho * radius)

    if derivatives is DerivativeMode.FINITE_DIFFERENCE:
        hr, hp, ht = FD_RADIAL_STEP * r, FD_RADIAL_STEP * rp, FD_ANGULAR_STEP
        sign = 1.0 if reflected else -1.0

        def g(dr, dp, dt, dtp):
            angle = (split.theta + dt) + sign * (split.theta_prime + dtp)
            return _k0_images(rho, r + dr, rp + dp, angle, geom, n)

        d_r = (g(hr, hp, 0, 0) - g(hr, -hp, 0, 0) - g(-hr, hp, 0, 0) + g(-hr, -hp, 0, 0)) / (
            4.0 * hr * hp
        )
        d_theta = (g(0, 0, ht, ht) - g(0, 0, ht, -ht) - g(0, 0, -ht, ht) + g(0, 0, -ht, -ht)) / (
            4.0 * ht * ht * r * rp
        )
        return ImageTerms(rho * rho * k0, d_r, d_theta)

    # chain rule through s = R^2 for g(s) = K_0(rho sqrt(s))
    x = rho * radius
    h1 = -rho * k1
    h2 = rho * rho * (k0 + k1 / x)
    g1 = h1 / (2.0 * radius)
    g2 = (h2 - h1 / radius) / (4.0 * radius * radius)
    sin_phi, cos_phi = np.sin(phi), np.cos(phi)
    d_r = (2.0 * r - 2.0 * rp * cos_phi) * (2.0 * rp - 2.0 * r * cos_phi) * g2 - 2.0 * cos_phi * g1
    angular = 4.0 * r * rp * sin_phi * sin_phi * g2 + 2.0 * cos_phi * g1
    d_theta = angular if reflected else -angular
    return ImageTerms(rho * rho * k0, d_r, d_theta)


def _image_basis(rho, split, geom, derivatives, skip_direct) -> np.ndarray:
    terms = image_operator_terms(rho, split, geom, derivatives, skip_direct)
    return np.array([math.fsum(terms.k0), math.fsum(terms.d_r), math.fsum(terms.d_theta)])


def _images_integral(coeffs, geom, medium, split, quad, skip_direct, derivatives) -> Integral:
    n = _selected(geom, skip_direct)
    if n.size == 0:
        return Integral(0.0, 0.0)
    radii = image_distances(split, geom).as_array()[n]
    decay = float(radii.min())
    if decay == 0.0:
        raise GeometryError("point split is coincident; pass skip_direct=True")

    def integrand(rho: float) -> float:
        if rho <= 0.0:
            return 0.0
        return rho * float(coeffs @ _image_basis(rho, split, geom, derivatives, skip_direct))

    result = integrate_semi_infinite(integrand, decay, quad)
    pref = _image_prefactor(medium)
    return Integral(pref * result.value, pref * result.error)


def s_component_images(
    component: Component,
    geom: WedgeGeometry,
    medium: Medium,
    split: PointSplit,
    quad: QuadratureSpec,
    skip_direct: bool = False,
    derivatives: DerivativeMode = DerivativeMode.ANALYTIC,
    axial_fraction: float = DEFAULT_AXIAL_FRACTION,
) -> Integral:
    """Point-split component from the image form; with skip_direct the n = 0 image is dropped."""
    geom.check_interior(split)
    coeffs = component_coefficients(component, axial_fraction)
    return _images_integral(coeffs, geom, medium, split, quad, skip_direct, derivatives)


def s_thetatheta_images(
    geom: WedgeGeometry,
    medium: Medium,
    split: PointSplit,
    quad: QuadratureSpec,
    skip_direct: bool = False,
    derivatives: DerivativeMode = DerivativeMode.ANALYTIC,
) -> Integral:
    return s_component_images(
        Component.THETA_THETA, geom, medium, split, quad, skip_direct, derivatives
    )


def graf_sides(geom: WedgeGeometry, rho: float, split: PointSplit) -> Tuple[float, float]:
    """(sum_n K_0(rho R_n), 2p Sigma'_m I_mp(rho r_<) K_mp(rho r_>) cos(mp psi))."""
    radii = image_distances(split, geom).as_array()
    k0, _ = bessel_k01(rho * radii)
    images = math.fsum(k0)

    def terms(m: np.ndarray) -> np.ndarray:
        nu = (m * geom.p).astype(float)
        a, _ = _products(nu, rho, split)
        return a * np.cos(nu * split.psi)

    modes = 2.0 * geom.p * sum_primed(terms, tol=MODE_SUM_TOL, block=MODE_BLOCK)
    return images, modes


def graf_residual(geom: WedgeGeometry, rho: float, split: PointSplit) -> float:
    images, modes = graf_sides(geom, rho, split)
    return abs(images - modes) / abs(images)


# ---------------------------------------------------------------------------
# Regularization
# ---------------------------------------------------------------------------

def _difference_integral(coeffs, geom, medium, split, quad) -> Integral:
    """Integral of rho [P_p Sigma'_p - P_1 Sigma'_1] for one coefficient vector."""
    geom.check_interior(split)
    decay = float(image_distances(split, geom).as_array()[1:].min())
    p = geom.p
    pref_p = _mode_prefactor(p, medium)
    pref_1 = _mode_prefactor(1, medium)

    def integrand(rho: float) -> float:
        if rho <= 0.0:
            return 0.0
        wedge = pref_p * _mode_sum(coeffs, p, rho, split)
        plate = pref_1 * _mode_sum(coeffs, 1, rho, split)
        return rho * (wedge - plate)

    return integrate_semi_infinite(integrand, decay, quad)


def regularized_component_split(
    component: Component,
    geom: WedgeGeometry,
    medium: Medium,
    split: PointSplit,
    quad: QuadratureSpec,
) -> Integral:
    """Wedge minus contact term at a finite split, integrated as one difference."""
    if geom.p == 1:
        return Integral(0.0, 0.0)
    coeffs = component_coefficients(component)
    return _difference_integral(coeffs, geom, medium, split, quad)


def _basis_at_coincidence(geom, medium, r, theta, quad, extrap, route) -> np.ndarray:
    """Regularized values of the three basis integrals at (r, theta)."""
    split = PointSplit.coincident(r, theta)
    geom.check_interior(split)
    unit = np.eye(3)

    if route is Route.IMAGES:
        nearest = coincidence_images(r, geom).nearest
        log.debug("image route p=%d r=%g nearest image %.6g", geom.p, r, nearest)
        return np.array([
            _images_integral(unit[k], geom, medium, split, quad, True, DerivativeMode.ANALYTIC).value
            for k in range(3)
        ])

    sample_quad = split_sample_spec(quad, extrap)
    values = np.zeros(3)
    for k in range(3):
        samples = []
        for s in extrap.splittings:
            sample = _difference_integral(unit[k], geom, medium, PointSplit.radial(r, s, theta), sample_quad)
            samples.append((s, sample.value))
            log.debug("split route basis %d s=%g: %.12g", k, s, sample.value)
        values[k] = extrapolate_coincidence(samples, extrap).value
    return values


def _resolve_theta(geom: WedgeGeometry, theta: Optional[float]) -> float:
    return 0.5 * geom.alpha if theta is None else float(theta)


def regularized_component_oracle(
    component: Component,
    geom: WedgeGeometry,
    medium: Medium,
    r: float,
    quad: QuadratureSpec,
    extrap: ExtrapolationSpec,
    route: Route = Route.IMAGES,
    theta: Optional[float] = None,
) -> float:
    if geom.p == 1:
        return 0.0
    theta = _resolve_theta(geom, theta)
    if route is Route.IMAGES:
        split = PointSplit.coincident(r, theta)
        return s_component_images(component, geom, medium, split, quad, skip_direct=True).value
    sample_quad = split_sample_spec(quad, extrap)
    samples = [
        (s, regularized_component_split(
            component, geom, medium, PointSplit.radial(r, s, theta), sample_quad).value)
        for s in extrap.splittings
    ]
    return extrapolate_coincidence(samples, extrap).value


def regularized_thetatheta_oracle(
    geom: WedgeGeometry,
    medium: Medium,
    r: float,
    quad: QuadratureSpec,
    extrap: ExtrapolationSpec,
    route: Route = Route.IMAGES,
    theta: Optional[float] = None,
) -> float:
    return regularized_component_oracle(
        Component.THETA_THETA, geom, medium, r, quad, extrap, route, theta
    )


def regularized_tensor_oracle(
    geom: WedgeGeometry,
    medium: Medium,
    r: float,
    quad: QuadratureSpec,
    extrap: ExtrapolationSpec,
    route: Route = Route.IMAGES,
    theta: Optional[float] = None,
) -> StressTensor:
    """Regularized diagonal tensor from the three basis integrals.

    Components share the basis values, so the trace vanishes to rounding.
    """
    if geom.p == 1:
        return StressTensor(0.0, 0.0, 0.0, 0.0)
    theta = _resolve_theta(geom, theta)
    log.info("tensor oracle p=%d r=%g theta=%g route=%s", geom.p, r, theta, route.value)
    basis = _basis_at_coincidence(geom, medium, r, theta, quad, extrap, route)
    values = {c: float(component_coefficients(c) @ basis) for c in Component}
    return StressTensor(
        values[Component.R_R],
        values[Component.THETA_THETA],
        values[Component.Z_Z],
        values[Component.ENERGY],
    )
