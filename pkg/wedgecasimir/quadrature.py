"""Numerical controls: semi-infinite spectral integrals, primed mode sums and
extrapolation of point-split quantities to coincidence."""

import logging
import math
from dataclasses import dataclass, replace
from typing import Callable, List, NamedTuple, Sequence, Tuple

import numpy as np
from scipy import integrate

from .errors import ExtrapolationError, InputError, QuadratureError, SummationError

log = logging.getLogger(__name__)

# Spectral variable rho >= 0
SpectralPoint = float

# Split samples are integrated to this fraction of the extrapolation tolerance
SPLIT_SAMPLE_FACTOR = 0.1


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-9
    abs_tol: float = 1e-14
    tail_cutoff_scale: float = 60.0
    max_subdivisions: int = 200
    max_panels: int = 40

    def __post_init__(self) -> None:
        if not 0.0 < self.rel_tol < 1.0:
            raise InputError(f"rel_tol must lie in (0, 1), got {self.rel_tol!r}")
        if self.abs_tol < 0.0:
            raise InputError(f"abs_tol must be >= 0, got {self.abs_tol!r}")
        if self.tail_cutoff_scale <= 1.0:
            raise InputError("tail_cutoff_scale must exceed 1")
        if self.max_subdivisions < 1 or self.max_panels < 1:
            raise InputError("max_subdivisions and max_panels must be positive")


@dataclass(frozen=True)
class ExtrapolationSpec:
    splittings: Tuple[float, ...] = (0.2, 0.1, 0.05, 0.025)
    order: int = 2
    tol: float = 1e-5
    abs_tol: float = 1e-14

    def __post_init__(self) -> None:
        levels = tuple(float(s) for s in self.splittings)
        if len(levels) < 3:
            raise InputError("at least three splitting levels are required")
        if any(s <= 0.0 or not math.isfinite(s) for s in levels):
            raise InputError(f"splittings must be positive, got {levels}")
        steps = np.diff(levels)
        if not (np.all(steps < 0.0) or np.all(steps > 0.0)):
            raise InputError(f"splittings must be strictly monotone, got {levels}")
        if self.order < 1:
            raise InputError(f"extrapolation order must be >= 1, got {self.order}")
        if self.tol <= 0.0:
            raise InputError(f"extrapolation tol must be positive, got {self.tol}")
        object.__setattr__(self, "splittings", levels)


def split_sample_spec(quad: QuadratureSpec, extrap: ExtrapolationSpec) -> QuadratureSpec:
    """Quadrature controls for point-split samples that feed an extrapolation.

    Samples need only be accurate well below the extrapolation tolerance;
    asking for more makes QUADPACK chase round-off left by the subtraction.
    """
    return replace(quad, rel_tol=max(quad.rel_tol, SPLIT_SAMPLE_FACTOR * extrap.tol))


class Integral(NamedTuple):
    value: float
    error: float


class Extrapolation(NamedTuple):
    value: float
    error: float


def _quad_panel(f, lo, hi, epsabs, spec):
    res = integrate.quad(
        f, lo, hi,
        epsabs=epsabs,
        epsrel=spec.rel_tol,
        limit=spec.max_subdivisions,
        full_output=1,
    )
    message = res[3] if len(res) > 3 else None
    return res[0], res[1], message


def integrate_semi_infinite(
    f: Callable[[SpectralPoint], float],
    decay_length: float,
    spec: QuadratureSpec,
) -> Integral:
    """Integrate f over [0, inf) where f decays like exp(-rho * decay_length).

    Panels double in width from 1/decay_length.  Past tail_cutoff_scale
    decay lengths the remainder is bounded by 2|f(edge)|/decay_length, and
    that bound is added to the reported error.
    """
    if not decay_length > 0.0 or not math.isfinite(decay_length):
        raise InputError(f"decay length must be positive, got {decay_length!r}")
    width = 1.0 / decay_length
    cutoff = spec.tail_cutoff_scale * width

    total = 0.0
    error = 0.0
    lo, hi = 0.0, width
    for panel in range(spec.max_panels):
        epsabs = max(spec.abs_tol, spec.rel_tol * abs(total))
        y, abserr, message = _quad_panel(f, lo, hi, epsabs, spec)
        allowed = max(spec.rel_tol * max(abs(total), abs(y)), spec.abs_tol)
        if not math.isfinite(y) or abserr > allowed:
            raise QuadratureError(
                f"panel [{lo:.6g}, {hi:.6g}] error {abserr:.3g} exceeds {allowed:.3g}",
                best_estimate=total + (y if math.isfinite(y) else 0.0),
                error_estimate=error + abserr,
            )
        if message:
            log.debug("panel [%.6g, %.6g] accepted with error %.3g: %s",
                      lo, hi, abserr, message.splitlines()[0])
        total += y
        error += abserr

        if hi >= cutoff:
            edge = abs(f(hi))
            tail = 2.0 * edge * width if math.isfinite(edge) else math.inf
            if tail <= max(spec.rel_tol * abs(total), spec.abs_tol):
                log.debug("integral %.12g +- %.3g after %d panels (edge %.6g)",
                          total, error + tail, panel + 1, hi)
                return Integral(total, error + tail)
        lo, hi = hi, 2.0 * hi

    raise QuadratureError(
        f"integrand not negligible after {spec.max_panels} panels",
        best_estimate=total,
        error_estimate=error,
    )


def sum_primed(
    terms: Callable[[np.ndarray], np.ndarray],
    tol: float,
    abs_tol: float = 0.0,
    block: int = 64,
    max_terms: int = 200000,
) -> float:
    """Sigma' over m >= 0 (m = 0 weighted 1/2) of a vectorized term function.

    Terms are evaluated block by block.  The ratio between the largest
    magnitudes in the second and first half of a block gives a geometric
    envelope; summation stops when the implied remainder is within
    max(tol*max(|sum|, largest term), abs_tol).  Measuring against the
    largest term keeps sums that cancel to nearly zero from running on.
    """
    if block < 2:
        raise InputError("block size must be at least 2")
    partials: List[float] = []
    start = 0
    total = 0.0
    largest = 0.0
    while start < max_terms:
        m = np.arange(start, min(start + block, max_terms))
        values = np.array(terms(m), dtype=float)
        if start == 0:
            values[0] *= 0.5
        if not np.all(np.isfinite(values)):
            raise SummationError(
                f"non-finite mode term in block starting at m={start}",
                partial_sum=total, terms_used=start,
            )
        partials.append(math.fsum(values))
        total = math.fsum(partials)
        start += len(values)

        half = len(values) // 2
        first = float(np.max(np.abs(values[:half]))) if half else 0.0
        second = float(np.max(np.abs(values[half:])))
        largest = max(largest, first, second)
        if second == 0.0:
            tail = 0.0
        elif first == 0.0:
            tail = math.inf
        else:
            q = (second / first) ** (1.0 / half)
            tail = second * q / (1.0 - q) if q < 1.0 else math.inf
        if tail <= max(tol * max(abs(total), largest), abs_tol):
            return total

    raise SummationError(
        f"mode sum did not converge within {max_terms} terms",
        partial_sum=total, terms_used=start,
    )


def extrapolate_coincidence(
    samples: Sequence[Tuple[float, float]],
    spec: ExtrapolationSpec,
) -> Extrapolation:
    """Extrapolate (splitting, value) samples to zero splitting.

    Neville's scheme in t = splitting**order, evaluated at t = 0.  The error
    is the gap between the full tableau and the estimate that drops the
    first sample.
    """
    if len(samples) < 3:
        raise InputError("extrapolation needs at least three samples")
    t = [float(d) ** spec.order for d, _ in samples]
    row = [float(v) for _, v in samples]
    tableau = [list(row)]
    n = len(row)
    for k in range(1, n):
        row = [
            (t[i] * row[i + 1] - t[i + k] * row[i]) / (t[i] - t[i + k])
            for i in range(n - k)
        ]
        tableau.append(list(row))

    value = tableau[-1][0]
    error = abs(value - tableau[-2][1])
    if error > max(spec.tol * abs(value), spec.abs_tol):
        raise ExtrapolationError(
            f"extrapolated value {value:.12g} not converged (error {error:.3g})",
            tableau=tableau,
        )
    return Extrapolation(value, error)
