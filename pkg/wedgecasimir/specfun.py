"""Modified Bessel functions I_nu and K_nu for real order and positive argument.

Direct values come from scipy.special.  Mode sums reach orders where
I_nu(x) underflows and K_nu(x) overflows long before their product stops
mattering, so ``log_ik`` works with logarithms and falls back to the
uniform asymptotic (Debye) expansion where the exponentially scaled scipy
functions leave the double range.
"""

import logging
import math
from dataclasses import dataclass
from typing import NamedTuple, Tuple

import numpy as np
from scipy import special

from .errors import BesselOverflowError, InputError

log = logging.getLogger(__name__)

# Largest argument accepted by the unscaled evaluators
MAX_ARGUMENT = 700.0

# Scaled values outside [TINY, HUGE] are recomputed asymptotically
TINY = 1e-290
HUGE = 1e290


@dataclass(frozen=True)
class BesselEval:
    order: float
    argument: float
    value_i: float
    value_k: float
    deriv_i: float
    deriv_k: float

    @property
    def wronskian_residual(self) -> float:
        """|I K' - I' K + 1/x|, zero for exact values."""
        w = self.value_i * self.deriv_k - self.deriv_i * self.value_k
        return abs(w + 1.0 / self.argument)


class IKProducts(NamedTuple):
    a: np.ndarray   # I_nu(x) K_nu(y)
    b: np.ndarray   # I'_nu(x) K'_nu(y)


def _check_argument(x: float) -> float:
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise InputError(f"Bessel argument must be positive and finite, got {x!r}")
    return x


def _check_order(order: float) -> float:
    order = float(order)
    if not math.isfinite(order) or order < 0.0 or order != math.floor(order):
        raise InputError(f"Bessel order must be a non-negative integer, got {order!r}")
    return order


def bessel_ik(order: float, x: float) -> BesselEval:
    """I_nu(x), K_nu(x) and their derivatives for integer nu >= 0."""
    nu = _check_order(order)
    x = _check_argument(x)
    if x > MAX_ARGUMENT:
        raise BesselOverflowError(f"argument {x!r} exceeds {MAX_ARGUMENT}; use log_ik")

    if nu == 0.0:
        i0, i1 = special.iv([0.0, 1.0], x)
        k0, k1 = special.kv([0.0, 1.0], x)
        value_i, value_k, deriv_i, deriv_k = i0, k0, i1, -k1
    else:
        orders = np.array([nu - 1.0, nu, nu + 1.0])
        i_lo, value_i, i_hi = special.iv(orders, x)
        k_lo, value_k, k_hi = special.kv(orders, x)
        deriv_i = 0.5 * (i_lo + i_hi)
        deriv_k = -0.5 * (k_lo + k_hi)

    values = (value_i, value_k, deriv_i, deriv_k)
    if not all(np.isfinite(values)) or value_i == 0.0 or value_k == 0.0:
        raise BesselOverflowError(
            f"I/K of order {nu:g} at x={x!r} not representable as doubles"
        )
    return BesselEval(nu, x, float(value_i), float(value_k), float(deriv_i), float(deriv_k))


def recurrence_residual(order: float, x: float) -> float:
    """Largest relative residual of the three-term recurrences at order nu >= 1.

    I_{nu-1} - I_{nu+1} = (2 nu / x) I_nu and K_{nu+1} - K_{nu-1} = (2 nu / x) K_nu.
    """
    nu = _check_order(order)
    if nu < 1.0:
        raise InputError("recurrence check needs order >= 1")
    x = _check_argument(x)
    orders = np.array([nu - 1.0, nu, nu + 1.0])
    i_lo, i_mid, i_hi = special.iv(orders, x)
    k_lo, k_mid, k_hi = special.kv(orders, x)
    ratio = 2.0 * nu / x
    res_i = abs(i_lo - i_hi - ratio * i_mid) / abs(i_lo)
    res_k = abs(k_hi - k_lo - ratio * k_mid) / abs(k_hi)
    return float(max(res_i, res_k))


def bessel_k0(x: float) -> float:
    return bessel_ik(0, x).value_k


def bessel_k01(x) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized K_0(x), K_1(x); values underflow quietly to zero for large x."""
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0.0)):
        raise InputError("K_0/K_1 arguments must be positive")
    return special.k0(x), special.k1(x)


def _debye_u(t: np.ndarray):
    t2 = t * t
    u1 = t * (3.0 - 5.0 * t2) / 24.0
    u2 = t2 * (81.0 - 462.0 * t2 + 385.0 * t2 * t2) / 1152.0
    u3 = t * t2 * (
        30375.0 - 369603.0 * t2 + 765765.0 * t2 ** 2 - 425425.0 * t2 ** 3
    ) / 414720.0
    u4 = t2 * t2 * (
        4465125.0
        - 94121676.0 * t2
        + 349922430.0 * t2 ** 2
        - 446185740.0 * t2 ** 3
        + 185910725.0 * t2 ** 4
    ) / 39813120.0
    return u1, u2, u3, u4


def _log_ik_debye(nu: np.ndarray, x: float) -> Tuple[np.ndarray, np.ndarray]:
    z = x / nu
    sq = np.sqrt(1.0 + z * z)
    t = 1.0 / sq
    eta = sq + np.log(z / (1.0 + sq))
    u1, u2, u3, u4 = _debye_u(t)
    inv = 1.0 / nu
    series_i = 1.0 + inv * (u1 + inv * (u2 + inv * (u3 + inv * u4)))
    series_k = 1.0 + inv * (-u1 + inv * (u2 + inv * (-u3 + inv * u4)))
    ln_i = nu * eta - 0.5 * np.log(2.0 * np.pi * nu) - 0.5 * np.log(sq) + np.log(series_i)
    ln_k = -nu * eta + 0.5 * np.log(np.pi / (2.0 * nu)) - 0.5 * np.log(sq) + np.log(series_k)
    return ln_i, ln_k


def log_ik(orders, x: float) -> Tuple[np.ndarray, np.ndarray]:
    """ln I_nu(x) and ln K_nu(x) for an array of orders nu >= 0."""
    nu = np.atleast_1d(np.asarray(orders, dtype=float))
    if np.any(~(nu >= 0.0)):
        raise InputError("Bessel orders must be non-negative")
    x = _check_argument(x)

    with np.errstate(all="ignore"):
        ive = special.ive(nu, x)
        kve = special.kve(nu, x)
        ln_i = np.log(ive) + x
        ln_k = np.log(kve) - x
    ok = np.isfinite(ive) & np.isfinite(kve) & (ive > TINY) & (kve < HUGE)
    if np.all(ok):
        return ln_i, ln_k

    bad = ~ok
    if np.any(bad & (nu == 0.0)):
        raise BesselOverflowError(f"order-zero scaled Bessel values not representable at x={x!r}")
    log.debug("log_ik: %d of %d orders via uniform expansion at x=%g",
              int(bad.sum()), nu.size, x)
    ln_i[bad], ln_k[bad] = _log_ik_debye(nu[bad], x)
    return ln_i, ln_k


def ik_products(orders, x: float, y: float) -> IKProducts:
    """I_nu(x)K_nu(y) and I'_nu(x)K'_nu(y) for an array of orders.

    Neighbouring orders |nu-1| and nu+1 give the derivatives; everything is
    combined in log space and exponentiated once.
    """
    nu = np.atleast_1d(np.asarray(orders, dtype=float))
    lower = np.abs(nu - 1.0)
    upper = nu + 1.0
    grid = np.unique(np.concatenate([lower, nu, upper]))
    ln_ix, _ = log_ik(grid, x)
    _, ln_ky = log_ik(grid, y)

    at = np.searchsorted(grid, nu)
    lo = np.searchsorted(grid, lower)
    hi = np.searchsorted(grid, upper)

    ln_a = ln_ix[at] + ln_ky[at]
    ln_di = np.logaddexp(ln_ix[lo], ln_ix[hi])
    ln_dk = np.logaddexp(ln_ky[lo], ln_ky[hi])
    a = np.exp(ln_a)
    b = -np.exp(ln_di + ln_dk - math.log(4.0))
    return IKProducts(a, b)
