"""Exception hierarchy and process exit codes for wedgecasimir."""

from typing import List, Optional, Sequence

# Exit codes
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2

EXIT_DESCRIPTIONS = {
    EXIT_OK: "Success",
    EXIT_USAGE: "Usage or configuration error",
    EXIT_NUMERICAL: "Numerical failure",
}


class WedgeCasimirError(Exception):
    """Base class for every error raised by this package."""

    exit_code = EXIT_NUMERICAL


class InputError(WedgeCasimirError, ValueError):
    """A value violates a documented precondition."""

    exit_code = EXIT_USAGE


class GeometryError(InputError):
    pass


class ConfigError(InputError):
    pass


class UsageError(InputError):
    pass


class BesselOverflowError(WedgeCasimirError):
    """A Bessel value cannot be represented as a double."""


class QuadratureError(WedgeCasimirError):
    """Integration did not reach the requested tolerance."""

    def __init__(self, message: str, best_estimate: float, error_estimate: float) -> None:
        super().__init__(message)
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate


class SummationError(WedgeCasimirError):
    """A primed mode sum did not decay within the term budget."""

    def __init__(self, message: str, partial_sum: float, terms_used: int) -> None:
        super().__init__(message)
        self.partial_sum = partial_sum
        self.terms_used = terms_used


class ExtrapolationError(WedgeCasimirError):
    """Richardson extrapolation to coincidence did not converge."""

    def __init__(
        self,
        message: str,
        tableau: Optional[Sequence[Sequence[float]]] = None,
    ) -> None:
        super().__init__(message)
        self.tableau: List[List[float]] = [list(row) for row in (tableau or [])]
