"""Exception hierarchy shared by all proxnet modules."""

from __future__ import annotations


class ProxnetError(Exception):
    """Base class for every error raised by proxnet."""


class DimensionMismatch(ProxnetError):
    """An operand has the wrong dimension.

    Carries both the expected and the actual dimension so callers (and
    error reports) can name them without parsing the message.
    """

    def __init__(self, context: str, expected, got):
        self.context = context
        self.expected = expected
        self.got = got
        super().__init__(f"{context}: expected dimension {expected}, got {got}")


class NumericError(ProxnetError):
    """A numerical routine failed (CLI exit code 2)."""


class SpectralNormError(NumericError):
    """Power iteration did not reach the requested tolerance.

    ``last_estimate`` is the best singular-value estimate at abort time.
    """

    def __init__(self, last_estimate: float, iterations: int, rel_tol: float):
        self.last_estimate = last_estimate
        self.iterations = iterations
        self.rel_tol = rel_tol
        super().__init__(
            f"spectral norm did not converge to rel_tol={rel_tol:g} within "
            f"{iterations} iterations (last estimate {last_estimate:.17g})"
        )


class BlowUpError(NumericError):
    """An ODE trajectory left the range of finite floats."""

    def __init__(self, time: float):
        self.time = time
        super().__init__(f"state became non-finite at t={time:g}")


class PreconditionError(ProxnetError):
    """A documented precondition is not met; the operation refuses to run (exit code 3)."""


class NotContractive(PreconditionError):
    """The relevant contraction factor is >= 1, so no fixed-point guarantee exists.

    ``factor`` is the offending quantity (theta_n, max per-layer norm, or the
    scaled Hopfield factor depending on the caller); ``factor_tol`` is the
    relative tolerance the factor was computed with.
    """

    def __init__(self, what: str, factor: float, factor_tol: float = 0.0):
        self.what = what
        self.factor = factor
        self.factor_tol = factor_tol
        super().__init__(
            f"{what} = {factor:.17g} (computed to rel tol {factor_tol:g}) is not < 1; refusing"
        )


class NoConvergence(ProxnetError):
    """An iterative solver exhausted max_iter (exit code 4).

    ``last`` is the final iterate and ``bound`` the a-posteriori error bound
    it would have certified.
    """

    def __init__(self, message: str, last=None, bound: float | None = None, iterations: int = 0):
        self.last = last
        self.bound = bound
        self.iterations = iterations
        super().__init__(message)


class ConfigError(ProxnetError):
    """A configuration file failed to parse or validate (exit code 2)."""
