"""Exception hierarchy for rcsurv."""


class RcsurvError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(RcsurvError, ValueError):
    """Raw observations could not be turned into a censored sample."""

    def __init__(self, message, index=None):
        self.index = index
        if index is not None:
            message = f"observation {index}: {message}"
        super().__init__(message)


class EmptySample(ValidationError):
    def __init__(self):
        super().__init__("sample contains no observations")


class NonPositiveTime(ValidationError):
    def __init__(self, index, value):
        self.value = value
        super().__init__(f"time must be > 0, got {value!r}", index)


class NonFiniteTime(ValidationError):
    def __init__(self, index, value):
        self.value = value
        super().__init__(f"time must be finite, got {value!r}", index)


class InvalidStatus(ValidationError):
    def __init__(self, index, value):
        self.value = value
        super().__init__(f"status must be 0 or 1, got {value!r}", index)


class EstimationError(RcsurvError):
    """An estimator could not produce a value."""


class DomainExceeded(EstimationError, ValueError):
    def __init__(self, t, domain_end, closed=True):
        self.t = t
        self.domain_end = domain_end
        bracket = "]" if closed else ")"
        super().__init__(f"t={t!r} lies outside the domain [0, {domain_end!r}{bracket}")


class NonPositiveSurvival(EstimationError, ValueError):
    def __init__(self, t, value):
        self.t = t
        self.value = value
        super().__init__(f"survival estimate must be > 0 before the last time, got {value!r} at t={t!r}")


class ZeroWeight(EstimationError, ZeroDivisionError):
    def __init__(self, t):
        self.t = t
        super().__init__(f"censoring survival left limit is 0 at failure time {t!r}")


class NoConvergence(EstimationError):
    """The self-consistency iteration hit its sweep limit.

    ``last_estimate`` and ``residual`` describe the final iterate so callers
    can still inspect how far it got.
    """

    def __init__(self, max_iter, last_estimate, residual):
        self.max_iter = max_iter
        self.last_estimate = last_estimate
        self.residual = residual
        super().__init__(f"no convergence after {max_iter} iterations (residual {residual:.3e})")
