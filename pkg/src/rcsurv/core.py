"""Censored observations, the counting-process jump table and step functions.

Every estimator in :mod:`rcsurv.estimators` consumes a :class:`JumpTable` and
returns a :class:`StepFunction`.  Ties are detected by exact equality of the
parsed time values, so times meant to coincide must be written identically
(``2`` and ``2.0`` tie, ``2`` and ``2.0000000001`` do not).
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import (
    DomainExceeded,
    EmptySample,
    InvalidStatus,
    NonFiniteTime,
    NonPositiveTime,
    ValidationError,
)


def safe_divide(num, den):
    """Elementwise ``num / den`` under the convention 0/0 = 0.

    A nonzero numerator over a zero denominator is a bug in the caller and
    raises ``ZeroDivisionError`` instead of producing inf or nan.
    """
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    zero = den == 0
    if np.any(zero & (num != 0)):
        raise ZeroDivisionError("nonzero numerator over zero denominator")
    out = np.divide(num, den, out=np.zeros(np.broadcast(num, den).shape), where=~zero)
    return out if out.ndim else float(out)


def _readonly(a, dtype):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Observation:
    """One subject's observed time and failure indicator (1 = failure, 0 = censored)."""

    time: float
    status: int

    def __post_init__(self):
        _check_observation(self.time, self.status, None)


def _check_observation(time, status, index):
    if isinstance(time, bool) or not isinstance(time, numbers.Real):
        raise ValidationError(f"time must be a real number, got {time!r}", index)
    if not math.isfinite(time):
        raise NonFiniteTime(index, time)
    if time <= 0:
        raise NonPositiveTime(index, time)
    if not isinstance(status, numbers.Integral) or status not in (0, 1):
        raise InvalidStatus(index, status)


@dataclass(frozen=True)
class CensoredSample:
    observations: tuple[Observation, ...]

    def __post_init__(self):
        if len(self.observations) == 0:
            raise EmptySample()

    @property
    def n(self) -> int:
        return len(self.observations)

    @property
    def times(self) -> np.ndarray:
        return np.array([o.time for o in self.observations], dtype=float)

    @property
    def statuses(self) -> np.ndarray:
        return np.array([o.status for o in self.observations], dtype=int)

    def __len__(self):
        return self.n

    def __iter__(self):
        return iter(self.observations)


def validate_sample(raw: Iterable[tuple[float, int]]) -> CensoredSample:
    """Check raw ``(time, status)`` pairs and wrap them in a :class:`CensoredSample`.

    Input order is preserved.  Errors carry the zero-based index of the first
    offending pair.
    """
    observations = []
    for index, pair in enumerate(raw):
        try:
            time, status = pair
        except (TypeError, ValueError):
            raise ValidationError(f"expected a (time, status) pair, got {pair!r}", index) from None
        _check_observation(time, status, index)
        observations.append(Observation(float(time), int(status)))
    return CensoredSample(tuple(observations))


@dataclass(frozen=True, eq=False)
class JumpTable:
    """Counting-process summary of a sample at its unique observed times.

    Attributes
    ----------
    times : ndarray
        Unique observed times X_(1) < ... < X_(m).
    dN, dC : ndarray of int
        Number of failures and censorings at each unique time.
    at_risk : ndarray of int
        Y(X_(k)), the number of subjects with X_i >= X_(k).
    at_risk_dagger : ndarray of int
        Y(X_(k)) - dN(k): subjects still at risk of being censored at X_(k),
        i.e. excluding those failing at that same instant.
    at_risk_after : ndarray of int
        Y(X_(k)+), the number of subjects with X_i > X_(k).
    n : int
        Sample size.
    """

    times: np.ndarray
    dN: np.ndarray
    dC: np.ndarray
    at_risk: np.ndarray
    at_risk_dagger: np.ndarray
    at_risk_after: np.ndarray
    n: int

    def __post_init__(self):
        object.__setattr__(self, "times", _readonly(self.times, float))
        for name in ("dN", "dC", "at_risk", "at_risk_dagger", "at_risk_after"):
            object.__setattr__(self, name, _readonly(getattr(self, name), np.int64))

    @property
    def m(self) -> int:
        return len(self.times)

    @property
    def last_time(self) -> float:
        return float(self.times[-1])

    @property
    def all_failures_at_last(self) -> bool:
        """True when every observation at the largest time is a failure."""
        return bool(self.dN[-1] == self.at_risk[-1])

    @property
    def common_discontinuity_before_last(self) -> bool:
        """True when some time before the largest carries both a failure and a censoring."""
        return bool(np.any((self.dN[:-1] > 0) & (self.dC[:-1] > 0)))

    def at_risk_after_at(self, t) -> np.ndarray | int:
        """Y(t+) = #{i : X_i > t} for arbitrary t >= 0."""
        idx = np.searchsorted(self.times, t, side="right") - 1
        after = np.where(idx >= 0, self.at_risk_after[np.maximum(idx, 0)], self.n)
        return int(after) if np.ndim(after) == 0 else after

    def at_risk_at(self, t) -> np.ndarray | int:
        """Y(t) = #{i : X_i >= t} for arbitrary t > 0."""
        idx = np.searchsorted(self.times, t, side="left") - 1
        risk = np.where(idx >= 0, self.at_risk_after[np.maximum(idx, 0)], self.n)
        return int(risk) if np.ndim(risk) == 0 else risk


def build_jump_table(sample: CensoredSample) -> JumpTable:
    times, inverse = np.unique(sample.times, return_inverse=True)
    status = sample.statuses
    dN = np.bincount(inverse, weights=status, minlength=len(times)).astype(np.int64)
    total = np.bincount(inverse, minlength=len(times)).astype(np.int64)
    dC = total - dN
    at_risk_after = sample.n - np.cumsum(total)
    at_risk = at_risk_after + total
    return JumpTable(
        times=times,
        dN=dN,
        dC=dC,
        at_risk=at_risk,
        at_risk_dagger=at_risk - dN,
        at_risk_after=at_risk_after,
        n=sample.n,
    )


@dataclass(frozen=True, eq=False)
class StepFunction:
    """Right-continuous piecewise-constant function on [0, inf).

    The value is ``initial_value`` on [0, jump_times[0]) and ``values[k]`` on
    [jump_times[k], jump_times[k+1]).  A jump time need not change the value.

    Some estimators are only defined up to a finite horizon; ``domain_end``
    and ``domain_closed`` describe it and evaluation past it raises
    :class:`~rcsurv.errors.DomainExceeded`.
    """

    initial_value: float
    jump_times: np.ndarray
    values: np.ndarray
    domain_end: float = math.inf
    domain_closed: bool = True
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "initial_value", float(self.initial_value))
        jt = _readonly(self.jump_times, float).reshape(-1)
        vals = _readonly(self.values, float).reshape(-1)
        if jt.shape != vals.shape:
            raise ValueError("jump_times and values must have the same length")
        if jt.size and (jt[0] <= 0 or np.any(np.diff(jt) <= 0)):
            raise ValueError("jump_times must be positive and strictly increasing")
        object.__setattr__(self, "jump_times", jt)
        object.__setattr__(self, "values", vals)

    def _check_domain(self, t, left=False):
        t = np.asarray(t, dtype=float)
        if np.any(t < 0) or np.any(np.isnan(t)):
            raise ValueError("step functions are defined for t >= 0 only")
        end = self.domain_end
        # a left limit at an open endpoint only needs values strictly before it
        beyond = t > end if (self.domain_closed or left) else t >= end
        if np.any(beyond):
            raise DomainExceeded(float(np.max(t)), end, self.domain_closed)
        return t

    def _lookup(self, idx):
        out = np.where(idx >= 0, self.values[np.maximum(idx, 0)] if self.values.size else 0.0, self.initial_value)
        return float(out) if out.ndim == 0 else out

    def eval(self, t):
        """Value at ``t`` (scalar or array)."""
        t = self._check_domain(t)
        return self._lookup(np.searchsorted(self.jump_times, t, side="right") - 1)

    __call__ = eval

    def left_limit(self, t):
        """Limit from the left at ``t > 0``."""
        t = self._check_domain(t, left=True)
        if np.any(t <= 0):
            raise ValueError("left limits are defined for t > 0 only")
        return self._lookup(np.searchsorted(self.jump_times, t, side="left") - 1)

    @property
    def final_value(self) -> float:
        return float(self.values[-1]) if self.values.size else self.initial_value


def step_eval(f: StepFunction, t):
    return f.eval(t)


def step_left_limit(f: StepFunction, t):
    return f.left_limit(t)
