r"""Nonparametric estimators of the failure and censoring survival functions.

All estimators take a :class:`~rcsurv.core.JumpTable` and return
:class:`~rcsurv.core.StepFunction` objects whose jump points are the unique
observed times.  Notation used in the docstrings: :math:`X_{(1)} < \cdots <
X_{(m)}` are the unique times, :math:`\Delta N`, :math:`\Delta C` the failure
and censoring counts there, :math:`Y(u)` the number at risk, :math:`Y(u+)` the
number still under observation just after :math:`u`, and
:math:`Y^\dagger(u) = Y(u) - \Delta N(u)`.

Products run left to right in time order.  Counts are exact integers, so all
rounding happens in the final floating point products and sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import JumpTable, StepFunction, safe_divide
from .errors import DomainExceeded, NoConvergence, NonPositiveSurvival, ZeroWeight

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 10_000


def _step(jt: JumpTable, values, initial=1.0, name="") -> StepFunction:
    return StepFunction(initial, jt.times, values, name=name)


def naive_survival(jt: JumpTable) -> StepFunction:
    """Fraction of subjects still under observation, Y(t+)/n."""
    return _step(jt, jt.at_risk_after / jt.n, name="naive")


def product_limit_failure(jt: JumpTable) -> StepFunction:
    r"""Product-limit (Kaplan-Meier) estimator of :math:`S(t) = P(T > t)`.

    .. math::
        \widehat S_{PL}(t) = \prod_{u \le t} \{1 - \Delta N(u) / Y(u)\}

    It stays constant after the last observed time and is zero there only if
    every observation at that time is a failure.
    """
    factors = 1.0 - jt.dN / jt.at_risk
    return _step(jt, np.cumprod(factors), name="pl")


def product_limit_censoring_dagger(jt: JumpTable) -> StepFunction:
    r"""Product-limit estimator of :math:`K(t) = P(U > t)` that handles ties.

    .. math::
        \widehat K(t) = \prod_{u \le t} \{1 - \Delta C(u) / Y^\dagger(u)\}

    Failures tied with a censoring time are removed from the censoring risk
    set, which is what keeps the estimator consistent when failure and
    censoring laws share atoms.  Uses 0/0 = 0.
    """
    factors = 1.0 - safe_divide(jt.dC, jt.at_risk_dagger)
    return _step(jt, np.cumprod(factors), name="censor-pl")


def product_limit_censoring_naive(jt: JumpTable) -> StepFunction:
    """Censoring product-limit estimator obtained by swapping status labels.

    Agrees with :func:`product_limit_censoring_dagger` before the last time
    only when no time carries both a failure and a censoring.
    """
    factors = 1.0 - jt.dC / jt.at_risk
    return _step(jt, np.cumprod(factors), name="censor-naive")


def censoring_via_inverse_product(jt: JumpTable, t_max: float) -> StepFunction:
    r"""Censoring survival as :math:`[\prod_{u \le t}\{1 + \Delta C(u)/Y(u+)\}]^{-1}`.

    Only defined while somebody remains under observation, so ``t_max`` must
    be smaller than the last observed time; the returned function raises
    :class:`~rcsurv.errors.DomainExceeded` past ``t_max``.
    """
    if not 0 <= t_max < jt.last_time:
        raise DomainExceeded(t_max, jt.last_time, closed=False)
    keep = jt.times <= t_max
    growth = np.cumprod(1.0 + jt.dC[keep] / jt.at_risk_after[keep])
    return StepFunction(1.0, jt.times[keep], 1.0 / growth, domain_end=t_max, name="censor-inverse")


def censoring_from_relation(s_hat: StepFunction, jt: JumpTable) -> StepFunction:
    """Censoring survival implied by a failure survival estimate: Y(t+)/(n s_hat(t)).

    Defined on [0, X_(m)).  With ``s_hat`` the product-limit estimator this
    reproduces :func:`product_limit_censoring_dagger` there.

    Raises
    ------
    NonPositiveSurvival
        If ``s_hat`` is not strictly positive before the last observed time.
    """
    end = jt.last_time
    grid = np.union1d(jt.times, s_hat.jump_times)
    grid = grid[grid < end]
    s0 = s_hat.eval(0.0)
    if s0 <= 0:
        raise NonPositiveSurvival(0.0, s0)
    s_vals = np.asarray(s_hat.eval(grid), dtype=float)
    bad = np.flatnonzero(s_vals <= 0)
    if bad.size:
        raise NonPositiveSurvival(float(grid[bad[0]]), float(s_vals[bad[0]]))
    values = jt.at_risk_after_at(grid) / (jt.n * s_vals)
    return StepFunction(1.0 / s0, grid, values, domain_end=end, domain_closed=False, name="censor-relation")


@dataclass(frozen=True, eq=False)
class SelfConsistentResult:
    estimate: StepFunction
    iterations: int
    final_residual: float


def _self_consistency_sweep(s_prev, s_naive, dC, n):
    # Sum over censored X_i <= t of S(t)/S(X_i).  Once S(X_i) = 0 every later
    # S(t) is 0 as well, so those terms are the 0/0 = 0 case and drop out.
    inv = np.divide(dC, s_prev, out=np.zeros_like(s_prev), where=s_prev > 0)
    s_new = s_naive + s_prev * np.cumsum(inv) / n
    s_new[s_naive == 0] = 0.0
    return s_new


def self_consistent(jt: JumpTable, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> SelfConsistentResult:
    """Self-consistent estimator by fixed-point iteration.

    Starting from the naive estimator, each sweep replaces S(t) by the
    sample average of P(T > t | X_i, D_i) computed under the previous sweep.
    Iteration runs on the unique-time grid (everything is constant in
    between).  It has converged once the sup-norm change between sweeps is at
    most ``tol``; sweeping then continues while the change keeps shrinking,
    which leaves the iterate at the floating point fixed point.  The
    estimate is zero wherever the naive estimator is zero, i.e. from the last
    observed time on.

    Raises
    ------
    NoConvergence
        After ``max_iter`` sweeps without meeting ``tol``; the exception
        carries the last iterate and its residual.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    s_naive = jt.at_risk_after / jt.n
    dC = jt.dC.astype(float)
    s = s_naive.copy()
    residual = previous = math.inf
    met = False
    for k in range(1, max_iter + 1):
        s_new = _self_consistency_sweep(s, s_naive, dC, jt.n)
        residual = float(np.max(np.abs(s_new - s)))
        s = s_new
        met = met or residual <= tol
        # A small step does not bound the distance to the fixed point under
        # linear convergence, so keep sweeping while the steps still shrink.
        if met and (residual == 0 or residual >= previous):
            break
        previous = residual
    if not met:
        raise NoConvergence(max_iter, _step(jt, s, name="sc"), residual)
    return SelfConsistentResult(_step(jt, s, name="sc"), k, residual)


def _failure_weights(jt: JumpTable, k_hat: StepFunction) -> np.ndarray:
    """dN(u) / K(u-) at each unique time, checking K(u-) > 0 where dN(u) > 0."""
    k_left = np.asarray(k_hat.left_limit(jt.times), dtype=float)
    zero = (jt.dN > 0) & (k_left <= 0)
    if np.any(zero):
        raise ZeroWeight(float(jt.times[np.argmax(zero)]))
    return safe_divide(jt.dN, np.where(jt.dN > 0, k_left, 0.0))


def ipcw_cdf(jt: JumpTable, k_hat: StepFunction) -> StepFunction:
    r"""Inverse-probability-of-censoring weighted distribution function.

    .. math::
        \widehat F_{IPCW}(t) = n^{-1} \sum_i D_i I\{X_i \le t\} / \widehat K(X_i-)

    ``k_hat`` is normally :func:`product_limit_censoring_dagger`; any
    censoring estimate can be passed to study what happens with other
    weights.
    """
    w = _failure_weights(jt, k_hat)
    return _step(jt, np.cumsum(w) / jt.n, initial=0.0, name="ipcw-cdf")


def ipcw_survival_tilde(jt: JumpTable, k_hat: StepFunction) -> StepFunction:
    r"""Weighted tail sum :math:`n^{-1}\sum_i D_i I\{X_i > t\}/\widehat K(X_i-)`.

    Always zero from the last observed time on.  It equals one minus
    :func:`ipcw_cdf` only when every observation at the last time is a
    failure.
    """
    w = _failure_weights(jt, k_hat)
    tail = np.cumsum(w[::-1])[::-1]
    after = np.append(tail[1:], 0.0) / jt.n
    return _step(jt, after, initial=tail[0] / jt.n, name="ipcw-surv")


@dataclass(frozen=True, eq=False)
class RttrResult:
    """Redistribute-to-the-right estimate with its per-time weights and masses."""

    estimate: StepFunction
    jump_weights: np.ndarray
    mass_ledger: np.ndarray


def rttr(jt: JumpTable) -> RttrResult:
    r"""Closed-form redistribute-to-the-right estimator, ties allowed.

    Each unique time carries the weight

    .. math::
        J_{(k)} = n^{-1} \prod_{j < k} \{1 + \Delta C(X_{(j)}) / Y(X_{(j)}+)\},

    the mass an individual observation at :math:`X_{(k)}` holds once all
    earlier censored mass has been pushed right.  Time :math:`X_{(k)}`,
    :math:`k < m`, keeps :math:`J_{(k)} \Delta N(X_{(k)})`; the last time
    keeps :math:`J_{(m)} Y(X_{(m)})` whatever the status of its
    observations.  The masses sum to one and the survival estimate is one
    minus their running total.
    """
    growth = 1.0 + jt.dC[:-1] / jt.at_risk_after[:-1]
    weights = np.concatenate(([1.0], np.cumprod(growth))) / jt.n
    mass = weights * jt.dN
    mass[-1] = weights[-1] * jt.at_risk[-1]
    weights.setflags(write=False)
    mass.setflags(write=False)
    estimate = _step(jt, 1.0 - np.cumsum(mass), name="rttr")
    return RttrResult(estimate, weights, mass)
