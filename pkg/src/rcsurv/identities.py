"""Executable checks of the finite-sample identities linking the estimators.

:func:`verify_all` evaluates every estimator on one data set and measures how
far each identity is from holding exactly.  Since every function involved is
constant between observed times, residuals are taken on the grid made of
t = 0, the unique observed times and one point past the last time; that grid
is exhaustive.

Two checks are biconditional.  ``tilde-condition`` and
``censor-forms-agree`` pass only when the identity holds (residual within
tolerance) while its condition holds, and a witness of strict disagreement
is found when it does not.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import estimators as est
from .core import JumpTable, safe_divide
from .errors import NoConvergence

CHECK_NAMES = (
    "volterra-censoring",
    "volterra-failure",
    "sc-fixed-point",
    "sc-equals-pl-before-tail",
    "factorization",
    "ipcw-cdf-equals-pl",
    "mass-identity",
    "tilde-condition",
    "rttr-equals-sc",
    "rttr-mass-sum",
    "censor-forms-agree",
    "ordering",
)


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    max_residual: float
    tolerance: float
    passed: bool
    condition_holds: bool | None = None
    witness: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "max_residual", float(self.max_residual))
        object.__setattr__(self, "passed", bool(self.passed))
        if self.condition_holds is not None:
            object.__setattr__(self, "condition_holds", bool(self.condition_holds))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "maxResidual": self.max_residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "conditionHolds": self.condition_holds,
            "witness": self.witness,
        }


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple[IdentityCheck, ...]
    dataset_summary: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> IdentityCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            "datasetSummary": dict(self.dataset_summary),
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def km_tail_interval(jt: JumpTable) -> tuple[float, float]:
    """Range [0, S_PL(X_(m))] that any Kaplan-Meier tail value past the last time must respect."""
    return 0.0, est.product_limit_failure(jt).final_value


def evaluation_grid(jt: JumpTable) -> np.ndarray:
    """t = 0, every unique time, and one unit past the last time."""
    return np.concatenate(([0.0], jt.times, [jt.last_time + 1.0]))


def _unconditional(name, residual, tol):
    residual = float(residual)
    return IdentityCheck(name, residual, tol, residual <= tol)


def _biconditional(name, diffs, grid, condition, tol):
    """Equality within tol on ``grid`` if ``condition``, else a point of strict disagreement."""
    diffs = np.abs(np.asarray(diffs, dtype=float))
    worst = float(diffs.max()) if diffs.size else 0.0
    if condition:
        return IdentityCheck(name, worst, tol, worst <= tol, True)
    above = np.flatnonzero(diffs > tol)
    witness = float(grid[above[0]]) if above.size else None
    return IdentityCheck(name, worst, tol, witness is not None, False, witness)


def _sc_equation_residual(s, jt, grid):
    """Sup over ``grid`` of |S(t) - S_0(t) - n^-1 sum_i (1-D_i) I{X_i<=t} S(t)/S(X_i)|."""
    s_grid = np.asarray(s.eval(grid), dtype=float)
    s_at_times = np.asarray(s.eval(jt.times), dtype=float)
    naive = jt.at_risk_after_at(grid) / jt.n
    residual = 0.0
    for t, s_t, s0_t in zip(grid, s_grid, naive):
        censored = (jt.times <= t) & (jt.dC > 0)
        ratios = safe_divide(np.full(int(censored.sum()), s_t), s_at_times[censored])
        rhs = s0_t + float(np.dot(jt.dC[censored], ratios)) / jt.n
        residual = max(residual, abs(s_t - rhs))
    return residual


def verify_all(jt: JumpTable, tol: float = est.DEFAULT_TOL, max_iter: int = est.DEFAULT_MAX_ITER) -> VerificationReport:
    """Run the full set of identity checks on one data set.

    A self-consistency iteration that fails to converge is reported as a
    failing ``sc-fixed-point`` check; the remaining checks then use its last
    iterate.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    grid = evaluation_grid(jt)
    positive = grid[1:]
    before_tail = grid < jt.last_time
    n = jt.n

    s_pl = est.product_limit_failure(jt)
    k_pl = est.product_limit_censoring_dagger(jt)
    k_naive = est.product_limit_censoring_naive(jt)
    f_ipcw = est.ipcw_cdf(jt, k_pl)
    s_tilde = est.ipcw_survival_tilde(jt, k_pl)
    rt = est.rttr(jt)
    try:
        sc = est.self_consistent(jt, tol=tol, max_iter=max_iter)
        s_sc, converged = sc.estimate, True
    except NoConvergence as exc:
        s_sc, converged = exc.last_estimate, False

    pl_grid = s_pl.eval(grid)
    sc_grid = s_sc.eval(grid)
    k_grid = k_pl.eval(grid)
    checks = []

    # K(t) = 1 - sum_{u<=t} K(u) dC(u)/Y(u+) for t < X_(m)
    inner = jt.times < jt.last_time
    k_at = k_pl.eval(jt.times[inner])
    rhs = 1.0 - np.cumsum(k_at * jt.dC[inner] / jt.at_risk_after[inner])
    resid = np.abs(np.concatenate(([k_pl.eval(0.0) - 1.0], k_at - rhs)))
    checks.append(_unconditional("volterra-censoring", resid.max(), tol))

    # S(t) = 1 - sum_{u<=t} S(u-) dN(u)/Y(u)
    increments = s_pl.left_limit(jt.times) * jt.dN / jt.at_risk
    cumulative = np.concatenate(([0.0], np.cumsum(increments)))
    idx = np.searchsorted(jt.times, grid, side="right")
    checks.append(_unconditional("volterra-failure", np.abs(pl_grid - (1.0 - cumulative[idx])).max(), tol))

    sc_resid = _sc_equation_residual(s_sc, jt, grid)
    checks.append(IdentityCheck("sc-fixed-point", sc_resid, tol, converged and sc_resid <= tol))

    checks.append(
        _unconditional("sc-equals-pl-before-tail", np.abs(sc_grid - np.where(before_tail, pl_grid, 0.0)).max(), tol)
    )

    after = jt.at_risk_after_at(grid) / n
    at_risk_left = jt.at_risk_at(positive) / n
    fact_right = np.abs(after - pl_grid * k_grid).max()
    fact_left = np.abs(at_risk_left - s_pl.left_limit(positive) * k_pl.left_limit(positive)).max()
    checks.append(_unconditional("factorization", max(fact_right, fact_left), tol))

    checks.append(_unconditional("ipcw-cdf-equals-pl", np.abs(f_ipcw.eval(grid) - (1.0 - pl_grid)).max(), tol))

    k_left = k_pl.left_limit(jt.times)
    failure_mass = float(np.sum(safe_divide(jt.dN, np.where(jt.dN > 0, k_left, 0.0)))) / n
    censored_last = jt.dC[-1] / (n * k_left[-1])
    checks.append(_unconditional("mass-identity", abs(failure_mass + censored_last - 1.0), tol))

    checks.append(
        _biconditional(
            "tilde-condition", s_tilde.eval(grid) - (1.0 - f_ipcw.eval(grid)), grid, jt.all_failures_at_last, tol
        )
    )

    checks.append(_unconditional("rttr-equals-sc", np.abs(rt.estimate.eval(grid) - sc_grid).max(), tol))
    mass_resid = max(abs(float(rt.mass_ledger.sum()) - 1.0), float(max(0.0, -rt.mass_ledger.min())))
    checks.append(_unconditional("rttr-mass-sum", mass_resid, tol))

    checks.append(
        _biconditional(
            "censor-forms-agree",
            (k_grid - k_naive.eval(grid))[before_tail],
            grid[before_tail],
            not jt.common_discontinuity_before_last,
            tol,
        )
    )

    checks.append(_unconditional("ordering", max(0.0, float(np.max(sc_grid - pl_grid))), tol))

    low, high = km_tail_interval(jt)
    summary = {
        "n": n,
        "m": jt.m,
        "commonDiscontinuityBeforeLast": jt.common_discontinuity_before_last,
        "failuresAtLast": int(jt.dN[-1]),
        "atRiskAtLast": int(jt.at_risk[-1]),
        "allFailuresAtLast": jt.all_failures_at_last,
        "kmTailInterval": [low, high],
        "scIterations": sc.iterations if converged else None,
    }
    return VerificationReport(tuple(checks), summary)
