"""Property tests of the estimator invariants on random, heavily tied data."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import datasets
from rcsurv import (
    build_jump_table,
    censoring_from_relation,
    censoring_via_inverse_product,
    ipcw_cdf,
    ipcw_survival_tilde,
    naive_survival,
    product_limit_censoring_dagger,
    product_limit_censoring_naive,
    product_limit_failure,
    rttr,
    self_consistent,
    validate_sample,
    verify_all,
)
from rcsurv.identities import CHECK_NAMES, evaluation_grid

TOL = 1e-12
small_datasets = st.lists(st.tuples(st.integers(1, 5).map(float), st.integers(0, 1)), min_size=1, max_size=10)


def jt_of(raw):
    return build_jump_table(validate_sample(raw))


def all_estimators(jt):
    k = product_limit_censoring_dagger(jt)
    return {
        "naive": (naive_survival(jt), -1),
        "pl": (product_limit_failure(jt), -1),
        "censor-pl": (k, -1),
        "censor-naive": (product_limit_censoring_naive(jt), -1),
        "sc": (self_consistent(jt).estimate, -1),
        "ipcw-cdf": (ipcw_cdf(jt, k), +1),
        "ipcw-surv": (ipcw_survival_tilde(jt, k), -1),
        "rttr": (rttr(jt).estimate, -1),
    }


@settings(max_examples=150, deadline=None)
@given(datasets)
def test_outputs_are_monotone_and_bounded(raw):
    jt = jt_of(raw)
    for name, (f, direction) in all_estimators(jt).items():
        seq = np.concatenate(([f.initial_value], f.values))
        assert np.all(seq >= -TOL) and np.all(seq <= 1 + TOL), name
        assert np.all(direction * np.diff(seq) >= -TOL), name
        if name == "ipcw-cdf":
            assert f.eval(0) == 0
        elif name != "ipcw-surv":
            assert f.eval(0) == 1
        prev = f.initial_value
        for t, v in zip(f.jump_times, f.values):
            assert f.eval(t) == v and f.left_limit(t) == prev
            prev = v


@settings(max_examples=100, deadline=None)
@given(small_datasets)
def test_product_limits_match_rational_oracle(raw):
    jt = jt_of(raw)
    pl, kd, kn = product_limit_failure(jt), product_limit_censoring_dagger(jt), product_limit_censoring_naive(jt)
    for t in evaluation_grid(jt):
        assert abs(pl.eval(t) - float(oracles.pl(raw, t))) <= TOL
        assert abs(kd.eval(t) - float(oracles.censor_dagger(raw, t))) <= TOL
        assert abs(kn.eval(t) - float(oracles.censor_naive(raw, t))) <= TOL


@settings(max_examples=100, deadline=None)
@given(small_datasets)
def test_rttr_matches_redistribution_oracle(raw):
    res = rttr(jt_of(raw))
    want = [float(m) for m in oracles.redistribute_to_the_right(raw)]
    assert np.allclose(res.mass_ledger, want, rtol=0, atol=TOL)
    assert abs(res.mass_ledger.sum() - 1) <= TOL


@settings(max_examples=60, deadline=None)
@given(small_datasets)
def test_self_consistent_matches_oracle(raw):
    jt = jt_of(raw)
    grid = list(evaluation_grid(jt))
    ref = oracles.sc_fixed_point(raw, grid)
    est = self_consistent(jt).estimate
    for t in grid:
        assert abs(est.eval(t) - ref[t]) <= 1e-11


@settings(max_examples=150, deadline=None)
@given(datasets)
def test_equivalences(raw):
    jt = jt_of(raw)
    grid = evaluation_grid(jt)
    before = grid < jt.last_time
    pl = product_limit_failure(jt).eval(grid)
    sc = self_consistent(jt).estimate.eval(grid)
    k = product_limit_censoring_dagger(jt)
    assert np.allclose(sc, np.where(before, pl, 0.0), rtol=0, atol=TOL)
    assert np.allclose(rttr(jt).estimate.eval(grid), sc, rtol=0, atol=TOL)
    assert np.allclose(ipcw_cdf(jt, k).eval(grid), 1 - pl, rtol=0, atol=TOL)
    assert np.all(sc <= pl + TOL)
    tail_equal = abs(sc[-1] - pl[-1]) <= TOL
    assert tail_equal == jt.all_failures_at_last

    relation = censoring_from_relation(product_limit_failure(jt), jt)
    assert np.allclose(relation.eval(grid[before]), k.eval(grid[before]), rtol=0, atol=TOL)
    if jt.m > 1:
        t_max = float(jt.times[-2])
        inv = censoring_via_inverse_product(jt, t_max)
        g = grid[grid <= t_max]
        assert np.allclose(inv.eval(g), k.eval(g), rtol=0, atol=TOL)
    if not jt.common_discontinuity_before_last:
        kn = product_limit_censoring_naive(jt)
        assert np.allclose(kn.eval(grid[before]), k.eval(grid[before]), rtol=0, atol=TOL)


@settings(max_examples=150, deadline=None)
@given(datasets)
def test_factorization(raw):
    jt = jt_of(raw)
    grid = evaluation_grid(jt)
    pl, k = product_limit_failure(jt), product_limit_censoring_dagger(jt)
    assert np.allclose(jt.at_risk_after_at(grid) / jt.n, pl.eval(grid) * k.eval(grid), rtol=0, atol=TOL)
    pos = grid[1:]
    assert np.allclose(jt.at_risk_at(pos) / jt.n, pl.left_limit(pos) * k.left_limit(pos), rtol=0, atol=TOL)
    assert k.left_limit(jt.last_time) > 0


@settings(max_examples=150, deadline=None)
@given(datasets)
def test_verify_all_passes(raw):
    jt = jt_of(raw)
    report = verify_all(jt)
    assert tuple(c.name for c in report.checks) == CHECK_NAMES
    assert report.passed, [c for c in report.checks if not c.passed]
    assert report["tilde-condition"].condition_holds == jt.all_failures_at_last
    assert report["censor-forms-agree"].condition_holds == (not jt.common_discontinuity_before_last)
    assert report.to_json() == verify_all(jt_of(raw)).to_json()
