import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import betainc
from scipy.stats import binom

from qpe.errors import ValidationError
from qpe.qpea import (analytic_bounds, analytic_pj, bits_of, circular_distance, majority_failure,
                      majority_failure_sum, n_repetitions, plan_repetitions, reg_inc_beta,
                      split_phase, value_of)


def tail(p, n):
    """Exact P(at least (n+1)/2 failures) with integer binomials."""
    return sum(math.comb(n, s) * (1 - p) ** s * p ** (n - s) for s in range((n + 1) // 2, n + 1))


@settings(max_examples=200, deadline=None)
@given(st.floats(0.001, 0.999), st.floats(0.1, 60), st.floats(0.1, 60))
def test_reg_inc_beta_matches_scipy(x, a, b):
    assert reg_inc_beta(x, a, b) == pytest.approx(float(betainc(a, b, x)), abs=1e-12)


def test_reg_inc_beta_edges():
    assert reg_inc_beta(0.0, 2, 3) == 0.0
    assert reg_inc_beta(1.0, 2, 3) == 1.0
    with pytest.raises(ValidationError):
        reg_inc_beta(1.5, 1, 1)


@pytest.mark.parametrize("p", [0.51, 0.6, 0.75, 0.9, 0.99])
@pytest.mark.parametrize("n", [1, 3, 7, 21, 101])
def test_majority_failure_three_ways(p, n):
    f = majority_failure(p, n)
    assert f == pytest.approx(majority_failure_sum(p, n), abs=1e-12)
    assert f == pytest.approx(tail(p, n), abs=1e-12)


def exhaustive_n(p, eps):
    n = 1
    while binom.sf((n - 1) // 2, n, 1 - p) > eps:
        n += 2
    return n


@pytest.mark.parametrize("p", [0.55, 0.65, 0.8, 0.95])
@pytest.mark.parametrize("eps", [0.2, 0.05, 0.01, 1e-3, 1e-5])
def test_n_repetitions_smallest_odd(p, eps):
    assert n_repetitions(p, eps) == exhaustive_n(p, eps)


def test_n_repetitions_rejects_coin_flip():
    with pytest.raises(ValidationError):
        n_repetitions(0.5, 0.01)


def test_plan_meets_target_per_bit():
    plan = plan_repetitions([0.9, 0.8, 0.7, 0.6], 0.05)
    assert all(s >= 1 - 0.05 / 4 - 1e-12 for s in plan.majority_success())
    assert all(n % 2 == 1 for n in plan.n)
    assert plan.total == sum(plan.n)


def dft_prob(phi, m, j):
    """|<j| QFT^dagger |phi-state>|^2 by explicit summation."""
    n = 2 ** m
    amp = sum(np.exp(2j * math.pi * x * (phi - j / n)) for x in range(n)) / n
    return abs(amp) ** 2


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 0.999999), st.integers(1, 7))
def test_analytic_pj_matches_sum(phi, m):
    for j in range(2 ** m):
        assert analytic_pj(phi, m, j) == pytest.approx(dft_prob(phi, m, j), abs=1e-10)


def test_analytic_bounds_limit():
    lo, up = analytic_bounds(0.5, 20)
    assert lo == pytest.approx(up)
    assert lo + up == pytest.approx(8 / math.pi ** 2, abs=1e-6)
    assert analytic_bounds(0.0, 5) == (1.0, 0.0)


def test_bit_helpers():
    assert bits_of(0b1011, 4) == [1, 0, 1, 1]
    assert value_of([1, 0, 1, 1]) == 11
    assert split_phase(0.3, 3) == (2, pytest.approx(0.4))
    assert circular_distance(0.95, 0.05) == pytest.approx(0.1)


def test_n_repetitions_reports_runaway_counts():
    from qpe.errors import ResourceError
    with pytest.raises(ResourceError):
        n_repetitions(0.5 + 1e-15, 1e-6)
