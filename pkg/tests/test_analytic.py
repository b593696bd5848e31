import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zetagaps import analytic
from zetagaps.analytic import BoundParams
from zetagaps.errors import ArgumentError, ConvergenceError, DomainError

TABLE = {
    1: 1.46389, 2: 0.951371, 3: 0.780111, 4: 0.68697, 5: 0.625737, 6: 0.581289,
    7: 0.546994, 8: 0.519411, 9: 0.496551, 10: 0.477168, 20: 0.370163,
    100: 0.21138, 1000: 0.0972135,
}


def test_integrand_values():
    assert analytic.pc_integrand(0.0) == 0.0
    assert analytic.pc_integrand(1.0) == pytest.approx(1.0, abs=1e-15)
    assert analytic.pc_integrand(0.5) == pytest.approx(1 - (2 / math.pi) ** 2, abs=1e-12)
    assert abs(analytic.pc_integrand(0.5) - 0.594715) < 1e-6


def test_integrand_rejects_non_finite():
    with pytest.raises(DomainError):
        analytic.pc_integrand(float("nan"))
    with pytest.raises(DomainError):
        analytic.pc_integrand(-1.0)


@given(st.floats(min_value=0, max_value=50, allow_nan=False))
def test_integrand_in_unit_interval(u):
    v = analytic.pc_integrand(u)
    assert 0.0 <= v <= 1.0
    if 1e-150 < u < 1:  # below this (pi u)^2 / 3 underflows
        assert v > 0


def test_integrand_small_argument_series_is_continuous():
    u = np.array([9.99e-4, 1.001e-3])
    exact = 1 - (np.sin(np.pi * u) / (np.pi * u)) ** 2
    assert np.allclose(analytic.pc_integrand(u), exact, rtol=1e-9)


def test_f_examples():
    assert analytic.f(0.0).value == 0.0
    assert analytic.f(1.46389).value == pytest.approx(1.0, abs=1e-4)
    assert analytic.f(0.951371).value == pytest.approx(0.5, abs=1e-4)
    # the tail 1/(pi^2 alpha) leaves f(50) about 1.0e-3 above 49.5
    assert analytic.f(50.0).value == pytest.approx(49.5, abs=2.1e-3)
    assert analytic.f(50.0).value == pytest.approx(49.50101319, abs=1e-8)


@pytest.mark.parametrize("alpha", [0.01, 0.3, 1.0, 2.7, 10.0, 33.3, 255.5, 256.5, 1000.25])
def test_f_matches_closed_form(alpha):
    res = analytic.f(alpha)
    assert res.abs_error_estimate <= 1e-10
    assert res.value == pytest.approx(analytic.f_closed_form(alpha), abs=1e-10)


def test_f_huge_alpha():
    assert analytic.f(1e6).value == pytest.approx(1e6 - 0.5, abs=1e-6)


@pytest.mark.parametrize("alpha", [10.0, 20.0, 50.0])
def test_f_tail(alpha):
    assert abs(analytic.f(alpha).value - (alpha - 0.5)) <= 1 / (math.pi**2 * alpha)


@settings(max_examples=50, deadline=None)
@given(st.floats(0, 8), st.floats(0, 8))
def test_f_monotone_and_lipschitz(a, b):
    a, b = min(a, b), max(a, b)
    d = analytic.f(b).value - analytic.f(a).value
    assert -1e-12 <= d <= b - a + 1e-12


def test_quadrature_budget_exhaustion():
    with pytest.raises(ConvergenceError):
        analytic.adaptive_gauss_legendre(lambda x: np.sign(x - 0.3137), [0.0, 1.0], 1e-14,
                                         max_evaluations=500)


def test_solve_cr_examples():
    assert analytic.solve_cr(1) == pytest.approx(1.46389, abs=1e-5)
    assert analytic.solve_cr(10) == pytest.approx(0.477168, abs=1e-5)
    assert analytic.solve_cr(1000) == pytest.approx(0.0972135, abs=1e-6)


def test_solve_cr_table_and_identity():
    prev = math.inf
    for r, expected in TABLE.items():
        c = analytic.solve_cr(r, 1e-12)
        assert abs(c - expected) <= 1e-5
        assert r * analytic.f(c).value == pytest.approx(1.0, abs=2e-12 * r + 1e-11)
        assert c < prev
        prev = c


def test_solve_cr_rejects_bad_input():
    with pytest.raises(ArgumentError):
        analytic.solve_cr(0)
    with pytest.raises(ArgumentError):
        analytic.solve_cr(3, tol=0)


def test_pcc_bound_examples():
    assert analytic.pcc_lower_bound(BoundParams(1, 1.46389)) == pytest.approx(0, abs=1e-4)
    assert analytic.pcc_lower_bound(BoundParams(2, 0.951371)) == pytest.approx(0, abs=1e-4)
    assert analytic.pcc_lower_bound(BoundParams(3, 1e-9)) == pytest.approx(1.0, abs=1e-12)


def test_wellspacing_examples():
    assert analytic.wellspacing_lower_bound(BoundParams(1, 1.0, M=1, delta=3)) == 0
    assert analytic.wellspacing_lower_bound(BoundParams(2, 0.5, M=1, delta=3)) == 0.75
    v = analytic.wellspacing_lower_bound(BoundParams(1, 1 / math.pi, M=(math.pi / 3) ** 2, delta=3))
    assert v == pytest.approx(0.96463, abs=1e-5)
    assert v == pytest.approx(1 - 1 / (9 * math.pi), abs=1e-14)


@pytest.mark.parametrize("kw", [dict(r=0, c=1), dict(r=1, c=0), dict(r=1, c=1, M=0),
                                dict(r=1, c=1, delta=0), dict(r=1.5, c=1)])
def test_bound_params_validation(kw):
    with pytest.raises(ArgumentError):
        BoundParams(**kw)


def test_cubic_bound_examples():
    assert analytic.cubic_bound(1 / math.pi) == pytest.approx(1 / (9 * math.pi), abs=1e-12)
    assert abs(analytic.cubic_bound(1 / math.pi) - 0.035368) < 1e-6
    assert analytic.cubic_bound(0.0) == 0.0
    assert analytic.cubic_bound(0.1) == pytest.approx(1.09662e-3, abs=1e-8)
    with pytest.raises(DomainError):
        analytic.cubic_bound(0.4)


def test_cubic_bound_dominates_f():
    for c in np.linspace(1 / math.pi / 100, 1 / math.pi, 100):
        assert analytic.f(c).value <= analytic.cubic_bound(c)


def test_corollary_threshold():
    assert analytic.corollary_threshold(1) == pytest.approx(1 / math.pi)
    assert analytic.corollary_threshold(28) == 1 / math.pi
    assert analytic.corollary_threshold(29) < 1 / math.pi
    assert analytic.corollary_threshold(1000) == pytest.approx((3 / math.pi) ** (2 / 3) / 10, abs=1e-15)
    assert analytic.corollary_crossover() == 28


@pytest.mark.parametrize("r", [1, 2, 5, 28, 29, 100, 1000])
def test_bound_positive_below_threshold(r):
    thr = analytic.corollary_threshold(r)
    for c in np.linspace(thr / 50, thr * (1 - 1e-9), 20):
        assert analytic.pcc_lower_bound(BoundParams(r, c)) > 0
