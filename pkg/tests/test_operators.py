import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, stats

from dunklszasz import (DomainError, EvalConfig, OperatorKind, StancuPair, apply_operator,
                        apply_to_monomial, cell_bounds, get_function, r_n, weight)
from dunklszasz.functions import combine
from dunklszasz.operators import gauss_legendre

KINDS = list(OperatorKind)


def test_kind_parsing():
    assert OperatorKind.parse("K*") is OperatorKind.MODIFIED_KANTOROVICH_STANCU_DUNKL
    assert OperatorKind.parse("T*") is OperatorKind.parse("T")
    assert OperatorKind.parse("S*") is OperatorKind.SZASZ_DUNKL
    with pytest.raises(ValueError):
        OperatorKind.parse("Q")


def test_stancu_validation():
    with pytest.raises(ValueError):
        StancuPair(2.0, 1.0)
    with pytest.raises(ValueError):
        StancuPair(-1.0, 1.0)
    assert StancuPair().trivial


def test_weight_reference_value():
    assert weight(2, 1.0, 0.5) == pytest.approx(0.13652063645497053, rel=1e-14)
    assert weight(0, 0.0, 1.0) == 1.0 and weight(3, 0.0, 1.0) == 0.0


def test_cell_bounds():
    assert cell_bounds(3, 1.0, 4) == (5 / 4, 6 / 4)
    assert cell_bounds(2, 1.0, 4) == (2 / 4, 3 / 4)


def test_r_n_domain():
    assert r_n(1.0, 2) == 0.75
    with pytest.raises(DomainError):
        r_n(0.4, 2)
    with pytest.raises(DomainError):
        apply_operator("K", "one", 3, 0.49)
    with pytest.raises(DomainError):
        apply_operator("S", "one", 3, 1.0, mu=1.0)


def test_gauss_legendre_against_scipy():
    x, w = gauss_legendre(16)
    assert w.sum() == pytest.approx(1.0, abs=1e-15)
    got = float(np.sum(w * np.exp(0.5 * (x + 1))))
    ref = integrate.quad(np.exp, 0, 1)[0]
    assert got == pytest.approx(ref, rel=1e-15)


def test_classical_szasz_is_poisson_expectation():
    f = get_function("sin")
    n, x = 5, 1.3
    k = np.arange(200)
    ref = float(np.sum(stats.poisson.pmf(k, n * x) * np.sin(k / n)))
    assert apply_operator("S", f, n, x) == pytest.approx(ref, abs=1e-14)
    assert apply_operator("Sdunkl", f, n, x, mu=0) == pytest.approx(ref, abs=1e-14)


def test_integral_kind_against_scipy_quad():
    # K* at mu = 1 as explicit sum of weighted cell averages
    f = get_function("abs_sqrt_shift")
    n, x, mu, a, b = 3, 1.4, 1.0, 1.0, 2.0
    y = n * (x - 1 / (2 * n))
    total = 0.0
    for k in range(80):
        lo, hi = cell_bounds(k, mu, n)
        ul, uh = (n * lo + a) / (n + b), (n * hi + a) / (n + b)
        pts = [1.0] if ul < 1.0 < uh else None
        mean = integrate.quad(lambda u: math.sqrt(abs(u - 1.0)), ul, uh, points=pts,
                              epsabs=1e-15)[0] / (uh - ul)
        total += weight(k, y, mu) * mean
    assert apply_operator("Kstar", f, n, x, StancuPair(a, b), mu) == pytest.approx(total, abs=1e-13)


@pytest.mark.parametrize("kind,expected,params", [
    ("K", 19 / 12, None), ("T", 10 / 3, None),
])
def test_known_values(kind, expected, params):
    assert apply_to_monomial(kind, 2, 1, 1.0, params, 0.0) == pytest.approx(expected, abs=1e-13)
    assert apply_operator(kind, "t2", 1, 1.0, params, 0.0) == pytest.approx(expected, abs=1e-13)


def test_linear_reproduction():
    assert apply_operator("K", "t", 3, 2.0, mu=1.5) == pytest.approx(2.0, abs=1e-14)
    got = apply_operator("Kstar", "t", 8, 1.0, StancuPair(1.0, 2.0), 0.0)
    assert got == pytest.approx(0.9, abs=1e-14)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(KINDS), st.integers(1, 200), st.floats(0.5, 8), st.floats(0, 3))
def test_partition_of_unity(kind, n, x, mu):
    if kind is OperatorKind.SZASZ_CLASSICAL:
        mu = 0.0
    cfg = EvalConfig()
    assert abs(apply_operator(kind, "one", n, x, StancuPair(0.5, 4), mu, cfg) - 1) <= 10 * cfg.series_tol


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 64), st.floats(0.5, 5), st.floats(0, 2), st.floats(-3, 3), st.floats(-3, 3))
def test_linearity(n, x, mu, a, b):
    p = StancuPair(1.0, 2.0)
    f, g = get_function("sin"), get_function("runge")
    lhs = apply_operator("Kstar", combine(a, f, b, g), n, x, p, mu)
    rhs = a * apply_operator("Kstar", f, n, x, p, mu) + b * apply_operator("Kstar", g, n, x, p, mu)
    assert lhs == pytest.approx(rhs, abs=1e-13)


def test_positivity():
    rng = np.random.default_rng(7)
    f = get_function("abs_sqrt_shift")
    for _ in range(40):
        kind = KINDS[rng.integers(1, len(KINDS))]
        n, x, mu = int(rng.integers(1, 100)), float(rng.uniform(0.5, 5)), float(rng.uniform(0, 2))
        assert apply_operator(kind, f, n, x, StancuPair(0.5, 4), mu) >= 0


def test_diagnostics():
    v, d = apply_operator("Kstar", "sin", 16, 2.0, StancuPair(1, 2), 1.0, full_output=True)
    assert d.y == pytest.approx(16 * 2.0 - 0.5)
    assert d.terms_used > 16 and d.tail_bound <= 1e-14 and not d.degraded


def test_params_ignored_for_untransformed_kinds():
    p = StancuPair(1.0, 2.0)
    assert apply_operator("K", "sin", 4, 2.0, p, 1.0) == apply_operator("K", "sin", 4, 2.0, None, 1.0)
