import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from dunklszasz import (DunklOrder, DunklRangeError, DomainError, PrecisionFlag, dunkl_exp,
                        dunkl_ratio, dunkl_weights, gamma_mu, gamma_mu_closed, log_gamma_mu,
                        theta)

# 60-digit mpmath direct summation of x^k / gamma_mu(k), rounded to double
FROZEN_EXP = {
    0.5: {-10: 144.72832476499983, -3: 0.9274223684624147, -1: 0.7009067737595233,
          0.5: 1.3213776761322198, 1: 1.8312249817444934, 2: 3.870222156973396,
          5: 51.57551396605498, 10: 5486.7049321675095},
    1.0: {-10: 110.13232420704095, -3: 1.096501524700701, -1: 0.8073217524723592,
          0.5: 1.2130613194252668, 1: 1.5430806348152437, 2: 2.7878129475035704,
          5: 26.71450339740377, 10: 2092.5142507336377},
    2.0: {-10: 56.16748943158456, -3: 1.1462885930685651, -1: 0.8889497131259035,
          0.5: 1.1270224127918047, 1: 1.3183269339027504, 2: 1.9893582482002183,
          5: 11.754111976977695, 10: 538.5470885263944},
}

FROZEN_RATIO = {
    0.5: {0.5: 0.6096584495875941, 1.0: 0.7182818284590452, 2.0: 0.8193502435980798},
    2.0: {0.5: 0.17801263590447527, 1.0: 0.30096978389270995, 2.0: 0.46939257088800823},
    10.0: {0.5: 0.02637800402140912, 1.0: 0.05263157666354169, 2.0: 0.10429448163070289},
    30.0: {0.5: 0.008476468923096536, 1.0: 0.01694915254237288, 2.0: 0.0338680926916221},
}


def test_theta_parity():
    assert [theta(k) for k in range(5)] == [0, 1, 0, 1, 0]


@pytest.mark.parametrize("mu,expected", [
    (0.5, [1, 2, 4, 16]), (1.0, [1, 3, 6, 30]), (2.0, [1, 5, 10, 70]),
])
def test_gamma_small_values(mu, expected):
    assert [gamma_mu(k, mu) for k in range(4)] == pytest.approx(expected, rel=1e-15)


def test_gamma_mu_zero_is_factorial():
    for k in range(20):
        assert gamma_mu(k, 0) == pytest.approx(math.factorial(k), rel=1e-14)


@given(st.integers(0, 150), st.floats(0, 5))
def test_recursion_matches_closed_form(k, mu):
    assert gamma_mu(k, mu) == pytest.approx(gamma_mu_closed(k, mu), rel=1e-12)
    assert log_gamma_mu(k, mu) == pytest.approx(math.log(gamma_mu(k, mu)), abs=1e-10)


def test_gamma_overflow_raises():
    with pytest.raises(DunklRangeError):
        gamma_mu(400, 1.0)
    with pytest.raises(DunklRangeError):
        gamma_mu_closed(400, 1.0)
    assert math.isfinite(log_gamma_mu(400, 1.0))


def test_negative_mu_rejected():
    with pytest.raises(ValueError):
        DunklOrder(-0.1)
    with pytest.raises(ValueError):
        dunkl_exp(1.0, -1.0)


@pytest.mark.parametrize("mu", sorted(FROZEN_EXP))
def test_exp_frozen_values(mu):
    for x, ref in FROZEN_EXP[mu].items():
        assert dunkl_exp(x, mu).value == pytest.approx(ref, rel=2e-14)


def test_exp_reference_value_at_one():
    # the commonly quoted 1.8312307 is wrong in the sixth digit
    assert dunkl_exp(1.0, 0.5).value == pytest.approx(1.8312249817444934, rel=1e-15)


def test_exp_bessel_identity():
    x = np.linspace(0.1, 10, 50)
    ref = special.i0(x) + special.i1(x)
    got = np.array([dunkl_exp(v, 0.5).value for v in x])
    assert np.max(np.abs(got / ref - 1)) < 1e-14


@pytest.mark.parametrize("x", np.linspace(-20, 20, 81))
def test_exp_mu_zero(x):
    assert dunkl_exp(x, 0).value == pytest.approx(math.exp(x), rel=1e-13)


def test_exp_metadata():
    res = dunkl_exp(-15.0, 0.0)
    assert res.extended_precision
    assert res.precision_flag is PrecisionFlag.OK
    assert res.tail_bound <= 1e-15 * math.exp(-15) * 10
    pos = dunkl_exp(3.0, 1.0)
    assert pos.cancellation_ratio == 1.0 and not pos.extended_precision


def test_exp_guard():
    with pytest.raises(DunklRangeError):
        dunkl_exp(800.0, 1.0)


def test_degraded_flag_reported():
    res = dunkl_exp(-60.0, 0.0)
    assert res.degraded
    assert res.cancellation_ratio < 1e-22


@pytest.mark.parametrize("y", sorted(FROZEN_RATIO))
def test_ratio_frozen(y):
    for mu, ref in FROZEN_RATIO[y].items():
        assert dunkl_ratio(y, mu) == pytest.approx(ref, rel=1e-12)


def test_ratio_mu_zero_and_zero_argument():
    assert dunkl_ratio(3.0, 0.0) == math.exp(-6.0)
    assert dunkl_ratio(0.0, 2.0) == 1.0
    with pytest.raises(DomainError):
        dunkl_ratio(-1.0, 1.0)


@settings(max_examples=60, deadline=None)
@given(st.floats(0, 200), st.floats(0, 4))
def test_ratio_bounded(y, mu):
    r = dunkl_ratio(y, mu)
    assert -1.0 <= r <= 1.0


def test_ratio_large_argument_log_domain():
    # for mu = 1 the ratio is 1/(2y - 1) up to exponentially small terms
    assert dunkl_ratio(30.0, 1.0) == pytest.approx(1.0 / 59.0, rel=1e-14)
    assert dunkl_ratio(1500.0, 1.0) == pytest.approx(1.0 / 2999.0, rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 300), st.floats(0, 4))
def test_weights_normalized(y, mu):
    t = dunkl_weights(y, mu)
    assert math.fsum(t.weights) == pytest.approx(1.0, abs=1e-14)
    assert np.all(t.weights >= 0)
    assert t.tail_bound <= 1e-14
    assert not t.weights.flags.writeable


def test_weights_mean_is_y():
    # E[k + 2 mu theta_k] = y for the Dunkl-Poisson law
    for y, mu in [(0.7, 0.5), (5.0, 2.0), (40.0, 1.0)]:
        t = dunkl_weights(y, mu)
        a = t.k + 2 * mu * (t.k & 1)
        assert math.fsum(t.weights * a) == pytest.approx(y, rel=1e-13)


def test_weights_match_direct_formula():
    t = dunkl_weights(3.0, 1.0)
    e = dunkl_exp(3.0, 1.0).value
    for k in range(8):
        assert t.weights[k] == pytest.approx(3.0 ** k / gamma_mu(k, 1.0) / e, rel=1e-13)
