import math

import numpy as np
import pytest

from dunklszasz import (GridSpec, RefusalError, StancuPair, certify_cb2, certify_lipschitz,
                        certify_modulus, get_function, korovkin_weighted_gap, modulus_omega,
                        modulus_omega2, peetre_proxy_bound, weighted_norm)
from dunklszasz.bounds import grid_slack, peetre_argument, working_grid

GRID = GridSpec(0.0, 10.0, 2001)


def test_omega_exact_cases():
    # omega of t is delta; omega of exp(-t) is 1 - exp(-delta) (attained at 0)
    assert modulus_omega("t", 0.37, GRID) == pytest.approx(0.37, abs=1e-12)
    assert modulus_omega("exp_neg", 0.1, GRID) == pytest.approx(1 - math.exp(-0.1), abs=1e-12)


def test_omega_holder_function():
    g = GridSpec(0.0, 3.0, 3001)
    assert modulus_omega("abs_sqrt_shift", 0.25, g) == pytest.approx(0.5, abs=1e-9)


def test_omega2_reference():
    # sup of |e^{-x-2h} - 2e^{-x-h} + e^{-x}| is (1 - e^{-h})^2 at x = 0, h -> 0.1
    assert modulus_omega2("exp_neg", 0.1, GRID) == pytest.approx((1 - math.exp(-0.1)) ** 2, rel=1e-9)
    assert modulus_omega2("t2", 0.3, GRID) == pytest.approx(2 * 0.09, rel=1e-12)


def test_omega_monotone_in_delta():
    vals = [modulus_omega("runge", d, GRID) for d in np.linspace(0.01, 3, 40)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_refusals():
    with pytest.raises(RefusalError):
        modulus_omega("t2", 0.1, GRID)
    with pytest.raises(RefusalError):
        modulus_omega2("t3", 0.1, GRID)
    with pytest.raises(RefusalError):
        certify_modulus("Kstar", "t", 4, 1.0)
    with pytest.raises(RefusalError):
        certify_cb2("t", 4, 1.0)


def test_weighted_norm():
    g = GridSpec(0.0, 4.0, 401)
    assert weighted_norm(lambda t: 1 + t * t, g) == pytest.approx(1.0)
    assert weighted_norm(np.ones(401), g) == 1.0


def test_grid_slack_small_on_fine_grid():
    assert grid_slack("sin", working_grid(5.0, 1)) < 0.05


@pytest.mark.parametrize("name", ["one", "exp_neg", "sin", "runge", "t_over_one_plus_t"])
def test_modulus_certificates(name):
    for n in (1, 16, 256):
        for x in (0.5, 1.0, 4.0):
            for mu in (0.0, 2.0):
                for kind in ("K", "Kstar"):
                    c = certify_modulus(kind, name, n, x, StancuPair(1, 2), mu)
                    assert c.satisfied and c.asserted


def test_lipschitz_variants():
    f = get_function("abs_sqrt_shift")
    proof = certify_lipschitz(f, 4, 1.0, StancuPair(), 1.0)
    paper = certify_lipschitz(f, 4, 1.0, StancuPair(), 1.0, "paper_exponent")
    assert proof.asserted and proof.satisfied and not paper.asserted
    assert paper.bound_value > proof.bound_value


def test_cb2_and_peetre_recorded():
    c = certify_cb2("runge", 8, 2.0, StancuPair(1, 2), 0.5)
    assert not c.asserted and c.satisfied
    p = peetre_proxy_bound("sin", 8, 2.0, StancuPair(1, 2), 0.5)
    assert not p.asserted and p.radius == pytest.approx(math.sqrt(peetre_argument(8, 2.0, StancuPair(1, 2), 0.5)))


def test_weighted_gap_bounds():
    g = GridSpec(0.5, 5.0, 19)
    for n in (1, 4, 64):
        gap = korovkin_weighted_gap(n, 1.0, 2.0, 1.0, g)
        assert gap.gap0 < 1e-13
        assert gap.gap1 <= gap.bound1 + 1e-12
        assert gap.gap2 <= gap.bound2 + 1e-12
        assert gap.bound2 <= gap.bound2_safe + 1e-15


def test_signed_proof_expression_fails_without_shift():
    # recorded: at alpha = beta = 0, mu = 0 the signed constant makes the expression too small
    gap = korovkin_weighted_gap(1, 0.0, 0.0, 0.0, GridSpec(0.5, 5.0, 19))
    assert gap.gap2 > gap.bound2
    assert gap.gap2 <= gap.bound2_safe


def test_error_domination_at_certificate_level():
    # with alpha = beta = 0, 2 omega(f; delta) <= 2 omega(f; lambda) since delta <= lambda
    from dunklszasz import radius_delta, radius_lambda
    for f in ("exp_neg", "runge", "sin"):
        grid = working_grid(5.0, 1)
        for n in (1, 4, 16, 64, 256):
            for x in (0.5, 0.75, 1.0, 2.0, 5.0):
                for mu in (0.0, 0.5, 1.0, 2.0):
                    d, lam = radius_delta(n, x, mu), radius_lambda(n, x, 0, 0, mu)
                    assert d <= lam
                    assert modulus_omega(f, d, grid) <= modulus_omega(f, lam, grid)
