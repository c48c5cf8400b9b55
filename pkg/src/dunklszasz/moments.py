"""Closed-form moments of T*, K and K*, the error radii, and an independent oracle.

Throughout, ``R`` denotes the reflection ratio e_mu(-y)/e_mu(y) evaluated at
the operator's Poisson parameter: y = n x for T*, y = n r_n(x) for K and K*.

The closed forms are treated as claims under test. :func:`moment_report`
compares each against :func:`oracle_moment`, which sums the operator
directly with exact cell integrals and never touches ``R``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .core import MuLike, as_mu, dunkl_ratio
from .exceptions import DomainError
from .operators import EvalConfig, OperatorKind, StancuPair, apply_to_monomial, r_n

GRID_VERSION = "1"

STANDARD_GRID = {
    "mu": (0.0, 0.5, 1.0, 2.0),
    "n": (1, 4, 16, 64, 256),
    "x": (0.5, 0.75, 1.0, 2.0, 5.0),
    "alpha_beta": ((0.0, 0.0), (1.0, 2.0), (0.5, 4.0)),
}

COMPARISON_TOL = 1e-9

OK = "ok"
FORMULA_MISMATCH = "FORMULA-MISMATCH"
NEGATIVE_RADICAND = "NEGATIVE-RADICAND"


def _check_modified(x: float) -> None:
    if not x >= 0.5:
        raise DomainError(f"the modified operators need x >= 1/2, got x={x}")


def _check_t(x: float) -> None:
    if not x >= 0:
        raise DomainError(f"T* needs x >= 0, got x={x}")


def _stancu(alpha: float, beta: float) -> StancuPair:
    return StancuPair(alpha, beta)


def ratio_T(n: int, x: float, mu: MuLike) -> float:
    """R at y = n x (the T* operator)."""
    return dunkl_ratio(n * x, mu)


def ratio_K(n: int, x: float, mu: MuLike) -> float:
    """R at y = n r_n(x) (the K and K* operators)."""
    return dunkl_ratio(n * r_n(x, n), mu)


def moments_T(n: int, x: float, alpha: float = 0.0, beta: float = 0.0,
              mu: MuLike = 0.0) -> Tuple[float, float, float]:
    """T*(1; x), T*(t; x), T*(t^2; x)."""
    _check_t(x)
    _stancu(alpha, beta)
    mu = as_mu(mu)
    R = ratio_T(n, x, mu)
    s = n + beta
    m1 = n * x / s + (alpha + 0.5) / s
    m2 = ((n / s) ** 2 * (x * x + 2.0 * (1.0 + mu * R) * x / n + 1.0 / (3.0 * n * n))
          + 2.0 * n * alpha / s ** 2 * (x + 1.0 / (2 * n))
          + (alpha / s) ** 2)
    return 1.0, m1, m2


def moments_K(n: int, x: float, mu: MuLike = 0.0) -> Tuple[float, float, float]:
    """K(1; x), K(t; x), K(t^2; x)."""
    _check_modified(x)
    mu = as_mu(mu)
    R = ratio_K(n, x, mu)
    m2 = x * x + (1.0 + 2.0 * mu * R) * x / n - (5.0 / 12.0 + mu * R) / (n * n)
    return 1.0, x, m2


def moments_Kstar(n: int, x: float, alpha: float = 0.0, beta: float = 0.0,
                  mu: MuLike = 0.0) -> Tuple[float, float, float]:
    """K*(1; x), K*(t; x), K*(t^2; x)."""
    _check_modified(x)
    _stancu(alpha, beta)
    mu = as_mu(mu)
    R = ratio_K(n, x, mu)
    s = n + beta
    m1 = n / s * x + alpha / s
    m2 = ((n / s) ** 2 * x * x
          + n / s ** 2 * (1.0 + 2.0 * alpha + 2.0 * mu * R) * x
          + (alpha * alpha - (5.0 / 12.0 + mu * R)) / s ** 2)
    return 1.0, m1, m2


def central_moments_Kstar(n: int, x: float, alpha: float = 0.0, beta: float = 0.0,
                          mu: MuLike = 0.0) -> Tuple[float, float]:
    """K*(t - x; x) and K*((t - x)^2; x)."""
    _check_modified(x)
    _stancu(alpha, beta)
    mu = as_mu(mu)
    R = ratio_K(n, x, mu)
    s = n + beta
    c1 = (n / s - 1.0) * x + alpha / s
    c2 = (beta * beta * x * x
          + (n - 2.0 * alpha * beta + 2.0 * n * mu * R) * x
          + alpha * alpha - (5.0 / 12.0 + mu * R)) / s ** 2
    return c1, c2


def central_moments_T(n: int, x: float, alpha: float = 0.0, beta: float = 0.0,
                      mu: MuLike = 0.0) -> Tuple[float, float]:
    """T*(t - x; x) and T*((t - x)^2; x)."""
    _check_t(x)
    _stancu(alpha, beta)
    mu = as_mu(mu)
    R = ratio_T(n, x, mu)
    s = n + beta
    c1 = (n / s - 1.0) * x + (alpha + 0.5) / s
    c2 = (beta * beta * x * x
          + (n - beta * (2.0 * alpha + 1.0) + 2.0 * n * mu * R) * x
          + alpha * alpha + alpha + 1.0 / 3.0) / s ** 2
    return c1, c2


def _root(radicand: float) -> float:
    # negative radicands are reported, never clamped
    return math.sqrt(radicand) if radicand >= 0 else math.nan


def radius_delta(n: int, x: float, mu: MuLike = 0.0) -> float:
    """sqrt(K((t - x)^2; x)); NaN if the formula's radicand is negative."""
    return radius_delta_star(n, x, 0.0, 0.0, mu)


def radius_delta_star(n: int, x: float, alpha: float = 0.0, beta: float = 0.0,
                      mu: MuLike = 0.0) -> float:
    """sqrt(K*((t - x)^2; x)); NaN if the formula's radicand is negative."""
    return _root(central_moments_Kstar(n, x, alpha, beta, mu)[1])


def radius_lambda(n: int, x: float, alpha: float = 0.0, beta: float = 0.0,
                  mu: MuLike = 0.0) -> float:
    """sqrt(T*((t - x)^2; x)); NaN if the formula's radicand is negative."""
    return _root(central_moments_T(n, x, alpha, beta, mu)[1])


def _oracle_config(cfg: Optional[EvalConfig], tol: float) -> EvalConfig:
    cfg = cfg or EvalConfig()
    return EvalConfig(min(cfg.series_tol, tol / 100.0), cfg.quadrature_order, cfg.term_cap)


def oracle_moment(kind, j: int, n: int, x: float, alpha: float = 0.0, beta: float = 0.0,
                  mu: MuLike = 0.0, *, tol: float = COMPARISON_TOL,
                  cfg: Optional[EvalConfig] = None) -> float:
    """j-th raw moment by direct summation with exact cell integrals.

    The series tolerance is 100 times tighter than ``tol``.
    """
    return apply_to_monomial(kind, j, n, x, StancuPair(alpha, beta), mu,
                             _oracle_config(cfg, tol))


def oracle_central2(kind, n: int, x: float, alpha: float = 0.0, beta: float = 0.0,
                    mu: MuLike = 0.0, *, tol: float = COMPARISON_TOL,
                    cfg: Optional[EvalConfig] = None) -> float:
    m0, m1, m2 = (oracle_moment(kind, j, n, x, alpha, beta, mu, tol=tol, cfg=cfg)
                  for j in range(3))
    return m2 - 2.0 * x * m1 + x * x * m0


def compare_central2(n: int, x: float, alpha: float = 0.0, beta: float = 0.0,
                     mu: MuLike = 0.0) -> Tuple[float, float, bool]:
    """Second central moments of K* and T* at the same point and whether K* <= T*."""
    k_value = central_moments_Kstar(n, x, alpha, beta, mu)[1]
    t_value = central_moments_T(n, x, alpha, beta, mu)[1]
    return k_value, t_value, k_value <= t_value


MOMENT_COLUMNS = (
    "kind", "n", "x", "mu", "alpha", "beta",
    "m0", "m1", "m2", "c1", "c2",
    "oracle_m0", "oracle_m1", "oracle_m2", "oracle_c2",
    "radius", "max_abs_dev", "ratio_degraded", "status",
)


@dataclass(frozen=True)
class MomentReport:
    """Analytic vs oracle moments at one parameter point.

    ``radius`` is delta for K, delta* for K* and lambda for T*.
    """

    kind: OperatorKind
    n: int
    x: float
    mu: float
    alpha: float
    beta: float
    raw: Tuple[float, float, float]
    first_central: float
    central2: float
    oracle_raw: Tuple[float, float, float]
    oracle_central2: float
    radius: float
    max_abs_dev: float
    ratio_degraded: bool = False
    status: str = OK
    tol: float = field(default=COMPARISON_TOL, compare=False)

    @property
    def passed(self) -> bool:
        return self.status == OK

    def as_row(self) -> List:
        return [self.kind.value, self.n, self.x, self.mu, self.alpha, self.beta,
                *self.raw, self.first_central, self.central2,
                *self.oracle_raw, self.oracle_central2,
                self.radius, self.max_abs_dev, int(self.ratio_degraded), self.status]


def moment_report(kind, n: int, x: float, alpha: float = 0.0, beta: float = 0.0,
                  mu: MuLike = 0.0, *, tol: float = COMPARISON_TOL,
                  cfg: Optional[EvalConfig] = None) -> MomentReport:
    """Evaluate the closed forms for ``kind`` and check them against the oracle.

    A point is marked FORMULA-MISMATCH when any raw or central moment
    differs from the oracle by more than ``tol * max(1, |oracle|)``, and
    NEGATIVE-RADICAND when the analytic second central moment is negative.
    """
    kind = OperatorKind.parse(kind)
    mu = as_mu(mu)
    if kind is OperatorKind.KANTOROVICH_STANCU_DUNKL:
        raw = moments_T(n, x, alpha, beta, mu)
        c1, c2 = central_moments_T(n, x, alpha, beta, mu)
        y = n * x
    elif kind is OperatorKind.MODIFIED_KANTOROVICH_DUNKL:
        alpha = beta = 0.0
        raw = moments_K(n, x, mu)
        c1, c2 = central_moments_Kstar(n, x, 0.0, 0.0, mu)
        y = n * r_n(x, n)
    elif kind is OperatorKind.MODIFIED_KANTOROVICH_STANCU_DUNKL:
        raw = moments_Kstar(n, x, alpha, beta, mu)
        c1, c2 = central_moments_Kstar(n, x, alpha, beta, mu)
        y = n * r_n(x, n)
    else:
        raise ValueError(f"no closed-form moments implemented for {kind.value}")
    oracle = tuple(oracle_moment(kind, j, n, x, alpha, beta, mu, tol=tol, cfg=cfg)
                   for j in range(3))
    o_c2 = oracle[2] - 2.0 * x * oracle[1] + x * x * oracle[0]
    o_c1 = oracle[1] - x * oracle[0]
    pairs = list(zip(raw, oracle)) + [(c1, o_c1), (c2, o_c2)]
    max_dev = max(abs(a - b) for a, b in pairs)
    mismatch = any(abs(a - b) > tol * max(1.0, abs(b)) for a, b in pairs)
    _, ratio_eval = dunkl_ratio(y, mu, full_output=True)
    if mismatch:
        status = FORMULA_MISMATCH
    elif c2 < 0:
        status = NEGATIVE_RADICAND
    else:
        status = OK
    return MomentReport(kind, int(n), float(x), mu, float(alpha), float(beta),
                        tuple(raw), c1, c2, oracle, o_c2, _root(c2), max_dev,
                        ratio_eval.degraded, status, tol)
