"""The Szasz-type operators and their Dunkl / Kantorovich / Stancu variants.

All five operators share one skeleton: a Dunkl-Poisson weight w_k(y) on
each index k, and a sample of f attached to the shifted lattice point
a_k = k + 2*mu*theta(k):

=========  =========  ====================================================
kind       y          sample
=========  =========  ====================================================
S          n x        f(k/n), mu must be 0
S*         n x        f(a_k/n)
T*         n x        mean of f((n t + alpha)/(n + beta)) over t in cell k
K          n r_n(x)   mean of f over cell k
K*         n r_n(x)   mean of f((n t + alpha)/(n + beta)) over t in cell k
=========  =========  ====================================================

Cell k is [a_k/n, (a_k + 1)/n] and r_n(x) = x - 1/(2n). The modified kinds
K and K* are only defined for x >= 1/2.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Tuple, Union

import numpy as np

from .core import TERM_CAP, MuLike, WeightTable, as_mu, dunkl_weights, log_gamma_mu
from .exceptions import DomainError
from .functions import TestFunction, as_test_function


class OperatorKind(enum.Enum):
    SZASZ_CLASSICAL = "S"
    SZASZ_DUNKL = "Sdunkl"
    KANTOROVICH_STANCU_DUNKL = "T"
    MODIFIED_KANTOROVICH_DUNKL = "K"
    MODIFIED_KANTOROVICH_STANCU_DUNKL = "Kstar"

    @classmethod
    def parse(cls, value) -> "OperatorKind":
        if isinstance(value, cls):
            return value
        text = str(value)
        aliases = {"S*": cls.SZASZ_DUNKL, "T*": cls.KANTOROVICH_STANCU_DUNKL,
                   "Tstar": cls.KANTOROVICH_STANCU_DUNKL, "K*": cls.MODIFIED_KANTOROVICH_STANCU_DUNKL}
        if text in aliases:
            return aliases[text]
        for kind in cls:
            if text in (kind.value, kind.name):
                return kind
        raise ValueError(f"unknown operator kind {value!r}")

    @property
    def is_integral(self) -> bool:
        return self not in (OperatorKind.SZASZ_CLASSICAL, OperatorKind.SZASZ_DUNKL)

    @property
    def is_modified(self) -> bool:
        return self in (OperatorKind.MODIFIED_KANTOROVICH_DUNKL,
                        OperatorKind.MODIFIED_KANTOROVICH_STANCU_DUNKL)

    @property
    def uses_stancu(self) -> bool:
        return self in (OperatorKind.KANTOROVICH_STANCU_DUNKL,
                        OperatorKind.MODIFIED_KANTOROVICH_STANCU_DUNKL)

    @property
    def x_min(self) -> float:
        return 0.5 if self.is_modified else 0.0


KindLike = Union[OperatorKind, str]


@dataclass(frozen=True)
class StancuPair:
    """Stancu shift parameters.

    Admissible pairs follow the usual Stancu convention ``0 <= alpha <= beta``
    (which includes ``alpha = beta = 0``); ``alpha > beta`` is rejected.
    """

    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        a, b = float(self.alpha), float(self.beta)
        if not (math.isfinite(a) and math.isfinite(b)) or a < 0 or b < 0:
            raise ValueError(f"Stancu parameters must be finite and nonnegative, got ({a}, {b})")
        if a > b:
            raise ValueError(f"Stancu convention requires alpha <= beta, got ({a}, {b})")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @property
    def trivial(self) -> bool:
        return self.alpha == 0.0 and self.beta == 0.0


@dataclass(frozen=True)
class EvalConfig:
    series_tol: float = 1e-14
    quadrature_order: int = 16
    term_cap: int = TERM_CAP

    def __post_init__(self):
        if not self.series_tol > 0:
            raise ValueError("series_tol must be positive")
        if self.quadrature_order < 2:
            raise ValueError("quadrature_order must be at least 2")
        if self.term_cap < 1:
            raise ValueError("term_cap must be positive")


@dataclass(frozen=True)
class Diagnostics:
    """Side-channel information about one operator evaluation."""

    y: float
    terms_used: int
    tail_bound: float
    degraded: bool = False


DEFAULT_CONFIG = EvalConfig()
NO_SHIFT = StancuPair()


def r_n(x: float, n: int) -> float:
    """The shift x - 1/(2n) used by the modified operators (x >= 1/2)."""
    _check_n(n)
    if not x >= 0.5:
        raise DomainError(f"r_n(x) is defined for x >= 1/2, got x={x}")
    return x - 1.0 / (2 * n)


def cell_bounds(k: int, mu: MuLike, n: int) -> Tuple[float, float]:
    """Integration cell [(k + 2 mu theta_k)/n, (k + 1 + 2 mu theta_k)/n]."""
    _check_n(n)
    a = k + 2.0 * as_mu(mu) * (k & 1)
    return a / n, (a + 1.0) / n


def weight(k: int, y: float, mu: MuLike = 0.0) -> float:
    """Single Dunkl-Poisson weight y**k / (gamma_mu(k) e_mu(y))."""
    if k < 0 or int(k) != k:
        raise ValueError("k must be a nonnegative integer")
    if y == 0:
        return 1.0 if k == 0 else 0.0
    table = dunkl_weights(y, mu)
    return math.exp(k * math.log(y) - log_gamma_mu(int(k), mu) - table.log_norm)


def _check_n(n: int) -> None:
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")


def _check_domain(kind: OperatorKind, x: float, mu: float) -> None:
    if not math.isfinite(x) or x < kind.x_min:
        raise DomainError(f"operator {kind.value} is defined for x >= {kind.x_min}, got x={x}")
    if kind is OperatorKind.SZASZ_CLASSICAL and mu != 0.0:
        raise DomainError("the classical Szasz operator requires mu = 0")


def _argument(kind: OperatorKind, n: int, x: float) -> float:
    return n * r_n(x, n) if kind.is_modified else n * x


@lru_cache(maxsize=32)
def gauss_legendre(order: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes on [-1, 1] and weights normalized to sum to 1 (mean rule)."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return nodes, weights / 2.0


def _cells(kind: OperatorKind, table: WeightTable, n: int, mu: float, params: StancuPair):
    """Sample intervals in the argument of f: (lower, upper); equal for point kinds."""
    a = table.k + 2.0 * mu * (table.k & 1)
    if not kind.is_integral:
        pts = a / n
        return pts, pts
    if kind.uses_stancu:
        scale = n + params.beta
        lo = (a + params.alpha) / scale
        return lo, lo + 1.0 / scale
    return a / n, (a + 1.0) / n


def _graded_mean(f: TestFunction, b: float, length: float, sign: float, order: int) -> float:
    """Mean of f over the interval of ``length`` starting at ``b`` towards ``sign``.

    Uses u = b + sign * length * s**2, which clusters nodes at the breakpoint
    and turns |u - b|**(1/2) singularities into polynomials in s.
    """
    nodes, w = gauss_legendre(order)
    s = 0.5 * (nodes + 1.0)
    return float(f.evaluator(b + sign * length * s * s) @ (2.0 * s * w))


def _cell_means(f: TestFunction, lo: np.ndarray, hi: np.ndarray, order: int) -> np.ndarray:
    nodes, w = gauss_legendre(order)
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    means = f.evaluator(mid[:, None] + half[:, None] * nodes[None, :]) @ w
    for b in f.breakpoints:
        touching = np.nonzero((lo <= b) & (b <= hi) & (hi > lo))[0]
        for i in touching:
            left, right = b - lo[i], hi[i] - b
            total = 0.0
            if left > 0:
                total += left * _graded_mean(f, b, left, -1.0, order)
            if right > 0:
                total += right * _graded_mean(f, b, right, 1.0, order)
            means[i] = total / (hi[i] - lo[i])
    return means


def _monomial_means(j: int, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Exact mean of u**j over [lo, hi], expanded around the midpoint."""
    c = 0.5 * (lo + hi)
    h = 0.5 * (hi - lo)
    out = np.zeros_like(c)
    for i in range(0, j + 1, 2):
        out = out + math.comb(j, i) * c ** (j - i) * h ** i / (i + 1)
    return out


def _prepare(kind, n, x, params, mu, cfg):
    kind = OperatorKind.parse(kind)
    _check_n(n)
    mu = as_mu(mu)
    x = float(x)
    params = NO_SHIFT if params is None else params
    cfg = DEFAULT_CONFIG if cfg is None else cfg
    _check_domain(kind, x, mu)
    if not kind.uses_stancu:
        params = NO_SHIFT
    return kind, mu, x, params, cfg


def _evaluate(kind, n, mu, params, cfg, y, sampler):
    """Sum w_k * sample_k, tightening the weight tolerance until the
    estimated tail w_{K+1} * |sample| is below cfg.series_tol."""
    tol = cfg.series_tol
    for _ in range(6):
        table = dunkl_weights(y, mu, tol, cfg.term_cap)
        lo, hi = _cells(kind, table, n, mu, params)
        samples = sampler(lo, hi)
        value = math.fsum(table.weights * samples)
        # samples grow at most polynomially, so the last one bounds the next cell
        reach = max(1.0, abs(samples[-1]), abs(samples[-2]) if len(samples) > 1 else 1.0)
        tail = table.tail_bound * reach * 2.0
        if tail <= cfg.series_tol * max(1.0, abs(value)) or tol < 1e-300:
            break
        tol = tol * cfg.series_tol * max(1.0, abs(value)) / tail / 10.0
    return value, Diagnostics(y, table.terms_used, tail)


def apply_operator(kind: KindLike, f, n: int, x: float,
                   params: Optional[StancuPair] = None, mu: MuLike = 0.0,
                   cfg: Optional[EvalConfig] = None, *, full_output: bool = False):
    """Evaluate one of the five operators on ``f`` at ``x``.

    Integral kinds average ``f`` over each cell with a fixed-order
    Gauss-Legendre rule (split at ``f.breakpoints``); point kinds sample
    ``f`` at the lattice points. ``params`` only affects T* and K*.

    Returns the value, or ``(value, Diagnostics)`` with ``full_output=True``.
    """
    kind, mu, x, params, cfg = _prepare(kind, n, x, params, mu, cfg)
    f = as_test_function(f)
    y = _argument(kind, n, x)
    if kind.is_integral:
        def sampler(lo, hi):
            return _cell_means(f, lo, hi, cfg.quadrature_order)
    else:
        def sampler(lo, hi):
            return np.asarray(f.evaluator(lo), dtype=float)
    value, diag = _evaluate(kind, n, mu, params, cfg, y, sampler)
    return (value, diag) if full_output else value


def apply_to_monomial(kind: KindLike, j: int, n: int, x: float,
                      params: Optional[StancuPair] = None, mu: MuLike = 0.0,
                      cfg: Optional[EvalConfig] = None, *, full_output: bool = False):
    """Operator applied to ``t**j`` with exact cell integrals (no quadrature)."""
    if int(j) != j or j < 0:
        raise ValueError("monomial degree must be a nonnegative integer")
    j = int(j)
    kind, mu, x, params, cfg = _prepare(kind, n, x, params, mu, cfg)
    y = _argument(kind, n, x)
    if kind.is_integral:
        def sampler(lo, hi):
            return _monomial_means(j, lo, hi)
    else:
        def sampler(lo, hi):
            return lo ** j
    value, diag = _evaluate(kind, n, mu, params, cfg, y, sampler)
    return (value, diag) if full_output else value
