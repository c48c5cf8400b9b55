"""Moduli of continuity, weighted norms and error-bound certificates.

Suprema over a continuum are replaced by maxima over a uniform grid. The
first-order modulus is exact for pairs whose separation is a multiple of the
spacing or exactly ``delta``; for any other pair the discrepancy is at most
three times the largest jump between neighbouring grid values, reported as
:func:`grid_slack` and added to certificate tolerances.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, List, NamedTuple, Optional, Union

import numpy as np

from .core import MuLike, as_mu
from .exceptions import DomainError, RefusalError
from .functions import TestFunction, as_test_function
from .moments import central_moments_Kstar, radius_delta, radius_delta_star, ratio_K
from .operators import EvalConfig, OperatorKind, StancuPair, apply_operator, apply_to_monomial

DEFAULT_POINTS = 2001


@dataclass(frozen=True)
class GridSpec:
    lo: float
    hi: float
    points: int = DEFAULT_POINTS

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"grid needs lo < hi, got [{self.lo}, {self.hi}]")
        if self.points < 2:
            raise ValueError("grid needs at least two points")

    @property
    def spacing(self) -> float:
        return (self.hi - self.lo) / (self.points - 1)

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.points)

    def extended(self, extra_steps: int) -> np.ndarray:
        """Grid continued ``extra_steps`` spacings beyond ``hi``."""
        return self.lo + self.spacing * np.arange(self.points + extra_steps)


def working_grid(x_max: float, n_min: int, points: int = DEFAULT_POINTS) -> GridSpec:
    """[0, x_max + 10/sqrt(n_min)]: beyond it the operator mass is negligible."""
    return GridSpec(0.0, x_max + 10.0 / math.sqrt(n_min), points)


def _require_modulus(f: TestFunction) -> None:
    if not f.uniformly_continuous:
        raise RefusalError(f"{f.name} is neither bounded nor Hoelder continuous; "
                           "its modulus of continuity on [0, inf) is infinite")


def _require_modulus2(f: TestFunction) -> None:
    # second differences of quadratics are constant
    if f.uniformly_continuous or (f.polynomial_degree is not None and f.polynomial_degree <= 2):
        return
    raise RefusalError(f"no finite second-order modulus is known for {f.name}")


def _require_bounded(f: TestFunction) -> None:
    if not f.bounded:
        raise RefusalError(f"{f.name} is not bounded; the estimate holds for bounded functions only")


@lru_cache(maxsize=256)
def _omega_table(f: TestFunction, grid: GridSpec) -> np.ndarray:
    """table[j] = max over i <= j' <= j of max_x |f(x + j' s) - f(x)|."""
    J = grid.points - 1
    v = f(grid.extended(J))
    p = grid.points
    table = np.zeros(J + 1)
    for j in range(1, J + 1):
        table[j] = np.max(np.abs(v[j:j + p] - v[:p]))
    return np.maximum.accumulate(table)


@lru_cache(maxsize=256)
def _omega2_table(f: TestFunction, grid: GridSpec) -> np.ndarray:
    J = grid.points - 1
    v = f(grid.extended(2 * J))
    p = grid.points
    table = np.zeros(J + 1)
    for j in range(1, J + 1):
        table[j] = np.max(np.abs(v[2 * j:2 * j + p] - 2.0 * v[j:j + p] + v[:p]))
    return np.maximum.accumulate(table)


def grid_slack(f, grid: GridSpec) -> float:
    """Upper estimate of (true modulus - grid modulus): 3 x largest neighbour jump."""
    f = as_test_function(f)
    v = f(grid.extended(1))
    return 3.0 * float(np.max(np.abs(np.diff(v))))


def modulus_omega(f, delta: float, grid: GridSpec) -> float:
    """Grid estimate of sup |f(t) - f(x)| over |t - x| <= delta, x in the grid.

    Pairs reach up to ``grid.hi + delta``. Separations tried are every
    multiple of the spacing up to ``delta`` and ``delta`` itself.
    """
    f = as_test_function(f)
    _require_modulus(f)
    if not delta > 0:
        raise ValueError("delta must be positive")
    s = grid.spacing
    m = int(math.floor(delta / s * (1 + 1e-12)))
    table = _omega_table(f, grid)
    J = len(table) - 1
    best = float(table[min(m, J)])
    x = grid.values()
    fx = f(x)
    for j in range(J + 1, m + 1):
        best = max(best, float(np.max(np.abs(f(x + j * s) - fx))))
    best = max(best, float(np.max(np.abs(f(x + delta) - fx))))
    return best


def modulus_omega2(f, sqrt_delta: float, grid: GridSpec) -> float:
    """Grid estimate of sup |f(x + 2h) - 2 f(x + h) + f(x)| over 0 < h < sqrt_delta.

    The supremum is approached as h tends to ``sqrt_delta``, so that step is
    included together with every multiple of the spacing below it.
    """
    f = as_test_function(f)
    _require_modulus2(f)
    if not sqrt_delta > 0:
        raise ValueError("sqrt_delta must be positive")
    s = grid.spacing
    m = int(math.ceil(sqrt_delta / s)) - 1
    table = _omega2_table(f, grid)
    J = len(table) - 1
    best = float(table[min(max(m, 0), J)])
    x = grid.values()
    fx = f(x)
    for j in range(J + 1, m + 1):
        h = j * s
        best = max(best, float(np.max(np.abs(f(x + 2 * h) - 2.0 * f(x + h) + fx))))
    h = sqrt_delta
    best = max(best, float(np.max(np.abs(f(x + 2 * h) - 2.0 * f(x + h) + fx))))
    return best


def weighted_norm(f_values: Union[np.ndarray, Callable], grid: GridSpec) -> float:
    """sup over the grid of |f(x)| / (1 + x^2)."""
    x = grid.values()
    values = f_values(x) if callable(f_values) else np.asarray(f_values, dtype=float)
    if values.shape != x.shape:
        raise ValueError(f"expected {x.shape[0]} values, got shape {values.shape}")
    if not np.all(np.isfinite(values)):
        raise ValueError("values must be finite")
    return float(np.max(np.abs(values) / (1.0 + x * x)))


class WeightedGap(NamedTuple):
    gap0: float
    gap1: float
    gap2: float
    bound1: float
    bound2: float
    bound2_safe: float


def korovkin_weighted_gap(n: int, alpha: float, beta: float, mu: MuLike, grid: GridSpec,
                          cfg: Optional[EvalConfig] = None) -> WeightedGap:
    """Weighted distances ||K*(t^j) - x^j||_rho, j = 0, 1, 2, and their analytic bounds.

    ``bound1`` is beta/(2(n+beta)) + alpha/(n+beta). ``bound2`` is the
    expression obtained by bounding the three terms of K*(t^2) - x^2
    separately with the ratio at its grid supremum:

        [beta^2 + 2 n beta + (1/2 + alpha + mu R) n + alpha^2 - (5/12 + mu R)] / (n+beta)^2.

    Its constant term enters with its sign; ``bound2_safe`` takes it in
    absolute value over the range of R on the grid, which is always valid.
    """
    if grid.lo < 0.5:
        raise DomainError("K* is only defined for x >= 1/2")
    mu = as_mu(mu)
    params = StancuPair(alpha, beta)
    x = grid.values()
    gaps = []
    for j in range(3):
        vals = np.array([apply_to_monomial(OperatorKind.MODIFIED_KANTOROVICH_STANCU_DUNKL,
                                           j, n, xi, params, mu, cfg) for xi in x])
        gaps.append(weighted_norm(vals - x ** j, grid))
    ratios = [ratio_K(n, xi, mu) for xi in x]
    r_sup, r_inf = max(ratios), min(ratios)
    s = n + beta
    bound1 = beta / (2.0 * s) + alpha / s
    bound2 = (beta * beta + 2 * n * beta + (0.5 + alpha + mu * r_sup) * n
              + alpha * alpha - (5.0 / 12.0 + mu * r_sup)) / s ** 2
    const = max(abs(alpha * alpha - 5.0 / 12.0 - mu * r) for r in (r_sup, r_inf))
    bound2_safe = ((2 * n * beta + beta * beta)
                   + 0.5 * n * (1.0 + 2 * alpha + 2 * mu * r_sup) + const) / s ** 2
    return WeightedGap(gaps[0], gaps[1], gaps[2], bound1, bound2, bound2_safe)


class Theorem(enum.Enum):
    MODULUS_K = "ModulusK"
    MODULUS_KSTAR = "ModulusKstar"
    LIPSCHITZ_PAPER = "LipschitzPaper"
    LIPSCHITZ_PROOF = "LipschitzProof"
    CB2 = "CB2"
    PEETRE_PROXY = "PeetreProxy"


CERTIFICATE_COLUMNS = (
    "theorem", "function", "n", "x", "mu", "alpha", "beta",
    "radius", "measured_error", "bound_value", "tolerance", "tightness",
    "satisfied", "asserted", "note",
)


@dataclass(frozen=True)
class BoundCertificate:
    """Measured operator error against a computable right-hand side.

    ``satisfied`` is ``measured_error <= bound_value + tolerance``.
    ``asserted`` marks estimates that must hold for the inputs given;
    the others are recorded only.
    """

    theorem: Theorem
    x: float
    measured_error: float
    bound_value: float
    satisfied: bool
    n: int
    mu: float
    alpha: float
    beta: float
    function: str
    tolerance: float = 0.0
    radius: float = math.nan
    asserted: bool = True
    note: str = ""

    @property
    def tightness(self) -> float:
        if self.bound_value > 0:
            return self.measured_error / self.bound_value
        return 0.0 if self.measured_error <= self.tolerance else math.inf

    def as_row(self) -> List:
        return [self.theorem.value, self.function, self.n, self.x, self.mu, self.alpha,
                self.beta, self.radius, self.measured_error, self.bound_value,
                self.tolerance, self.tightness, int(self.satisfied), int(self.asserted),
                self.note]


def _certificate(theorem, f, n, x, mu, params, measured, bound, tol, radius,
                 asserted=True, note=""):
    ok = bool(measured <= bound + tol) if math.isfinite(bound) else False
    return BoundCertificate(theorem, float(x), float(measured), float(bound), ok, int(n),
                            float(mu), params.alpha, params.beta, f.name, float(tol),
                            float(radius), asserted, note)


def _measured(kind, f, n, x, params, mu, cfg):
    value = apply_operator(kind, f, n, x, params, mu, cfg)
    return abs(value - float(f(np.array([x]))[0]))


def _numeric_tol(cfg: Optional[EvalConfig]) -> float:
    cfg = cfg or EvalConfig()
    return 10.0 * cfg.series_tol + 1e-12


def certify_modulus(kind, f, n: int, x: float, params: Optional[StancuPair] = None,
                    mu: MuLike = 0.0, grid: Optional[GridSpec] = None,
                    cfg: Optional[EvalConfig] = None) -> BoundCertificate:
    """Check |L_n(f; x) - f(x)| <= 2 omega(f; radius) for L = K or K*.

    The radius is delta_{n,x} for K and delta*_{n,x} for K*; for K the Stancu
    parameters are ignored.
    """
    kind = OperatorKind.parse(kind)
    f = as_test_function(f)
    _require_bounded(f)
    params = params or StancuPair()
    mu = as_mu(mu)
    if kind is OperatorKind.MODIFIED_KANTOROVICH_DUNKL:
        params = StancuPair()
        radius = radius_delta(n, x, mu)
        theorem = Theorem.MODULUS_K
    elif kind is OperatorKind.MODIFIED_KANTOROVICH_STANCU_DUNKL:
        radius = radius_delta_star(n, x, params.alpha, params.beta, mu)
        theorem = Theorem.MODULUS_KSTAR
    else:
        raise ValueError("modulus certificates exist for K and K* only")
    grid = grid or working_grid(x, n)
    measured = _measured(kind, f, n, x, params, mu, cfg)
    if not math.isfinite(radius):
        return _certificate(theorem, f, n, x, mu, params, measured, math.nan, 0.0, radius,
                            note="negative radicand")
    if radius == 0.0:
        bound, slack = 0.0, 0.0
    else:
        bound = 2.0 * modulus_omega(f, radius, grid)
        slack = 2.0 * grid_slack(f, grid)
    return _certificate(theorem, f, n, x, mu, params, measured, bound,
                        slack + _numeric_tol(cfg), radius)


class LipschitzVariant(enum.Enum):
    PAPER_EXPONENT = "paper_exponent"
    PROOF_EXPONENT = "proof_exponent"


def certify_lipschitz(f, n: int, x: float, params: Optional[StancuPair] = None,
                      mu: MuLike = 0.0,
                      variant: Union[LipschitzVariant, str] = LipschitzVariant.PROOF_EXPONENT,
                      cfg: Optional[EvalConfig] = None) -> BoundCertificate:
    """Hoelder-class estimate for K*.

    ``proof_exponent`` uses M (delta*)^nu, which follows from Hoelder's
    inequality and is asserted. ``paper_exponent`` uses M (delta*)^(nu/2) and
    is recorded only.
    """
    f = as_test_function(f)
    if f.lipschitz is None:
        raise RefusalError(f"{f.name} carries no Lipschitz data")
    variant = LipschitzVariant(variant)
    params = params or StancuPair()
    mu = as_mu(mu)
    M, nu = f.lipschitz
    radius = radius_delta_star(n, x, params.alpha, params.beta, mu)
    measured = _measured(OperatorKind.MODIFIED_KANTOROVICH_STANCU_DUNKL, f, n, x, params, mu, cfg)
    if variant is LipschitzVariant.PROOF_EXPONENT:
        bound = M * radius ** nu
        theorem, asserted = Theorem.LIPSCHITZ_PROOF, True
    else:
        bound = M * radius ** (nu / 2.0)
        theorem, asserted = Theorem.LIPSCHITZ_PAPER, False
    return _certificate(theorem, f, n, x, mu, params, measured, bound, _numeric_tol(cfg),
                        radius, asserted=asserted)


def certify_cb2(g, n: int, x: float, params: Optional[StancuPair] = None, mu: MuLike = 0.0,
                cfg: Optional[EvalConfig] = None) -> BoundCertificate:
    """Taylor estimate for g with two bounded derivatives:

        |K*(g; x) - g(x)| <= (|c1| + c2 / 2) ||g||_{C_B^2},

    with c1, c2 the first and second central moments of K*. The absolute
    value on c1 keeps the estimate sound when the first moment is negative.
    """
    g = as_test_function(g)
    norm = g.cb2_norm
    if norm is None or g.derivatives is None:
        raise RefusalError(f"{g.name} carries no C_B^2 metadata")
    params = params or StancuPair()
    mu = as_mu(mu)
    c1, c2 = central_moments_Kstar(n, x, params.alpha, params.beta, mu)
    radius = math.sqrt(c2) if c2 >= 0 else math.nan
    bound = (abs(c1) + c2 / 2.0) * norm
    measured = _measured(OperatorKind.MODIFIED_KANTOROVICH_STANCU_DUNKL, g, n, x, params, mu, cfg)
    note = "first moment taken in absolute value" if c1 < 0 else ""
    return _certificate(Theorem.CB2, g, n, x, mu, params, measured, bound, _numeric_tol(cfg),
                        radius, asserted=False, note=note)


def peetre_argument(n: int, x: float, params: StancuPair, mu: MuLike) -> float:
    """A = (|(2n/(n+beta) - 2) x + 2 alpha/(n+beta)| + delta*) / 4."""
    s = n + params.beta
    first = (2.0 * n / s - 2.0) * x + 2.0 * params.alpha / s
    return (abs(first) + radius_delta_star(n, x, params.alpha, params.beta, mu)) / 4.0


def peetre_proxy_bound(f, n: int, x: float, params: Optional[StancuPair] = None,
                       mu: MuLike = 0.0, M_const: float = 1.0,
                       grid: Optional[GridSpec] = None,
                       cfg: Optional[EvalConfig] = None) -> BoundCertificate:
    """2 M [omega_2(f; sqrt(A)) + min(1, A) ||f||] with the unknown constant M supplied.

    Recorded only: without the true absolute constant the inequality is not
    a checkable claim.
    """
    f = as_test_function(f)
    _require_bounded(f)
    if not M_const > 0:
        raise ValueError("M_const must be positive")
    params = params or StancuPair()
    mu = as_mu(mu)
    A = peetre_argument(n, x, params, mu)
    grid = grid or working_grid(x, n)
    w2 = modulus_omega2(f, math.sqrt(A), grid) if A > 0 else 0.0
    bound = 2.0 * M_const * (w2 + min(1.0, A) * f.sup_bound)
    measured = _measured(OperatorKind.MODIFIED_KANTOROVICH_STANCU_DUNKL, f, n, x, params, mu, cfg)
    s = n + params.beta
    note = "first moment taken in absolute value" if (2.0 * n / s - 2.0) * x + 2.0 * params.alpha / s < 0 else ""
    return _certificate(Theorem.PEETRE_PROXY, f, n, x, mu, params, measured, bound,
                        _numeric_tol(cfg), math.sqrt(A), asserted=False, note=note)
