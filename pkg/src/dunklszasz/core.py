"""Dunkl coefficient sequence and the generalized exponential.

The generalized exponential is

    e_mu(x) = sum_k x**k / gamma_mu(k),

where gamma_mu(0) = 1 and gamma_mu(k+1) = (k + 1 + 2*mu*theta(k+1)) * gamma_mu(k),
theta being the parity indicator. For mu = 0 the sequence is k! and e_mu is exp.

Three evaluation paths are provided:

* :func:`dunkl_exp` sums the series directly with a rigorous geometric tail
  bound. Negative arguments use compensated summation and fall back to
  double-double arithmetic when cancellation is severe.
* :func:`dunkl_weights` produces the normalized weights
  y**k / (gamma_mu(k) * e_mu(y)) in the log domain, so arguments far beyond
  the overflow threshold of ``exp`` are fine.
* :func:`dunkl_ratio` returns e_mu(-y) / e_mu(y), using whichever of the two
  paths above is appropriate.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple, Union

import numpy as np

from . import _ddouble as dd
from .exceptions import ConvergenceError, DomainError, DunklRangeError

TERM_CAP = 10_000
# e_mu(x) <= exp(x) for mu >= 0, so this keeps every partial sum finite.
EXP_GUARD = 700.0
DD_TRIGGER = 1e-3
DEGRADED_THRESHOLD = 1e-22


@dataclass(frozen=True)
class DunklOrder:
    """The Dunkl parameter ``mu >= 0``."""

    mu: float = 0.0

    def __post_init__(self):
        mu = float(self.mu)
        if not mu >= 0.0 or not math.isfinite(mu):
            raise ValueError(f"Dunkl order must be a finite nonnegative real, got {self.mu!r}")
        object.__setattr__(self, "mu", mu)

    def __float__(self) -> float:
        return self.mu


MuLike = Union[float, DunklOrder]


def as_mu(mu: MuLike) -> float:
    """Validate ``mu`` and return it as a plain float."""
    if isinstance(mu, DunklOrder):
        return mu.mu
    return DunklOrder(mu).mu


class PrecisionFlag(enum.Enum):
    OK = "ok"
    DEGRADED = "degraded"


@dataclass(frozen=True)
class SeriesEval:
    """Outcome of a truncated series evaluation.

    ``cancellation_ratio`` is ``|value| / sum(|terms|)``; it is 1 for series
    with terms of one sign and small when an alternating sum cancels.
    """

    value: float
    terms_used: int
    tail_bound: float
    cancellation_ratio: float
    precision_flag: PrecisionFlag = PrecisionFlag.OK
    extended_precision: bool = False

    @property
    def degraded(self) -> bool:
        return self.precision_flag is PrecisionFlag.DEGRADED


def theta(k: int) -> int:
    """Parity indicator: 0 for even ``k``, 1 for odd ``k``."""
    if k < 0:
        raise ValueError("theta is defined for nonnegative integers")
    return k & 1


def _check_index(k: int) -> int:
    if int(k) != k or k < 0:
        raise ValueError(f"index must be a nonnegative integer, got {k!r}")
    return int(k)


def gamma_mu(k: int, mu: MuLike) -> float:
    """gamma_mu(k) by the two-term parity recursion.

    Raises :class:`DunklRangeError` once the running product overflows; use
    :func:`log_gamma_mu` for such indices.
    """
    k = _check_index(k)
    mu = as_mu(mu)
    value = 1.0
    for j in range(1, k + 1):
        value *= j + 2.0 * mu * (j & 1)
        if math.isinf(value):
            raise DunklRangeError(f"gamma_mu({k}) overflows at step {j}; use log_gamma_mu")
    return value


def log_gamma_mu(k: int, mu: MuLike) -> float:
    """Natural log of gamma_mu(k) from the Gamma-function closed form."""
    k = _check_index(k)
    mu = as_mu(mu)
    m, odd = divmod(k, 2)
    shift = 1.5 if odd else 0.5
    return (k * math.log(2.0) + math.lgamma(m + 1)
            + math.lgamma(m + mu + shift) - math.lgamma(mu + 0.5))


def gamma_mu_closed(k: int, mu: MuLike) -> float:
    """gamma_mu(k) from the closed forms

        gamma_mu(2m)   = 2**(2m)   m! Gamma(m + mu + 1/2) / Gamma(mu + 1/2)
        gamma_mu(2m+1) = 2**(2m+1) m! Gamma(m + mu + 3/2) / Gamma(mu + 1/2)
    """
    log_value = log_gamma_mu(k, mu)
    if log_value > 709.78:
        raise DunklRangeError(f"gamma_mu({k}) exceeds the double range; use log_gamma_mu")
    return math.exp(log_value)


def _neumaier(terms):
    total = 0.0
    comp = 0.0
    for t in terms:
        s = total + t
        if abs(total) >= abs(t):
            comp += (total - s) + t
        else:
            comp += (t - s) + total
        total = s
    return total + comp


def _series_terms(x: float, mu: float, tol: float, term_cap: int, scale: float = 1.0):
    """Terms t_0..t_K of the series plus the first omitted term t_{K+1}.

    Truncation happens at the first K with |x|/(K+2) <= 1/2 and
    |t_{K+1}| <= tol*max(scale, |partial|)/2. Every later ratio
    |t_{j+1}/t_j| = |x|/(j+1+2*mu*theta) is then at most 1/2, so the omitted
    tail is dominated by 2*|t_{K+1}|.
    """
    terms = [1.0]
    partial = 1.0
    t = 1.0
    ax = abs(x)
    k = 0
    while True:
        t_next = t * x / (k + 1 + 2.0 * mu * ((k + 1) & 1))
        if ax / (k + 2) <= 0.5 and abs(t_next) <= tol * max(scale, abs(partial)) / 2:
            return terms, t_next
        k += 1
        if k >= term_cap:
            raise ConvergenceError(f"Dunkl series did not converge within {term_cap} terms (x={x})")
        terms.append(t_next)
        partial += t_next
        t = t_next


def _series_dd(x: float, mu: float, n_terms: int) -> float:
    acc = (1.0, 0.0)
    t = (1.0, 0.0)
    two_mu = 2.0 * mu
    for k in range(1, n_terms):
        denom = dd.two_sum(float(k), two_mu * (k & 1))
        t = dd.dd_div(dd.dd_mul_d(t, x), denom)
        acc = dd.dd_add(acc, t)
    return dd.to_float(acc)


def _alternating_sum(x: float, mu: float, terms, dd_trigger: float):
    value = _neumaier(terms)
    abs_sum = math.fsum(abs(t) for t in terms)
    if abs(value) < dd_trigger * abs_sum:
        return _series_dd(x, mu, len(terms)), True
    return value, False


def dunkl_exp(x: float, mu: MuLike = 0.0, tol: float = 1e-15, *,
              term_cap: int = TERM_CAP,
              dd_trigger: float = DD_TRIGGER,
              degraded_threshold: float = DEGRADED_THRESHOLD) -> SeriesEval:
    """Evaluate the generalized exponential e_mu(x) by direct summation.

    Parameters
    ----------
    x : float
        Argument, ``|x| <= EXP_GUARD``.
    mu : float or DunklOrder
        Dunkl order.
    tol : float
        Relative tail tolerance; the returned ``tail_bound`` satisfies
        ``tail_bound <= tol * max(1, |value|)``.
    dd_trigger : float
        For negative ``x``, a cancellation ratio below this value causes the
        sum to be recomputed in double-double arithmetic.
    degraded_threshold : float
        Cancellation ratios below this value are flagged
        :attr:`PrecisionFlag.DEGRADED` even after the double-double pass.

    Returns
    -------
    SeriesEval
    """
    mu = as_mu(mu)
    x = float(x)
    if not tol > 0:
        raise ValueError("tol must be positive")
    if not abs(x) <= EXP_GUARD:
        raise DunklRangeError(f"|x| = {abs(x)} exceeds the overflow guard {EXP_GUARD}; "
                              "use dunkl_weights for log-domain work")
    terms, t_next = _series_terms(x, mu, tol, term_cap)
    tail = 2.0 * abs(t_next)
    if x >= 0:
        value = _neumaier(terms)
        return SeriesEval(value, len(terms), tail, 1.0)

    value, extended = _alternating_sum(x, mu, terms, dd_trigger)
    if abs(value) < 1.0:
        # the tail must be small relative to the (small) value, not to 1
        terms, t_next = _series_terms(x, mu, tol, term_cap, scale=abs(value))
        tail = 2.0 * abs(t_next)
        value, extended = _alternating_sum(x, mu, terms, dd_trigger)
    abs_sum = math.fsum(abs(t) for t in terms)
    ratio = min(abs(value) / abs_sum, 1.0)
    flag = PrecisionFlag.DEGRADED if ratio < degraded_threshold else PrecisionFlag.OK
    return SeriesEval(value, len(terms), tail, ratio, flag, extended)


@dataclass(frozen=True)
class WeightTable:
    """Normalized Dunkl-Poisson weights w_k = y**k / (gamma_mu(k) e_mu(y)).

    ``log_norm`` is log e_mu(y) and ``tail_bound`` bounds the total weight of
    the omitted indices k > k[-1].
    """

    y: float
    mu: float
    k: np.ndarray
    weights: np.ndarray
    log_norm: float
    tail_bound: float

    @property
    def terms_used(self) -> int:
        return len(self.k)


def _log_terms(y: float, mu: float, kmax: int, anchor: int) -> np.ndarray:
    """log(t_k / t_anchor) for k = 0..kmax, accumulated outward from the anchor."""
    j = np.arange(1, kmax + 1, dtype=float)
    steps = np.log(y / (j + 2.0 * mu * (np.arange(1, kmax + 1) & 1)))
    out = np.zeros(kmax + 1)
    if anchor < kmax:
        out[anchor + 1:] = np.cumsum(steps[anchor:])
    if anchor > 0:
        out[:anchor] = -np.cumsum(steps[anchor - 1::-1])[::-1]
    return out


@lru_cache(maxsize=4096)
def _weights_cached(y: float, mu: float, tol: float, term_cap: int) -> WeightTable:
    if y == 0.0:
        k, w = np.zeros(1, dtype=int), np.ones(1)
        k.flags.writeable = w.flags.writeable = False
        return WeightTable(0.0, mu, k, w, 0.0, 0.0)
    anchor = int(math.floor(y))
    kmax = int(max(2.0 * y, y + 12.0 * math.sqrt(y) + 40.0)) + 2
    while True:
        if kmax >= term_cap:
            kmax = term_cap
        lt = _log_terms(y, mu, kmax, min(anchor, kmax))
        shift = lt.max()
        scaled = np.exp(lt - shift)
        cum = np.cumsum(scaled)
        # first K with K + 2 >= 2y and t_{K+1} <= tol * partial / 2
        start = max(int(math.ceil(2.0 * y)) - 2, 0)
        idx = np.arange(start, kmax)
        ok = scaled[idx + 1] <= tol * cum[idx] / 2
        if ok.any():
            big_k = int(idx[np.argmax(ok)])
            break
        if kmax >= term_cap:
            raise ConvergenceError(f"Dunkl weights did not converge within {term_cap} terms (y={y})")
        kmax *= 2
    kept = scaled[:big_k + 1]
    total = math.fsum(kept)
    weights = kept / total
    anchor_c = min(anchor, kmax)
    log_anchor = anchor_c * math.log(y) - log_gamma_mu(anchor_c, mu)
    log_norm = log_anchor + shift + math.log(total)
    tail = 2.0 * scaled[big_k + 1] / total
    weights.setflags(write=False)
    k = np.arange(big_k + 1)
    k.setflags(write=False)
    return WeightTable(y, mu, k, weights, log_norm, tail)


def dunkl_weights(y: float, mu: MuLike = 0.0, tol: float = 1e-15,
                  term_cap: int = TERM_CAP) -> WeightTable:
    """Normalized weights of the Dunkl-Poisson distribution with parameter ``y``.

    Works in the log domain, so ``y`` is only limited by ``term_cap``
    (roughly ``y < term_cap / 2``). Arrays in the result are read-only and
    may be shared between calls.
    """
    y = float(y)
    if not y >= 0 or not math.isfinite(y):
        raise DomainError(f"weights need a finite y >= 0, got {y!r}")
    if not tol > 0:
        raise ValueError("tol must be positive")
    return _weights_cached(y, as_mu(mu), float(tol), int(term_cap))


@lru_cache(maxsize=8192)
def _ratio_cached(y: float, mu: float, tol: float, dd_trigger: float,
                  degraded_threshold: float) -> SeriesEval:
    if y == 0.0:
        return SeriesEval(1.0, 1, 0.0, 1.0)
    if mu == 0.0:
        # closed form, no summation involved
        return SeriesEval(math.exp(-2.0 * y), 1, 0.0, 1.0)
    if y <= EXP_GUARD:
        num = dunkl_exp(-y, mu, tol, dd_trigger=dd_trigger,
                        degraded_threshold=degraded_threshold)
        den = dunkl_exp(y, mu, tol)
        return SeriesEval(num.value / den.value, max(num.terms_used, den.terms_used),
                          num.tail_bound / den.value + den.tail_bound,
                          num.cancellation_ratio, num.precision_flag, num.extended_precision)
    table = dunkl_weights(y, mu, tol)
    signed = np.where(table.k & 1, -table.weights, table.weights)
    value = math.fsum(signed)
    ratio = min(abs(value), 1.0)
    # no extended-precision fallback on this path
    flag = PrecisionFlag.DEGRADED if ratio < dd_trigger else PrecisionFlag.OK
    return SeriesEval(value, table.terms_used, table.tail_bound, ratio, flag)


def dunkl_ratio(y: float, mu: MuLike = 0.0, tol: float = 1e-15, *,
                full_output: bool = False,
                dd_trigger: float = DD_TRIGGER,
                degraded_threshold: float = DEGRADED_THRESHOLD
                ) -> Union[float, Tuple[float, SeriesEval]]:
    """Return e_mu(-y) / e_mu(y) for ``y >= 0``.

    The value satisfies ``|ratio| <= 1`` and equals ``exp(-2y)`` for mu = 0.
    With ``full_output=True`` a ``(value, SeriesEval)`` pair is returned; the
    evaluation's flag reports cancellation in the numerator.
    """
    y = float(y)
    if not y >= 0 or not math.isfinite(y):
        raise DomainError(f"dunkl_ratio needs a finite y >= 0, got {y!r}")
    res = _ratio_cached(y, as_mu(mu), float(tol), float(dd_trigger), float(degraded_threshold))
    if full_output:
        return res.value, res
    return res.value
