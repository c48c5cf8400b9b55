"""Named test functions with the metadata the operators and bounds need."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Tuple

import numpy as np

ArrayFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class TestFunction:
    """A function on [0, inf) together with what is known about it.

    Attributes
    ----------
    name : str
        Stable identifier (also the CLI name for registry members).
    evaluator : callable
        Vectorized map from an array of ``t >= 0`` to values.
    growth_zeta, growth_const : float, optional
        ``|f(t)| <= growth_const * (1 + t)**growth_zeta``.
    bounded : bool
        Whether ``sup |f| = sup_bound < inf`` on [0, inf).
    lipschitz : (M, nu), optional
        Hoelder data, ``|f(s) - f(t)| <= M |s - t|**nu``.
    derivatives : (g', g''), optional
        Evaluators of the first two derivatives.
    derivative_sups : (sup|g'|, sup|g''|), optional
    breakpoints : tuple of float
        Points where ``f`` is not smooth; quadrature splits cells there.
    polynomial_degree : int, optional
        Set when ``f`` is a polynomial.
    """

    __test__ = False  # keep pytest from collecting this class

    name: str
    evaluator: ArrayFn
    growth_zeta: Optional[float] = None
    growth_const: Optional[float] = None
    bounded: bool = False
    sup_bound: Optional[float] = None
    lipschitz: Optional[Tuple[float, float]] = None
    derivatives: Optional[Tuple[ArrayFn, ArrayFn]] = None
    derivative_sups: Optional[Tuple[float, float]] = None
    breakpoints: Tuple[float, ...] = field(default_factory=tuple)
    polynomial_degree: Optional[int] = None

    def __post_init__(self):
        if self.bounded and self.sup_bound is None:
            raise ValueError(f"{self.name}: bounded functions need sup_bound")
        if self.lipschitz is not None:
            m, nu = self.lipschitz
            if not (m > 0 and 0 < nu <= 1):
                raise ValueError(f"{self.name}: Lipschitz data needs M > 0 and 0 < nu <= 1")

    def __call__(self, t):
        return self.evaluator(np.asarray(t, dtype=float))

    @property
    def uniformly_continuous(self) -> bool:
        """True when a finite modulus of continuity is guaranteed."""
        return self.bounded or self.lipschitz is not None

    @property
    def cb2_norm(self) -> Optional[float]:
        """``||g|| + ||g'|| + ||g''||`` when all three sups are recorded."""
        if not self.bounded or self.derivative_sups is None:
            return None
        return self.sup_bound + self.derivative_sups[0] + self.derivative_sups[1]


def _const_one(t):
    return np.ones_like(t)


def _zeros(t):
    return np.zeros_like(t)


def _identity(t):
    return t.copy()


def _runge(t):
    return 1.0 / (1.0 + t * t)


def _runge_d1(t):
    return -2.0 * t / (1.0 + t * t) ** 2


def _runge_d2(t):
    return (6.0 * t * t - 2.0) / (1.0 + t * t) ** 3


def _neg_exp(t):
    return -np.exp(-t)


def _sat(t):
    return t / (1.0 + t)


def _sat_d1(t):
    return 1.0 / (1.0 + t) ** 2


def _sat_d2(t):
    return -2.0 / (1.0 + t) ** 3


def _abs_sqrt_shift(t):
    return np.sqrt(np.abs(t - 1.0))


def _square(t):
    return t * t


def _cube(t):
    return t * t * t


def _neg_sin(t):
    return -np.sin(t)


# sup over t >= 0 of |2t / (1+t^2)^2|, attained at t = 1/sqrt(3)
_RUNGE_D1_SUP = 3.0 * math.sqrt(3.0) / 8.0

REGISTRY: Dict[str, TestFunction] = {
    f.name: f for f in (
        TestFunction("one", _const_one, growth_zeta=0.0, growth_const=1.0,
                     bounded=True, sup_bound=1.0, lipschitz=(1.0, 1.0),
                     derivatives=(_zeros, _zeros), derivative_sups=(0.0, 0.0),
                     polynomial_degree=0),
        TestFunction("t", _identity, growth_zeta=1.0, growth_const=1.0,
                     lipschitz=(1.0, 1.0), polynomial_degree=1),
        TestFunction("t2", _square, growth_zeta=2.0, growth_const=1.0, polynomial_degree=2),
        TestFunction("t3", _cube, growth_zeta=3.0, growth_const=1.0, polynomial_degree=3),
        TestFunction("exp_neg", lambda t: np.exp(-t), growth_zeta=0.0, growth_const=1.0,
                     bounded=True, sup_bound=1.0, lipschitz=(1.0, 1.0),
                     derivatives=(_neg_exp, lambda t: np.exp(-t)), derivative_sups=(1.0, 1.0)),
        TestFunction("sin", np.sin, growth_zeta=0.0, growth_const=1.0,
                     bounded=True, sup_bound=1.0, lipschitz=(1.0, 1.0),
                     derivatives=(np.cos, _neg_sin), derivative_sups=(1.0, 1.0)),
        TestFunction("runge", _runge, growth_zeta=0.0, growth_const=1.0,
                     bounded=True, sup_bound=1.0, lipschitz=(_RUNGE_D1_SUP, 1.0),
                     derivatives=(_runge_d1, _runge_d2), derivative_sups=(_RUNGE_D1_SUP, 2.0)),
        TestFunction("abs_sqrt_shift", _abs_sqrt_shift, growth_zeta=0.5, growth_const=1.0,
                     lipschitz=(1.0, 0.5), breakpoints=(1.0,)),
        TestFunction("t_over_one_plus_t", _sat, growth_zeta=0.0, growth_const=1.0,
                     bounded=True, sup_bound=1.0, lipschitz=(1.0, 1.0),
                     derivatives=(_sat_d1, _sat_d2), derivative_sups=(1.0, 2.0)),
    )
}


def get_function(name: str) -> TestFunction:
    try:
        return REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown test function {name!r}; known: {', '.join(REGISTRY)}") from None


def bounded_functions():
    return [f for f in REGISTRY.values() if f.bounded]


def lipschitz_functions():
    return [f for f in REGISTRY.values() if f.lipschitz is not None]


def as_test_function(f) -> TestFunction:
    """Accept a registry name, a :class:`TestFunction`, or a bare callable."""
    if isinstance(f, TestFunction):
        return f
    if isinstance(f, str):
        return get_function(f)
    if callable(f):
        return TestFunction(getattr(f, "__name__", "anonymous"), f)
    raise TypeError(f"cannot interpret {f!r} as a test function")


def combine(a: float, f: TestFunction, b: float, g: TestFunction) -> TestFunction:
    """The function ``a*f + b*g``; metadata is dropped except breakpoints."""
    return TestFunction(f"{a}*{f.name}+{b}*{g.name}",
                        lambda t: a * f.evaluator(t) + b * g.evaluator(t),
                        breakpoints=tuple(sorted(set(f.breakpoints) | set(g.breakpoints))))
