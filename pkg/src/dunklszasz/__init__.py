"""Dunkl generalizations of Szasz-Mirakjan-Kantorovich(-Stancu) operators.

Evaluation of the operators, their closed-form moments checked against a
direct-summation oracle, and computable error-bound certificates.
"""

__version__ = "0.1.0"

from .core import (DunklOrder, PrecisionFlag, SeriesEval, dunkl_exp, dunkl_ratio,
                   dunkl_weights, gamma_mu, gamma_mu_closed, log_gamma_mu, theta)
from .exceptions import (ConvergenceError, DomainError, DunklError, DunklRangeError,
                         RefusalError)
from .functions import REGISTRY, TestFunction, get_function
from .operators import (EvalConfig, OperatorKind, StancuPair, apply_operator,
                        apply_to_monomial, cell_bounds, r_n, weight)
from .moments import (MomentReport, central_moments_Kstar, central_moments_T,
                      compare_central2, moment_report, moments_K, moments_Kstar, moments_T,
                      oracle_moment, radius_delta, radius_delta_star, radius_lambda)
from .bounds import (BoundCertificate, GridSpec, Theorem, certify_cb2, certify_lipschitz,
                     certify_modulus, korovkin_weighted_gap, modulus_omega, modulus_omega2,
                     peetre_proxy_bound, weighted_norm)
