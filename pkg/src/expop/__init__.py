"""Exponential-type operators whose kernel is tied to ``a**2 + x**2``.

``T_{lam,a}`` averages ``f`` against a kernel built from ``|Gamma|**2`` on a
vertical line.  The package evaluates it by log-domain quadrature and
computes its moments exactly; :mod:`expop.analysis` checks the large-lambda
behaviour.
"""

__version__ = "0.1.0"

from .errors import (
    DerivativeOrderUnsupported,
    DomainError,
    ExpopError,
    GrowthTooFast,
    NotConverged,
    WindowNotFound,
)
from .kernel import OperatorParams, ismail_may, log_kernel
from .functions import GrowthBoundedFunction, builtin
from .quadrature import QuadConfig
from .operators import (
    apply_post_widder,
    apply_T,
    apply_T_derivative,
    derivative_kernel,
    mgf_closed_form,
)
from .moments import central_moment_symbolic, central_moments_jet, raw_moments_jet
from .analysis import ExperimentSpec, run_convergence_experiment

__all__ = [
    "__version__",
    "DerivativeOrderUnsupported",
    "DomainError",
    "ExpopError",
    "GrowthTooFast",
    "NotConverged",
    "WindowNotFound",
    "OperatorParams",
    "ismail_may",
    "log_kernel",
    "GrowthBoundedFunction",
    "builtin",
    "QuadConfig",
    "apply_T",
    "apply_T_derivative",
    "apply_post_widder",
    "derivative_kernel",
    "mgf_closed_form",
    "raw_moments_jet",
    "central_moments_jet",
    "central_moment_symbolic",
    "ExperimentSpec",
    "run_convergence_experiment",
]
