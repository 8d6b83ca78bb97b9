"""Best Gaussian-martingale approximation of fractional Brownian motion."""

__version__ = "0.1.0"

from .analytic import (  # noqa: E402
    PRODUCT_KERNEL,
    discretize_kernel,
    minimizer_set_check,
    product_kernel_eval,
)
from .discrete import DiscreteModel, build_model, functional_f, h_profile, simulate_mc  # noqa: E402
from .errors import (  # noqa: E402
    DegenerateWeightsError,
    DomainError,
    FactorizationError,
    FbmError,
    InvariantError,
    NonConvergenceError,
    QuadratureError,
    UnconvergedInputError,
)
from .kernel import (  # noqa: E402
    KernelParams,
    c_alpha,
    covariance_fbm,
    eval_K,
    increment_variance_residual,
)
from .solver import SolveResult, brute_force_min, dual_value, primal_from_weights, solve  # noqa: E402
from .structure import StructureReport, analyze, discrete_lower_bound  # noqa: E402
