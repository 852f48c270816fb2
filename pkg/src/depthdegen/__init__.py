"""Depth degeneracy of finite-width ReLU networks at initialization.

Predicts how the angle between two inputs shrinks layer by layer, and checks
the predictions against Monte Carlo simulation of random networks.
"""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    DomainError,
    finite_step_full,
    finite_step_simple,
    infinite_step,
    mu,
    rho,
    sigma_sq,
    theta_to_x,
    x_to_theta,
)
from .propagation import (  # noqa: E402
    Architecture,
    GaussianChainConfig,
    PropagationTrace,
    predict_finite,
    predict_infinite,
    predicted_density,
    sample_gaussian_chain,
)
from .montecarlo import (  # noqa: E402
    LayerDistribution,
    McConfig,
    NetworkInstance,
    forward_pair,
    make_input_pair,
    run_monte_carlo,
    sample_network,
)
from .jfunctions import j11_closed, j_numeric  # noqa: E402
from .catalog import builtin_catalog, degeneracy_report, parse_spec  # noqa: E402
