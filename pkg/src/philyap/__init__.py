"""Lyapunov operator phi-functions ``phi_l(L_A)[Q]``, ``L_A[X] = A X + X A^T``,
by modified scaling and squaring, and exponential integrators for
differential Lyapunov and Riccati equations built on them."""

__version__ = "0.1.0"

from .densecore import (MatmulCounter, NormEstimate, NumericalError, estimate_power_norm,
                        one_norm, relative_error)
from .gallery import (CASE_NAMES, GalleryCase, fdm_advection_diffusion, gallery_case,
                      laplacian_1d, load_vector_indicator, random_symmetric, structured_suite)
from .integrators import (SCHEMES, DREProblem, IntegrationResult, MDEProblem, exp_euler_step,
                          exprb2_step, exprb3_step, integrate)
from .kernel import PhiResult, exp_apply, exp_taylor_ps, phi_lyap, phi_multi, phi_scaled
from .lyapop import LyapunovOperator, apply, phi_stack_down, taylor_apply
from .matio import MatrixFormatError, read_matrix, write_matrix
from .params import (DEGREES, PhiParams, alpha_p, derive_theta, kernel_cost, ps_cost,
                     select_params, theta_table)

__all__ = [
    "__version__",
    "MatmulCounter", "NormEstimate", "NumericalError", "estimate_power_norm", "one_norm",
    "relative_error",
    "CASE_NAMES", "GalleryCase", "fdm_advection_diffusion", "gallery_case", "laplacian_1d",
    "load_vector_indicator", "random_symmetric", "structured_suite",
    "SCHEMES", "DREProblem", "IntegrationResult", "MDEProblem", "exp_euler_step",
    "exprb2_step", "exprb3_step", "integrate",
    "PhiResult", "exp_apply", "exp_taylor_ps", "phi_lyap", "phi_multi", "phi_scaled",
    "LyapunovOperator", "apply", "phi_stack_down", "taylor_apply",
    "MatrixFormatError", "read_matrix", "write_matrix",
    "DEGREES", "PhiParams", "alpha_p", "derive_theta", "kernel_cost", "ps_cost",
    "select_params", "theta_table",
]
