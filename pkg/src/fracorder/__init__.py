"""fracorder: subdiffusion forward solves and fractional-order recovery.

The package solves the time-fractional diffusion problem
d_t^rho u + A u = 0, u weighted-initialized by phi, via spectral
expansion, and recovers rho from a single scalar observation
W(t0, rho) = d0 using the strict monotonicity of W in rho at large
observation times.
"""

from .errors import (BadOrder, BadPayload, DomainError, FracorderError,
                     GridMismatch, InsufficientSamples, LengthMismatch,
                     NonConvergence, NotAdmissible, NotMonotone,
                     NotPositiveDefinite, QuadratureFailure, SpecError,
                     StepTooLarge, TimeNonpositive, UnsupportedOperator)
from .estimator import FractionalOrderEstimator
from .forward import (ForwardRequest, ModeState, evaluate_field,
                      initial_condition_check, minimal_mode_count, solve)
from .fractional import (SampledFunction, caputo_derivative, rl_derivative,
                         rl_integral, rl_integral_gl, weighted_limit_check)
from .inversion import (InversionRequest, InversionResult, admissible, invert,
                        sensitivity, threshold_T0)
from .mittag_leffler import (DEFAULT_POLICY, KernelQuery, MLAccuracyPolicy,
                             MLQuery, kernel, kernel_drho, ml, ml_dispatch,
                             stability_constant)
from .observation import (OBSERVATION_KINDS, chebyshev_rho_grid,
                          observation_curve, observe, w_value)
from .operators import (DirichletLaplacian1D, ExplicitSpectrum, InitialData,
                        Spectrum, SymmetricMatrix, apply_A, eigenpairs,
                        project)
from .problem import ProblemSpec, load_spec, prepare, spec_from_dict

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "FracorderError", "DomainError", "BadOrder", "BadPayload", "GridMismatch",
    "LengthMismatch", "TimeNonpositive", "InsufficientSamples",
    "UnsupportedOperator", "StepTooLarge", "NotPositiveDefinite", "SpecError",
    "NotAdmissible", "NonConvergence", "QuadratureFailure", "NotMonotone",
    # Mittag-Leffler machinery
    "MLQuery", "KernelQuery", "MLAccuracyPolicy", "DEFAULT_POLICY",
    "ml", "ml_dispatch", "kernel", "kernel_drho", "stability_constant",
    # operators and problems
    "ExplicitSpectrum", "SymmetricMatrix", "DirichletLaplacian1D",
    "InitialData", "Spectrum", "eigenpairs", "project", "apply_A",
    "ProblemSpec", "prepare", "spec_from_dict", "load_spec",
    # forward solves and observations
    "ForwardRequest", "ModeState", "solve", "minimal_mode_count",
    "evaluate_field", "initial_condition_check",
    "OBSERVATION_KINDS", "observe", "w_value", "chebyshev_rho_grid",
    "observation_curve",
    # inversion
    "InversionRequest", "InversionResult", "threshold_T0", "admissible",
    "invert", "sensitivity",
    # discrete fractional calculus
    "SampledFunction", "rl_integral", "rl_derivative", "caputo_derivative",
    "weighted_limit_check", "rl_integral_gl",
    # sklearn facade
    "FractionalOrderEstimator",
]
