"""Forward solve of the subdiffusion Cauchy problem by eigen-expansion.

The solution to d_t^rho u + Au = 0 with weighted initial data phi is,
mode by mode, u_k(t) = e_{lambda_k}(rho) * (phi, v_k) with the kernel
e_lambda(rho) = t^(rho-1) E_{rho,rho}(-lambda t^rho).  There is no time
stepping anywhere: each requested time is evaluated independently, which
is also why requests parallelize trivially.

Truncation honesty: every state carries a certified bound on the dropped
tail, built from the measured kernel decay constant.  The bound is an
estimate (the underlying decay constant is not known in closed form) and
is flagged as such in CLI output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._validation import as_float_array, check_order
from .errors import (
    BadPayload,
    DomainError,
    NonConvergence,
    TimeNonpositive,
    UnsupportedOperator,
)
from .mittag_leffler import KernelQuery, MLQuery, kernel, ml, stability_constant
from .operators import (
    DirichletLaplacian1D,
    ExplicitSpectrum,
    SymmetricMatrix,
    _matrix_eigensystem,
)
from .problem import ProblemSpec, prepare

__all__ = ["ForwardRequest", "ModeState", "solve", "evaluate_field",
           "initial_condition_check", "minimal_mode_count"]


@dataclass(frozen=True)
class ForwardRequest:
    """Solve spec at order rho for each time in ``times`` (all > 0).

    ``tail_tol`` overrides the spec's own bound: when set, solving fails
    with NonConvergence if the certified tail exceeds it at any time.
    """

    spec: ProblemSpec
    rho: float
    times: tuple[float, ...]
    tail_tol: float | None = None

    def __post_init__(self) -> None:
        check_order(self.rho, name="rho")
        times = tuple(float(t) for t in self.times)
        if not times:
            raise TimeNonpositive("at least one time is required")
        for t in times:
            if not (math.isfinite(t) and t > 0.0):
                raise TimeNonpositive(
                    f"times must be positive (kernel is singular at t=0), got {t!r}")
        object.__setattr__(self, "times", times)

    @property
    def effective_tail_tol(self) -> float | None:
        return self.tail_tol if self.tail_tol is not None else self.spec.tail_tol


@dataclass(frozen=True, eq=False)
class ModeState:
    """Expansion coefficients u_k(t) at one time, plus the tail certificate."""

    t: float
    coeffs: np.ndarray
    tail_bound: float


def _next_eigenvalue(spec: ProblemSpec) -> float | None:
    """lambda_{K+1}, or None when the K modes already exhaust the operator."""
    op = spec.operator
    if isinstance(op, ExplicitSpectrum):
        vals = op.eigenvalues
        return vals[spec.K] if spec.K < len(vals) else None
    if isinstance(op, SymmetricMatrix):
        if spec.K >= op.n:
            return None
        w, _ = _matrix_eigensystem(op)
        return float(w[spec.K])
    return ((spec.K + 1) * math.pi / op.length) ** 2


def _tail_data(spec: ProblemSpec) -> tuple[float, float | None]:
    prep = prepare(spec)
    lam_next = _next_eigenvalue(spec)
    if lam_next is None:
        return 0.0, None
    retained = float(prep.phi_coeffs @ prep.phi_coeffs)
    tail_norm = math.sqrt(max(prep.phi_norm_sq - retained, 0.0))
    return tail_norm, lam_next


def solve(req: ForwardRequest) -> list[ModeState]:
    """States at each requested time, in request order.

    coeffs[k] = kernel(rho, lambda_k, t) * phi_k.  The tail bound follows
    the decay-estimate shape C * t^(rho-1) / (1 + lambda_{K+1} t^rho)
    applied to the unprojected remainder of phi.
    """
    spec = req.spec
    prep = prepare(spec)
    lam = prep.spectrum.eigenvalues
    phi = prep.phi_coeffs
    rho = req.rho
    tail_norm, lam_next = _tail_data(spec)
    c_est = stability_constant(rho) if tail_norm > 0.0 else 0.0
    tol = req.effective_tail_tol
    states = []
    for t in req.times:
        coeffs = np.array([kernel(KernelQuery(rho, float(lv), t)) for lv in lam])
        coeffs *= phi
        if tail_norm > 0.0:
            bound = c_est * t ** (rho - 1.0) / (1.0 + lam_next * t ** rho) * tail_norm
        else:
            bound = 0.0
        if tol is not None and bound > tol:
            raise NonConvergence(
                f"certified tail {bound:.3e} exceeds tail_tol={tol:.3e} at "
                f"t={t!r}; retain more modes")
        states.append(ModeState(t=t, coeffs=coeffs, tail_bound=bound))
    return states


def minimal_mode_count(spec: ProblemSpec, rho: float, t: float,
                       tail_tol: float, cap: int = 4096) -> int:
    """Smallest K whose certified tail at time t is below tail_tol.

    Only meaningful for the Laplacian family (the other operators have a
    fixed finite mode supply).  Doubles K until the certificate passes;
    NonConvergence past ``cap``.
    """
    check_order(rho, name="rho")
    if not (math.isfinite(t) and t > 0.0):
        raise TimeNonpositive(f"t must be positive, got {t!r}")
    if not isinstance(spec.operator, DirichletLaplacian1D):
        raise UnsupportedOperator(
            "minimal_mode_count applies to the Laplacian family only")
    K = spec.K
    while K <= cap:
        trial = ProblemSpec(spec.operator, spec.phi, K, rho0=spec.rho0)
        tail_norm, lam_next = _tail_data(trial)
        bound = (stability_constant(rho) * t ** (rho - 1.0)
                 / (1.0 + lam_next * t ** rho) * tail_norm)
        if bound <= tail_tol:
            return K
        K *= 2
    raise NonConvergence(
        f"tail_tol={tail_tol!r} not reached within {cap} modes at t={t!r}")


def evaluate_field(desc, state: ModeState, points=None) -> np.ndarray:
    """Synthesize the truncated solution from a ModeState.

    Laplacian: values at the given x points (within [0, L]).  Matrix:
    the R^N vector V @ coeffs, optionally restricted to integer indices.
    Explicit spectra have no basis functions to synthesize with.
    """
    coeffs = np.asarray(state.coeffs, dtype=float)
    K = coeffs.size
    if isinstance(desc, DirichletLaplacian1D):
        if points is None:
            raise BadPayload("Laplacian synthesis needs explicit x points")
        x = as_float_array(points, "points")
        if np.any((x < 0.0) | (x > desc.length)):
            raise DomainError(f"points must lie in [0, {desc.length}]")
        k = np.arange(1, K + 1)
        modes = np.sqrt(2.0 / desc.length) * np.sin(
            np.outer(x, k * np.pi / desc.length))
        return modes @ coeffs
    if isinstance(desc, SymmetricMatrix):
        _, v = _matrix_eigensystem(desc)
        field = v[:, :K] @ coeffs
        if points is None:
            return field
        idx = np.asarray(points, dtype=int)
        if idx.size and (idx.min() < 0 or idx.max() >= desc.n):
            raise DomainError(f"indices must lie in [0, {desc.n - 1}]")
        return field[idx]
    raise UnsupportedOperator(
        "explicit spectra carry no basis functions; synthesis is undefined")


def initial_condition_check(spec: ProblemSpec, rho: float, t_small_grid) -> float:
    """Weighted initial-condition discrepancy at the smallest grid time.

    The RL-weighted limit of each mode is E_{rho,1}(-lambda_k t^rho) phi_k,
    which must approach phi_k as t -> 0; returns
    max_k |E_{rho,1}(-lambda_k t^rho) phi_k - phi_k| at min(t_small_grid).
    """
    check_order(rho, name="rho")
    grid = as_float_array(t_small_grid, "t_small_grid", positive=True)
    t = float(grid.min())
    prep = prepare(spec)
    worst = 0.0
    for lam, ph in zip(prep.spectrum.eigenvalues, prep.phi_coeffs):
        e1 = ml(MLQuery(rho, 1.0, -float(lam) * t ** rho))
        worst = max(worst, abs(e1 * ph - ph))
    return worst
