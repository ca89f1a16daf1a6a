"""Scalar observation functionals W(t0, rho) of the solved state.

Three kinds are supported, all expressible through the expansion
coefficients u_k = e_{lambda_k}(rho) * phi_k alone:

    norm_sq    W = ||u||^2        = sum u_k^2
    a_norm_sq  W = ||A u||^2      = sum (lambda_k u_k)^2
    inner_phi  W = (u, phi)       = sum u_k phi_k = sum e_{lambda_k} phi_k^2

For t0 past the threshold the kernels are positive and strictly
decreasing in rho, and every summand carries a nonnegative weight, so all
three functionals decrease in rho.  Only norm_sq has that proved in
general; the other two are verified numerically and violations must be
reported, never swallowed.
"""

from __future__ import annotations

import numpy as np

from ._validation import as_float_array, check_time
from .errors import BadPayload, LengthMismatch
from .mittag_leffler import KernelQuery, kernel
from .operators import Spectrum
from .problem import ProblemSpec, prepare

__all__ = ["OBSERVATION_KINDS", "check_kind", "observe", "observation_curve",
           "chebyshev_rho_grid", "w_value"]

OBSERVATION_KINDS = ("norm_sq", "a_norm_sq", "inner_phi")


def check_kind(kind: str) -> str:
    if kind not in OBSERVATION_KINDS:
        raise BadPayload(
            f"unknown observation kind {kind!r}; expected one of "
            f"{', '.join(OBSERVATION_KINDS)}")
    return kind


def observe(state, spectrum: Spectrum, phi_coeffs, kind: str) -> float:
    """Evaluate one observation functional on a solved ModeState."""
    check_kind(kind)
    u = np.asarray(state.coeffs, dtype=float)
    lam = np.asarray(spectrum.eigenvalues, dtype=float)
    phi = as_float_array(phi_coeffs, "phi_coeffs", nonempty=False)
    if u.size != lam.size:
        raise LengthMismatch(
            f"state has {u.size} coefficients but spectrum has {lam.size}")
    if phi.size != u.size:
        raise LengthMismatch(
            f"phi has {phi.size} coefficients but state has {u.size}")
    if kind == "norm_sq":
        return float(u @ u)
    if kind == "a_norm_sq":
        au = lam * u
        return float(au @ au)
    return float(u @ phi)


def w_value(eigenvalues, phi_coeffs, kind: str, t0: float, rho: float) -> float:
    """W(t0, rho) straight from kernels, bypassing ModeState construction.

    This is the hot path of inversion; it must stay allocation-light.
    """
    total = 0.0
    if kind == "norm_sq":
        for lam, ph in zip(eigenvalues, phi_coeffs):
            e = kernel(KernelQuery(rho, float(lam), t0))
            total += (e * ph) ** 2
    elif kind == "a_norm_sq":
        for lam, ph in zip(eigenvalues, phi_coeffs):
            e = kernel(KernelQuery(rho, float(lam), t0))
            total += (float(lam) * e * ph) ** 2
    else:
        check_kind(kind)
        for lam, ph in zip(eigenvalues, phi_coeffs):
            e = kernel(KernelQuery(rho, float(lam), t0))
            total += e * ph * ph
    return float(total)


def chebyshev_rho_grid(rho0: float, n: int = 65, upper: float = 1.0) -> np.ndarray:
    """Ascending Chebyshev-Lobatto points on [rho0, upper].

    Clusters near both ends, which resolves the flattening of W near
    rho = 1 far better than a uniform grid of the same size.
    """
    if not (0.0 < rho0 < upper <= 1.0):
        raise BadPayload(f"need 0 < rho0 < upper <= 1, got {rho0!r}, {upper!r}")
    if n < 2:
        raise BadPayload(f"grid needs at least 2 points, got {n}")
    i = np.arange(n)
    frac = 0.5 * (1.0 - np.cos(np.pi * i / (n - 1)))
    return rho0 + (upper - rho0) * frac


def observation_curve(spec: ProblemSpec, kind: str, t0: float,
                      rho_grid=None) -> list[tuple[float, float]]:
    """Sample (rho, W(t0, rho)) along a rho grid.

    Defaults to 65 Chebyshev points on [spec.rho0, 1].  A custom grid must
    be ascending and stay inside that interval.
    """
    check_kind(kind)
    check_time(t0, "t0")
    if rho_grid is None:
        grid = chebyshev_rho_grid(spec.rho0, 65)
    else:
        grid = as_float_array(rho_grid, "rho_grid")
        if np.any(np.diff(grid) <= 0.0):
            raise BadPayload("rho_grid must be strictly ascending")
        lo, hi = float(grid[0]), float(grid[-1])
        slack = 1e-12
        if lo < spec.rho0 - slack or hi > 1.0 + slack:
            raise BadPayload(
                f"rho_grid [{lo}, {hi}] leaves the order interval "
                f"[{spec.rho0}, 1]")
    prep = prepare(spec)
    lam = prep.spectrum.eigenvalues
    phi = prep.phi_coeffs
    return [(float(r), w_value(lam, phi, kind, t0, min(float(r), 1.0)))
            for r in grid]
