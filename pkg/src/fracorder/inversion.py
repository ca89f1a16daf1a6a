"""Recover the fractional order from one scalar observation.

Given d0 = W(t0, rho*) with t0 at or beyond the threshold time T0, the
observation functional is strictly decreasing in rho, so rho* is the
unique root of g(rho) = W(t0, rho) - d0 on [rho0, 1] and d0 must lie
between the endpoint values W(t0, 1) and W(t0, rho0) for a solution to
exist at all.  The solver enforces that bracket (refusing out-of-range
data rather than extrapolating), certifies monotonicity with a pre-scan,
and then runs safeguarded bisection/secant iterations.

Below the threshold the theory is silent.  The pre-scan then acts as a
runtime certificate: if it fails, inversion refuses with NotMonotone; if
it passes, inversion proceeds but the result carries t0_admissible=False
so callers can treat it with suspicion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._validation import check_time
from .errors import (
    DomainError,
    NonConvergence,
    NotAdmissible,
    NotMonotone,
    StepTooLarge,
)
from .observation import check_kind, w_value
from .problem import ProblemSpec, prepare

__all__ = ["EULER_GAMMA", "InversionRequest", "InversionResult",
           "Admissibility", "threshold_T0", "admissible", "invert",
           "sensitivity"]

EULER_GAMMA = 0.57721566490153286

_PRESCAN_POINTS = 33
_MAX_ROOT_EVALS = 200
_POLISH_STEPS = 8


def threshold_T0(rho0: float) -> float:
    """Threshold time e^(1 - gamma) * e^(2/rho0) for monotonicity in rho.

    Defined for rho0 in (0, 1]; the value at 1 (about 11.28) is the
    smallest threshold the formula can produce, and it diverges as
    rho0 -> 0.
    """
    if not (isinstance(rho0, (int, float)) and math.isfinite(rho0)
            and 0.0 < rho0 <= 1.0):
        raise DomainError(f"rho0 must lie in (0, 1], got {rho0!r}")
    return math.exp(1.0 - EULER_GAMMA + 2.0 / float(rho0))


@dataclass(frozen=True)
class InversionRequest:
    """Inputs for order recovery.

    ``rho0`` defaults to the spec's own interval bound.  ``noise_band``
    widens the admissibility check symmetrically: observed values within
    the band of the bracket are clamped to the nearest endpoint instead
    of refused.  Data is otherwise taken exact.
    """

    spec: ProblemSpec
    kind: str
    t0: float
    d0: float
    rho0: float | None = None
    rho_tol: float = 1e-10
    noise_band: float = 0.0

    def __post_init__(self) -> None:
        check_kind(self.kind)
        check_time(self.t0, "t0")
        if self.rho0 is None:
            object.__setattr__(self, "rho0", self.spec.rho0)
        r0 = self.rho0
        if not (isinstance(r0, (int, float)) and 0.0 < float(r0) < 1.0):
            raise DomainError(f"rho0 must lie in (0, 1), got {r0!r}")
        object.__setattr__(self, "rho0", float(r0))
        if not (math.isfinite(self.d0)):
            raise DomainError(f"d0 must be finite, got {self.d0!r}")
        if self.kind in ("norm_sq", "a_norm_sq") and self.d0 < 0.0:
            raise DomainError(
                f"d0 must be nonnegative for kind={self.kind}, got {self.d0!r}")
        if not (0.0 < self.rho_tol <= 1e-2):
            raise DomainError(f"rho_tol must lie in (0, 1e-2], got {self.rho_tol!r}")
        if not (math.isfinite(self.noise_band) and self.noise_band >= 0.0):
            raise DomainError(
                f"noise_band must be nonnegative, got {self.noise_band!r}")


class Admissibility(NamedTuple):
    lower: float
    upper: float
    ok: bool


@dataclass(frozen=True)
class InversionResult:
    rho_hat: float
    bracket: tuple[float, float]
    residual: float
    iterations: int
    t0_admissible: bool
    monotone_verified: bool


def admissible(req: InversionRequest) -> Admissibility:
    """Theorem bracket: a solution exists iff W(t0,1) <= d0 <= W(t0,rho0).

    Returns both endpoint values and the verdict (widened by noise_band);
    an out-of-range d0 is a result here, not an error.
    """
    prep = prepare(req.spec)
    lam = prep.spectrum.eigenvalues
    phi = prep.phi_coeffs
    lower = w_value(lam, phi, req.kind, req.t0, 1.0)
    upper = w_value(lam, phi, req.kind, req.t0, req.rho0)
    band = req.noise_band
    ok = (lower - band) <= req.d0 <= (upper + band)
    return Admissibility(lower=lower, upper=upper, ok=ok)


def invert(req: InversionRequest) -> InversionResult:
    """Monotone root finding for rho on [rho0, 1].

    Raises NotAdmissible when d0 falls outside the existence bracket and
    NotMonotone when t0 is below threshold and the 33-point pre-scan finds
    a monotonicity violation.  ``iterations`` counts observation
    evaluations (pre-scan included).
    """
    adm = admissible(req)
    if not adm.ok:
        raise NotAdmissible(
            f"d0={req.d0!r} lies outside [{adm.lower!r}, {adm.upper!r}] "
            f"(noise_band={req.noise_band!r}); no order in [rho0, 1] can "
            f"produce it")

    prep = prepare(req.spec)
    lam = prep.spectrum.eigenvalues
    phi = prep.phi_coeffs
    evals = [2]  # admissible() consumed two curve evaluations already

    def w_at(rho: float) -> float:
        evals[0] += 1
        return w_value(lam, phi, req.kind, req.t0, rho)

    t_threshold = threshold_T0(req.rho0)
    t0_admissible = req.t0 >= t_threshold

    grid = np.linspace(req.rho0, 1.0, _PRESCAN_POINTS)
    ws = [adm.upper] + [w_at(float(r)) for r in grid[1:-1]] + [adm.lower]
    violations = sum(1 for a, b in zip(ws, ws[1:]) if b >= a)
    monotone_verified = violations == 0
    if not monotone_verified and not t0_admissible:
        raise NotMonotone(
            f"t0={req.t0!r} is below the threshold {t_threshold!r} and the "
            f"pre-scan found {violations} monotonicity violations; "
            f"inversion is not certified there")

    # Clamp into the exact bracket: with a noise band, boundary-adjacent
    # data inverts to the nearest endpoint instead of failing.
    d0 = min(max(req.d0, adm.lower), adm.upper)

    if d0 >= adm.upper:
        return InversionResult(req.rho0, (req.rho0, req.rho0),
                               abs(adm.upper - req.d0), evals[0],
                               t0_admissible, monotone_verified)
    if d0 <= adm.lower:
        return InversionResult(1.0, (1.0, 1.0), abs(adm.lower - req.d0),
                               evals[0], t0_admissible, monotone_verified)

    g = [w - d0 for w in ws]
    lo_i = 0
    for i in range(len(g) - 1):
        if g[i] >= 0.0 >= g[i + 1]:
            lo_i = i
            break
    lo, hi = float(grid[lo_i]), float(grid[lo_i + 1])
    glo, ghi = g[lo_i], g[lo_i + 1]

    seen = [(abs(glo), lo), (abs(ghi), hi)]
    x_prev, g_prev = lo, glo
    x_last, g_last = hi, ghi
    step = 0
    while (hi - lo) > req.rho_tol:
        if evals[0] > _MAX_ROOT_EVALS:
            raise NonConvergence(
                f"root finding used more than {_MAX_ROOT_EVALS} observation "
                f"evaluations without reaching rho_tol={req.rho_tol!r}")
        width = hi - lo
        cand = 0.5 * (lo + hi)
        if step % 3 != 2 and g_last != g_prev:
            secant = x_last - g_last * (x_last - x_prev) / (g_last - g_prev)
            if lo + 0.01 * width <= secant <= hi - 0.01 * width:
                cand = secant
        gc = w_at(cand)
        gc -= d0
        seen.append((abs(gc), cand))
        x_prev, g_prev = x_last, g_last
        x_last, g_last = cand, gc
        if gc >= 0.0:
            lo, glo = cand, gc
        else:
            hi, ghi = cand, gc
        step += 1

    # Polish: secant refinements typically push |g| to the evaluation
    # noise floor, far below what the rho_tol bracket alone guarantees.
    a, ga = x_prev, g_prev
    b, gb = x_last, g_last
    best_res, best_x = min(seen)
    for _ in range(_POLISH_STEPS):
        if ga == gb or gb == 0.0:
            break
        nxt = b - gb * (b - a) / (gb - ga)
        nxt = min(max(nxt, req.rho0), 1.0)
        gn = w_at(nxt) - d0
        a, ga = b, gb
        b, gb = nxt, gn
        if abs(gn) < best_res:
            best_res, best_x = abs(gn), nxt
        else:
            break

    rho_hat = best_x
    residual = abs(w_at(rho_hat) - req.d0)
    return InversionResult(rho_hat, (lo, hi), residual, evals[0],
                           t0_admissible, monotone_verified)


def sensitivity(req: InversionRequest, rho: float) -> float:
    """Finite-difference slope dW/drho at a given order.

    Central difference where both neighbors fit in [rho0, 1]; one-sided
    at the interval ends.  Raises StepTooLarge only if the interval is
    too narrow for any difference at all.  Pair this with an observation
    noise level to translate data uncertainty into order uncertainty.
    """
    if not (math.isfinite(rho) and req.rho0 <= rho <= 1.0):
        raise DomainError(
            f"rho must lie in [{req.rho0}, 1], got {rho!r}")
    prep = prepare(req.spec)
    lam = prep.spectrum.eigenvalues
    phi = prep.phi_coeffs

    def w_at(r: float) -> float:
        return w_value(lam, phi, req.kind, req.t0, r)

    h = min(1e-5, 0.25 * (1.0 - req.rho0))
    if h <= 0.0:
        raise StepTooLarge("order interval is degenerate")
    can_up = rho + h <= 1.0
    can_dn = rho - h >= req.rho0
    if can_up and can_dn:
        return (w_at(rho + h) - w_at(rho - h)) / (2.0 * h)
    if can_dn:
        return (w_at(rho) - w_at(rho - h)) / h
    if can_up:
        return (w_at(rho + h) - w_at(rho)) / h
    raise StepTooLarge(
        f"no step of size {h!r} fits inside [{req.rho0}, 1] around {rho!r}")
