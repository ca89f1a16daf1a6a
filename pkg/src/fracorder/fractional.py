"""Discrete Riemann-Liouville and Caputo operators on sampled functions.

These operators exist to check the solver against the governing equation
and the weighted initial condition; they are verification tools, not a
time-stepping scheme.

The RL integral uses a product-trapezoidal rule: on each cell the
integrand's weakly singular kernel (t - xi)^(sigma-1) is integrated in
closed form against the piecewise-linear interpolant of f.  The resulting
weights form a convolution, so the whole transform is two np.convolve
calls.  For trajectories with a power-law start (the solution kernel
behaves like t^(rho-1) near zero), a SampledFunction can carry
``singular_powers`` metadata: the leading powers are then fitted to the
first samples and convolved analytically, which removes the startup error
that would otherwise dominate everything.

Functions whose grid starts after zero and carry no metadata are treated
as zero on [0, t_start); that convention is cheap but first-order
inaccurate for singular starts, hence the metadata escape hatch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadOrder, BadPayload, InsufficientSamples

__all__ = ["SampledFunction", "rl_integral", "rl_derivative",
           "caputo_derivative", "weighted_limit_check", "rl_integral_gl"]


@dataclass(frozen=True)
class SampledFunction:
    """Uniform samples f(t_start + j*step), j = 0..n-1, n >= 3.

    ``singular_powers``, when nonempty, asserts that near t = 0 the
    function behaves like a combination sum c_i t^(p_i) of those powers
    (each > -1, strictly increasing).  The coefficients themselves are
    fitted from the leading samples when needed; only the exponents are
    metadata.
    """

    t_start: float
    step: float
    values: tuple[float, ...]
    singular_powers: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if not (isinstance(self.t_start, (int, float))
                and math.isfinite(self.t_start) and self.t_start >= 0.0):
            raise BadPayload(f"t_start must be >= 0, got {self.t_start!r}")
        if not (isinstance(self.step, (int, float))
                and math.isfinite(self.step) and self.step > 0.0):
            raise BadPayload(f"step must be positive, got {self.step!r}")
        vals = tuple(float(v) for v in self.values)
        if len(vals) < 3:
            raise BadPayload(f"need at least 3 samples, got {len(vals)}")
        if not all(math.isfinite(v) for v in vals):
            raise BadPayload("samples must be finite")
        powers = tuple(float(p) for p in self.singular_powers)
        if powers:
            if any(p <= -1.0 for p in powers):
                raise BadPayload("singular powers must exceed -1")
            if any(b <= a for a, b in zip(powers, powers[1:])):
                raise BadPayload("singular powers must be strictly increasing")
            if len(powers) > len(vals):
                raise BadPayload("more head powers than samples")
            if self.t_start == 0.0 and powers[0] < 0.0:
                raise BadPayload(
                    "a negative-power head needs t_start > 0 (f(0) diverges)")
        object.__setattr__(self, "t_start", float(self.t_start))
        object.__setattr__(self, "step", float(self.step))
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "singular_powers", powers)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def grid(self) -> np.ndarray:
        return self.t_start + self.step * np.arange(len(self.values))

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


def _check_order(order) -> float:
    if not (isinstance(order, (int, float)) and math.isfinite(order)
            and 0.0 < float(order) < 1.0):
        raise BadOrder(f"order must lie in (0, 1), got {order!r}")
    return float(order)


def _head_fit(f: SampledFunction) -> tuple[np.ndarray, np.ndarray, float]:
    """Coefficients (scaled) of the asserted power-law head.

    Returns (c_scaled, powers, t0) with head(t) = sum c_scaled[i]*(t/t0)^p_i,
    t0 the first positive anchor time; scaling keeps the tiny-time
    Vandermonde solve well conditioned.
    """
    powers = np.asarray(f.singular_powers, dtype=float)
    m = powers.size
    t = f.grid[:m]
    t0 = float(t[0]) if t[0] > 0.0 else float(t[-1])
    if t0 <= 0.0:
        raise BadPayload(
            "singular-power head needs a positive grid time to anchor the fit")
    M = (t[:, None] / t0) ** powers[None, :]
    try:
        c = np.linalg.solve(M, f.array[:m])
    except np.linalg.LinAlgError as exc:
        raise BadPayload(f"singular-power head fit failed: {exc}") from exc
    return c, powers, t0


def rl_integral(f: SampledFunction, order) -> SampledFunction:
    """Riemann-Liouville integral J^order f on f's own grid.

    (J^s f)(t) = (1/Gamma(s)) * integral_0^t f(xi) (t - xi)^(s-1) dxi.
    Exact for piecewise-linear f when the grid starts at zero; see the
    module docstring for the t_start > 0 conventions.
    """
    sigma = _check_order(order)
    n = len(f)
    h = f.step
    t = f.grid
    r = f.array
    head = np.zeros(n)
    if f.singular_powers:
        c, powers, t0 = _head_fit(f)
        # J^s of t^p is t^(p+s) * Gamma(p+1) / Gamma(p+s+1).
        for ci, p in zip(c, powers):
            gain = math.gamma(p + 1.0) / math.gamma(p + sigma + 1.0)
            head += ci * gain * t ** (p + sigma) / t0 ** p
            r = r - ci * (t / t0) ** p
    m = np.arange(n + 1, dtype=float)
    d1 = (m * h) ** sigma
    d2 = (m * h) ** (sigma + 1.0)
    i1 = np.zeros(n + 1)
    i2 = np.zeros(n + 1)
    i1[1:] = (d1[1:] - d1[:-1]) / sigma
    i2[1:] = (d2[1:] - d2[:-1]) / (sigma + 1.0)
    p_w = (1.0 - m) * i1 + i2 / h
    q_w = m * i1 - i2 / h
    p_w[0] = q_w[0] = 0.0
    conv_p = np.convolve(r, p_w)[:n]
    conv_q = np.convolve(r, q_w)[1:n + 1] - r[0] * q_w[1:n + 1]
    out = head + (conv_p + conv_q) / math.gamma(sigma)
    return SampledFunction(f.t_start, h, tuple(out))


def rl_derivative(f: SampledFunction, order) -> SampledFunction:
    """RL derivative d/dt J^(1-order) f, differenced on the grid.

    Central differences inside, one-sided first-order at both ends; the
    endcap error is the accuracy bottleneck by design (it shows up as the
    first-order convergence the residual tests measure).
    """
    rho = _check_order(order)
    g = rl_integral(f, 1.0 - rho).array
    n = g.size
    h = f.step
    d = np.empty(n)
    d[0] = (g[1] - g[0]) / h
    d[-1] = (g[-1] - g[-2]) / h
    d[1:-1] = (g[2:] - g[:-2]) / (2.0 * h)
    return SampledFunction(f.t_start, h, tuple(d))


def caputo_derivative(f: SampledFunction, order) -> SampledFunction:
    """Caputo derivative J^(1-order) (df/dt).

    Differencing happens first, so this flavor annihilates constants
    exactly; it is meant for trajectories smooth at the grid start.
    """
    rho = _check_order(order)
    v = f.array
    n = v.size
    h = f.step
    d = np.empty(n)
    d[0] = (v[1] - v[0]) / h
    d[-1] = (v[-1] - v[-2]) / h
    d[1:-1] = (v[2:] - v[:-2]) / (2.0 * h)
    fp = SampledFunction(f.t_start, h, tuple(d))
    return rl_integral(fp, 1.0 - rho)


def weighted_limit_check(f: SampledFunction, order) -> float:
    """Extrapolated t -> 0 limit of the weighted trajectory J^(1-order) f.

    Evaluates the RL integral at the two smallest usable grid times,
    removes the known leading t^order variation, repeats on the
    2h-coarsened grid, and Richardson-combines the two estimates.  This
    is the quantity the initial condition pins to phi.
    """
    rho = _check_order(order)
    if len(f) < 8:
        raise InsufficientSamples(
            f"limit extrapolation needs at least 8 samples, got {len(f)}")

    def level_estimate(sf: SampledFunction) -> float:
        g = rl_integral(sf, 1.0 - rho)
        t = g.grid
        t1, t2 = t[1], t[2]
        g1, g2 = g.values[1], g.values[2]
        w1, w2 = t1 ** rho, t2 ** rho
        return (w2 * g1 - w1 * g2) / (w2 - w1)

    fine = level_estimate(f)
    coarse_vals = f.values[::2]
    coarse = level_estimate(
        SampledFunction(f.t_start, 2.0 * f.step, coarse_vals, f.singular_powers))
    # First-order Richardson; if the true error order is higher the
    # combination is still convergent, just not magic.
    return 2.0 * fine - coarse


def rl_integral_gl(f: SampledFunction, order) -> SampledFunction:
    """Grunwald-Letnikov flavor of J^order, for cross-checking only.

    First-order accurate and ignorant of singular heads; useful purely as
    an independent discretization to compare the product-trapezoid rule
    against on smooth inputs.
    """
    sigma = _check_order(order)
    v = f.array
    n = v.size
    w = np.empty(n)
    w[0] = 1.0
    for j in range(1, n):
        w[j] = w[j - 1] * (j - 1 + sigma) / j
    out = f.step ** sigma * np.convolve(v, w)[:n]
    return SampledFunction(f.t_start, f.step, tuple(out))
