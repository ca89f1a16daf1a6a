"""Spectral representations of the positive self-adjoint operator A.

Three operator families are supported:

* ``ExplicitSpectrum``      -- eigenvalues handed in directly; initial data
                               must come as expansion coefficients.
* ``SymmetricMatrix``       -- a dense symmetric positive definite matrix,
                               diagonalized here by cyclic Jacobi rotations
                               (no LAPACK involved, deterministic sweeps).
* ``DirichletLaplacian1D``  -- the Sturm-Liouville benchmark -u'' on [0, L]
                               with Dirichlet ends, eigenpairs analytic,
                               projections by composite Simpson quadrature.

Eigenvalue ties are kept in input order.  Inversion consumes only the
eigenvalues and squared coefficients, so eigenvector ambiguity inside a
degenerate subspace is harmless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import ClassVar, Union

import numpy as np

from ._validation import as_float_array
from .errors import (
    BadPayload,
    GridMismatch,
    LengthMismatch,
    NonConvergence,
    NotPositiveDefinite,
)

__all__ = [
    "ExplicitSpectrum",
    "SymmetricMatrix",
    "DirichletLaplacian1D",
    "OperatorDescription",
    "InitialData",
    "Spectrum",
    "eigenpairs",
    "project",
    "apply_A",
    "simpson_weights",
    "laplacian_grid",
    "laplacian_basis",
]


@dataclass(frozen=True)
class ExplicitSpectrum:
    """Operator given by its eigenvalues alone (no spatial basis)."""

    eigenvalues: tuple[float, ...]
    kind: ClassVar[str] = "explicit_spectrum"

    def __post_init__(self) -> None:
        vals = as_float_array(self.eigenvalues, "eigenvalues")
        object.__setattr__(self, "eigenvalues", tuple(float(v) for v in vals))
        if any(b < a for a, b in zip(self.eigenvalues, self.eigenvalues[1:])):
            raise BadPayload("explicit eigenvalues must be non-decreasing")


@dataclass(frozen=True)
class SymmetricMatrix:
    """Dense symmetric operator on R^N, stored as nested tuples."""

    entries: tuple[tuple[float, ...], ...]
    kind: ClassVar[str] = "symmetric_matrix"

    def __post_init__(self) -> None:
        try:
            a = np.asarray(self.entries, dtype=float)
        except (TypeError, ValueError) as exc:
            raise BadPayload(f"matrix entries are not numeric: {exc}") from exc
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise BadPayload(f"matrix must be square, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise BadPayload("matrix entries must be finite")
        scale = float(np.abs(a).max())
        if scale > 0.0 and float(np.abs(a - a.T).max()) > 1e-12 * scale:
            raise BadPayload("matrix is not symmetric to 1e-12 relative")
        object.__setattr__(
            self, "entries", tuple(tuple(float(v) for v in row) for row in a))

    @property
    def array(self) -> np.ndarray:
        a = np.asarray(self.entries, dtype=float)
        return 0.5 * (a + a.T)

    @property
    def n(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class DirichletLaplacian1D:
    """-d^2/dx^2 on [0, length] with u(0) = u(length) = 0.

    ``grid_points`` fixes the uniform quadrature grid used for projections
    and field synthesis; it must be odd (composite Simpson) and at least
    1025 so projection error stays far below solver tolerances.
    """

    length: float
    grid_points: int = 2049
    kind: ClassVar[str] = "dirichlet_laplacian_1d"

    def __post_init__(self) -> None:
        if not (isinstance(self.length, (int, float))
                and math.isfinite(self.length) and self.length > 0):
            raise BadPayload(f"length must be positive, got {self.length!r}")
        object.__setattr__(self, "length", float(self.length))
        m = self.grid_points
        if not isinstance(m, int) or m < 1025 or m % 2 == 0:
            raise BadPayload(
                f"grid_points must be an odd integer >= 1025, got {m!r}")


OperatorDescription = Union[ExplicitSpectrum, SymmetricMatrix, DirichletLaplacian1D]


@dataclass(frozen=True)
class InitialData:
    """Initial state phi in one of three concrete forms.

    ``coefficients``: expansion coefficients (phi, v_k), any operator kind.
    ``samples``:      phi(x) on the Laplacian quadrature grid.
    ``vector``:       a vector in R^N for the matrix case.
    """

    form: str
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.form not in ("coefficients", "samples", "vector"):
            raise BadPayload(f"unknown initial-data form {self.form!r}")
        vals = as_float_array(self.values, "phi values")
        object.__setattr__(self, "values", tuple(float(v) for v in vals))

    @classmethod
    def coefficients(cls, values) -> "InitialData":
        return cls("coefficients", tuple(values))

    @classmethod
    def samples(cls, values) -> "InitialData":
        return cls("samples", tuple(values))

    @classmethod
    def vector(cls, values) -> "InitialData":
        return cls("vector", tuple(values))

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """First K eigenvalues of an operator plus whatever basis data exists.

    ``vectors`` holds orthonormal eigenvector columns in the matrix case
    and None otherwise; Laplacian spectra carry their descriptor so field
    synthesis can rebuild sine modes on demand.
    """

    eigenvalues: np.ndarray
    kind: str
    vectors: np.ndarray | None = None
    descriptor: OperatorDescription | None = None

    @property
    def count(self) -> int:
        return int(self.eigenvalues.size)


# ---------------------------------------------------------------------------
# Cyclic Jacobi eigensolver.
# ---------------------------------------------------------------------------

def _jacobi_eigensystem(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Full eigendecomposition of a symmetric matrix by Jacobi rotations.

    Row-major cyclic sweeps, rotations applied until the off-diagonal
    Frobenius norm drops below 1e-12 of the matrix norm.  Deterministic:
    no pivot searches, so results are bit-stable across runs.
    """
    a = np.array(matrix, dtype=float, copy=True)
    n = a.shape[0]
    v = np.eye(n)
    if n == 1:
        return a.diagonal().copy(), v
    scale = float(np.sqrt((a * a).sum()))
    if scale == 0.0:
        return np.zeros(n), v
    stop = 1e-12 * scale
    skip = stop / (n * n)
    idx = np.arange(n)
    for _ in range(60):
        off = float(np.sqrt(2.0 * (np.triu(a, 1) ** 2).sum()))
        if off <= stop:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= skip:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = 1.0 / (abs(theta) + math.hypot(theta, 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                tau = s / (1.0 + c)
                app, aqq = a[p, p], a[q, q]
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = a[q, p] = 0.0
                mask = (idx != p) & (idx != q)
                aip = a[mask, p].copy()
                aiq = a[mask, q].copy()
                a[mask, p] = a[p, mask] = aip - s * (aiq + tau * aip)
                a[mask, q] = a[q, mask] = aiq + s * (aip - tau * aiq)
                vip = v[:, p].copy()
                viq = v[:, q].copy()
                v[:, p] = vip - s * (viq + tau * vip)
                v[:, q] = viq + s * (vip - tau * viq)
    else:
        raise NonConvergence("Jacobi sweeps did not reduce the off-diagonal norm")
    w = a.diagonal().copy()
    order = np.argsort(w, kind="stable")
    w = w[order]
    v = v[:, order]
    # Sign convention: make the largest-magnitude component of each
    # eigenvector positive, so outputs are reproducible.
    for j in range(n):
        col = v[:, j]
        if col[int(np.argmax(np.abs(col)))] < 0.0:
            v[:, j] = -col
    return w, v


@lru_cache(maxsize=64)
def _matrix_eigensystem(desc: SymmetricMatrix) -> tuple[np.ndarray, np.ndarray]:
    return _jacobi_eigensystem(desc.array)


# ---------------------------------------------------------------------------
# Laplacian grid machinery.
# ---------------------------------------------------------------------------

def laplacian_grid(desc: DirichletLaplacian1D) -> np.ndarray:
    return np.linspace(0.0, desc.length, desc.grid_points)


def simpson_weights(n_points: int, h: float) -> np.ndarray:
    """Composite Simpson weights for an odd number of uniform samples."""
    if n_points < 3 or n_points % 2 == 0:
        raise BadPayload(f"Simpson rule needs an odd point count >= 3, got {n_points}")
    w = np.ones(n_points)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (h / 3.0)


@lru_cache(maxsize=32)
def laplacian_basis(desc: DirichletLaplacian1D, K: int) -> np.ndarray:
    """Columns v_k(x_i) = sqrt(2/L) sin(k pi x_i / L) on the stored grid."""
    x = laplacian_grid(desc)
    k = np.arange(1, K + 1)
    return np.sqrt(2.0 / desc.length) * np.sin(np.outer(x, k * np.pi / desc.length))


# ---------------------------------------------------------------------------
# Public operations.
# ---------------------------------------------------------------------------

def _check_mode_count(K) -> int:
    if not isinstance(K, int) or K < 1:
        raise BadPayload(f"mode count K must be a positive integer, got {K!r}")
    return K


def eigenpairs(desc: OperatorDescription, K: int) -> Spectrum:
    """First K eigenvalues (ascending) plus basis data where it exists.

    Raises NotPositiveDefinite if the smallest eigenvalue is not strictly
    positive: the monotonicity theory needs lambda_1 > 0, so operators
    with a kernel are rejected outright.
    """
    K = _check_mode_count(K)
    if isinstance(desc, ExplicitSpectrum):
        vals = np.asarray(desc.eigenvalues, dtype=float)
        if K > vals.size:
            raise BadPayload(
                f"K={K} exceeds the {vals.size} explicit eigenvalues provided")
        if vals[0] <= 0.0:
            raise NotPositiveDefinite(
                f"smallest eigenvalue {vals[0]!r} is not positive")
        return Spectrum(vals[:K].copy(), desc.kind, descriptor=desc)
    if isinstance(desc, SymmetricMatrix):
        if K > desc.n:
            raise BadPayload(f"K={K} exceeds matrix dimension {desc.n}")
        w, v = _matrix_eigensystem(desc)
        if w[0] <= 0.0:
            raise NotPositiveDefinite(
                f"matrix is not positive definite (lambda_min={w[0]!r})")
        return Spectrum(w[:K].copy(), desc.kind, vectors=v[:, :K].copy(),
                        descriptor=desc)
    if isinstance(desc, DirichletLaplacian1D):
        if K > (desc.grid_points - 1) // 8:
            raise BadPayload(
                f"K={K} is too large for grid_points={desc.grid_points}; the "
                f"grid must oversample the highest retained sine mode")
        k = np.arange(1, K + 1, dtype=float)
        vals = (k * np.pi / desc.length) ** 2
        return Spectrum(vals, desc.kind, descriptor=desc)
    raise BadPayload(f"unknown operator description {type(desc).__name__}")


def project(desc: OperatorDescription, K: int, phi: InitialData) -> np.ndarray:
    """Expansion coefficients (phi, v_k), k = 1..K.

    Coefficient-form data passes through (truncated to K) for every kind;
    vector data is projected with eigenvector dot products; sampled data
    is integrated against sine modes with composite Simpson weights.
    """
    K = _check_mode_count(K)
    if not isinstance(phi, InitialData):
        phi = InitialData.coefficients(tuple(phi))
    if phi.form == "coefficients":
        vals = phi.array
        if vals.size < K:
            raise LengthMismatch(
                f"{vals.size} coefficients cannot cover K={K} modes")
        return vals[:K].copy()
    if phi.form == "vector":
        if not isinstance(desc, SymmetricMatrix):
            raise BadPayload("vector-form initial data needs a matrix operator")
        vals = phi.array
        if vals.size != desc.n:
            raise GridMismatch(
                f"vector length {vals.size} != matrix dimension {desc.n}")
        spec = eigenpairs(desc, K)
        return spec.vectors.T @ vals
    # samples
    if not isinstance(desc, DirichletLaplacian1D):
        raise BadPayload("sampled initial data needs the Laplacian operator")
    vals = phi.array
    if vals.size != desc.grid_points:
        raise GridMismatch(
            f"sample count {vals.size} != grid_points {desc.grid_points}")
    eigenpairs(desc, K)  # validates K against the grid
    w = simpson_weights(desc.grid_points, desc.length / (desc.grid_points - 1))
    return (w * vals) @ laplacian_basis(desc, K)


def apply_A(desc: OperatorDescription, K: int, coeffs) -> np.ndarray:
    """Componentwise action of A in the eigenbasis: c_k -> lambda_k c_k."""
    c = as_float_array(coeffs, "coeffs", nonempty=False)
    K = _check_mode_count(K)
    if c.size != K:
        raise LengthMismatch(f"expected {K} coefficients, got {c.size}")
    spec = eigenpairs(desc, K)
    return spec.eigenvalues * c
