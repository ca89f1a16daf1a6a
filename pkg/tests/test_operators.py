import math
import pathlib
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fracorder.errors import (BadPayload, GridMismatch, LengthMismatch,
                              NotPositiveDefinite)
from fracorder.operators import (DirichletLaplacian1D, ExplicitSpectrum,
                                 InitialData, SymmetricMatrix, apply_A,
                                 eigenpairs, project, simpson_weights)

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent / "oracles"))
from eig_reference import charpoly_eigenvalues  # noqa: E402


class TestExplicitSpectrum:
    def test_passthrough(self):
        spec = eigenpairs(ExplicitSpectrum(eigenvalues=(1.0, 2.0, 5.0)), 3)
        assert np.array_equal(spec.eigenvalues, [1.0, 2.0, 5.0])
        assert spec.vectors is None

    def test_decreasing_rejected(self):
        with pytest.raises(BadPayload):
            ExplicitSpectrum(eigenvalues=(2.0, 1.0))

    def test_ties_kept(self):
        spec = eigenpairs(ExplicitSpectrum(eigenvalues=(3.0, 3.0, 4.0)), 3)
        assert list(spec.eigenvalues) == [3.0, 3.0, 4.0]

    def test_nonpositive_lead_rejected(self):
        with pytest.raises(NotPositiveDefinite):
            eigenpairs(ExplicitSpectrum(eigenvalues=(0.0, 1.0)), 2)

    def test_too_many_modes(self):
        with pytest.raises(BadPayload):
            eigenpairs(ExplicitSpectrum(eigenvalues=(1.0, 2.0)), 3)


class TestSymmetricMatrix:
    def test_diagonal_two_by_two(self):
        spec = eigenpairs(SymmetricMatrix(entries=((2.0, 0.0), (0.0, 3.0))), 2)
        assert spec.eigenvalues == pytest.approx([2.0, 3.0], abs=0)
        assert np.allclose(np.abs(spec.vectors), np.eye(2), atol=1e-14)

    def test_asymmetric_rejected(self):
        with pytest.raises(BadPayload):
            SymmetricMatrix(entries=((1.0, 2.0), (0.0, 1.0)))

    def test_indefinite_rejected(self):
        with pytest.raises(NotPositiveDefinite):
            eigenpairs(SymmetricMatrix(entries=((1.0, 2.0), (2.0, 1.0))), 2)

    def test_against_charpoly_oracle(self):
        rng = np.random.default_rng(7)
        q, _ = np.linalg.qr(rng.normal(size=(5, 5)))
        a = q @ np.diag([1.0, 2.2, 2.9, 4.1, 7.3]) @ q.T
        a = 0.5 * (a + a.T)
        spec = eigenpairs(SymmetricMatrix(entries=tuple(map(tuple, a))), 5)
        ref = [float(v) for v in charpoly_eigenvalues(a.tolist(), dps=30)]
        assert spec.eigenvalues == pytest.approx(ref, rel=1e-12)

    def test_orthonormal_and_reconstructs(self):
        rng = np.random.default_rng(11)
        q, _ = np.linalg.qr(rng.normal(size=(4, 4)))
        a = q @ np.diag([1.5, 1.5, 3.0, 6.0]) @ q.T  # degenerate pair on purpose
        a = 0.5 * (a + a.T)
        spec = eigenpairs(SymmetricMatrix(entries=tuple(map(tuple, a))), 4)
        v = spec.vectors
        assert np.max(np.abs(v.T @ v - np.eye(4))) < 1e-13
        assert np.max(np.abs(v @ np.diag(spec.eigenvalues) @ v.T - a)) < 1e-12

    @settings(max_examples=25)
    @given(seed=st.integers(0, 10_000))
    def test_matches_numpy_eigh(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 7))
        q, _ = np.linalg.qr(rng.normal(size=(n, n)))
        lams = np.sort(rng.uniform(0.5, 9.0, size=n))
        a = q @ np.diag(lams) @ q.T
        a = 0.5 * (a + a.T)
        spec = eigenpairs(SymmetricMatrix(entries=tuple(map(tuple, a))), n)
        ref = np.linalg.eigvalsh(a)
        assert spec.eigenvalues == pytest.approx(ref, rel=1e-9, abs=1e-12)


class TestLaplacian:
    def test_analytic_spectrum(self):
        desc = DirichletLaplacian1D(length=math.pi, grid_points=2049)
        spec = eigenpairs(desc, 3)
        assert spec.eigenvalues == pytest.approx([1.0, 4.0, 9.0], rel=1e-15)

    def test_grid_constraints(self):
        with pytest.raises(BadPayload):
            DirichletLaplacian1D(length=1.0, grid_points=1024)  # even
        with pytest.raises(BadPayload):
            DirichletLaplacian1D(length=1.0, grid_points=513)  # too coarse
        with pytest.raises(BadPayload):
            DirichletLaplacian1D(length=-1.0)

    def test_mode_budget_tied_to_grid(self):
        desc = DirichletLaplacian1D(length=1.0, grid_points=1025)
        eigenpairs(desc, (1025 - 1) // 8)
        with pytest.raises(BadPayload):
            eigenpairs(desc, (1025 - 1) // 8 + 1)


class TestProjection:
    def test_coefficients_passthrough_and_truncation(self):
        desc = ExplicitSpectrum(eigenvalues=(1.0, 2.0, 3.0))
        phi = InitialData.coefficients((0.5, -0.25, 0.125))
        assert np.array_equal(project(desc, 2, phi), [0.5, -0.25])

    def test_short_coefficients_rejected(self):
        desc = ExplicitSpectrum(eigenvalues=(1.0, 2.0, 3.0))
        with pytest.raises(LengthMismatch):
            project(desc, 3, InitialData.coefficients((1.0,)))

    def test_vector_projection_preserves_norm(self):
        rng = np.random.default_rng(3)
        q, _ = np.linalg.qr(rng.normal(size=(4, 4)))
        a = q @ np.diag([1.0, 2.0, 3.0, 4.0]) @ q.T
        a = 0.5 * (a + a.T)
        desc = SymmetricMatrix(entries=tuple(map(tuple, a)))
        v = rng.normal(size=4)
        coeffs = project(desc, 4, InitialData.vector(tuple(v)))
        assert np.sum(coeffs ** 2) == pytest.approx(np.sum(v ** 2), rel=1e-13)

    def test_vector_wrong_length(self):
        desc = SymmetricMatrix(entries=((2.0, 0.0), (0.0, 3.0)))
        with pytest.raises(GridMismatch):
            project(desc, 2, InitialData.vector((1.0, 2.0, 3.0)))

    def test_vector_needs_matrix_operator(self):
        with pytest.raises(BadPayload):
            project(ExplicitSpectrum(eigenvalues=(1.0,)), 1,
                    InitialData.vector((1.0,)))

    def test_sine_sample_projection(self):
        # phi(x) = sin(x) on [0, pi] is exactly the first eigenfunction up
        # to normalization: projection = sqrt(pi/2) on mode 1, 0 elsewhere.
        desc = DirichletLaplacian1D(length=math.pi, grid_points=2049)
        x = np.linspace(0.0, math.pi, 2049)
        phi = InitialData.samples(tuple(np.sin(x)))
        coeffs = project(desc, 3, phi)
        assert coeffs[0] == pytest.approx(math.sqrt(math.pi / 2.0), rel=1e-10)
        assert abs(coeffs[1]) < 1e-12 and abs(coeffs[2]) < 1e-12

    def test_samples_wrong_grid(self):
        desc = DirichletLaplacian1D(length=math.pi, grid_points=2049)
        with pytest.raises(GridMismatch):
            project(desc, 2, InitialData.samples(tuple(np.zeros(1025))))


def test_simpson_weights_integrate_sine():
    n = 2049
    h = math.pi / (n - 1)
    w = simpson_weights(n, h)
    x = np.linspace(0.0, math.pi, n)
    assert float(w @ np.sin(x)) == pytest.approx(2.0, rel=1e-12)
    with pytest.raises(BadPayload):
        simpson_weights(4, 0.1)


def test_apply_A_scales_by_eigenvalue():
    desc = ExplicitSpectrum(eigenvalues=(1.0, 2.0, 3.0))
    out = apply_A(desc, 3, np.array([1.0, 1.0, 1.0]))
    assert np.array_equal(out, [1.0, 2.0, 3.0])
    with pytest.raises(LengthMismatch):
        apply_A(desc, 3, np.array([1.0]))
