import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from infocap import linalg
from infocap.errors import (
    DimensionMismatchError,
    NonHermitianError,
    NonSquareError,
    NonUnitDiagonalError,
    NotPSDError,
)

from conftest import random_hermitian, random_psd


class TestHermitianEig:
    def test_identity(self):
        dec = linalg.hermitian_eig(np.eye(2))
        np.testing.assert_allclose(dec.eigenvalues, [1.0, 1.0])

    def test_diagonal_descending(self):
        dec = linalg.hermitian_eig(np.diag([3.0, -1.0]))
        np.testing.assert_allclose(dec.eigenvalues, [3.0, -1.0])
        # eigenvectors are the basis up to phase
        np.testing.assert_allclose(np.abs(dec.eigenvectors), np.eye(2), atol=1e-12)

    def test_reconstruction_oracle(self, rng):
        # independent oracle: rebuild V diag(w) V^dag and compare
        a = random_hermitian(rng, 5)
        dec = linalg.hermitian_eig(a)
        err = np.linalg.norm(dec.reconstruct() - a)
        assert err <= 1e-10 * max(1.0, np.linalg.norm(a))

    @settings(deadline=None, max_examples=40)
    @given(seed=st.integers(0, 10**6), dim=st.integers(1, 12))
    def test_reconstruction_and_unitarity_property(self, seed, dim):
        a = random_hermitian(np.random.default_rng(seed), dim)
        dec = linalg.hermitian_eig(a)
        assert np.all(np.diff(dec.eigenvalues) <= 1e-12)
        assert np.linalg.norm(dec.reconstruct() - a) <= 1e-10 * max(1.0, np.linalg.norm(a))
        v = dec.eigenvectors
        assert np.max(np.abs(v.conj().T @ v - np.eye(dim))) <= 1e-10

    def test_rejects_non_hermitian(self):
        with pytest.raises(NonHermitianError):
            linalg.hermitian_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_rejects_non_square(self):
        with pytest.raises(NonSquareError):
            linalg.hermitian_eig(np.zeros((2, 3)))


class TestMatFunc:
    def test_sqrt_identity(self):
        np.testing.assert_allclose(linalg.mat_sqrt(np.eye(3)), np.eye(3), atol=1e-12)

    def test_inv_sqrt_pseudo_inverse_on_kernel(self):
        out = linalg.mat_inv_sqrt(np.diag([4.0, 0.0]))
        np.testing.assert_allclose(out, np.diag([0.5, 0.0]), atol=1e-12)

    def test_sqrt_squaring_oracle(self, rng):
        a = random_psd(rng, 6)
        root = linalg.mat_sqrt(a)
        np.testing.assert_allclose(root @ root, a, atol=1e-9 * max(1.0, np.linalg.norm(a)))

    def test_rejects_indefinite(self):
        with pytest.raises(NotPSDError):
            linalg.mat_sqrt(np.diag([1.0, -1.0]))

    def test_clips_tiny_negatives(self):
        out = linalg.mat_sqrt(np.diag([1.0, -1e-10]))
        np.testing.assert_allclose(out, np.diag([1.0, 0.0]), atol=1e-5)


class TestMinEigenvalue:
    def test_diagonal(self):
        assert linalg.min_eigenvalue(np.diag([2.0, -3.0])) == pytest.approx(-3.0)

    def test_identity(self):
        assert linalg.min_eigenvalue(np.eye(4)) == pytest.approx(1.0)

    def test_rank_one_projector(self, rng):
        v = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        v /= np.linalg.norm(v)
        assert linalg.min_eigenvalue(np.outer(v, v.conj())) == pytest.approx(0.0, abs=1e-12)


class TestVectorsFromGram:
    def test_identity_gives_orthonormal(self):
        vecs = linalg.vectors_from_gram(np.eye(3))
        np.testing.assert_allclose(vecs.conj() @ vecs.T, np.eye(3), atol=1e-10)

    def test_two_by_two(self):
        g = np.array([[1.0, 0.5], [0.5, 1.0]])
        vecs = linalg.vectors_from_gram(g)
        assert vecs.shape == (2, 2)
        np.testing.assert_allclose(vecs.conj() @ vecs.T, g, atol=1e-10)

    def test_equiangular_gram_recheck(self):
        n, a = 4, 1.0 / 3.0
        g = (1 - a) * np.eye(n) + a * np.ones((n, n))
        vecs = linalg.vectors_from_gram(g)
        np.testing.assert_allclose(vecs.conj() @ vecs.T, g, atol=1e-8)
        np.testing.assert_allclose(np.linalg.norm(vecs, axis=1), 1.0, atol=1e-8)

    def test_singular_gram_drops_rank(self):
        g = np.ones((3, 3))
        vecs = linalg.vectors_from_gram(g)
        assert vecs.shape == (3, 1)
        np.testing.assert_allclose(vecs.conj() @ vecs.T, g, atol=1e-8)

    def test_rejects_indefinite(self):
        g = np.array([[1.0, 2.0], [2.0, 1.0]])
        with pytest.raises(NotPSDError):
            linalg.vectors_from_gram(g)

    def test_rejects_bad_diagonal(self):
        with pytest.raises(NonUnitDiagonalError):
            linalg.vectors_from_gram(np.diag([1.0, 2.0]))

    @settings(deadline=None, max_examples=30)
    @given(seed=st.integers(0, 10**6), n=st.integers(2, 8))
    def test_gram_roundtrip_property(self, seed, n):
        rng = np.random.default_rng(seed)
        v = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        g = v.conj() @ v.T
        vecs = linalg.vectors_from_gram((g + g.conj().T) / 2)
        np.testing.assert_allclose(vecs.conj() @ vecs.T, g, atol=1e-8)


class TestTensorOps:
    def test_kron_identities(self):
        np.testing.assert_allclose(linalg.kron(np.eye(2), np.eye(2)), np.eye(4))

    def test_partial_trace_maximally_entangled(self):
        phi = np.zeros(4, dtype=complex)
        phi[0] = phi[3] = 1 / np.sqrt(2)
        rho = np.outer(phi, phi.conj())
        reduced = linalg.partial_trace(rho, (2, 2), trace_out=0)
        np.testing.assert_allclose(reduced, np.eye(2) / 2, atol=1e-12)

    def test_trace_preservation(self, rng):
        a = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        for side in (0, 1):
            reduced = linalg.partial_trace(a, (2, 3), trace_out=side)
            assert abs(np.trace(reduced) - np.trace(a)) <= 1e-12 * max(1.0, abs(np.trace(a)))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            linalg.partial_trace(np.eye(5), (2, 3), trace_out=0)
