import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(7)


def random_hermitian(rng, dim):
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (z + z.conj().T) / 2


def random_psd(rng, dim):
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return z @ z.conj().T


def random_unit(rng, dim):
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_pure_ensemble(rng, n, dim):
    from infocap import ensemble_from_vectors

    return ensemble_from_vectors(np.stack([random_unit(rng, dim) for _ in range(n)]))
