import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_hermitian(rng, n, complex_=False):
    x = rng.normal(size=(n, n))
    if complex_:
        x = x + 1j * rng.normal(size=(n, n))
    return (x + x.conj().T) / 2


def random_unit_vectors(rng, dim, count, complex_=False):
    x = rng.normal(size=(dim, count))
    if complex_:
        x = x + 1j * rng.normal(size=(dim, count))
    return x / np.linalg.norm(x, axis=0)
