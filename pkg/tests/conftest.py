import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def random_complex(rng, rows, cols=None):
    cols = rows if cols is None else cols
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_hermitian(rng, n):
    g = random_complex(rng, n)
    return (g + g.conj().T) / 2


def random_unitary(rng, n):
    q, r = np.linalg.qr(random_complex(rng, n))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_projection(rng, n, k):
    """Orthogonal projection of rank `k` onto a Haar-random subspace."""
    u = random_unitary(rng, n)[:, :k]
    return u @ u.conj().T


def near_projection(rng, p, eps):
    """Projection onto a small rotation of ``Ran p``."""
    h = random_hermitian(rng, p.shape[0])
    w, v = np.linalg.eigh(h)
    u = (v * np.exp(1j * eps * w / np.max(np.abs(w)))) @ v.conj().T
    return u @ p @ u.conj().T


@pytest.fixture
def rng():
    return np.random.default_rng(20260101)
