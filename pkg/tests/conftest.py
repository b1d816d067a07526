import numpy as np
import pytest


def random_symmetric(n, rng, scale=1.0):
    a = rng.normal(size=(n, n)) * scale
    return 0.5 * (a + a.T)


def random_orthogonal(n, rng):
    """Orthogonal matrix composed from Givens rotations (reproducible, no QR)."""
    q = np.eye(n)
    for i in range(n - 1):
        for j in range(i + 1, n):
            ang = rng.uniform(0.0, 2.0 * np.pi)
            c, s = np.cos(ang), np.sin(ang)
            g = np.eye(n)
            g[i, i] = g[j, j] = c
            g[i, j], g[j, i] = s, -s
            q = q @ g
    return q


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
