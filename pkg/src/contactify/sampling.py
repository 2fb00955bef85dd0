"""Seeded random generators for the objects the property suites sample over."""

import numpy as np
from scipy.stats import unitary_group


def rng_from(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_unitary(n, rng):
    if n == 1:
        return np.array([[np.exp(1j * rng.uniform(0, 2 * np.pi))]])
    return unitary_group.rvs(n, random_state=rng)


def random_hermitian(n, rng):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (z + z.conj().T)


def random_antihermitian(n, rng):
    return 1j * random_hermitian(n, rng)


def random_sphere_point(n, rng):
    x = rng.normal(size=n) + 1j * rng.normal(size=n)
    return x / np.linalg.norm(x)


def random_tangent(x, rng):
    """Gaussian vector projected onto the real tangent space of the sphere at ``x``."""
    v = rng.normal(size=x.size) + 1j * rng.normal(size=x.size)
    return v - np.real(np.vdot(x, v)) * x


def random_s2_point(rng):
    p = rng.normal(size=3)
    return p / np.linalg.norm(p)


def random_s2_tangent(p, rng):
    a = rng.normal(size=3)
    return a - np.dot(p, a) * p


def spectrum_matrix(values, multiplicities, U=None):
    """Hermitian matrix with the given eigenvalues and multiplicities, optionally conjugated by ``U``."""
    diag = np.repeat(np.asarray(values, dtype=float), multiplicities)
    mu = np.diag(diag).astype(complex)
    if U is not None:
        mu = U @ mu @ U.conj().T
        mu = 0.5 * (mu + mu.conj().T)
    return mu
