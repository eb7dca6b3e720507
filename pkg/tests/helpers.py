"""Shared random-state generators for the test suite."""

import numpy as np

from esdlab import XState, validate_density


def random_density(rng, dim):
    """Full-rank random state from a complex Gaussian square."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return validate_density(rho / rho.trace().real)


def random_unitary(rng, dim):
    """Haar-ish random unitary via QR with phase fixing."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_x_state(rng):
    a, b, c, d = rng.dirichlet(np.ones(4))
    radius = rng.uniform(0.0, np.sqrt(b * c))
    phase = rng.uniform(0.0, 2 * np.pi)
    return XState(a, b, c, d, radius * np.exp(1j * phase))
