"""Shared generators and independent brute-force oracles.

The oracles here deliberately avoid the library's einsum-based code paths:
they loop over explicit index ranges so that agreement with the library is a
genuine cross-check, not a tautology.
"""

import itertools

import numpy as np
import pytest

from cauchykit.tensor_core import voigt_to_full


def random_voigt(rng, scale=1.0):
    m = rng.uniform(-scale, scale, (6, 6))
    return 0.5 * (m + m.T)


def random_stiffness(rng, scale=1.0):
    return voigt_to_full(random_voigt(rng, scale))


def random_spd_voigt(rng, scale=1.0):
    b = rng.uniform(-scale, scale, (6, 6))
    return b @ b.T + 0.05 * scale * np.eye(6)


def random_unit(rng):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def random_symmetric3(rng, scale=1.0, traceless=False):
    a = rng.uniform(-scale, scale, (3, 3))
    a = 0.5 * (a + a.T)
    if traceless:
        a -= np.trace(a) / 3.0 * np.eye(3)
    return a


# ---------------------------------------------------------------- oracles


def levi_civita_value(i, j, k):
    return {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1,
            (0, 2, 1): -1, (2, 1, 0): -1, (1, 0, 2): -1}.get((i, j, k), 0)


def orbit_average_oracle(c):
    """Average over the 8 minor/major symmetry images, one entry at a time."""
    out = np.zeros((3, 3, 3, 3))
    for i, j, k, l in itertools.product(range(3), repeat=4):
        images = [
            c[i, j, k, l], c[j, i, k, l], c[i, j, l, k], c[j, i, l, k],
            c[k, l, i, j], c[l, k, i, j], c[k, l, j, i], c[l, k, j, i],
        ]
        out[i, j, k, l] = sum(images) / 8.0
    return out


def full_symmetrization_oracle(c):
    """Average over all 24 index permutations."""
    out = np.zeros((3, 3, 3, 3))
    for perm in itertools.permutations(range(4)):
        out += np.transpose(c, perm)
    return out / 24.0


def delta_oracle(a):
    """delta[m,n] = (1/3) eps[m,i,l] eps[n,j,k] a[i,j,k,l] by explicit loops."""
    d = np.zeros((3, 3))
    for m, n in itertools.product(range(3), repeat=2):
        total = 0.0
        for i, j, k, l in itertools.product(range(3), repeat=4):
            total += (levi_civita_value(m, i, l) * levi_civita_value(n, j, k)
                      * a[i, j, k, l])
        d[m, n] = total / 3.0
    return d


def double_trace_oracle(c):
    """g_ij g_kl c[i,j,k,l] by explicit loops."""
    return sum(c[i, i, k, k] for i in range(3) for k in range(3))


def contract_nn_oracle(c, n, rho):
    """Christoffel tensor by explicit loops."""
    gamma = np.zeros((3, 3))
    for i, l in itertools.product(range(3), repeat=2):
        gamma[i, l] = sum(
            c[i, j, k, l] * n[j] * n[k]
            for j in range(3) for k in range(3)
        ) / rho
    return gamma


def inner4_oracle(a, b):
    return sum(
        a[i, j, k, l] * b[i, j, k, l]
        for i, j, k, l in itertools.product(range(3), repeat=4)
    )


def hexagonal_voigt(c11, c12, c13, c33, c44):
    """Transversely isotropic Voigt matrix (c66 forced to (c11 - c12)/2)."""
    m = np.zeros((6, 6))
    m[0, 0] = m[1, 1] = c11
    m[2, 2] = c33
    m[0, 1] = m[1, 0] = c12
    m[0, 2] = m[2, 0] = m[1, 2] = m[2, 1] = c13
    m[3, 3] = m[4, 4] = c44
    m[5, 5] = 0.5 * (c11 - c12)
    return m


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
