"""Index algebra for rank-2 and rank-4 tensors in 3-D Euclidean space.

Stiffness tensors are stored as dense ``(3, 3, 3, 3)`` float arrays satisfying
the minor symmetries ``c[i,j,k,l] = c[j,i,k,l] = c[i,j,l,k]`` and the major
symmetry ``c[i,j,k,l] = c[k,l,i,j]``.  The 6x6 Voigt form uses the index map
1=11, 2=22, 3=33, 4=23, 5=31, 6=12 and carries tensor components one-to-one,
with no engineering factors of 2 or 4 anywhere.  Strain and stress only ever
appear as full symmetric 3x3 arrays, so Voigt strain conventions never arise.

All functions are pure and all returned arrays are fresh; nothing here holds
shared mutable state, so every operation is safe to call concurrently.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "IDENTITY3",
    "LEVI_CIVITA",
    "VOIGT_PAIRS",
    "SymmetryViolation",
    "voigt_to_full",
    "full_to_voigt",
    "validate_symmetries",
    "symmetrize_orbit",
    "eig_sym3",
    "degenerate_pairs",
    "frobenius_norm4",
    "frobenius_inner4",
    "frobenius_norm2",
    "unit_vector",
    "rotate2",
    "rotate4",
    "rotation_from_quaternion",
    "random_rotation",
    "isotropic_stiffness",
    "cubic_stiffness",
]

IDENTITY3 = np.eye(3)

# Voigt index -> symmetric index pair, zero-based: 1=11, 2=22, 3=33, 4=23, 5=31, 6=12
VOIGT_PAIRS = ((0, 0), (1, 1), (2, 2), (1, 2), (2, 0), (0, 1))


def _levi_civita() -> np.ndarray:
    e = np.zeros((3, 3, 3))
    e[0, 1, 2] = e[1, 2, 0] = e[2, 0, 1] = 1.0
    e[0, 2, 1] = e[2, 1, 0] = e[1, 0, 2] = -1.0
    return e


LEVI_CIVITA = _levi_civita()
LEVI_CIVITA.setflags(write=False)
IDENTITY3.setflags(write=False)


class SymmetryViolation(ValueError):
    """Raised when a raw 3^4 array is not a stiffness tensor within tolerance.

    Attributes
    ----------
    index : tuple[int, int, int, int]
        Index tuple with the largest deviation from its symmetry orbit.
    magnitude : float
        Absolute size of that deviation.
    """

    def __init__(self, index: tuple[int, int, int, int], magnitude: float, tol: float):
        self.index = index
        self.magnitude = magnitude
        super().__init__(
            f"symmetry violation at index {index}: correction {magnitude:.3e} "
            f"exceeds tolerance {tol:.3e}"
        )


def voigt_to_full(m: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Expand a symmetric 6x6 Voigt matrix to the full rank-4 stiffness tensor.

    Parameters
    ----------
    m : ndarray, shape (6, 6)
        Symmetric matrix of stiffness components.
    tol : float
        Relative asymmetry tolerance on the input.

    Returns
    -------
    ndarray, shape (3, 3, 3, 3)
        Tensor satisfying minor and major symmetries exactly.

    Raises
    ------
    SymmetryViolation
        If ``m`` deviates from symmetry by more than ``tol`` (relative to the
        largest entry); the offending Voigt pair is reported one-based.
    """
    m = np.asarray(m, dtype=float)
    if m.shape != (6, 6):
        raise ValueError(f"expected a 6x6 matrix, got shape {m.shape}")
    scale = max(float(np.abs(m).max()), 1.0)
    asym = np.abs(m - m.T)
    if asym.max() > tol * scale:
        I, J = np.unravel_index(int(asym.argmax()), (6, 6))
        raise SymmetryViolation((I + 1, J + 1, 0, 0), float(asym[I, J]), tol * scale)
    m = 0.5 * (m + m.T)
    c = np.empty((3, 3, 3, 3))
    for I, (i, j) in enumerate(VOIGT_PAIRS):
        for J, (k, l) in enumerate(VOIGT_PAIRS):
            v = m[I, J]
            c[i, j, k, l] = v
            c[j, i, k, l] = v
            c[i, j, l, k] = v
            c[j, i, l, k] = v
    return c


def full_to_voigt(c: np.ndarray) -> np.ndarray:
    """Pack a stiffness tensor into its 6x6 Voigt matrix (exact inverse of
    :func:`voigt_to_full`)."""
    c = np.asarray(c, dtype=float)
    m = np.empty((6, 6))
    for I, (i, j) in enumerate(VOIGT_PAIRS):
        for J, (k, l) in enumerate(VOIGT_PAIRS):
            m[I, J] = c[i, j, k, l]
    return m


def symmetrize_orbit(c: np.ndarray) -> np.ndarray:
    """Average a 3^4 array over its 8-element minor/major symmetry orbit."""
    c = np.asarray(c, dtype=float)
    minor = 0.25 * (
        c
        + np.einsum("jikl->ijkl", c)
        + np.einsum("ijlk->ijkl", c)
        + np.einsum("jilk->ijkl", c)
    )
    return 0.5 * (minor + np.einsum("klij->ijkl", minor))


def validate_symmetries(c: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Project a raw 3^4 array onto the stiffness symmetry class, or reject it.

    The projection averages each component over its 8-element symmetry orbit
    (both minor swaps and the major pair swap).  Acceptance requires the
    largest single-component correction to be at most ``tol`` relative to the
    largest entry of the input.

    Returns the exactly symmetric projected tensor.  Raises
    :class:`SymmetryViolation` naming the worst index tuple otherwise.
    """
    c = np.asarray(c, dtype=float)
    if c.shape != (3, 3, 3, 3):
        raise ValueError(f"expected shape (3, 3, 3, 3), got {c.shape}")
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    projected = symmetrize_orbit(c)
    corr = np.abs(c - projected)
    scale = max(float(np.abs(c).max()), 1.0)
    worst = float(corr.max())
    if worst > tol * scale:
        idx = np.unravel_index(int(corr.argmax()), c.shape)
        raise SymmetryViolation(tuple(int(i) for i in idx), worst, tol * scale)
    return projected


_JACOBI_SWEEPS = 50
_JACOBI_TOL = 1e-13


def eig_sym3(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and eigenvectors of a symmetric 3x3 matrix.

    Uses cyclic Jacobi rotations: branch-free and robust for nearly degenerate
    spectra.  Convergence is declared when the off-diagonal Frobenius norm
    drops below ``1e-13 * ||a||``, with a hard cap of 50 sweeps.

    Returns
    -------
    (values, vectors)
        ``values`` sorted descending; ``vectors[:, k]`` is the unit eigenvector
        for ``values[k]`` and the columns form an orthonormal frame.
    """
    a = np.asarray(a, dtype=float)
    if a.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {a.shape}")
    A = 0.5 * (a + a.T)
    V = np.eye(3)
    norm = float(np.linalg.norm(A))
    if norm == 0.0:
        return np.zeros(3), V
    for _ in range(_JACOBI_SWEEPS):
        off = np.sqrt(2.0 * (A[0, 1] ** 2 + A[0, 2] ** 2 + A[1, 2] ** 2))
        if off <= _JACOBI_TOL * norm:
            break
        for p, q in ((0, 1), (0, 2), (1, 2)):
            apq = A[p, q]
            if apq == 0.0:
                continue
            theta = (A[q, q] - A[p, p]) / (2.0 * apq)
            t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
            if theta == 0.0:
                t = 1.0
            cth = 1.0 / np.sqrt(t * t + 1.0)
            sth = t * cth
            J = np.eye(3)
            J[p, p] = J[q, q] = cth
            J[p, q] = sth
            J[q, p] = -sth
            A = J.T @ A @ J
            V = V @ J
    order = np.argsort(A.diagonal())[::-1]
    values = A.diagonal()[order].copy()
    vectors = V[:, order].copy()
    # canonical sign: largest-magnitude component of each eigenvector positive
    for k in range(3):
        j = int(np.abs(vectors[:, k]).argmax())
        if vectors[j, k] < 0:
            vectors[:, k] = -vectors[:, k]
    return values, vectors


def degenerate_pairs(values: np.ndarray, scale: float, tol: float = 1e-9) -> list[tuple[int, int]]:
    """Index pairs (i, j), i < j, whose eigenvalues coincide within ``tol * scale``."""
    hits = []
    for i in range(3):
        for j in range(i + 1, 3):
            if abs(values[i] - values[j]) <= tol * max(scale, 0.0):
                hits.append((i, j))
    return hits


def frobenius_norm4(c: np.ndarray) -> float:
    """Frobenius norm over all 81 components of a rank-4 tensor."""
    return float(np.sqrt(np.einsum("ijkl,ijkl->", c, c)))


def frobenius_inner4(a: np.ndarray, b: np.ndarray) -> float:
    """Full 81-term contraction ``a : b`` of two rank-4 tensors."""
    return float(np.einsum("ijkl,ijkl->", a, b))


def frobenius_norm2(a: np.ndarray) -> float:
    return float(np.sqrt(np.einsum("ij,ij->", a, a)))


def unit_vector(n, tol: float = 1e-12) -> np.ndarray:
    """Return ``n`` as a float array, requiring ``|n| = 1`` within ``tol``."""
    n = np.asarray(n, dtype=float).reshape(3)
    norm = float(np.linalg.norm(n))
    if abs(norm - 1.0) > tol:
        raise ValueError(f"not a unit vector: |n| = {norm!r}")
    return n


def rotate2(a: np.ndarray, o: np.ndarray) -> np.ndarray:
    """Rotate a rank-2 tensor: ``a'_{ij} = O_ia O_jb a_{ab}``."""
    return np.einsum("ia,jb,ab->ij", o, o, a)


def rotate4(c: np.ndarray, o: np.ndarray) -> np.ndarray:
    """Rotate a rank-4 tensor: ``c'_{ijkl} = O_ia O_jb O_kc O_ld c_{abcd}``."""
    return np.einsum("ia,jb,kc,ld,abcd->ijkl", o, o, o, o, c)


def rotation_from_quaternion(q) -> np.ndarray:
    """Proper rotation matrix from a (not necessarily normalized) quaternion."""
    w, x, y, z = np.asarray(q, dtype=float) / np.linalg.norm(q)
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    """Uniform random rotation, sampled via a Gaussian quaternion."""
    q = rng.normal(size=4)
    while np.linalg.norm(q) < 1e-8:  # pragma: no cover - astronomically rare
        q = rng.normal(size=4)
    return rotation_from_quaternion(q)


def isotropic_stiffness(lam: float, mu: float) -> np.ndarray:
    """Stiffness tensor of an isotropic solid from its two Lame moduli."""
    g = IDENTITY3
    return (
        lam * np.einsum("ij,kl->ijkl", g, g)
        + mu * (np.einsum("ik,jl->ijkl", g, g) + np.einsum("il,jk->ijkl", g, g))
    )


def cubic_stiffness(c11: float, c12: float, c44: float) -> np.ndarray:
    """Stiffness tensor of a cubic solid from its three Voigt constants."""
    m = np.zeros((6, 6))
    m[:3, :3] = c12
    np.fill_diagonal(m[:3, :3], c11)
    m[3, 3] = m[4, 4] = m[5, 5] = c44
    return voigt_to_full(m)
