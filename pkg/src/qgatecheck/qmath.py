"""Small dense complex linear algebra for few-qubit operators.

Operators and states are plain :class:`numpy.ndarray` objects of dtype
``complex128``. Nothing here is meant to scale beyond a handful of qubits.
"""
from functools import reduce
from typing import Optional

import numpy as np

ATOL = 1e-12


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {m.shape}")
    return m


def tensor(*ops) -> np.ndarray:
    """
    Kronecker product of the arguments, first argument leftmost.

    ``tensor(a, b)`` has ``a[i, j] * b`` as its (i, j) block, so the first factor
    addresses the most significant index bits (the control qubit throughout this package).
    """
    if not ops:
        raise ValueError("tensor() needs at least one operand")
    return reduce(np.kron, (np.asarray(o, dtype=complex) for o in ops))


def adjoint(m: np.ndarray) -> np.ndarray:
    return np.conj(np.asarray(m, dtype=complex)).T


def hs_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Hilbert-Schmidt inner product Tr(a^dagger b)."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def hs_coefficient(basis_op: np.ndarray, target: np.ndarray) -> complex:
    """
    Expansion coefficient of ``target`` along a unitary basis operator.

    For an orthogonal basis of unitaries {L_i} with Tr(L_i^dagger L_j) = d delta_ij,
    ``target == sum_i hs_coefficient(L_i, target) * L_i``.

    :param basis_op: d x d unitary basis element.
    :param target: d x d operator to expand.
    :return: Tr(basis_op^dagger target) / d
    """
    basis_op, target = as_matrix(basis_op), as_matrix(target)
    if basis_op.shape[0] != basis_op.shape[1] or target.shape[0] != target.shape[1]:
        raise ValueError("hs_coefficient needs square matrices")
    return hs_inner(basis_op, target) / basis_op.shape[0]


def is_unitary(m: np.ndarray, atol: float = 1e-9) -> bool:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return bool(np.allclose(adjoint(m) @ m, np.eye(m.shape[0]), atol=atol, rtol=0))


def is_hermitian(m: np.ndarray, atol: float = 1e-10) -> bool:
    m = np.asarray(m, dtype=complex)
    return bool(np.allclose(m, adjoint(m), atol=atol, rtol=0))


def projector(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    return np.outer(psi, np.conj(psi))


def haar_states(dim: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """
    Draw ``n`` Haar-random pure states of dimension ``dim`` as the rows of an (n, dim) array.

    Normalized vectors of i.i.d. standard complex Gaussians are exactly unitarily invariant.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    z = rng.standard_normal((n, dim)) + 1j * rng.standard_normal((n, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def haar_state(dim: int, seed: Optional[int] = None) -> np.ndarray:
    """A single Haar-random unit vector; deterministic for a fixed seed."""
    return haar_states(dim, 1, np.random.default_rng(seed))[0]


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    # QR of a Ginibre matrix with the phase fix of Mezzadri (2007)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph
