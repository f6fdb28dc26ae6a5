"""Dense complex kernels and spectral oracles.

Everything here is a pure function of its inputs. Matrices are plain
``numpy.ndarray`` objects of dtype ``complex128``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

UNIT_TOL = 1e-12
UNITARY_TOL = 1e-10
HERMITIAN_TOL = 1e-10
# singular values at or below RANK_RTOL * sigma_max count as zero
RANK_RTOL = 1e-10


class PreconditionError(ValueError):
    """An input violates a documented precondition."""


def as_complex_vector(x) -> np.ndarray:
    v = np.asarray(x, dtype=complex)
    if v.ndim == 2 and 1 in v.shape:
        v = v.reshape(-1)
    if v.ndim != 1 or v.size == 0:
        raise PreconditionError(f"expected a non-empty vector, got shape {v.shape}")
    return v


def is_unit(x, tol: float = UNIT_TOL) -> bool:
    return abs(np.linalg.norm(x) - 1.0) <= tol


def is_unitary(A, tol: float = UNITARY_TOL) -> bool:
    """``max |A^H A - I| <= tol``."""
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        return False
    return float(np.max(np.abs(A.conj().T @ A - np.eye(A.shape[0])))) <= tol


def is_hermitian(A, tol: float = HERMITIAN_TOL) -> bool:
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        return False
    return float(np.max(np.abs(A - A.conj().T))) <= tol


def has_orthonormal_columns(A, tol: float = UNITARY_TOL) -> bool:
    A = np.asarray(A)
    return float(np.max(np.abs(A.conj().T @ A - np.eye(A.shape[1])))) <= tol


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenpairs of a Hermitian matrix, eigenvalues ascending.

    ``eigenvectors[:, i]`` belongs to ``eigenvalues[i]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        Q = self.eigenvectors
        return (Q * self.eigenvalues) @ Q.conj().T

    def principal(self, rtol: float = RANK_RTOL) -> np.ndarray:
        """Eigenvectors whose eigenvalue magnitude exceeds ``rtol * max|lambda|``."""
        lam = np.abs(self.eigenvalues)
        top = lam.max() if lam.size else 0.0
        if top == 0.0:
            return self.eigenvectors[:, :0]
        return self.eigenvectors[:, lam > rtol * top]


def eig_hermitian(A) -> SpectralDecomposition:
    A = np.asarray(A, dtype=complex)
    if not is_hermitian(A):
        raise PreconditionError("eig_hermitian needs a Hermitian matrix")
    # symmetrize so eigh sees exactly Hermitian data
    lam, Q = np.linalg.eigh(0.5 * (A + A.conj().T))
    return SpectralDecomposition(lam, Q)


def svd_small(X):
    """Thin SVD ``X = Q @ diag(s) @ P^H``.

    Returns ``(Q, s, P)`` with ``s`` descending. Each singular pair is
    sign-normalised so the largest-magnitude entry of every column of ``Q``
    is real positive, which makes the output deterministic.
    """
    X = np.asarray(X)
    if X.ndim == 1:
        X = X[:, None]
    Q, s, Ph = np.linalg.svd(X, full_matrices=False)
    P = Ph.conj().T
    for i in range(s.size):
        k = int(np.argmax(np.abs(Q[:, i])))
        ph = Q[k, i] / abs(Q[k, i])
        Q[:, i] = Q[:, i] / ph
        P[:, i] = P[:, i] / np.conj(ph)
    return Q, s, P


def numerical_rank(s, rtol: float = RANK_RTOL) -> int:
    s = np.asarray(s)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.count_nonzero(s > rtol * s.max()))


def householder_unitary(x) -> np.ndarray:
    """Unitary whose first column is exactly ``x``.

    For ``x`` with a real first entry this is the reflection about
    ``u = (x - e1)/|x - e1|``: Hermitian, an involution, and mapping
    ``e1 <-> x``. A complex first entry ``|x1| e^{i phi}`` gets the reflector
    for ``e^{-i phi} x`` followed by ``diag(e^{i phi}, 1, ..., 1)``, which is
    still unitary but no longer Hermitian.
    """
    x = as_complex_vector(x)
    if not is_unit(x):
        raise PreconditionError(f"householder_unitary needs a unit vector, |x| = {np.linalg.norm(x)!r}")
    n = x.size
    x1 = x[0]
    phase = 1.0 + 0j
    if abs(x1) > 0 and abs(x1.imag) > 0:
        phase = np.exp(1j * np.angle(x1))
        x = x / phase
        x1 = complex(abs(x1), 0.0)
    d = x.copy()
    tail = float(np.vdot(x[1:], x[1:]).real)
    if x1.real > 0:
        # x1 - 1 without cancellation for unit x
        d[0] = -tail / (1.0 + x1.real)
    else:
        d[0] = x1 - 1.0
    dn = np.sqrt(abs(d[0]) ** 2 + tail)
    if dn < 1e-14:
        H = np.eye(n, dtype=complex)
    else:
        u = d / dn
        H = np.eye(n, dtype=complex) - 2.0 * np.outer(u, u.conj())
    if phase != 1.0:
        H[:, 0] *= phase
    return H


def unitary_exponential(W, t: float = 1.0) -> np.ndarray:
    """``exp(i 2 pi W t)`` for Hermitian ``W`` via its eigendecomposition."""
    sd = eig_hermitian(W)
    Q = sd.eigenvectors
    return (Q * np.exp(2j * np.pi * sd.eigenvalues * t)) @ Q.conj().T
