"""Classical Widrow-Hoff (LMS) linear autoassociator.

Batch matrix rule ``W <- W + eta (X - W X) X^H``. It keeps the eigenvectors
of ``X X^H`` and moves each eigenvalue ``lambda`` to ``1 - (1 - eta lambda)^j``
after ``j`` epochs, so for ``0 < eta <= 2 / lambda_max`` the weights tend to
the projector ``Q Q^H`` onto the principal subspace of ``X``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import PreconditionError, RANK_RTOL, eig_hermitian, numerical_rank, svd_small

CONVERGENCE_TOL = 1e-12


def _as_training(X) -> np.ndarray:
    X = np.asarray(X, dtype=complex)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2 or X.size == 0:
        raise PreconditionError(f"training matrix must be 2-D and non-empty, got shape {X.shape}")
    return X


def widrow_hoff_step(W_prev, X, eta: float) -> np.ndarray:
    X = _as_training(X)
    W_prev = np.asarray(W_prev, dtype=complex)
    N = X.shape[0]
    if W_prev.shape != (N, N):
        raise PreconditionError(f"weights of shape {W_prev.shape} do not match inputs of dimension {N}")
    return W_prev + eta * (X - W_prev @ X) @ X.conj().T


def eigenvalue_flattening(eigenvalues, eta: float, j: int) -> np.ndarray:
    """Closed-form eigenvalues ``1 - (1 - eta lambda)^j`` after ``j`` epochs."""
    if eta <= 0:
        raise PreconditionError("eta must be positive")
    lam = np.asarray(eigenvalues, dtype=float)
    return 1.0 - (1.0 - eta * lam) ** j


def principal_basis(X, rtol: float = RANK_RTOL) -> np.ndarray:
    """Orthonormal basis of the column space of ``X`` (left singular vectors)."""
    X = _as_training(X)
    Q, s, _ = svd_small(X)
    r = numerical_rank(s, rtol)
    if r == 0:
        raise PreconditionError("training matrix is zero")
    return Q[:, :r]


def limit_weights(X) -> np.ndarray:
    """``Q Q^H``, the fixed point of the learning rule."""
    Q = principal_basis(X)
    return Q @ Q.conj().T


def stability_bound(X) -> float:
    """Largest stable learning constant ``2 / lambda_max(X X^H)``."""
    X = _as_training(X)
    s = np.linalg.svd(X, compute_uv=False)
    return 2.0 / float(s[0] ** 2)


def network_output(X, x) -> tuple[np.ndarray, float]:
    """Trained-network response ``Q Q^H x`` and its squared norm ``P_f``."""
    Q = principal_basis(X)
    x = np.asarray(x, dtype=complex).reshape(-1)
    if x.size != Q.shape[0]:
        raise PreconditionError(f"input of dimension {x.size} does not match {Q.shape[0]}")
    y = Q @ (Q.conj().T @ x)
    return y, float(np.vdot(y, y).real)


@dataclass
class LearningRecord:
    epoch: int
    frobenius_error: float
    eigenvalues: np.ndarray  # Rayleigh quotients on the principal directions
    closed_form: np.ndarray


def train(X, eta: float, epochs: int, W0=None, stop_tol: float = CONVERGENCE_TOL):
    """Iterate the rule from ``W0`` (default zero).

    Returns ``(W, records)``. One record per epoch, starting with epoch 0.
    Stops early once ``|W_next - W|_F <= stop_tol``.
    """
    X = _as_training(X)
    if eta <= 0:
        raise PreconditionError("eta must be positive")
    N = X.shape[0]
    target = limit_weights(X)
    sd = eig_hermitian(X @ X.conj().T)
    keep = sd.eigenvalues > RANK_RTOL * max(sd.eigenvalues.max(), 0.0)
    lam = sd.eigenvalues[keep][::-1]
    dirs = sd.eigenvectors[:, keep][:, ::-1]

    def record(j, W):
        rq = np.real(np.einsum("ij,ik,kj->j", dirs.conj(), W, dirs))
        err = float(np.linalg.norm(W - target))
        return LearningRecord(j, err, rq, eigenvalue_flattening(lam, eta, j))

    W = np.zeros((N, N), dtype=complex) if W0 is None else np.asarray(W0, dtype=complex)
    records = [record(0, W)]
    for j in range(1, epochs + 1):
        W_next = widrow_hoff_step(W, X, eta)
        delta = np.linalg.norm(W_next - W)
        W = W_next
        records.append(record(j, W))
        if delta <= stop_tol:
            break
    return W, records
