"""Evolution operators ``U = exp(i 2 pi W t)`` and their power caches.

``U`` is built either exactly from the spectrum of ``W`` or, for
``W = sum_j x_j x_j^H``, by symmetric (Strang) splitting into rank-one
exponentials, each of which is a diagonal phase conjugated by a Householder
unitary.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    PreconditionError,
    as_complex_vector,
    eig_hermitian,
    householder_unitary,
    is_unitary,
    unitary_exponential,
)


class PhaseWrapWarning(UserWarning):
    """Largest eigenphase of ``W t`` reaches a full turn and aliases."""


@dataclass(frozen=True)
class TrotterPlan:
    """Columns ``x_j`` of ``W = X X^H`` plus time and slice count."""

    columns: tuple
    t: float = 1.0
    steps: int = 1

    @classmethod
    def from_matrix(cls, X, t: float = 1.0, steps: int = 1) -> "TrotterPlan":
        X = np.asarray(X, dtype=complex)
        if X.ndim == 1:
            X = X[:, None]
        return cls(tuple(X[:, j].copy() for j in range(X.shape[1])), t, steps)

    def factors(self) -> list[tuple[int, float]]:
        """Ordered ``(column index, time)`` pairs for one slice, leftmost first.

        The last column is split off first, so two columns give
        ``[(1, t/2), (0, t), (1, t/2)]``. Always ``2 * kappa - 1`` entries.
        """
        tau = self.t / self.steps

        def rec(k: int) -> list[tuple[int, float]]:
            if k == 0:
                return [(0, tau)]
            half = (k, tau / 2)
            return [half] + rec(k - 1) + [half]

        return rec(len(self.columns) - 1)


@dataclass(eq=False)
class EvolutionOperator:
    """Dense unitary of order N with a cache of ``U^(2^k)``, k = 0 .. m-1."""

    U: np.ndarray
    powers: list = field(default_factory=list)
    provenance: str = "exact"

    @property
    def dim(self) -> int:
        return self.U.shape[0]

    def ensure_powers(self, m: int) -> list:
        if not self.powers:
            self.powers.append(self.U)
        while len(self.powers) < m:
            self.powers.append(self.powers[-1] @ self.powers[-1])
        return self.powers[:m]

    def power(self, j: int) -> np.ndarray:
        """``U^j`` assembled from the squaring cache."""
        bits = max(int(j).bit_length(), 1)
        pw = self.ensure_powers(bits)
        out = np.eye(self.dim, dtype=complex)
        for k in range(bits):
            if (j >> k) & 1:
                out = pw[k] @ out
        return out


def power_cache(U, m: int) -> EvolutionOperator:
    U = np.asarray(U, dtype=complex)
    if not is_unitary(U):
        raise PreconditionError("power_cache needs a unitary matrix")
    op = EvolutionOperator(U)
    op.ensure_powers(m)
    return op


def rank_one_exponential(x, t: float) -> np.ndarray:
    """``exp(i 2 pi t x x^H)`` as ``H diag(e^{i 2 pi t |x|^2}, 1, ...) H^H``."""
    x = as_complex_vector(x)
    nrm = np.linalg.norm(x)
    if nrm == 0:
        raise PreconditionError("rank_one_exponential needs a nonzero vector")
    H = householder_unitary(x / nrm)
    ph = np.ones(x.size, dtype=complex)
    ph[0] = np.exp(2j * np.pi * t * nrm**2)
    return (H * ph) @ H.conj().T


def strang_split(plan: TrotterPlan) -> EvolutionOperator:
    if not plan.columns:
        raise PreconditionError("Trotter plan has no columns")
    if plan.steps < 1:
        raise PreconditionError("Trotter plan needs steps >= 1")
    n = plan.columns[0].size
    S = np.eye(n, dtype=complex)
    for j, tau in plan.factors():
        S = S @ rank_one_exponential(plan.columns[j], tau)
    S = np.linalg.matrix_power(S, plan.steps)
    return EvolutionOperator(S, provenance=f"trotter(r={plan.steps})")


def exact_evolution(W, t: float = 1.0) -> EvolutionOperator:
    check_phase_range(W, t)
    return EvolutionOperator(unitary_exponential(W, t), provenance="exact")


def check_phase_range(W, t: float = 1.0) -> bool:
    """False (plus a PhaseWrapWarning) when ``lambda_max(W) * |t| >= 1``."""
    lam = eig_hermitian(W).eigenvalues
    top = float(np.max(np.abs(lam))) * abs(t)
    if top >= 1.0:
        warnings.warn(
            f"largest eigenphase lambda*t = {top:.4g} >= 1 wraps around", PhaseWrapWarning, stacklevel=2
        )
        return False
    return True
