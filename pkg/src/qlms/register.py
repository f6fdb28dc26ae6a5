"""Two-register statevector engine.

The joint state of a phase register (m qubits, M = 2^m) and a data register
(n qubits, N = 2^n) is kept as an ``M x N`` array: row ``j`` is the data
sub-block belonging to phase index ``j``, so the flat global index is
``j * N + i``. Phase-register qubit ``q`` is bit ``q`` of ``j`` (q = 0 is the
least significant; the leftmost qubit is the most significant). Register
operators act on rows or columns of that array; no ``MN x MN`` matrix is
ever formed.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .evolution import EvolutionOperator
from .linalg import PreconditionError

PHASE = "phase"
DATA = "data"


@dataclass(frozen=True)
class RegisterLayout:
    m: int
    n: int

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise PreconditionError(f"need m >= 1 and n >= 1, got m={self.m}, n={self.n}")

    @property
    def M(self) -> int:
        return 1 << self.m

    @property
    def N(self) -> int:
        return 1 << self.n

    @classmethod
    def for_dimension(cls, m: int, N: int) -> "RegisterLayout":
        n = int(N).bit_length() - 1
        if N < 2 or (1 << n) != N:
            raise PreconditionError(f"data dimension must be a power of two >= 2, got {N}")
        return cls(m, n)


class StateVector:
    """Unit-norm amplitudes over ``|phase>|data>``."""

    def __init__(self, layout: RegisterLayout, blocks):
        blocks = np.asarray(blocks, dtype=complex)
        if blocks.shape != (layout.M, layout.N):
            blocks = blocks.reshape(layout.M, layout.N)
        self.layout = layout
        self.blocks = blocks

    @property
    def amplitudes(self) -> np.ndarray:
        return self.blocks.reshape(-1)

    def norm(self) -> float:
        return float(np.linalg.norm(self.blocks))

    def copy(self) -> "StateVector":
        return StateVector(self.layout, self.blocks.copy())

    def __repr__(self):
        return f"StateVector(m={self.layout.m}, n={self.layout.n})"


def init_zero(layout: RegisterLayout) -> StateVector:
    b = np.zeros((layout.M, layout.N), dtype=complex)
    b[0, 0] = 1.0
    return StateVector(layout, b)


def apply_on_register(s: StateVector, A, which: str = DATA) -> StateVector:
    """Apply ``A (x) I`` (phase) or ``I (x) A`` (data)."""
    A = np.asarray(A)
    size = s.layout.M if which == PHASE else s.layout.N
    if A.shape != (size, size):
        raise PreconditionError(f"operator of shape {A.shape} does not fit the {which} register ({size})")
    if which == PHASE:
        return StateVector(s.layout, A @ s.blocks)
    if which == DATA:
        return StateVector(s.layout, s.blocks @ A.T)
    raise ValueError(f"unknown register {which!r}")


def apply_controlled_powers(s: StateVector, U) -> StateVector:
    """Row ``j`` of the state receives ``U^j``.

    Done qubit by qubit: rows with bit ``k`` set get ``U^(2^k)`` from the
    squaring cache.
    """
    if not isinstance(U, EvolutionOperator):
        U = EvolutionOperator(np.asarray(U, dtype=complex))
    if U.dim != s.layout.N:
        raise PreconditionError(f"evolution of order {U.dim} does not fit a data register of size {s.layout.N}")
    m = s.layout.m
    out = s.blocks.copy()
    idx = np.arange(s.layout.M)
    for k, P in enumerate(U.ensure_powers(m)):
        rows = (idx >> k) & 1 == 1
        out[rows] = out[rows] @ P.T
    return StateVector(s.layout, out)


def apply_controlled_powers_inverse(s: StateVector, U) -> StateVector:
    if not isinstance(U, EvolutionOperator):
        U = EvolutionOperator(np.asarray(U, dtype=complex))
    m = s.layout.m
    out = s.blocks.copy()
    idx = np.arange(s.layout.M)
    for k, P in enumerate(U.ensure_powers(m)):
        rows = (idx >> k) & 1 == 1
        out[rows] = out[rows] @ P.conj()
    return StateVector(s.layout, out)


def qft_matrix(M: int) -> np.ndarray:
    """``F[j, k] = exp(+i 2 pi j k / M) / sqrt(M)``."""
    j = np.arange(M)
    return np.exp(2j * np.pi * np.outer(j, j) / M) / np.sqrt(M)


def qft(s: StateVector, which: str = PHASE) -> StateVector:
    if which != PHASE:
        raise ValueError("qft is only defined on the phase register")
    return StateVector(s.layout, np.fft.ifft(s.blocks, axis=0, norm="ortho"))


def inverse_qft(s: StateVector, which: str = PHASE) -> StateVector:
    if which != PHASE:
        raise ValueError("inverse_qft is only defined on the phase register")
    return StateVector(s.layout, np.fft.fft(s.blocks, axis=0, norm="ortho"))


def register_probabilities(s: StateVector, which: str = PHASE) -> np.ndarray:
    p = np.abs(s.blocks) ** 2
    return p.sum(axis=1) if which == PHASE else p.sum(axis=0)


def data_register_fidelity(s: StateVector, target) -> float:
    """``sqrt(<t| rho_data |t>)`` for the reduced data-register state."""
    t = np.asarray(target, dtype=complex).reshape(-1)
    if abs(np.linalg.norm(t) - 1.0) > 1e-10:
        raise PreconditionError("fidelity target must be a unit vector")
    val = float(np.linalg.norm(s.blocks @ t.conj()))
    return min(val, 1.0)


def hadamard_p0(s: StateVector, qubit: int) -> float:
    """Exact probability of reading 0 on phase qubit ``qubit`` after a Hadamard."""
    m = s.layout.m
    if not 0 <= qubit < m:
        raise PreconditionError(f"qubit {qubit} outside a {m}-qubit phase register")
    b = s.blocks.reshape(1 << (m - 1 - qubit), 2, 1 << qubit, s.layout.N)
    plus = (b[:, 0] + b[:, 1]) / np.sqrt(2.0)
    return min(float(np.sum(np.abs(plus) ** 2)), 1.0)


def hadamard_qubit_estimate(s: StateVector, qubit: int, shots: int, rng) -> tuple[float, float]:
    """``(a / shots, exact P(0))`` with ``a ~ Binomial(shots, P(0))``.

    The state is not touched; the Hadamard is applied to a view.
    """
    if shots < 1:
        raise PreconditionError("shots must be >= 1")
    p = hadamard_p0(s, qubit)
    a = int(rng.binomial(shots, p))
    return a / shots, p
