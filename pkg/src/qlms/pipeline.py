"""Phase estimation plus amplitude amplification of the nonzero-eigenvalue part.

``U_PEA`` prepares ``|psi> = sum_j alpha_j |lambda_j>|phi_j>`` from
``|0>|0>``. The marking reflection ``U_f = I - 2 |f><f| (x) I`` with
``f = (0, 1, ..., 1) / sqrt(M - 1)`` leaves the phase-``|0>`` branch alone,
and ``U_psi = U_PEA U_0 U_PEA^H`` reflects about ``|psi>``. Iterating
``G = U_psi U_f`` drains the zero-eigenvalue branch; when its weight is
smallest the data register holds (approximately) the normalised
``Q Q^H x``.

With exact phases the iterates stay in ``span{|psi>, |f>|phi_bar>}`` where
``|phi_bar> = Q Q^H x``, and their coefficients follow::

    a_{k+1} = c a_k + 2 mu P_f b_k
    b_{k+1} = -2 mu a_k - b_k,       c = 4 mu^2 P_f - 1

starting from ``(a_0, b_0) = (1, 0)``.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from . import register as reg
from .evolution import EvolutionOperator
from .linalg import PreconditionError, eig_hermitian, householder_unitary, is_unit
from .register import RegisterLayout, StateVector

DEGENERATE_PF = 1e-6
EXACT_PHASE_TOL = 1e-9


class DegenerateInputError(ValueError):
    """The input has (numerically) no overlap with the principal subspace."""


# -- operators -----------------------------------------------------------------

@dataclass(frozen=True)
class MarkingOperator:
    f: np.ndarray
    mu: float

    def apply(self, s: StateVector) -> StateVector:
        w = self.f.conj() @ s.blocks
        return StateVector(s.layout, s.blocks - 2.0 * np.outer(self.f, w))

    def matrix(self) -> np.ndarray:
        M = self.f.size
        return np.eye(M, dtype=complex) - 2.0 * np.outer(self.f, self.f.conj())


def build_marking(layout: RegisterLayout) -> MarkingOperator:
    M = layout.M
    mu = 1.0 / np.sqrt(M - 1)
    f = np.full(M, mu, dtype=complex)
    f[0] = 0.0
    return MarkingOperator(f, mu)


def build_input_preparation(x) -> np.ndarray:
    """Unitary taking ``|0>`` to ``|x>`` (Householder completion of ``x``)."""
    if not is_unit(x):
        raise PreconditionError("input state must have unit norm")
    return householder_unitary(x)


def _as_evolution(U) -> EvolutionOperator:
    if isinstance(U, EvolutionOperator):
        return U
    return EvolutionOperator(np.asarray(U, dtype=complex))


def apply_pea(s: StateVector, U, U_input) -> StateVector:
    U = _as_evolution(U)
    s = reg.apply_on_register(s, U_input, reg.DATA)
    s = reg.qft(s)
    s = reg.apply_controlled_powers(s, U)
    return reg.inverse_qft(s)


def apply_pea_inverse(s: StateVector, U, U_input) -> StateVector:
    U = _as_evolution(U)
    s = reg.qft(s)
    s = reg.apply_controlled_powers_inverse(s, U)
    s = reg.inverse_qft(s)
    return reg.apply_on_register(s, np.asarray(U_input).conj().T, reg.DATA)


def apply_u0(s: StateVector) -> StateVector:
    b = s.blocks.copy()
    b[0, 0] = -b[0, 0]
    return StateVector(s.layout, b)


def apply_u_psi(s: StateVector, U, U_input) -> StateVector:
    """``U_PEA U_0 U_PEA^H``, i.e. the reflection ``I - 2 |psi><psi|``."""
    return apply_pea(apply_u0(apply_pea_inverse(s, U, U_input)), U, U_input)


def grover_step(s: StateVector, U, U_input, marking: MarkingOperator) -> StateVector:
    return apply_u_psi(marking.apply(s), U, U_input)


# -- theory --------------------------------------------------------------------

@dataclass(frozen=True)
class SubspaceCoefficients:
    mu: float
    P_f: float

    @property
    def c(self) -> float:
        return 4.0 * self.mu**2 * self.P_f - 1.0

    def transfer_matrix(self) -> np.ndarray:
        return np.array([[self.c, 2.0 * self.mu * self.P_f], [-2.0 * self.mu, -1.0]])

    def sequence(self, k_max: int) -> tuple[np.ndarray, np.ndarray]:
        """``(a_k, b_k)`` for k = 0 .. k_max."""
        T = self.transfer_matrix()
        out = np.empty((k_max + 1, 2))
        v = np.array([1.0, 0.0])
        for k in range(k_max + 1):
            out[k] = v
            v = T @ v
        return out[:, 0], out[:, 1]


# -- stopping rule ---------------------------------------------------------------

@dataclass(frozen=True)
class StoppingRule:
    """Stop once every phase qubit reads ``|+>`` in at least ``(1 - tolerance)``
    of ``shots`` Hadamard-basis measurements."""

    shots: int = 10
    tolerance: float = 0.05

    def __post_init__(self):
        if self.shots < 1:
            raise PreconditionError("shots must be >= 1")
        if not 0.0 <= self.tolerance < 1.0:
            raise PreconditionError("tolerance must lie in [0, 1)")

    def decide(self, estimates) -> bool:
        return bool(np.all(np.asarray(estimates) >= 1.0 - self.tolerance - 1e-12))

    def sample(self, s: StateVector, rng) -> tuple[np.ndarray, np.ndarray]:
        """``(sampled, exact)`` Hadamard-basis P(0) for every phase qubit."""
        m = s.layout.m
        sampled = np.empty(m)
        exact = np.empty(m)
        for q in range(m):
            sampled[q], exact[q] = reg.hadamard_qubit_estimate(s, q, self.shots, rng)
        return sampled, exact


def stopping_rule(trace: "IterationTrace", shots: int = 10, tolerance: float = 0.05) -> int | None:
    """First iteration of ``trace`` whose sampled estimates pass the rule.

    Only meaningful when ``trace`` was sampled with the same ``shots``.
    """
    rule = StoppingRule(shots, tolerance)
    for k, est in enumerate(trace.h0_sampled):
        if rule.decide(est):
            return k
    return None


# -- trace -----------------------------------------------------------------------

@dataclass
class IterationTrace:
    layout: RegisterLayout
    P_f: float
    mu: float
    p_zero: list = field(default_factory=list)
    phase_distribution: list = field(default_factory=list)
    fidelity: list = field(default_factory=list)
    h0_exact: list = field(default_factory=list)
    h0_sampled: list = field(default_factory=list)
    a: list | None = None
    b: list | None = None
    stop_flags: list = field(default_factory=list)
    states: list | None = None

    @property
    def iterations(self) -> int:
        return len(self.p_zero)

    @property
    def p_marked(self) -> np.ndarray:
        return 1.0 - np.asarray(self.p_zero)

    @property
    def stop_iteration(self) -> int | None:
        for k, flag in enumerate(self.stop_flags):
            if flag:
                return k
        return None

    def peak_iteration(self) -> int:
        return int(np.argmax(self.fidelity))

    def peak_fidelity(self) -> float:
        return float(np.max(self.fidelity))

    def min_p_zero_iteration(self) -> int:
        return int(np.argmin(self.p_zero))

    def first_peak_iteration(self) -> int:
        """Iteration of the first local maximum of the fidelity."""
        f = np.asarray(self.fidelity)
        for k in range(1, f.size - 1):
            if f[k] >= f[k - 1] and f[k] > f[k + 1]:
                return k
        return int(np.argmax(f))

    def header(self) -> list[str]:
        M, m = self.layout.M, self.layout.m
        return (
            ["iter", "p_zero", "p_marked", "fidelity"]
            + [f"phase_p_{j}" for j in range(M)]
            + [f"h0_q{q}" for q in range(m)]
            + [f"h0s_q{q}" for q in range(m)]
            + ["a_k", "b_k"]
        )

    def rows(self):
        for k in range(self.iterations):
            row = [str(k), repr(float(self.p_zero[k])), repr(float(1.0 - self.p_zero[k])), repr(float(self.fidelity[k]))]
            row += [repr(float(p)) for p in self.phase_distribution[k]]
            row += [repr(float(p)) for p in self.h0_exact[k]]
            row += [repr(float(p)) for p in self.h0_sampled[k]]
            if self.a is None:
                row += ["", ""]
            else:
                row += [repr(float(self.a[k])), repr(float(self.b[k]))]
            yield row

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(self.header())
            w.writerows(self.rows())


# -- driver ----------------------------------------------------------------------

def principal_from_weights(W) -> np.ndarray:
    """Orthonormal eigenvectors of ``W`` with nonzero eigenvalue."""
    return eig_hermitian(W).principal()


def exact_phase_fixture(U, principal, m: int, tol: float = EXACT_PHASE_TOL) -> bool:
    """True when ``U^M = I``, ``U`` fixes the complement of ``principal`` and
    has no eigenvalue 1 inside it, so phase estimation is exact."""
    U = _as_evolution(U)
    N = U.dim
    UM = U.ensure_powers(m)[-1]
    UM = UM @ UM
    if np.max(np.abs(UM - np.eye(N))) > tol:
        return False
    P = principal @ principal.conj().T
    comp = np.eye(N) - P
    if np.max(np.abs(U.U @ comp - comp)) > tol:
        return False
    # eigenvalue 1 inside the principal block
    B = principal.conj().T @ U.U @ principal
    ev = np.linalg.eigvals(B)
    return bool(np.min(np.abs(ev - 1.0)) > 1e-6) if ev.size else True


def run_iterations(
    U,
    x,
    layout: RegisterLayout,
    principal,
    max_iter: int = 30,
    stop: StoppingRule | None = None,
    rng=None,
    keep_states: bool = False,
) -> IterationTrace:
    """Apply ``G`` ``max_iter`` times to ``|psi>`` and record every iterate.

    ``principal`` is an orthonormal basis (N x r) of the nonzero-eigenvalue
    subspace; it only defines the classical target ``Q Q^H x`` and never
    enters the simulated dynamics.
    """
    U = _as_evolution(U)
    x = np.asarray(x, dtype=complex).reshape(-1)
    if U.dim != layout.N or x.size != layout.N:
        raise PreconditionError("evolution, input and layout dimensions disagree")
    principal = np.asarray(principal, dtype=complex)
    if principal.ndim == 1:
        principal = principal[:, None]
    target = principal @ (principal.conj().T @ x)
    P_f = float(np.vdot(target, target).real)
    if P_f < DEGENERATE_PF:
        raise DegenerateInputError(f"input has P_f = {P_f:.3e} < {DEGENERATE_PF:g} on the principal subspace")
    target_unit = target / np.sqrt(P_f)
    stop = stop or StoppingRule()
    rng = rng if rng is not None else np.random.default_rng(0)

    U.ensure_powers(layout.m)
    U_input = build_input_preparation(x)
    marking = build_marking(layout)
    psi = apply_pea(reg.init_zero(layout), U, U_input)

    exact = exact_phase_fixture(U, principal, layout.m)
    trace = IterationTrace(layout, P_f, marking.mu, states=[] if keep_states else None)
    if exact:
        trace.a, trace.b = [], []
        v = np.outer(marking.f, target).reshape(-1)
        basis = np.stack([psi.amplitudes, v], axis=1)

    s = psi
    for k in range(max_iter + 1):
        if k:
            s = grover_step(s, U, U_input, marking)
        probs = reg.register_probabilities(s, reg.PHASE)
        trace.p_zero.append(float(probs[0]))
        trace.phase_distribution.append(probs)
        trace.fidelity.append(reg.data_register_fidelity(s, target_unit))
        sampled, hexact = stop.sample(s, rng)
        trace.h0_exact.append(hexact)
        trace.h0_sampled.append(sampled)
        trace.stop_flags.append(stop.decide(sampled))
        if exact:
            coef, *_ = np.linalg.lstsq(basis, s.amplitudes, rcond=None)
            trace.a.append(float(coef[0].real))
            trace.b.append(float(coef[1].real))
        if keep_states:
            trace.states.append(s.amplitudes.copy())
    return trace
