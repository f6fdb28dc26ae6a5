"""Seeded experiment runners that write CSV traces and plain-text summaries.

Random streams: ``numpy.random.SeedSequence(seed).spawn(4)`` gives one
independent ``PCG64`` generator per draw site, in this order:

0. Gaussian matrix for the eigenbasis
1. eigenphases
2. input vector
3. Hadamard-basis measurement sampling
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .evolution import EvolutionOperator, TrotterPlan, exact_evolution, strang_split
from .learning import limit_weights, stability_bound, train
from .linalg import PreconditionError
from .pipeline import IterationTrace, StoppingRule, principal_from_weights, run_iterations
from .register import RegisterLayout

EXAMPLE_X = np.array(
    [
        [-1.0, +1.0],
        [-1.0, -1.0],
        [+1.0, -1.0],
        [-1.0, +1.0],
    ]
) / 10.0
EXAMPLE_INPUTS = (
    np.array([0.3517, 0.3058, 0.6136, 0.6374]),
    np.array([0.7730, 0.1919, 0.1404, 0.5881]),
)

STREAM_GAUSSIAN, STREAM_PHASES, STREAM_INPUT, STREAM_MEASURE = range(4)


class ConfigError(ValueError):
    """Invalid run configuration."""


def streams(seed: int) -> list[np.random.Generator]:
    return [np.random.Generator(np.random.PCG64(s)) for s in np.random.SeedSequence(seed).spawn(4)]


def gram_schmidt(A) -> np.ndarray:
    """Modified Gram-Schmidt with one re-orthogonalisation pass."""
    A = np.array(A, dtype=float)
    n = A.shape[1]
    Q = np.zeros_like(A)
    for j in range(n):
        v = A[:, j].copy()
        for _ in range(2):
            for i in range(j):
                v -= (Q[:, i] @ v) * Q[:, i]
        nv = np.linalg.norm(v)
        if nv == 0:
            raise PreconditionError("rank-deficient matrix in gram_schmidt")
        Q[:, j] = v / nv
    return Q


@dataclass(frozen=True)
class RandomCaseSpec:
    N: int
    m: int = 6
    seed: int = 0

    @property
    def npc(self) -> int:
        return math.ceil(self.N / 2)


@dataclass
class RandomCase:
    U: EvolutionOperator
    x: np.ndarray
    eigenphases: np.ndarray
    eigenbasis: np.ndarray

    @property
    def principal(self) -> np.ndarray:
        return self.eigenbasis[:, self.eigenphases != 0]


def generate_random_case(spec: RandomCaseSpec, rngs=None) -> RandomCase:
    """Random unitary with ``ceil(N/2)`` eigenphases in [0, 1) and the rest
    zero, plus a random positive unit input."""
    N = spec.N
    if N < 2 or N & (N - 1):
        raise ConfigError(f"N must be a power of two >= 2, got {N}")
    rngs = rngs or streams(spec.seed)
    Q = gram_schmidt(rngs[STREAM_GAUSSIAN].standard_normal((N, N)))
    d = rngs[STREAM_PHASES].random(N)
    d[spec.npc:] = 0.0
    U = (Q * np.exp(2j * np.pi * d)) @ Q.T
    x = rngs[STREAM_INPUT].random(N)
    x = x / np.linalg.norm(x)
    return RandomCase(EvolutionOperator(U, provenance="random"), x, d, Q)


@dataclass
class RunConfig:
    mode: str = "example"
    m: int = 6
    N: int = 128
    max_iter: int = 30
    shots: int = 10
    stop_tol: float = 0.05
    evolution: str = "exact"
    trotter_steps: int = 1
    out: Path = Path("out")
    seed: int = 0
    m_values: tuple = (1, 2, 3, 4, 5, 6)
    eta: float = 1.0
    epochs: int = 1000

    def validate(self) -> "RunConfig":
        if self.mode not in ("example", "random", "sweep", "learn"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.m < 1 or any(mv < 1 for mv in self.m_values):
            raise ConfigError("phase register needs at least one qubit")
        if self.max_iter < 0:
            raise ConfigError("max_iter must be >= 0")
        if self.shots < 1:
            raise ConfigError("shots must be >= 1")
        if not 0.0 <= self.stop_tol < 1.0:
            raise ConfigError("stop tolerance must lie in [0, 1)")
        if self.evolution not in ("exact", "trotter"):
            raise ConfigError(f"unknown evolution {self.evolution!r}")
        if self.trotter_steps < 1:
            raise ConfigError("trotter steps must be >= 1")
        if self.mode in ("random", "sweep") and self.evolution == "trotter":
            raise ConfigError("trotter evolution needs training columns; random cases only provide U")
        if self.mode in ("random", "sweep") and (self.N < 2 or self.N & (self.N - 1)):
            raise ConfigError(f"N must be a power of two >= 2, got {self.N}")
        if self.eta <= 0:
            raise ConfigError("eta must be positive")
        if self.epochs < 0:
            raise ConfigError("epochs must be >= 0")
        return self

    @property
    def stop(self) -> StoppingRule:
        return StoppingRule(self.shots, self.stop_tol)


def _ensure_dir(path: Path) -> Path:
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {path}: {exc}") from exc
    return path


def _write_text(path: Path, text: str) -> None:
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def _write_trace(trace: IterationTrace, path: Path) -> None:
    try:
        trace.to_csv(path)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def _summary_line(label: str, trace: IterationTrace) -> str:
    k = trace.first_peak_iteration()
    stop = trace.stop_iteration
    return (
        f"{label}  P_f={trace.P_f!r}  peak_iter={k}  peak_fidelity={trace.fidelity[k]!r}"
        f"  max_fidelity={trace.peak_fidelity()!r}  stop_iter={'-' if stop is None else stop}"
    )


def run_example(config: RunConfig) -> dict:
    """Both worked-example inputs, with exact and Trotterised ``U``; four CSVs."""
    config.validate()
    out = _ensure_dir(Path(config.out))
    X = EXAMPLE_X
    W = X @ X.T
    principal = principal_from_weights(W)
    layout = RegisterLayout.for_dimension(config.m, X.shape[0])
    evolutions = {
        "exact": exact_evolution(W),
        "trotter": strang_split(TrotterPlan.from_matrix(X, 1.0, config.trotter_steps)),
    }
    results = {}
    lines = [f"example  m={config.m}  max_iter={config.max_iter}  seed={config.seed}  trotter_steps={config.trotter_steps}"]
    for i, x in enumerate(EXAMPLE_INPUTS, start=1):
        x = x / np.linalg.norm(x)
        for name, U in evolutions.items():
            rng = streams(config.seed)[STREAM_MEASURE]
            trace = run_iterations(U, x, layout, principal, config.max_iter, config.stop, rng)
            path = out / f"example_x{i}_{name}.csv"
            _write_trace(trace, path)
            results[(i, name)] = trace
            lines.append(_summary_line(f"x{i} {name:7s}", trace))
    for i in range(1, len(EXAMPLE_INPUTS) + 1):
        fe = results[(i, "exact")].peak_fidelity()
        ft = results[(i, "trotter")].peak_fidelity()
        lines.append(f"x{i} peak fidelity exact - trotter = {fe - ft!r}")
    _write_text(out / "example_summary.txt", "\n".join(lines) + "\n")
    return results


def _random_trace(case: RandomCase, m: int, config: RunConfig) -> IterationTrace:
    layout = RegisterLayout.for_dimension(m, case.x.size)
    U = EvolutionOperator(case.U.U, provenance=case.U.provenance)
    rng = streams(config.seed)[STREAM_MEASURE]
    return run_iterations(U, case.x, layout, case.principal, config.max_iter, config.stop, rng)


def run_random(config: RunConfig) -> IterationTrace:
    config.validate()
    out = _ensure_dir(Path(config.out))
    case = generate_random_case(RandomCaseSpec(config.N, config.m, config.seed))
    trace = _random_trace(case, config.m, config)
    stem = f"random_N{config.N}_m{config.m}_seed{config.seed}"
    _write_trace(trace, out / f"{stem}.csv")
    _write_text(out / f"{stem}_summary.txt", _summary_line(stem, trace) + "\n")
    return trace


def run_sweep(config: RunConfig, m_values=None) -> dict[int, IterationTrace]:
    """Same random ``U`` and ``x`` for every phase-register size."""
    m_values = tuple(m_values or config.m_values)
    config = replace(config, m_values=m_values).validate()
    out = _ensure_dir(Path(config.out))
    case = generate_random_case(RandomCaseSpec(config.N, max(m_values), config.seed))
    with ThreadPoolExecutor(max_workers=min(len(m_values), os.cpu_count() or 1)) as pool:
        traces = dict(zip(m_values, pool.map(lambda mv: _random_trace(case, mv, config), m_values)))
    lines = [f"sweep  N={config.N}  seed={config.seed}  max_iter={config.max_iter}", "m,peak_iter,peak_fidelity"]
    for mv in m_values:
        tr = traces[mv]
        _write_trace(tr, out / f"sweep_N{config.N}_m{mv}_seed{config.seed}.csv")
        k = tr.first_peak_iteration()
        lines.append(f"{mv},{k},{tr.fidelity[k]!r}")
    _write_text(out / f"sweep_N{config.N}_seed{config.seed}_summary.txt", "\n".join(lines) + "\n")
    return traces


def run_learning_demo(config: RunConfig, X=None):
    """Batch Widrow-Hoff training on the worked-example data, one CSV row per epoch."""
    config.validate()
    X = EXAMPLE_X if X is None else np.asarray(X)
    bound = stability_bound(X)
    if config.eta > bound * (1 + 1e-12):
        raise ConfigError(f"eta = {config.eta!r} exceeds the stability bound 2/lambda_max = {bound!r}")
    out = _ensure_dir(Path(config.out))
    W, records = train(X, config.eta, config.epochs)
    r = records[0].eigenvalues.size
    header = ["epoch", "frobenius_error"] + [f"lambda_{i}" for i in range(r)] + [f"closed_form_{i}" for i in range(r)]
    lines = [",".join(header)]
    for rec in records:
        vals = [str(rec.epoch), repr(rec.frobenius_error)]
        vals += [repr(float(v)) for v in rec.eigenvalues] + [repr(float(v)) for v in rec.closed_form]
        lines.append(",".join(vals))
    _write_text(out / "learn.csv", "\n".join(lines) + "\n")
    last = records[-1]
    _write_text(
        out / "learn_summary.txt",
        f"learn  eta={config.eta!r}  bound={bound!r}  epochs_run={last.epoch}  final_frobenius_error={last.frobenius_error!r}\n",
    )
    return W, records
