"""Command-line entry point: ``qlms {example,random,sweep,learn}``.

Exit codes: 0 success, 2 invalid configuration, 3 degenerate input,
4 I/O error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import experiments as ex
from .linalg import PreconditionError
from .pipeline import DegenerateInputError

EXIT_OK, EXIT_CONFIG, EXIT_DEGENERATE, EXIT_IO = 0, 2, 3, 4


def _m_list(text: str) -> tuple:
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--evolution", choices=("exact", "trotter"), default="exact", help="how U = exp(i2piW) is built")
    common.add_argument("--trotter-steps", type=int, default=1, help="time slices r for the split operator")
    common.add_argument("--max-iter", type=int, default=30, help="Grover iterations to record")
    common.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    common.add_argument("--shots", type=int, default=10, help="Hadamard-test shots per phase qubit")
    common.add_argument("--stop-tol", type=float, default=0.05, help="stopping-rule tolerance")
    common.add_argument("--seed", type=int, default=0, help="root seed")

    p = argparse.ArgumentParser(prog="qlms", description="Quantum Widrow-Hoff autoassociator simulations.")
    sub = p.add_subparsers(dest="mode", required=True)
    e = sub.add_parser("example", parents=[common], help="worked 4x4 example, both inputs")
    e.add_argument("--m", type=int, default=6, help="phase-register qubits")
    r = sub.add_parser("random", parents=[common], help="one random case")
    r.add_argument("--n", type=int, default=128, help="data dimension N (power of two)")
    r.add_argument("--m", type=int, default=6, help="phase-register qubits")
    s = sub.add_parser("sweep", parents=[common], help="random case over several phase-register sizes")
    s.add_argument("--n", type=int, default=128, help="data dimension N (power of two)")
    s.add_argument("--m-list", type=_m_list, default=(1, 2, 3, 4, 5, 6), help="comma-separated phase-register sizes")
    lr = sub.add_parser("learn", parents=[common], help="classical Widrow-Hoff convergence")
    lr.add_argument("--eta", type=float, default=1.0, help="learning rate")
    lr.add_argument("--epochs", type=int, default=1000, help="maximum epochs")
    return p


def config_from_args(args) -> ex.RunConfig:
    cfg = ex.RunConfig(
        mode=args.mode,
        max_iter=args.max_iter,
        shots=args.shots,
        stop_tol=args.stop_tol,
        evolution=args.evolution,
        trotter_steps=args.trotter_steps,
        out=args.out,
        seed=args.seed,
    )
    if args.mode in ("example", "random"):
        cfg.m = args.m
    if args.mode in ("random", "sweep"):
        cfg.N = args.n
    if args.mode == "sweep":
        cfg.m_values = args.m_list
    if args.mode == "learn":
        cfg.eta = args.eta
        cfg.epochs = args.epochs
    return cfg.validate()


RUNNERS = {
    "example": ex.run_example,
    "random": ex.run_random,
    "sweep": ex.run_sweep,
    "learn": ex.run_learning_demo,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        RUNNERS[cfg.mode](cfg)
    except (ex.ConfigError, PreconditionError) as exc:
        print(f"qlms: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DegenerateInputError as exc:
        print(f"qlms: degenerate input: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except OSError as exc:
        print(f"qlms: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"qlms: wrote {cfg.mode} outputs to {cfg.out}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
