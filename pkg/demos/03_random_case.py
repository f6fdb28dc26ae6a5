"""Random N = 128 unitary with half of its eigenphases at zero.

Sweeps the phase register size and reports where the fidelity first peaks.
The Hadamard-test stopping rule is replayed on the m = 6 run.
"""
import numpy as np

from qlms.experiments import STREAM_MEASURE, RandomCaseSpec, generate_random_case, streams
from qlms.pipeline import StoppingRule, run_iterations
from qlms.register import RegisterLayout

seed = 0
case = generate_random_case(RandomCaseSpec(128, 6, seed))
print("weight on principal subspace:", round(float(np.sum(np.abs(case.principal.conj().T @ case.x) ** 2)), 4))
for m in range(1, 8):
    tr = run_iterations(case.U, case.x, RegisterLayout(m, 7), case.principal, 30)
    k = tr.first_peak_iteration()
    print(f"m = {m}: first peak at k = {k:2d}, fidelity {tr.fidelity[k]:.4f}")

tr = run_iterations(case.U, case.x, RegisterLayout(6, 7), case.principal, 30, StoppingRule(), streams(seed)[STREAM_MEASURE])
print("m = 6 stopping rule fired at k =", tr.stop_iteration, "; first peak at", tr.first_peak_iteration())
