"""Strang splitting of exp(i 2 pi X X^T) into rank-one factors.

Compares the split operator to the exact exponential and shows that the
amplified fidelity barely changes.
"""
import numpy as np

from qlms.evolution import TrotterPlan, exact_evolution, strang_split
from qlms.experiments import EXAMPLE_INPUTS, EXAMPLE_X
from qlms.linalg import unitary_exponential
from qlms.pipeline import principal_from_weights, run_iterations
from qlms.register import RegisterLayout

X = EXAMPLE_X
W = X @ X.T
U = unitary_exponential(W)
print("factor order for r = 1:", TrotterPlan.from_matrix(X).factors())
for r in (1, 2, 4, 8):
    S = strang_split(TrotterPlan.from_matrix(X, 1.0, r))
    print(f"r = {r}: |S - U|_2 = {np.linalg.norm(S.U - U, 2):.3e}")

principal = principal_from_weights(W)
for i, x in enumerate(EXAMPLE_INPUTS, 1):
    x = x / np.linalg.norm(x)
    lay = RegisterLayout(6, 2)
    fe = run_iterations(exact_evolution(W), x, lay, principal, 30).peak_fidelity()
    ft = run_iterations(strang_split(TrotterPlan.from_matrix(X)), x, lay, principal, 30).peak_fidelity()
    print(f"x{i}: peak fidelity exact {fe:.6f}, split {ft:.6f}")
