"""A case where phase estimation is exact.

With eigenphases on the grid j/16 and a 4-qubit phase register the
amplified state stays in span{psi, f (x) QQ^H x}, and the coefficients
match the two-term recurrence to machine precision.
"""
import numpy as np

from qlms.evolution import exact_evolution
from qlms.pipeline import SubspaceCoefficients, build_marking, principal_from_weights, run_iterations
from qlms.register import RegisterLayout

H2 = np.array([[1, 1], [1, -1]])
Q = np.kron(np.kron(H2, H2), H2) / np.sqrt(8)
lam = np.array([0, 0, 0, 0, 2, 5, 9, 13]) / 16
W = (Q * lam) @ Q.T
coef = np.concatenate([np.sqrt(0.548) * np.array([4, 1, 3, 2]) / np.sqrt(30), np.sqrt(0.452) * np.arange(1, 5) / np.sqrt(30)])
x = Q @ coef

layout = RegisterLayout(4, 3)
tr = run_iterations(exact_evolution(W), x, layout, principal_from_weights(W), max_iter=12)
a, b = SubspaceCoefficients(build_marking(layout).mu, tr.P_f).sequence(12)

print(" k   p_zero   fidelity      a_k (sim / rec)          b_k (sim / rec)")
for k in range(tr.iterations):
    print(f"{k:2d}  {tr.p_zero[k]:.5f}  {tr.fidelity[k]:.6f}  {tr.a[k]: .6f} / {a[k]: .6f}  {tr.b[k]: .6f} / {b[k]: .6f}")
print("fidelity at the p_zero minimum:", tr.fidelity[tr.min_p_zero_iteration()])
