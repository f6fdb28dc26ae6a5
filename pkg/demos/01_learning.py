"""Widrow-Hoff learning on the 4x2 example.

The eigenvalues of W after j epochs follow 1 - (1 - eta*lambda)^j, so W
drifts to the projector onto the column space of X.
"""
import numpy as np

from qlms import learning
from qlms.experiments import EXAMPLE_X

X = EXAMPLE_X
print("stability bound on eta:", learning.stability_bound(X))

W, recs = learning.train(X, eta=1.0, epochs=2000)
for r in recs[:: len(recs) // 8]:
    print(f"epoch {r.epoch:5d}  |W - QQ^T|_F = {r.frobenius_error:.3e}  lambda = {np.round(r.eigenvalues, 6)}")

print("limit projector:")
print(np.round(learning.limit_weights(X).real, 3))

# recall of a noisy input
x = np.array([-1.0, 0.8, 1.1, -0.9])
y, P_f = learning.network_output(learning.limit_weights(X), x / np.linalg.norm(x))
print("output:", np.round(y.real, 4), " weight on the learned subspace:", round(P_f, 4))
