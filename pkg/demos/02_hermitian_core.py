"""
Hermitian matrices away from p = 2
==================================

A matrix a is hermitian on l^p when every exp(ita) is a contraction. For p = 2
that is every self-adjoint matrix; for other p only real diagonals survive.
"""

import numpy as np

from grpdlab import rigidity as R
from grpdlab.pnorm import hermitian_test, matrix_exp, p_operator_norm

flip = np.array([[0, 1], [1, 0]], dtype=complex)
diag = np.diag([0.3, -1.0])

for p in (2, 3, 4):
    worst = max(p_operator_norm(matrix_exp(1j * t * flip), p).value for t in np.linspace(0, 3, 31))
    print(f"p = {p}: max_t ||exp(it flip)|| on [0, 3] = {worst:.4f}")

print("flip hermitian at p=4:", hermitian_test(flip, 4).value)
print("diag(0.3, -1) hermitian at p=4:", hermitian_test(diag, 4).value)

rep = hermitian_test(flip, 4)
print("violation found at t = %.3f with norm %.4f" % (rep.detail.t_max, rep.detail.norm_max))

# a small sampling run; the acceptance suite uses 10^4 samples per (n, p)
rep = R.core_diagonal_check(2, 3, samples=200, seed=1)
print(rep.to_text())
