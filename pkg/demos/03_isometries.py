"""
Invertible isometries of M_n^p
==============================

For p != 2 the invertible isometries of l^p([n]) are the permutation matrices
with unit-modulus phases. Modulo diagonal phases they form the symmetric group,
which is the full group of the pair groupoid [n]^2.
"""

import numpy as np

from grpdlab import rigidity as R
from grpdlab.pnorm import is_invertible_isometry

rng = np.random.default_rng(3)
u = R.permutation_matrix((2, 0, 1), np.exp(2j * np.pi * rng.random(3)))
hadamard = np.array([[1, 1], [1, -1]]) / np.sqrt(2)

print("phased 3-cycle, p=3:", is_invertible_isometry(u, 3).value)
print("Hadamard, p=2:", is_invertible_isometry(hadamard, 2).value)
print("Hadamard, p=3:", is_invertible_isometry(hadamard, 3).value,
      "-", is_invertible_isometry(hadamard, 3).note)

print("permutation of u:", R.isometry_to_permutation(u))
print("diag(i, -1) is in the kernel:", R.isometry_to_permutation(np.diag([1j, -1])))

for n in (1, 2, 3):
    rep = R.tfg_quotient_check(n, 3, samples=20)
    print(f"n = {n}: {rep.statistics['cosets']} cosets, census {rep.statistics['census']}")
