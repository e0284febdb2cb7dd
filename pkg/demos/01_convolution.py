"""
Convolution algebras of finite groupoids
========================================

Functions on the arrows of a finite groupoid multiply by convolution. On the
pair groupoid [n]^2 this is ordinary matrix multiplication.
"""

import numpy as np

from grpdlab import algebra as A, groupoid as G

g = G.pair_groupoid(3)
e12, e23 = A.delta(g, (1, 2)), A.delta(g, (2, 3))
print("e12 * e23 =", e12 * e23)
print("e23 * e12 =", e23 * e12)

# random matrices: convolution agrees with @
rng = np.random.default_rng(0)
M, N = rng.standard_normal((2, 3, 3))
f, h = A.from_matrix(g, M), A.from_matrix(g, N)
prod = f * h
print("max |f*h - MN| =", max(abs(prod[(a, b)] - (M @ N)[a - 1, b - 1]) for a, b in g.arrows))

# a 2-cocycle on Z_2 twists the product: delta_s * delta_s = -1
z = G.cyclic_group_groupoid(2)
c = A.Cocycle(z, {(1, 1): -1})
print("cocycle valid:", A.validate_cocycle(c).valid)
s = A.delta(z, 1)
print("untwisted s*s =", A.convolve(s, s))
print("twisted   s*s =", A.convolve(s, s, c))

# the reduced norm is the sup over fibers of the left regular representation
ones = A.from_matrix(G.pair_groupoid(2), [[1, 1], [0, 0]])
for p in (1, 1.5, 2, 3):
    print(f"p = {p}: ||e11 + e12|| = {A.reduced_norm(ones, p).value:.6f}",
          f"(closed form 2^(1-1/p) = {2 ** (1 - 1 / p):.6f})")

# indicators of bisections are isometries at every p
g = G.random_groupoid(rng)
S = A.random_bisection(rng, g)
print(f"random groupoid with {len(g.arrows)} arrows, bisection of size {len(S)}:",
      f"||1_S||_3 = {A.reduced_norm(A.indicator(g, S), 3).value:.12f}")

# 1_S and its adjoint realize the partial map alpha_S on the units
a = A.indicator(g, S)
v = A.verify_admissible_pair(a, A.involute(a), A.alpha_of_bisection(g, S))
print("admissible pair:", v.value, {k: v.detail[k] for k in ("N1", "N2", "R1", "R2")})
