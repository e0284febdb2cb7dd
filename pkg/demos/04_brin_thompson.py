"""
Tables, cylinder bisections and a non-abelian witness
=====================================================

Elements of the Brin-Thompson groups are tables of word tuples. Each column
replaces a prefix v by a prefix u, coordinatewise. The same data is a compact
open bisection of the full-shift groupoid that covers the whole unit space.
"""

import numpy as np

from grpdlab import rigidity as R, sft, thompson as T

alph = (2,)
swap = T.Table(alph, [(("0",), ("1",)), (("1",), ("0",))])
print("swap applied to 0110:", T.apply(swap, ("0110",)))
print("swap o swap is the identity:", T.is_identity(T.compose(swap, swap)))

rng = np.random.default_rng(4)
t = T.random_table(rng, (2, 3), max_depth=2)
print("random table in V_{2,3} with", len(t.columns), "columns; Kraft sums", T.kraft_sums(t))
print("t o t^-1 = id:", T.is_identity(T.compose(t, T.invert(t))))

S = T.table_to_bisection(t)
print("as a bisection, full-group element:", sft.is_full_group_element(S))
box = sft.box_tuples((2, 3), tuple(d + 1 for d in t.max_v_depth()))[5]
print(f"box {box}: table gives {T.apply(t, box)}, bisection gives {sft.alpha_apply(S, box)}")

# two transpositions of prefixes whose commutator moves a word of length 3
w = R.non_abelian_witness((2,))
print("s:", w.s.columns)
print("t:", w.t.columns)
print(f"[s, t] moves {w.word} to {w.image}")
