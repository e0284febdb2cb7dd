"""
Germ groupoids and AF decompositions
====================================

An inverse semigroup acting by partial bijections has a groupoid of germs.
Principal finite groupoids split into pair groupoids (one per orbit), and
their algebras are direct sums of M_N^p blocks.
"""

from grpdlab import groupoid as G, rigidity as R

swap = G.FinitePartialBijectionSemigroup.from_group_action(
    [0, 1], lambda a, b: (a + b) % 2, 0, [0, 1], lambda s, x: (x + s) % 2)
germs = G.germ_groupoid(swap)
print("germs of the swap action:", len(germs.arrows), "arrows")
print("isomorphic to [2]^2:", G.find_isomorphism(germs, G.pair_groupoid(2)) is not None)

# the trivial action of Z_3 on one point keeps all of its isotropy
trivial = G.FinitePartialBijectionSemigroup.from_group_action(
    range(3), lambda a, b: (a + b) % 3, 0, [0], lambda s, x: x)
h = G.germ_groupoid(trivial)
print("germs of the trivial Z_3 action:", len(h.arrows), "; principal:", G.is_principal(h))

for name, g in [("[4]^2", G.pair_groupoid(4)),
                ("[2]^2 + [3]^2", G.disjoint_union(G.pair_groupoid(2), G.pair_groupoid(3))),
                ("Z_2", G.cyclic_group_groupoid(2))]:
    rep = R.af_embeddability_report(g, 3)
    print(f"{name}: {rep.verdict}; {rep.note}")

# condition (W) asks for arrows out of each unit that leave its isotropy group
for name, g in [("[2]^2", G.pair_groupoid(2)), ("Z_2", G.cyclic_group_groupoid(2))]:
    print(f"condition (W) for {name}:", G.condition_w_check(g).value)
