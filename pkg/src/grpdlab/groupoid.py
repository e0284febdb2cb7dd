"""
Finite (discrete) groupoids.

A finite groupoid is stored as explicit tables: arrows, units, source and
target maps, a partial composition and an inversion. Everything that is an
"interior" condition for topological groupoids is evaluated in the discrete
topology, where interiors are the sets themselves.
"""

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product as iproduct
import json

from grpdlab.report import ValidationReport, Verdict

DISCRETE_NOTE = (
    "finite groupoids carry the discrete topology: the interior of the isotropy "
    "bundle is the whole isotropy bundle, so effectiveness coincides with principality"
)


class NotPrincipalError(ValueError):
    """Raised by decompose_elementary; ``arrow`` is a nontrivial isotropy arrow."""

    def __init__(self, arrow):
        super().__init__(f"groupoid is not principal: arrow {arrow!r} is nontrivial isotropy")
        self.arrow = arrow


@dataclass(frozen=True, eq=False)
class FiniteGroupoid:
    arrows: tuple
    units: frozenset
    src: dict
    tgt: dict
    compose_table: dict
    inv: dict

    def __init__(self, arrows, units, src, tgt, compose, inv):
        if not isinstance(compose, dict):
            compose = {(a, b): c for a, b, c in compose}
        object.__setattr__(self, "arrows", tuple(arrows))
        object.__setattr__(self, "units", frozenset(units))
        object.__setattr__(self, "src", dict(src))
        object.__setattr__(self, "tgt", dict(tgt))
        object.__setattr__(self, "compose_table", dict(compose))
        object.__setattr__(self, "inv", dict(inv))

    def __len__(self):
        return len(self.arrows)

    def __repr__(self):
        return f"FiniteGroupoid({len(self.arrows)} arrows, {len(self.units)} units)"

    @cached_property
    def index(self):
        return {a: i for i, a in enumerate(self.arrows)}

    @cached_property
    def unit_list(self):
        # units in arrow order, for deterministic iteration
        return [a for a in self.arrows if a in self.units]

    def compose(self, a, b):
        """Product ``ab`` (apply ``b`` first), or None if not composable."""
        return self.compose_table.get((a, b))

    @cached_property
    def composable_triples(self):
        return [(a, b, c) for (a, b), c in self.compose_table.items()]

    @cached_property
    def triple_index(self):
        """Index arrays (i_a, i_b, i_ab) over all composable pairs."""
        import numpy as np
        ix = self.index
        t = np.array([(ix[a], ix[b], ix[c]) for a, b, c in self.composable_triples],
                     dtype=np.intp).reshape(-1, 3)
        return t[:, 0], t[:, 1], t[:, 2]

    def fiber(self, x):
        """Arrows with source ``x`` (the domain fiber Gx), in arrow order."""
        return [a for a in self.arrows if self.src[a] == x]

    def range_fiber(self, x):
        return [a for a in self.arrows if self.tgt[a] == x]

    def isotropy(self):
        return [a for a in self.arrows if self.src[a] == self.tgt[a]]

    def is_bisection(self, subset):
        subset = list(subset)
        return (len({self.src[a] for a in subset}) == len(subset)
                and len({self.tgt[a] for a in subset}) == len(subset))


def validate_groupoid(g):
    """Check every groupoid axiom and report all violations."""
    rep = ValidationReport()
    arrows = set(g.arrows)
    if len(arrows) != len(g.arrows):
        rep.add("arrows", "duplicate arrow ids")
    if not g.units <= arrows:
        rep.add("units", f"units not among arrows: {sorted(map(repr, g.units - arrows))}")
    for name, table, codomain in (("src", g.src, g.units), ("tgt", g.tgt, g.units),
                                  ("inv", g.inv, arrows)):
        for a in g.arrows:
            if a not in table:
                rep.add(name, f"{name} undefined at {a!r}")
            elif table[a] not in codomain:
                rep.add(name, f"{name}({a!r}) = {table[a]!r} lies outside its codomain")
    if not rep.valid:
        return rep

    for u in g.units:
        if g.src[u] != u or g.tgt[u] != u:
            rep.add("units", f"unit {u!r} is not fixed by src/tgt")
    for (a, b), c in g.compose_table.items():
        if a not in arrows or b not in arrows or c not in arrows:
            rep.add("compose", f"compose({a!r}, {b!r}) = {c!r} refers to unknown arrows")
            continue
        if g.src[a] != g.tgt[b]:
            rep.add("composability", f"compose({a!r}, {b!r}) defined but src(a) != tgt(b)")
            continue
        if g.src[c] != g.src[b] or g.tgt[c] != g.tgt[a]:
            rep.add("compose", f"compose({a!r}, {b!r}) = {c!r} has wrong endpoints")
    for a in g.arrows:
        for b in g.arrows:
            if g.src[a] == g.tgt[b] and (a, b) not in g.compose_table:
                rep.add("composability", f"compose({a!r}, {b!r}) undefined although composable")
    if not rep.valid:
        return rep

    for a in g.arrows:
        if g.compose(g.tgt[a], a) != a or g.compose(a, g.src[a]) != a:
            rep.add("unit-law", f"units do not act trivially on {a!r}")
        ai = g.inv[a]
        if g.inv[ai] != a:
            rep.add("inverse", f"inv(inv({a!r})) != {a!r}")
        if g.compose(a, ai) != g.tgt[a] or g.compose(ai, a) != g.src[a]:
            rep.add("inverse", f"{a!r} times its inverse is not a unit")
    for (a, b), ab in g.compose_table.items():
        for c in g.range_fiber(g.src[b]):
            bc = g.compose(b, c)
            if g.compose(ab, c) != g.compose(a, bc):
                rep.add("associativity", f"({a!r}{b!r}){c!r} != {a!r}({b!r}{c!r})")
    return rep


def is_principal(g):
    return all(a in g.units for a in g.isotropy())


def is_effective_finite(g):
    """Effectiveness at finite scale; equals principality (see the note)."""
    return Verdict(is_principal(g), DISCRETE_NOTE)


def condition_w_check(g):
    """Every unit x needs an arrow of Gx outside the isotropy xGx.

    Returns a Verdict whose detail maps each unit to a witness arrow or None.
    """
    witnesses = {}
    for x in g.unit_list:
        witnesses[x] = next((a for a in g.fiber(x) if g.tgt[a] != x), None)
    holds = bool(witnesses) and all(w is not None for w in witnesses.values())
    return Verdict(holds, "witness arrows per unit", witnesses)


# --- constructors ------------------------------------------------------------

def pair_groupoid(n, labels=None):
    """The full equivalence relation [n]^2 with arrows (a, b), labels 1..n."""
    labels = list(labels) if labels is not None else list(range(1, n + 1))
    arrows = [(a, b) for a in labels for b in labels]
    return FiniteGroupoid(
        arrows,
        [(a, a) for a in labels],
        {(a, b): (b, b) for a, b in arrows},
        {(a, b): (a, a) for a, b in arrows},
        {((a, b), (b, c)): (a, c) for a in labels for b in labels for c in labels},
        {(a, b): (b, a) for a, b in arrows},
    )


def group_groupoid(elements, mul, identity):
    """A group viewed as a one-unit groupoid; ``mul`` is a callable or a dict."""
    elements = list(elements)
    op = mul if callable(mul) else (lambda a, b: mul[a, b])
    inv = {}
    for a in elements:
        for b in elements:
            if op(a, b) == identity:
                inv[a] = b
    return FiniteGroupoid(
        elements, [identity],
        {a: identity for a in elements}, {a: identity for a in elements},
        {(a, b): op(a, b) for a in elements for b in elements}, inv,
    )


def cyclic_group_groupoid(n):
    return group_groupoid(range(n), lambda a, b: (a + b) % n, 0)


def disjoint_union(*groupoids):
    """Arrows are tagged ``(i, a)`` with the component index ``i``."""
    arrows, units, src, tgt, comp, inv = [], [], {}, {}, {}, {}
    for i, g in enumerate(groupoids):
        for a in g.arrows:
            arrows.append((i, a))
            src[i, a] = (i, g.src[a])
            tgt[i, a] = (i, g.tgt[a])
            inv[i, a] = (i, g.inv[a])
        units += [(i, u) for u in g.units]
        comp.update({((i, a), (i, b)): (i, c) for (a, b), c in g.compose_table.items()})
    return FiniteGroupoid(arrows, units, src, tgt, comp, inv)


def product(g, h):
    arrows = [(a, b) for a in g.arrows for b in h.arrows]
    comp = {}
    for (a1, a2), a in g.compose_table.items():
        for (b1, b2), b in h.compose_table.items():
            comp[(a1, b1), (a2, b2)] = (a, b)
    return FiniteGroupoid(
        arrows, [(u, v) for u in g.units for v in h.units],
        {(a, b): (g.src[a], h.src[b]) for a, b in arrows},
        {(a, b): (g.tgt[a], h.tgt[b]) for a, b in arrows},
        comp, {(a, b): (g.inv[a], h.inv[b]) for a, b in arrows},
    )


def transformation_groupoid(elements, mul, identity, points, act):
    """X ⋊ G for a global action ``act(g, x)``; arrows ``(g, x)`` go x -> g.x."""
    elements, points = list(elements), list(points)
    op = mul if callable(mul) else (lambda a, b: mul[a, b])
    inv_el = {a: b for a in elements for b in elements if op(a, b) == identity}
    arrows = [(s, x) for s in elements for x in points]
    units = [(identity, x) for x in points]
    comp = {}
    for s, y in arrows:
        for t, x in arrows:
            if act(t, x) == y:
                comp[(s, y), (t, x)] = (op(s, t), x)
    return FiniteGroupoid(
        arrows, units,
        {(s, x): (identity, x) for s, x in arrows},
        {(s, x): (identity, act(s, x)) for s, x in arrows},
        comp, {(s, x): (inv_el[s], act(s, x)) for s, x in arrows},
    )


def relabel(g, mapping):
    """Rename arrows through an injective ``mapping``."""
    f = mapping.__getitem__ if isinstance(mapping, dict) else mapping
    return FiniteGroupoid(
        [f(a) for a in g.arrows], [f(u) for u in g.units],
        {f(a): f(x) for a, x in g.src.items()}, {f(a): f(x) for a, x in g.tgt.items()},
        {(f(a), f(b)): f(c) for (a, b), c in g.compose_table.items()},
        {f(a): f(b) for a, b in g.inv.items()},
    )


# --- isomorphism search --------------------------------------------------------

def _arrow_signature(g, a):
    # relabeling-invariant data used to prune candidate images
    loop = g.src[a] == g.tgt[a]
    order = 0
    if loop:
        x, b = a, a
        while True:
            order += 1
            if b == g.src[a]:
                break
            b = g.compose(b, x)
            if order > len(g.arrows):
                break
    return (a in g.units, loop, order, len(g.fiber(g.src[a])), len(g.range_fiber(g.tgt[a])))


def find_isomorphism(g, h):
    """Search for an arrow bijection g -> h preserving src, tgt and composition.

    Plain backtracking with signature pruning; intended for groupoids with a few
    dozen arrows. Returns a dict or None.
    """
    if len(g.arrows) != len(h.arrows) or len(g.units) != len(h.units):
        return None
    sig_g = {a: _arrow_signature(g, a) for a in g.arrows}
    sig_h = {b: _arrow_signature(h, b) for b in h.arrows}
    if sorted(sig_g.values()) != sorted(sig_h.values()):
        return None
    # units first, then arrows grouped by endpoints
    order = g.unit_list + [a for a in g.arrows if a not in g.units]
    phi, used = {}, set()

    def consistent(a, b):
        if a not in g.units and (phi[g.src[a]] != h.src[b] or phi[g.tgt[a]] != h.tgt[b]):
            return False
        phi[a] = b
        try:
            for c in phi:
                for x, y in ((a, c), (c, a)):
                    xy = g.compose(x, y)
                    if xy is not None and xy in phi and h.compose(phi[x], phi[y]) != phi[xy]:
                        return False
            return True
        finally:
            del phi[a]

    def search(i):
        if i == len(order):
            return True
        a = order[i]
        for b in h.arrows:
            if b in used or sig_h[b] != sig_g[a] or not consistent(a, b):
                continue
            phi[a] = b
            used.add(b)
            if search(i + 1):
                return True
            del phi[a]
            used.discard(b)
        return False

    if not search(0):
        return None
    for (a, b), c in g.compose_table.items():
        if h.compose(phi[a], phi[b]) != phi[c]:
            return None
    return dict(phi)


# --- inverse semigroup actions and germs -----------------------------------------

def _pmap(d):
    return tuple(sorted(d.items()))


def _compose_pmap(s, t):
    """Partial injection s∘t (apply t first)."""
    ds = dict(s)
    return _pmap({x: ds[y] for x, y in t if y in ds})


def _inverse_pmap(s):
    return _pmap({y: x for x, y in s})


@dataclass(frozen=True, eq=False)
class FinitePartialBijectionSemigroup:
    """An inverse semigroup with an action by partial injections of ``points``.

    ``product[s, t]`` is the abstract product st, ``star[s]`` the inverse and
    ``action[s]`` a dict describing beta_s. The abstract semigroup need not act
    faithfully; germs are formed from the abstract elements.
    """

    points: tuple
    elements: tuple
    product: dict
    star: dict
    action: dict = field(repr=False)

    @classmethod
    def from_generators(cls, points, generators):
        """Close partial injections under composition and inversion (faithful action)."""
        gens = {_pmap(dict(g)) for g in generators}
        gens |= {_inverse_pmap(s) for s in gens}
        elements = set(gens)
        frontier = list(elements)
        while frontier:
            new = []
            for s in frontier:
                for t in list(gens):
                    for c in (_compose_pmap(s, t), _compose_pmap(t, s)):
                        if c not in elements:
                            elements.add(c)
                            new.append(c)
            frontier = new
        elements = sorted(elements, key=lambda s: (len(s), s))
        prod = {(s, t): _compose_pmap(s, t) for s in elements for t in elements}
        return cls(tuple(points), tuple(elements), prod,
                   {s: _inverse_pmap(s) for s in elements},
                   {s: dict(s) for s in elements})

    @classmethod
    def from_group_action(cls, elements, mul, identity, points, act):
        elements = list(elements)
        op = mul if callable(mul) else (lambda a, b: mul[a, b])
        prod = {(s, t): op(s, t) for s in elements for t in elements}
        star = {s: t for s in elements for t in elements if op(s, t) == identity}
        action = {s: {x: act(s, x) for x in points} for s in elements}
        return cls(tuple(points), tuple(elements), prod, star, action)

    def idempotents(self):
        return [e for e in self.elements if self.product[e, e] == e]

    def validate(self):
        rep = ValidationReport()
        els = set(self.elements)
        for s in self.elements:
            for t in self.elements:
                if self.product.get((s, t)) not in els:
                    rep.add("closure", f"product {s!r}·{t!r} missing or outside the semigroup")
            if self.star.get(s) not in els:
                rep.add("closure", f"star of {s!r} missing")
        if not rep.valid:
            return rep
        P = self.product
        for s, t, u in iproduct(self.elements, repeat=3):
            if P[P[s, t], u] != P[s, P[t, u]]:
                rep.add("associativity", f"({s!r}{t!r}){u!r} != {s!r}({t!r}{u!r})")
                break
        for s in self.elements:
            ss = self.star[s]
            if P[P[s, ss], s] != s or P[P[ss, s], ss] != ss or self.star[ss] != s:
                rep.add("inverse", f"star is not an inverse at {s!r}")
        idem = self.idempotents()
        for e in idem:
            for f in idem:
                if P[e, f] != P[f, e]:
                    rep.add("idempotents", f"idempotents {e!r}, {f!r} do not commute")
        pts = set(self.points)
        for s in self.elements:
            b = self.action.get(s)
            if b is None:
                rep.add("action", f"beta undefined at {s!r}")
                continue
            if not set(b) <= pts or not set(b.values()) <= pts or len(set(b.values())) != len(b):
                rep.add("action", f"beta_{s!r} is not a partial injection of the points")
        if not rep.valid:
            return rep
        for s in self.elements:
            if _pmap(self.action[self.star[s]]) != _inverse_pmap(_pmap(self.action[s])):
                rep.add("homomorphism", f"beta does not respect star at {s!r}")
            for t in self.elements:
                lhs = _pmap(self.action[P[s, t]])
                rhs = _compose_pmap(_pmap(self.action[s]), _pmap(self.action[t]))
                if lhs != rhs:
                    rep.add("homomorphism", f"beta_{{st}} != beta_s beta_t at ({s!r}, {t!r})")
        return rep


def germ_groupoid(action):
    """The groupoid of germs [s, x] of an inverse semigroup action.

    (s, x) ~ (s', x) iff some idempotent e with x in dom(beta_e) has se = s'e;
    decided by exhaustive search. Arrows are labelled by a canonical
    representative ``(s, x)`` (first in element order).
    """
    rep = action.validate()
    if not rep.valid:
        raise ValueError(f"invalid inverse semigroup action: {rep.violations[:3]}")
    P, beta = action.product, action.action
    idem = action.idempotents()
    classes = {}  # (s, x) -> representative
    reps = []
    for x in action.points:
        local_idem = [e for e in idem if x in beta[e]]
        seen = []
        for s in action.elements:
            if x not in beta[s]:
                continue
            for r in seen:
                if any(P[s, e] == P[r, e] for e in local_idem):
                    classes[s, x] = (r, x)
                    break
            else:
                seen.append(s)
                classes[s, x] = (s, x)
                reps.append((s, x))

    def cls(s, x):
        return classes[s, x]

    src, tgt, inv, comp = {}, {}, {}, {}
    for s, x in reps:
        src[s, x] = cls(P[action.star[s], s], x)
        y = beta[s][x]
        tgt[s, x] = cls(P[s, action.star[s]], y)
        inv[s, x] = cls(action.star[s], y)
    units = {src[a] for a in reps}
    for s, y in reps:
        for t, x in reps:
            if beta[t][x] == y:
                comp[(s, y), (t, x)] = cls(P[s, t], x)
    return FiniteGroupoid(reps, units, src, tgt, comp, inv)


# --- elementary and AF structure ------------------------------------------------

@dataclass(frozen=True)
class ElementaryGroupoid:
    """Disjoint union of X_i × [N_i]^2; ``blocks`` is a tuple of (labels, N)."""

    blocks: tuple

    def __post_init__(self):
        blocks = tuple((tuple(X), int(N)) for X, N in self.blocks)
        for X, N in blocks:
            if N < 1 or not X:
                raise ValueError("blocks need a nonempty label set and N >= 1")
        object.__setattr__(self, "blocks", blocks)

    @property
    def sizes(self):
        return [N for X, N in self.blocks for _ in X]

    def dimension(self):
        """Dimension of the block algebra, sum over blocks of |X_i| N_i^2."""
        return sum(len(X) * N * N for X, N in self.blocks)

    def to_groupoid(self):
        """Arrows ``(i, x, a, b)`` with ``a, b`` in 1..N_i."""
        arrows, units, src, tgt, comp, inv = [], [], {}, {}, {}, {}
        for i, (X, N) in enumerate(self.blocks):
            r = range(1, N + 1)
            for x in X:
                for a in r:
                    units.append((i, x, a, a))
                    for b in r:
                        arr = (i, x, a, b)
                        arrows.append(arr)
                        src[arr], tgt[arr], inv[arr] = (i, x, b, b), (i, x, a, a), (i, x, b, a)
                        for c in r:
                            comp[arr, (i, x, b, c)] = (i, x, a, c)
        return FiniteGroupoid(arrows, units, src, tgt, comp, inv)

    def to_json(self):
        return {"blocks": [{"X": [str(x) for x in X], "N": N} for X, N in self.blocks]}

    @classmethod
    def from_json(cls, obj):
        return cls([(b["X"], b["N"]) for b in obj["blocks"]])


def orbits(g):
    """Unit orbits in order of first appearance."""
    seen, out = set(), []
    for x in g.unit_list:
        if x in seen:
            continue
        orb = [g.tgt[a] for a in g.fiber(x)]
        orb = list(dict.fromkeys(orb))
        seen.update(orb)
        out.append(orb)
    return out


def decompose_elementary(g, merge=False):
    """Orbit decomposition of a principal groupoid as an elementary groupoid.

    Each orbit gives a block with a singleton label set and N = orbit size.
    With ``merge=True`` orbits of equal size share one block with |X_i| > 1.
    Raises NotPrincipalError carrying an isotropy arrow otherwise.
    """
    for a in g.isotropy():
        if a not in g.units:
            raise NotPrincipalError(a)
    orbs = orbits(g)
    if not merge:
        return ElementaryGroupoid([((k,), len(o)) for k, o in enumerate(orbs)])
    by_size = {}
    for k, o in enumerate(orbs):
        by_size.setdefault(len(o), []).append(k)
    return ElementaryGroupoid([(tuple(ks), n) for n, ks in by_size.items()])


def elementary_isomorphism(g):
    """Explicit arrow map g -> decompose_elementary(g).to_groupoid()."""
    decompose_elementary(g)
    phi = {}
    for k, orb in enumerate(orbits(g)):
        pos = {x: i + 1 for i, x in enumerate(orb)}
        for x in orb:
            for a in g.fiber(x):
                phi[a] = (k, k, pos[g.tgt[a]], pos[x])
    return phi


@dataclass(frozen=True, eq=False)
class AFChain:
    """Increasing elementary stages and the inclusions ``stage j -> stage j+1``."""

    stages: tuple
    inclusions: tuple

    def __init__(self, stages, inclusions):
        stages = tuple(s.to_groupoid() if isinstance(s, ElementaryGroupoid) else s for s in stages)
        object.__setattr__(self, "stages", stages)
        object.__setattr__(self, "inclusions", tuple(dict(m) for m in inclusions))


def validate_af_chain(chain):
    rep = ValidationReport()
    if len(chain.inclusions) != max(len(chain.stages) - 1, 0):
        rep.add("shape", "need exactly one inclusion between consecutive stages")
        return rep
    for j, g in enumerate(chain.stages):
        sub = validate_groupoid(g)
        if not sub.valid:
            rep.add("stage", f"stage {j} is not a groupoid: {sub.violations[0][1]}")
        elif not is_principal(g):
            rep.add("elementary", f"stage {j} is not elementary (nontrivial isotropy)")
    if not rep.valid:
        return rep
    for j, (g, h, m) in enumerate(zip(chain.stages, chain.stages[1:], chain.inclusions)):
        if len(g.units) != len(h.units):
            rep.add("unit-space", f"stages {j} and {j + 1} have unit spaces of different size")
            continue
        if set(m) != set(g.arrows) or not set(m.values()) <= set(h.arrows):
            rep.add("inclusion", f"inclusion {j} is not a map between the arrow sets")
            continue
        if len(set(m.values())) != len(m):
            rep.add("inclusion", f"inclusion {j} is not injective")
        if {m[u] for u in g.units} != set(h.units):
            rep.add("unit-space", f"inclusion {j} does not identify the unit spaces")
        for a in g.arrows:
            if m[g.src[a]] != h.src[m[a]] or m[g.tgt[a]] != h.tgt[m[a]]:
                rep.add("homomorphism", f"inclusion {j} breaks src/tgt at {a!r}")
        for (a, b), c in g.compose_table.items():
            if h.compose(m[a], m[b]) != m[c]:
                rep.add("homomorphism", f"inclusion {j} breaks composition at ({a!r}, {b!r})")
    return rep


# --- JSON -------------------------------------------------------------------------

def _id(a):
    if isinstance(a, str):
        return a
    if isinstance(a, tuple):
        return "(" + ",".join(_id(x) for x in a) + ")"
    return str(a)


def groupoid_to_json(g):
    ids = {a: _id(a) for a in g.arrows}
    if len(set(ids.values())) != len(ids):
        raise ValueError("arrow ids do not serialize to distinct strings")
    return {
        "arrows": [ids[a] for a in g.arrows],
        "units": [ids[a] for a in g.unit_list],
        "src": {ids[a]: ids[g.src[a]] for a in g.arrows},
        "tgt": {ids[a]: ids[g.tgt[a]] for a in g.arrows},
        "compose": [[ids[a], ids[b], ids[c]] for (a, b), c in g.compose_table.items()],
        "inv": {ids[a]: ids[g.inv[a]] for a in g.arrows},
    }


def groupoid_from_json(obj):
    if isinstance(obj, str):
        obj = json.loads(obj)
    return FiniteGroupoid(obj["arrows"], obj["units"], obj["src"], obj["tgt"],
                          [tuple(t) for t in obj["compose"]], obj["inv"])


def action_from_json(obj):
    """``{"points", "elements", "product": [[s,t,st]], "star": {s: s*}, "action": {s: {x: y}}}``."""
    prod = {(s, t): u for s, t, u in obj["product"]}
    return FinitePartialBijectionSemigroup(
        tuple(obj["points"]), tuple(obj["elements"]), prod, dict(obj["star"]),
        {s: dict(m) for s, m in obj["action"].items()},
    )


def action_to_json(action):
    ids = {s: _id(s) for s in action.elements}
    return {
        "points": [_id(x) for x in action.points],
        "elements": [ids[s] for s in action.elements],
        "product": [[ids[s], ids[t], ids[action.product[s, t]]]
                    for s in action.elements for t in action.elements],
        "star": {ids[s]: ids[action.star[s]] for s in action.elements},
        "action": {ids[s]: {_id(x): _id(y) for x, y in action.action[s].items()}
                   for s in action.elements},
    }


def random_groupoid(rng, max_arrows=20):
    """A random finite groupoid assembled from pair groupoids, cyclic groups,
    group bundles and transformation groupoids, with at most ``max_arrows`` arrows."""
    pieces, total = [], 0
    while True:
        kind = rng.integers(4)
        if kind == 0:
            g = pair_groupoid(int(rng.integers(1, 4)))
        elif kind == 1:
            g = cyclic_group_groupoid(int(rng.integers(2, 4)))
        elif kind == 2:
            g = product(pair_groupoid(int(rng.integers(1, 3))), cyclic_group_groupoid(2))
        else:
            # Z_2 acting on n points through a random involution
            n = int(rng.integers(2, 5))
            perm = list(rng.permutation(n))
            swap = list(range(n))
            for i in range(0, n - 1, 2):
                if rng.random() < 0.7:
                    a, b = perm[i], perm[i + 1]
                    swap[a], swap[b] = b, a
            g = transformation_groupoid(range(2), lambda a, b: (a + b) % 2, 0, range(n),
                                        lambda s, x, swap=swap: swap[x] if s else x)
        if pieces and total + len(g) > max_arrows:
            break
        pieces.append(g)
        total += len(g)
        if total >= max_arrows or rng.random() < 0.4:
            break
    return disjoint_union(*pieces)
