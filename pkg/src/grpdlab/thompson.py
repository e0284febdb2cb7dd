"""
Generalized Brin-Thompson groups V_{k_1,...,k_m} as tables.

A table is a list of columns ``(v, u)`` of word tuples. Both rows are box
partitions of the product Cantor space, and the induced homeomorphism replaces
the prefix tuple ``v`` by ``u`` coordinatewise, each coordinate keeping its own
tail.
"""

from dataclasses import dataclass

from grpdlab import sft
from grpdlab.report import ValidationReport


@dataclass(frozen=True)
class Table:
    alphabets: tuple
    columns: tuple

    def __post_init__(self):
        object.__setattr__(self, "alphabets", tuple(int(k) for k in self.alphabets))
        object.__setattr__(self, "columns",
                           tuple((tuple(v), tuple(u)) for v, u in self.columns))

    @property
    def m(self):
        return len(self.alphabets)

    @property
    def v_row(self):
        return [v for v, _ in self.columns]

    @property
    def u_row(self):
        return [u for _, u in self.columns]

    def max_v_depth(self):
        return tuple(max((len(v[i]) for v in self.v_row), default=0) for i in range(self.m))

    def __len__(self):
        return len(self.columns)


def identity_table(alphabets):
    m = len(alphabets)
    return Table(alphabets, [(("",) * m, ("",) * m)])


def _row_report(rep, name, row, alphabets):
    for i, a in enumerate(row):
        for j in range(i + 1, len(row)):
            if sft.separating_coordinate(a, row[j]) is None:
                rep.add(f"{name}-overlap", f"{name}-boxes of columns {i} and {j} overlap")
    deficit = 1 - sft.kraft_measure(row, alphabets)
    rep.data[f"{name}_deficit"] = str(deficit)
    if deficit != 0:
        rep.add(f"{name}-measure", f"{name}-row has Kraft deficit {deficit}")


def validate_table(t):
    """Disjointness of both rows and their exact Kraft deficits."""
    rep = ValidationReport()
    for v, u in t.columns:
        for box in (v, u):
            try:
                sft.check_box(box, t.alphabets)
            except (TypeError, ValueError) as e:
                rep.add("alphabet", str(e))
    if not rep.valid:
        return rep
    _row_report(rep, "v", t.v_row, t.alphabets)
    _row_report(rep, "u", t.u_row, t.alphabets)
    return rep


def _require_valid(t):
    rep = validate_table(t)
    if not rep.valid:
        raise ValueError(f"invalid table: {rep.violations[0][1]}")


def _locate(t, point):
    for v, u in t.columns:
        if all(w.startswith(x) for w, x in zip(point, v)):
            return v, u
    return None


def apply(t, point):
    """Image of a prefix tuple whose words are at least as long as every v-word."""
    point = tuple(point)
    sft.check_box(point, t.alphabets)
    if any(len(w) < d for w, d in zip(point, t.max_v_depth())):
        raise ValueError(f"point {point!r} shorter than the table depth {t.max_v_depth()}")
    hit = _locate(t, point)
    if hit is None:
        raise ValueError("table rows do not cover the point; is the table valid?")
    v, u = hit
    return tuple(y + w[len(x):] for x, y, w in zip(v, u, point))


def compose(outer, inner):
    """Table of outer ∘ inner (inner applied first).

    Columns come from pairwise meets of inner's u-boxes with outer's v-boxes;
    each meet is pulled back through inner and pushed forward through outer.
    """
    if outer.alphabets != inner.alphabets:
        raise ValueError(f"alphabet mismatch: {outer.alphabets} vs {inner.alphabets}")
    cols = []
    for v, u in inner.columns:
        for v2, u2 in outer.columns:
            mu = sft.box_meet(u, v2)
            if mu is None:
                continue
            new_v = tuple(a + m[len(b):] for a, b, m in zip(v, u, mu))
            new_u = tuple(a + m[len(b):] for a, b, m in zip(u2, v2, mu))
            cols.append((new_v, new_u))
    return Table(outer.alphabets, cols)


def invert(t):
    return Table(t.alphabets, [(u, v) for v, u in t.columns])


def is_identity(t):
    # a column acts trivially on its box iff v == u (distinct prefixes move some point)
    return all(v == u for v, u in t.columns)


def equals(s, t):
    """Whether two tables induce the same homeomorphism.

    Evaluates both on every box of the common refinement of their v-rows; on such
    a box each acts by one substitution, and two substitutions agree iff the
    rewritten prefixes coincide.
    """
    if s.alphabets != t.alphabets:
        raise ValueError("alphabet mismatch")
    for v1, u1 in s.columns:
        for v2, u2 in t.columns:
            mu = sft.box_meet(v1, v2)
            if mu is None:
                continue
            a = tuple(y + w[len(x):] for x, y, w in zip(v1, u1, mu))
            b = tuple(y + w[len(x):] for x, y, w in zip(v2, u2, mu))
            if a != b:
                return False
    return True


def equals_by_grid(s, t, depth=None):
    """Brute-force comparison of ``apply`` on all word tuples at a uniform depth."""
    if depth is None:
        depth = tuple(max(a, b) for a, b in zip(s.max_v_depth(), t.max_v_depth()))
    return all(apply(s, p) == apply(t, p) for p in sft.box_tuples(s.alphabets, depth))


def reduce(t):
    """Merge families of k_i columns that differ only in the last letter of coordinate i.

    Repeats until no merge applies. Display form only; not a canonical form.
    """
    cols = list(t.columns)
    changed = True
    while changed:
        changed = False
        for i, k in enumerate(t.alphabets):
            groups = {}
            for v, u in cols:
                if not v[i] or not u[i] or v[i][-1] != u[i][-1]:
                    continue
                key = (v[:i] + (v[i][:-1],) + v[i + 1:], u[:i] + (u[i][:-1],) + u[i + 1:])
                groups.setdefault(key, set()).add(v[i][-1])
            for key, letters in groups.items():
                if len(letters) != k:
                    continue
                pv, pu = key
                family = {(pv[:i] + (pv[i] + c,) + pv[i + 1:], pu[:i] + (pu[i] + c,) + pu[i + 1:])
                          for c in sft.DIGITS[:k]}
                pos = min(j for j, c in enumerate(cols) if c in family)
                cols = [c for c in cols if c not in family]
                cols.insert(pos, key)
                changed = True
                break
            if changed:
                break
    return Table(t.alphabets, cols)


def refine(t, coordinate=0):
    """Split every column into k children along one coordinate (same group element)."""
    k = t.alphabets[coordinate]
    cols = []
    for v, u in t.columns:
        for c in sft.DIGITS[:k]:
            cols.append((v[:coordinate] + (v[coordinate] + c,) + v[coordinate + 1:],
                         u[:coordinate] + (u[coordinate] + c,) + u[coordinate + 1:]))
    return Table(t.alphabets, cols)


def prefix_transposition(alphabets, coordinate, a, b):
    """Swap the boxes starting with ``a`` and ``b`` in one coordinate, fix the rest."""
    alphabets = tuple(alphabets)
    k = alphabets[coordinate]
    sft.check_word(a, k)
    sft.check_word(b, k)
    if sft.comparable(a, b):
        raise ValueError(f"words {a!r} and {b!r} are prefix-comparable")
    m = len(alphabets)

    def box(w):
        return ("",) * coordinate + (w,) + ("",) * (m - coordinate - 1)

    rest = sorted(sft.boxes_complement([(a,), (b,)], (k,)))
    cols = [(box(a), box(b)), (box(b), box(a))] + [(box(w), box(w)) for (w,) in rest]
    return Table(alphabets, cols)


def commutator(s, t):
    """s t s⁻¹ t⁻¹."""
    return compose(s, compose(t, compose(invert(s), invert(t))))


def table_to_bisection(t):
    _require_valid(t)
    return sft.CylinderBisection(t.alphabets, [sft.CylinderPair(u, v) for v, u in t.columns])


def bisection_to_table(S):
    if not sft.is_full_group_element(S):
        raise ValueError("bisection is not a full-group element")
    return Table(S.alphabets, [(c.delta, c.gamma) for c in S.columns])


def kraft_sums(t):
    return (sft.kraft_measure(t.v_row, t.alphabets), sft.kraft_measure(t.u_row, t.alphabets))


def random_table(rng, alphabets, max_depth=3):
    P, Q = sft.random_partition_pair(rng, alphabets, max_depth)
    perm = rng.permutation(len(Q))
    return Table(alphabets, [(v, Q[int(j)]) for v, j in zip(P, perm)])


def moved_points(t, depth):
    """Word tuples at ``depth`` whose image differs from themselves."""
    return [(p, q) for p in sft.box_tuples(t.alphabets, depth) if (q := apply(t, p)) != p]


def table_to_json(t):
    return {"alphabets": list(t.alphabets),
            "columns": [{"v": list(v), "u": list(u)} for v, u in t.columns]}


def table_from_json(obj):
    return Table(obj["alphabets"], [(c["v"], c["u"]) for c in obj["columns"]])
