"""
Cylinder calculus for products of full shifts G_{k_1} x ... x G_{k_m}.

Words are digit strings over {0, ..., k-1} (so k <= 10) with "" for the empty
word. A box is a tuple of words, one per coordinate, standing for the clopen
set of points whose i-th coordinate starts with the i-th word. A cylinder pair
Z(gamma, delta) is the set of arrows sending delta·x to gamma·x coordinatewise;
its range box is ``gamma`` and its domain box is ``delta``.

A bisection is a finite union of cylinder pairs with pairwise disjoint domain
boxes and pairwise disjoint range boxes (union of products, one shared column
index). All measures are exact ``Fraction``s.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct

from grpdlab.report import ValidationReport

DIGITS = "0123456789"


# --- words and boxes -----------------------------------------------------------

def check_word(w, k):
    if not isinstance(w, str):
        raise TypeError(f"words are digit strings, got {w!r}")
    if not 2 <= k <= 10:
        raise ValueError(f"alphabet size must be in 2..10, got {k}")
    if any(c not in DIGITS[:k] for c in w):
        raise ValueError(f"word {w!r} has letters outside alphabet of size {k}")


def check_box(box, alphabets):
    if len(box) != len(alphabets):
        raise ValueError(f"box {box!r} does not match {len(alphabets)} coordinates")
    for w, k in zip(box, alphabets):
        check_word(w, k)


def comparable(a, b):
    return a.startswith(b) or b.startswith(a)


def word_meet(a, b):
    """The longer word if one prefixes the other, else None (disjoint cylinders)."""
    if a.startswith(b):
        return a
    if b.startswith(a):
        return b
    return None


def box_meet(b1, b2):
    out = []
    for a, b in zip(b1, b2):
        w = word_meet(a, b)
        if w is None:
            return None
        out.append(w)
    return tuple(out)


def separating_coordinate(b1, b2):
    """A coordinate where neither word prefixes the other, or None."""
    for i, (a, b) in enumerate(zip(b1, b2)):
        if not comparable(a, b):
            return i
    return None


def box_contains(outer, inner):
    return all(w.startswith(v) for v, w in zip(outer, inner))


def box_measure(box, alphabets):
    m = Fraction(1)
    for w, k in zip(box, alphabets):
        m /= Fraction(k) ** len(w)
    return m


def kraft_measure(boxes, alphabets):
    return sum((box_measure(b, alphabets) for b in boxes), Fraction(0))


def word_complement(w, k):
    """Prefix-free words whose cylinders partition the complement of wX_k."""
    return [w[:l] + c for l in range(len(w)) for c in DIGITS[:k] if c != w[l]]


def box_complement(box, alphabets):
    """Disjoint boxes covering the complement of ``box``."""
    m = len(box)
    out = []
    for i in range(m):
        head = tuple(box[:i])
        tail = ("",) * (m - i - 1)
        for w in word_complement(box[i], alphabets[i]):
            out.append(head + (w,) + tail)
    return out


def boxes_complement(boxes, alphabets):
    """Complement of a union of boxes, as disjoint boxes."""
    rest = [("",) * len(alphabets)]
    for b in boxes:
        comp = box_complement(b, alphabets)
        rest = [mt for r in rest for c in comp if (mt := box_meet(r, c)) is not None]
    return rest


def words(k, depth):
    return ["".join(t) for t in iproduct(DIGITS[:k], repeat=depth)]


def box_tuples(alphabets, depth):
    """All tuples of words with the given per-coordinate depth (int or tuple)."""
    if isinstance(depth, int):
        depth = (depth,) * len(alphabets)
    return list(iproduct(*(words(k, d) for k, d in zip(alphabets, depth))))


def refine_box(box, alphabets, depth):
    """Split a box into sub-boxes whose words have exactly ``depth`` letters (where shorter)."""
    if isinstance(depth, int):
        depth = (depth,) * len(alphabets)
    parts = [[w + s for s in words(k, max(d - len(w), 0))]
             for w, k, d in zip(box, alphabets, depth)]
    return list(iproduct(*parts))


# --- cylinder pairs ----------------------------------------------------------------

@dataclass(frozen=True)
class CylinderPair:
    """Z(gamma, delta) on each coordinate: ``gamma`` is the range box, ``delta`` the domain box."""

    gamma: tuple
    delta: tuple

    def __post_init__(self):
        object.__setattr__(self, "gamma", tuple(self.gamma))
        object.__setattr__(self, "delta", tuple(self.delta))
        if len(self.gamma) != len(self.delta):
            raise ValueError("gamma and delta need the same number of coordinates")

    @property
    def lag(self):
        return tuple(len(g) - len(d) for g, d in zip(self.gamma, self.delta))

    def check(self, alphabets):
        check_box(self.gamma, alphabets)
        check_box(self.delta, alphabets)

    def __repr__(self):
        def fmt(box):
            return ",".join(w or "ε" for w in box)
        return f"Z({fmt(self.gamma)}; {fmt(self.delta)})"


def _coordinate_product(g1, d1, g2, d2):
    if g2.startswith(d1):
        return g1 + g2[len(d1):], d2
    if d1.startswith(g2):
        return g1, d2 + d1[len(g2):]
    return None


def cyl_product(a, b, alphabets=None):
    """Z(gamma, delta)·Z(gamma', delta') coordinatewise, or None when empty."""
    if len(a.gamma) != len(b.gamma):
        raise ValueError("alphabet mismatch: different numbers of coordinates")
    if alphabets is not None:
        a.check(alphabets)
        b.check(alphabets)
    gs, ds = [], []
    for g1, d1, g2, d2 in zip(a.gamma, a.delta, b.gamma, b.delta):
        r = _coordinate_product(g1, d1, g2, d2)
        if r is None:
            return None
        gs.append(r[0])
        ds.append(r[1])
    return CylinderPair(tuple(gs), tuple(ds))


def cyl_inverse(a):
    return CylinderPair(a.delta, a.gamma)


def cyl_meet(a, b):
    """Intersection of two cylinder pairs as arrow sets (a cylinder pair or None)."""
    gs, ds = [], []
    for g1, d1, g2, d2 in zip(a.gamma, a.delta, b.gamma, b.delta):
        if g2.startswith(g1):
            ext = g2[len(g1):]
            if d2 != d1 + ext:
                return None
        elif g1.startswith(g2):
            ext = g1[len(g2):]
            if d1 != d2 + ext:
                return None
        else:
            return None
        gs.append(max(g1, g2, key=len))
        ds.append(max(d1, d2, key=len))
    return CylinderPair(tuple(gs), tuple(ds))


def cyl_restrict_domain(a, box):
    """Cut Z(gamma, delta) down to arrows with domain in ``box``."""
    mu = box_meet(a.delta, box)
    if mu is None:
        return None
    return CylinderPair(tuple(g + m[len(d):] for g, d, m in zip(a.gamma, a.delta, mu)), mu)


def cyl_restrict_range(a, box):
    r = cyl_restrict_domain(cyl_inverse(a), box)
    return None if r is None else cyl_inverse(r)


# --- bisections -------------------------------------------------------------------

def validate_bisection(alphabets, columns):
    rep = ValidationReport()
    alphabets = tuple(alphabets)
    for c in columns:
        try:
            c.check(alphabets)
        except (TypeError, ValueError) as e:
            rep.add("alphabet", str(e))
    if not rep.valid:
        return rep
    for i, a in enumerate(columns):
        for j in range(i + 1, len(columns)):
            b = columns[j]
            if separating_coordinate(a.delta, b.delta) is None:
                rep.add("domain-overlap", f"columns {i} and {j} have overlapping domain boxes")
            if separating_coordinate(a.gamma, b.gamma) is None:
                rep.add("range-overlap", f"columns {i} and {j} have overlapping range boxes")
    return rep


@dataclass(frozen=True)
class CylinderBisection:
    alphabets: tuple
    columns: tuple

    def __post_init__(self):
        object.__setattr__(self, "alphabets", tuple(int(k) for k in self.alphabets))
        object.__setattr__(self, "columns", tuple(self.columns))
        rep = validate_bisection(self.alphabets, self.columns)
        if not rep.valid:
            raise ValueError(f"not a bisection: {rep.violations[0][1]}")

    @property
    def m(self):
        return len(self.alphabets)

    def max_depth(self):
        """Per-coordinate maximal word length over both rows."""
        return tuple(max([len(w) for c in self.columns for w in (c.gamma[i], c.delta[i])],
                         default=0) for i in range(self.m))

    def max_domain_depth(self):
        return tuple(max([len(c.delta[i]) for c in self.columns], default=0)
                     for i in range(self.m))

    def __len__(self):
        return len(self.columns)


def identity_bisection(alphabets):
    m = len(alphabets)
    return CylinderBisection(alphabets, [CylinderPair(("",) * m, ("",) * m)])


def empty_bisection(alphabets):
    return CylinderBisection(alphabets, [])


def _same_signature(S, T):
    if S.alphabets != T.alphabets:
        raise ValueError(f"alphabet mismatch: {S.alphabets} vs {T.alphabets}")


def bisection_product(S, T):
    """The bisection ST = {st : s in S, t in T composable}."""
    _same_signature(S, T)
    cols = [c for a in S.columns for b in T.columns if (c := cyl_product(a, b)) is not None]
    # columns of a product are automatically disjoint; the constructor re-checks
    return CylinderBisection(S.alphabets, cols)


def bisection_inverse(S):
    return CylinderBisection(S.alphabets, [cyl_inverse(c) for c in S.columns])


def bisection_intersection(S, T):
    _same_signature(S, T)
    cols = [c for a in S.columns for b in T.columns if (c := cyl_meet(a, b)) is not None]
    return CylinderBisection(S.alphabets, cols)


def domain_boxes(S):
    """Domain boxes of the columns and their exact Kraft measure."""
    boxes = [c.delta for c in S.columns]
    return boxes, kraft_measure(boxes, S.alphabets)


def range_boxes(S):
    boxes = [c.gamma for c in S.columns]
    return boxes, kraft_measure(boxes, S.alphabets)


def is_full_group_element(S):
    return domain_boxes(S)[1] == 1 and range_boxes(S)[1] == 1


def alpha_apply(S, box):
    """Image of ``box`` under the bisection action alpha_S, as a list of boxes.

    Raises ValueError when the box is not contained in the domain of S.
    """
    box = tuple(box)
    check_box(box, S.alphabets)
    pieces = [p for c in S.columns if (p := cyl_restrict_domain(c, box)) is not None]
    if kraft_measure([p.delta for p in pieces], S.alphabets) != box_measure(box, S.alphabets):
        raise ValueError(f"box {box!r} escapes the domain of the bisection")
    return [p.gamma for p in pieces]


def rewrite(S, point):
    """Prefix replacement on a tuple of finite words; None if outside the domain.

    Raises ValueError if the words are too short to decide.
    """
    for c in S.columns:
        if all(w.startswith(d) for w, d in zip(point, c.delta)):
            return tuple(g + w[len(d):] for g, d, w in zip(c.gamma, c.delta, point))
    for c in S.columns:
        if all(comparable(w, d) for w, d in zip(point, c.delta)):
            raise ValueError(f"point {point!r} is too short for the bisection")
    return None


def expand(S, depth=None):
    """Arrow set of S as ``{domain word tuple: image tuple}`` at the given depth.

    The depth (int or per-coordinate tuple) must dominate every domain word; two
    bisections are equal as arrow sets iff their expansions agree at a common
    such depth.
    """
    if depth is None:
        depth = tuple(d + 1 for d in S.max_domain_depth())
    elif isinstance(depth, int):
        depth = (depth,) * S.m
    if any(d < md for d, md in zip(depth, S.max_domain_depth())):
        raise ValueError("expansion depth below the domain word lengths")
    out = {}
    for c in S.columns:
        for y in refine_box(c.delta, S.alphabets, depth):
            out[y] = tuple(g + w[len(d):] for g, d, w in zip(c.gamma, c.delta, y))
    return out


def semantic_equal(S, T):
    _same_signature(S, T)
    depth = tuple(max(a, b) + 1 for a, b in zip(S.max_domain_depth(), T.max_domain_depth()))
    return expand(S, depth) == expand(T, depth)


# --- full group helpers ------------------------------------------------------------

def extend_to_full_group_bisection(a, alphabets):
    """Complete a cylinder pair with disjoint domain and range boxes to a full-group element.

    Returns T ∪ T⁻¹ ∪ (identity on the complement of both boxes) for T = {a}.
    """
    alphabets = tuple(alphabets)
    a.check(alphabets)
    if separating_coordinate(a.gamma, a.delta) is None:
        raise ValueError(f"domain and range boxes of {a!r} overlap; split the cylinder first")
    rest = boxes_complement([a.gamma, a.delta], alphabets)
    cols = [a, cyl_inverse(a)] + [CylinderPair(b, b) for b in rest]
    S = CylinderBisection(alphabets, cols)
    assert is_full_group_element(S)
    return S


def split_cylinder(a, alphabets, coordinate):
    """Children Z(gamma c, delta c) over the letters c of one coordinate."""
    out = []
    for c in DIGITS[:alphabets[coordinate]]:
        g = list(a.gamma)
        d = list(a.delta)
        g[coordinate] += c
        d[coordinate] += c
        out.append(CylinderPair(tuple(g), tuple(d)))
    return out


def separate(a, alphabets, max_extra=4):
    """Split a cylinder pair until each piece has disjoint domain and range boxes.

    Returns ``(separated, stuck)``: pieces with prefix-incomparable boxes, and
    pieces still overlapping after ``max_extra`` rounds of splitting. Unit
    cylinders Z(w, w) never separate and land in ``stuck`` at once.
    """
    alphabets = tuple(alphabets)
    done, stuck, todo = [], [], [a]
    for _ in range(max_extra + 1):
        nxt = []
        for c in todo:
            if separating_coordinate(c.gamma, c.delta) is not None:
                done.append(c)
            elif c.gamma == c.delta:
                stuck.append(c)
            else:
                i = next(j for j in range(len(alphabets)) if c.gamma[j] != c.delta[j])
                nxt.extend(split_cylinder(c, alphabets, i))
        todo = nxt
        if not todo:
            break
    return done, stuck + todo


@dataclass(frozen=True)
class LocBisection:
    """The bisection TU: a full-group element restricted to a clopen set of units."""

    full: CylinderBisection
    restriction: tuple
    columns: tuple = field(default=())

    def as_bisection(self):
        return CylinderBisection(self.full.alphabets, self.columns)


def loc_restrict(S, U):
    if not is_full_group_element(S):
        raise ValueError("loc_restrict needs a full-group element")
    U = [tuple(b) for b in U]
    for b in U:
        check_box(b, S.alphabets)
    for i, b in enumerate(U):
        for c in U[i + 1:]:
            if separating_coordinate(b, c) is None:
                raise ValueError("restriction boxes are not disjoint")
    cols = [p for c in S.columns for b in U if (p := cyl_restrict_domain(c, b)) is not None]
    return LocBisection(S, tuple(U), tuple(cols))


# --- random generation ----------------------------------------------------------------

def random_partition(rng, alphabets, max_depth, splits=None):
    """Random partition of the product Cantor space into boxes by iterated splitting."""
    m = len(alphabets)
    boxes = [("",) * m]
    n = int(rng.integers(0, 6)) if splits is None else splits
    for _ in range(n):
        cand = [(j, i) for j, b in enumerate(boxes) for i in range(m) if len(b[i]) < max_depth]
        if not cand:
            break
        j, i = cand[int(rng.integers(len(cand)))]
        b = boxes.pop(j)
        boxes.extend(b[:i] + (b[i] + c,) + b[i + 1:] for c in DIGITS[:alphabets[i]])
    return boxes


def random_partition_pair(rng, alphabets, max_depth, max_splits=5):
    """Two random box partitions with the same number of boxes."""
    for _ in range(200):
        P = random_partition(rng, alphabets, max_depth, int(rng.integers(0, max_splits + 1)))
        for _ in range(50):
            Q = [("",) * len(alphabets)]
            while len(Q) < len(P):
                cand = [(j, i) for j, b in enumerate(Q) for i in range(len(alphabets))
                        if len(b[i]) < max_depth]
                if not cand:
                    break
                j, i = cand[int(rng.integers(len(cand)))]
                b = Q.pop(j)
                Q.extend(b[:i] + (b[i] + c,) + b[i + 1:] for c in DIGITS[:alphabets[i]])
            if len(Q) == len(P):
                return P, Q
    raise RuntimeError("could not match partition sizes")


def random_full_bisection(rng, alphabets, max_depth=3):
    P, Q = random_partition_pair(rng, alphabets, max_depth)
    perm = rng.permutation(len(Q))
    cols = [CylinderPair(Q[int(j)], d) for d, j in zip(P, perm)]
    return CylinderBisection(alphabets, cols)


def random_bisection(rng, alphabets, max_depth=3):
    """A random (not necessarily full) bisection: a random subset of full-group columns."""
    S = random_full_bisection(rng, alphabets, max_depth)
    keep = [c for c in S.columns if rng.random() < 0.6]
    return CylinderBisection(alphabets, keep)


# --- JSON -----------------------------------------------------------------------------

def bisection_to_json(S):
    return {
        "alphabets": list(S.alphabets),
        "columns": [{"range": list(c.gamma), "domain": list(c.delta)} for c in S.columns],
    }


def bisection_from_json(obj):
    alphabets = tuple(obj["alphabets"])
    cols = [CylinderPair(tuple(c["range"]), tuple(c["domain"])) for c in obj["columns"]]
    return CylinderBisection(alphabets, cols)


def cylinder_from_json(obj):
    return tuple(obj["alphabets"]), CylinderPair(tuple(obj["range"]), tuple(obj["domain"]))
