import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from grpdlab import sft
from grpdlab import thompson as T

seeds = st.integers(0, 2**32 - 1)
signatures = st.sampled_from([(2,), (3,), (2, 2), (2, 3), (3, 3)])


def table(alphabets, *cols):
    return T.Table(alphabets, [(tuple(v), tuple(u)) for v, u in cols])


SWAP01 = table((2,), (["0"], ["1"]), (["1"], ["0"]))


def test_validate_examples():
    assert T.validate_table(T.identity_table((2,))).valid
    assert T.validate_table(table((2,), (["0"], ["0"]), (["1"], ["1"]))).valid
    rep = T.validate_table(table((2,), (["0"], ["0"]), (["01"], ["1"])))
    assert not rep.valid and "v-overlap" in rep.kinds()


def test_validate_reports_deficit():
    rep = T.validate_table(table((2,), (["0"], ["0"]), (["10"], ["10"])))
    assert "v-measure" in rep.kinds() and rep.data["v_deficit"] == "1/4"


def test_apply_examples():
    assert T.apply(T.identity_table((2, 2)), ("01", "10")) == ("01", "10")
    s = table((2,), (["00"], ["01"]), (["01"], ["00"]), (["1"], ["1"]))
    assert T.apply(s, ("001",)) == ("011",)
    t = table((2, 2), (["0", ""], ["", "0"]), (["1", ""], ["", "1"]))
    assert T.validate_table(t).valid
    # tails stay with their coordinate: (0·1, 1) -> (1, 0·1)
    assert T.apply(t, ("01", "1")) == ("1", "01")
    with pytest.raises(ValueError):
        T.apply(s, ("0",))


def test_transposition_columns():
    s = T.prefix_transposition((2,), 0, "00", "01")
    assert list(s.columns) == [(("00",), ("01",)), (("01",), ("00",)), (("1",), ("1",))]
    t = T.prefix_transposition((2,), 0, "01", "10")
    assert set(t.columns) == {(("01",), ("10",)), (("10",), ("01",)), (("00",), ("00",)), (("11",), ("11",))}
    with pytest.raises(ValueError):
        T.prefix_transposition((2,), 0, "01", "01")
    with pytest.raises(ValueError):
        T.prefix_transposition((2,), 0, "0", "01")


def test_transpositions_do_not_commute():
    s = T.prefix_transposition((2,), 0, "00", "01")
    t = T.prefix_transposition((2,), 0, "01", "10")
    st_, ts = T.compose(s, t), T.compose(t, s)
    assert not T.equals(st_, ts)
    assert not T.equals_by_grid(st_, ts, (3,))
    moved = [w for w in sft.words(2, 3) if T.apply(st_, (w,)) != T.apply(ts, (w,))]
    assert moved


def test_invert_examples():
    ident = T.identity_table((2,))
    assert T.invert(ident) == ident
    assert T.equals(T.invert(SWAP01), SWAP01)
    s = T.prefix_transposition((2,), 0, "00", "01")
    assert T.equals(T.invert(s), s)


def test_equals_examples():
    assert not T.equals(T.identity_table((2,)), SWAP01)
    s = T.prefix_transposition((3,), 0, "1", "20")
    assert T.equals(s, T.refine(s, 0))
    assert T.equals(s, T.invert(T.invert(s)))


def test_reduce_examples():
    ident = T.identity_table((2,))
    assert T.reduce(T.refine(ident, 0)) == ident
    s = T.prefix_transposition((2,), 0, "00", "01")
    assert T.reduce(s) == s
    grid = T.refine(T.refine(T.refine(T.identity_table((2, 2)), 0), 1), 0)
    assert len(grid) == 8 and T.reduce(grid) == T.identity_table((2, 2))


def test_bisection_examples():
    assert sft.semantic_equal(T.table_to_bisection(T.identity_table((2, 3))), sft.identity_bisection((2, 3)))
    S = T.table_to_bisection(SWAP01)
    assert set(S.columns) == {sft.CylinderPair(("1",), ("0",)), sft.CylinderPair(("0",), ("1",))}
    with pytest.raises(ValueError):
        T.bisection_to_table(sft.CylinderBisection((2,), [sft.CylinderPair(("0",), ("1",))]))


@given(seeds, signatures)
def test_random_tables_valid(seed, alphabets):
    t = T.random_table(np.random.default_rng(seed), alphabets)
    assert T.validate_table(t).valid


@given(seeds, signatures)
def test_group_laws(seed, alphabets):
    rng = np.random.default_rng(seed)
    a, b, c = (T.random_table(rng, alphabets) for _ in range(3))
    ident = T.identity_table(alphabets)
    assert T.equals(T.compose(T.compose(a, b), c), T.compose(a, T.compose(b, c)))
    assert T.is_identity(T.compose(a, T.invert(a)))
    assert T.is_identity(T.compose(T.invert(a), a))
    assert T.equals(T.compose(a, ident), a) and T.equals(T.compose(ident, a), a)
    for t in (T.compose(a, b), T.compose(T.compose(a, b), c)):
        assert T.kraft_sums(t) == (Fraction(1), Fraction(1))
        assert T.validate_table(t).valid


@given(seeds, signatures)
def test_compose_evaluates_pointwise(seed, alphabets):
    rng = np.random.default_rng(seed)
    a, b = T.random_table(rng, alphabets, 2), T.random_table(rng, alphabets, 2)
    ab = T.compose(a, b)
    depth = tuple(x + y for x, y in zip(a.max_v_depth(), b.max_v_depth()))
    depth = tuple(max(d, e) for d, e in zip(depth, ab.max_v_depth()))
    for p in sft.box_tuples(alphabets, depth):
        q = T.apply(b, p)
        assert T.apply(ab, p) == T.apply(a, q)


@given(seeds, signatures)
def test_equals_agrees_with_grid(seed, alphabets):
    rng = np.random.default_rng(seed)
    a = T.random_table(rng, alphabets, 2)
    b = T.random_table(rng, alphabets, 2) if rng.random() < 0.5 else T.refine(a, 0)
    depth = tuple(x + y + 1 for x, y in zip(a.max_v_depth(), b.max_v_depth()))
    assert T.equals(a, b) == T.equals_by_grid(a, b, depth)


@given(seeds, signatures)
def test_equals_is_a_congruence(seed, alphabets):
    rng = np.random.default_rng(seed)
    a, c = T.random_table(rng, alphabets, 2), T.random_table(rng, alphabets, 2)
    a2 = T.refine(a, int(rng.integers(len(alphabets))))
    assert T.equals(a, a2) and T.equals(a2, a)
    assert T.equals(T.compose(a, c), T.compose(a2, c))
    assert T.equals(T.compose(c, a), T.compose(c, a2))


@given(seeds, signatures)
def test_apply_is_bijective(seed, alphabets):
    t = T.random_table(np.random.default_rng(seed), alphabets)
    depth = t.max_v_depth()
    for extra in (0, 1):
        d = tuple(x + extra for x in depth)
        pts = sft.box_tuples(alphabets, d)
        images = [T.apply(t, p) for p in pts]
        # images live at varying depths; bijectivity means they form a partition
        assert sft.kraft_measure(images, alphabets) == 1
        for i, x in enumerate(images):
            for y in images[i + 1:]:
                assert sft.separating_coordinate(x, y) is not None


@given(seeds, signatures)
def test_reduce_preserves_element(seed, alphabets):
    rng = np.random.default_rng(seed)
    t = T.random_table(rng, alphabets)
    r = T.reduce(T.refine(t, int(rng.integers(len(alphabets)))))
    assert T.equals(t, r) and len(r) <= len(t) * max(alphabets)


@given(seeds, signatures)
def test_bisection_round_trip(seed, alphabets):
    rng = np.random.default_rng(seed)
    t = T.random_table(rng, alphabets)
    S = T.table_to_bisection(t)
    assert sft.is_full_group_element(S)
    assert T.bisection_to_table(S) == t
    depth = tuple(d + 1 for d in t.max_v_depth())
    for p in sft.box_tuples(alphabets, depth):
        assert sft.rewrite(S, p) == T.apply(t, p)
    F = sft.random_full_bisection(rng, alphabets, 3)
    assert sft.semantic_equal(T.table_to_bisection(T.bisection_to_table(F)), F)


@given(seeds, signatures)
def test_product_corresponds_to_compose(seed, alphabets):
    rng = np.random.default_rng(seed)
    a, b = T.random_table(rng, alphabets, 2), T.random_table(rng, alphabets, 2)
    lhs = sft.bisection_product(T.table_to_bisection(a), T.table_to_bisection(b))
    assert sft.semantic_equal(lhs, T.table_to_bisection(T.compose(a, b)))


def test_json_round_trip(rng):
    t = T.random_table(rng, (2, 3))
    obj = json.loads(json.dumps(T.table_to_json(t)))
    assert T.table_from_json(obj) == t
    assert T.table_to_json(T.table_from_json(obj)) == obj
