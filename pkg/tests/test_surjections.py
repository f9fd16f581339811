import itertools
import math
from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from plethyon.core import LimitExceededError, ParseError, PlethyonError
from plethyon.incidence import delta_combinatorial, get_flavor
from plethyon.surjections import (
    Decoration,
    Node,
    Span,
    class_aut,
    class_of,
    corolla,
    enumerate_ts,
    flavor_for,
    forest_aut_order,
    glue,
    is_isomorphism,
    is_monotone,
    is_monotone_square,
    monotone_form,
    monotone_pullback,
    pullback,
    representative,
    ts_delta,
    two_simplices,
)

DECORATIONS = [
    ("", "classical"),
    ("left=linear", "exp"),
    ("right=linear", "diamond"),
    ("left=linear,right=linear", "lin_diamond"),
    ("right=monotone", "diamond_nc"),
    ("left=monotone,right=monotone", "lin_diamond_nc"),
]


@st.composite
def surjections(draw, n=None, k=None):
    k = draw(st.integers(1, 3)) if k is None else k
    extra = draw(st.lists(st.integers(0, k - 1), max_size=3)) if n is None else None
    f = list(range(k)) + (extra if extra is not None else [draw(st.integers(0, k - 1)) for _ in range(n - k)])
    return draw(st.permutations(f))


@st.composite
def spans(draw):
    n11 = draw(st.integers(1, 2))
    down = draw(surjections(k=n11))
    n00 = len(down)
    left = draw(surjections(k=n00))
    colors00 = tuple(draw(st.integers(0, 1)) for _ in range(n00))
    return Span(tuple(left), tuple(down), colors00)


# --- squares ------------------------------------------------------------


@given(surjections(), st.data())
def test_pullback_commutes_and_is_complete(g, data):
    k = max(g) + 1
    f = data.draw(surjections(k=k))
    sq = pullback(g, f)
    assert all(g[a] == f[b] for a, b in zip(sq.p, sq.q))
    pairs = {(a, b) for a in range(len(g)) for b in range(len(f)) if g[a] == f[b]}
    assert set(zip(sq.p, sq.q)) == pairs and sq.size == len(pairs)


@given(st.integers(1, 3), st.data())
def test_monotone_pullback_is_the_unique_monotone_square(k, data):
    g = sorted(data.draw(surjections(k=k)))
    f = data.draw(surjections(k=k))
    sq = monotone_pullback(g, f)
    assert is_monotone_square(sq)
    pairs = list(zip(sq.p, sq.q))
    if len(pairs) <= 6:
        good = [perm for perm in itertools.permutations(pairs)
                if is_monotone_square(type(sq)(len(perm), tuple(a for a, _ in perm), tuple(b for _, b in perm)))]
        assert good == [tuple(pairs)]


def test_monotone_pullback_needs_monotone_leg():
    with pytest.raises(PlethyonError):
        monotone_pullback([1, 0], [0, 1])


# --- normal forms -------------------------------------------------------


@given(spans())
def test_monotone_form_is_isomorphic_and_monotone(span):
    new, p01, p00 = monotone_form(span)
    assert new.is_valid()
    assert is_monotone(new.left) and is_monotone(new.down)
    assert is_isomorphism(span, new, p01, p00)


@given(spans())
def test_class_is_invariant_under_normal_form(span):
    # plain classes forget every ordering, so relabeling cannot change them
    new, _, _ = monotone_form(span)
    dec = Decoration()
    assert [class_of(p, dec, 2) for p in span.pieces()] == [class_of(p, dec, 2) for p in new.pieces()]


def _orbit_aut(span: Span, dec: Decoration) -> int:
    """Count relabelings of t01 and t00 that fix the span and respect the decoration."""
    n01, n00 = len(span.left), span.n00
    count = 0
    for p00 in itertools.permutations(range(n00)):
        if dec.ordered_blocks and list(p00) != list(range(n00)):
            continue
        for p01 in itertools.permutations(range(n01)):
            if dec.rigid_blocks:
                # inside each block the order of elements is kept
                blocks = [[x for x in range(n01) if span.left[p01[x]] == b] for b in range(n00)]
                if any(p01[a] > p01[b] for bl in blocks for a, b in zip(bl, bl[1:])):
                    continue
            if is_isomorphism(span, span, p01, p00):
                count += 1
    return count


@pytest.mark.parametrize("dec_text,flavor", DECORATIONS[:4])
def test_aut_matches_orbit_count(dec_text, flavor):
    dec = Decoration.parse(dec_text)
    for ic in enumerate_ts(1, 5, dec):
        rep = representative(ic.key)
        assert _orbit_aut(rep, dec) == ic.aut == class_aut(ic.key, dec)


def test_two_colored_aut_matches_orbit_count():
    dec = Decoration()
    for ic in enumerate_ts(1, 4, dec, colors=2):
        assert _orbit_aut(representative(ic.key, 2), dec) == ic.aut


# --- level 1 classes ------------------------------------------------------


def test_plain_classes_are_partitions_with_corolla_auts():
    P = get_flavor("classical")
    classes = enumerate_ts(1, 6)
    assert len(classes) == 1 + 2 + 3 + 5 + 7 + 11
    assert {c.key for c in classes} == set(P.generators(6))
    for c in classes:
        assert c.aut == P.aut(c.key.shape)
        assert c.bottom == c.key.shape.weight(P.base)


@pytest.mark.parametrize("dec_text,flavor", DECORATIONS)
def test_decorated_classes_match_flavors(dec_text, flavor):
    dec = Decoration.parse(dec_text)
    f = get_flavor(flavor)
    assert flavor_for(dec) is f
    classes = enumerate_ts(1, 5, dec)
    assert {c.key for c in classes} == set(f.generators(5))
    for c in classes:
        assert c.aut == f.aut(c.key.shape)


def test_decorated_aut_values():
    # left linear: lambda!, right linear: omega!, both: 1
    exp = enumerate_ts(1, 4, "left=linear")
    assert {get_flavor("exp").format(c.key): c.aut for c in exp}["(2,1)"] == 2
    dia = enumerate_ts(1, 4, "right=linear")
    assert {get_flavor("diamond").format(c.key): c.aut for c in dia}["2.1.1"] == 2
    both = enumerate_ts(1, 4, "left=linear,right=linear")
    assert {c.aut for c in both} == {1}


def test_limit_guard():
    with pytest.raises(LimitExceededError):
        enumerate_ts(1, 11)
    assert enumerate_ts(1, 3, limit=3)


def test_decoration_parse_errors():
    with pytest.raises(ParseError):
        Decoration.parse("middle=linear")
    with pytest.raises(ParseError):
        Decoration.parse("left=wobbly")


# --- level 2 --------------------------------------------------------------


def test_plain_ts_delta_matches_flavor():
    P = get_flavor("classical")
    for c in enumerate_ts(1, 6):
        assert ts_delta(c.key) == delta_combinatorial(P, c.key)


@pytest.mark.parametrize("dec_text,flavor", DECORATIONS[1:])
def test_decorated_ts_delta_matches_flavor(dec_text, flavor):
    f = get_flavor(flavor)
    for c in enumerate_ts(1, 5, dec_text):
        assert ts_delta(c.key, dec_text) == delta_combinatorial(f, c.key)


def test_bivariate_ts_delta_matches_flavor():
    f = get_flavor("biv")
    for c in enumerate_ts(1, 4, "", colors=2):
        assert ts_delta(c.key, "", 2) == delta_combinatorial(f, c.key)


def test_seventeen_point_two_simplex():
    # t01 = 17 over 3 blocks (6, 3, 8); outer 5 -> 2 -> 1 with blocks 3 and 2;
    # inner pieces 3 -> 2 (blocks 2, 1) and 4 -> 1
    P = get_flavor("classical")
    sigma = P.parse("(0,0,1,0,0,1,0,1)")
    outer = P.parse("(0,1,1)")
    inner = P.monomial([P.parse("(1,1)"), P.parse("(0,0,0,1)")])
    rows = [r for r in two_simplices(sigma, limit=17) if r.outer == outer and r.inner == inner]
    assert len(rows) == 1 and rows[0].count > 0
    assert ts_delta(sigma, limit=17) == delta_combinatorial(P, sigma)
    assert sum(sigma.shape.elements()) == 17 == 3 * 3 + 2 * 4


def test_glue_builds_composite_class():
    P = get_flavor("classical")
    # inner 3 <- 7 -> 2: blocks 2,1 over point 0 and a 4-block over point 1
    a = Span((0, 0, 1, 2, 2, 2, 2), (0, 0, 1))
    # outer 2 <- 5 -> 1 with blocks of sizes 2 and 3
    b = Span((0, 0, 1, 1, 1), (0, 0))
    # point 0 over the 3-block, point 1 over the 2-block: (6, 3, 8)
    assert glue(a, b, (1, 0), Decoration()) == P.parse("(0,0,1,0,0,1,0,1)")
    # the other matching scales by 2 and 3 instead: (4, 2, 12)
    assert glue(a, b, (0, 1), Decoration()) == P.parse("(0,1,0,1,0,0,0,0,0,0,0,1)")


# --- forests ----------------------------------------------------------------


def _example_forest():
    x1 = corolla("x1", "blue", ["black"] * 3)
    x2 = corolla("x2", "orange", ["green"] * 2)
    x3 = corolla("x3", "blue", ["green", "green", "purple"])
    t1 = Node("y1", "red", (x1, x1))
    t3 = Node("y2", "yellow", (x2,))
    t4 = Node("y1", "red", (x3, x3))
    return [t1, t1, t3, t4]


def test_forest_aut_example():
    f = math.factorial
    want = (f(2) * f(2) ** 2 * f(3) ** 4) * f(2) * (f(2) * f(2) ** 2)
    assert want == 165888
    assert forest_aut_order(_example_forest()) == want


def test_planar_forest_only_swaps_identical_trees():
    assert forest_aut_order(_example_forest(), symmetric=False) == 2
    assert forest_aut_order(_example_forest(), symmetric=False, forest_symmetric=False) == 1


def test_forest_aut_brute_force_small():
    # a tree y(x(a,a), x(a,a)): swap the x's (2) and leaves in each (2*2)
    x = corolla("x", "c", ["a", "a"])
    t = Node("y", "c", (x, x))
    assert forest_aut_order([t]) == 8
    leaves = Counter(["a", "a", "b"])
    assert forest_aut_order([corolla("z", "c", list(leaves.elements()))]) == 2


def test_malformed_forest():
    with pytest.raises(PlethyonError):
        forest_aut_order(["not a node"])
