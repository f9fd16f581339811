import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from plethyon.core import (
    ADDITIVE,
    CLASSICAL,
    AutFlavor,
    ColorMismatchError,
    Lambda,
    ParseError,
    PlethyonError,
    UnsupportedFlavorError,
    aut_order,
)
from plethyon.operad import (
    TupleOperation,
    arrow_category,
    axiom_check,
    codiscrete_category,
    giraudo,
    giraudo_full_compose,
    giraudo_partial_compose,
    operad_by_name,
    sym,
    t_intermediate_category,
    t_operad,
    t_operad_compose,
)

AXIOM_OPERADS = ["sym", "ass", "sym2", "ass2", "giraudo:N+,x", "giraudo:N,+",
                 "cat:codiscrete2", "cat:arrow"]

tuples = st.lists(st.integers(1, 9), min_size=1, max_size=4).map(tuple)


def test_giraudo_full_composition_example():
    assert giraudo_full_compose((5, 9), ((2, 3), (4, 7))) == (10, 15, 36, 63)


def test_giraudo_additive():
    assert giraudo_full_compose((1, 0), ((2,), (0, 1)), ADDITIVE) == (3, 0, 1)


@given(tuples, st.data())
def test_full_composition_is_iterated_partial(x, data):
    inners = [data.draw(tuples) for _ in x]
    acc = tuple(x)
    # plug right to left so earlier positions do not move
    for i in range(len(x), 0, -1):
        acc = giraudo_partial_compose(acc, i, inners[i - 1])
    assert acc == giraudo_full_compose(x, inners)


@given(tuples, tuples, tuples)
def test_partial_composition_is_sequentially_associative(x, y, z):
    # (x o_1 y) o_1 z == x o_1 (y o_1 z)
    lhs = giraudo_partial_compose(giraudo_partial_compose(x, 1, y), 1, z)
    rhs = giraudo_partial_compose(x, 1, giraudo_partial_compose(y, 1, z))
    assert lhs == rhs


def test_partial_composition_position_checked():
    with pytest.raises(PlethyonError):
        giraudo_partial_compose((1, 2), 3, (1,))


@pytest.mark.parametrize("name", AXIOM_OPERADS)
def test_axioms_hold(name):
    rep = axiom_check(operad_by_name(name), 3)
    assert rep.passed, rep.summary()


def test_corrupted_composition_is_caught():
    Q = giraudo(CLASSICAL)

    def broken(Q, outer, inners):
        arrows = [m * a for m, y in zip(outer.arrows, inners) for a in y.arrows]
        if outer.arity == 2:
            arrows[0] += 1
        return arrows

    rep = axiom_check(Q.with_composer(broken), 3)
    assert not rep.passed
    assert rep.witnesses


def test_unit_law_by_hand():
    Q = operad_by_name("cat:arrow")
    C = Q.base
    op = Q.make(0, [C.arrow("u"), C.arrow("id0")])
    units = [Q.unit(c) for c in Q.input_colors(op)]
    assert Q.compose(op, units) == op
    assert Q.compose(Q.unit(0), [op]) == op


def test_color_mismatch_rejected():
    Q = operad_by_name("cat:arrow")
    C = Q.base
    op = Q.make(0, [C.arrow("u")])
    with pytest.raises(ColorMismatchError):
        Q.compose(op, [Q.unit(0)])


def test_reduced_no_nullary_operations():
    with pytest.raises(PlethyonError):
        sym().make(0, [])


def test_codiscrete_category_is_a_category():
    for k in (1, 2, 3):
        C = codiscrete_category(k)
        assert C.check_axioms() == []
        assert len(C.all_arrows()) == k * k
    assert arrow_category().check_axioms() == []


def test_category_table_from_file(tmp_path):
    table = {
        "objects": [0, 1],
        "morphisms": [["i0", 0, 0], ["i1", 1, 1], ["u", 0, 1]],
        "composition": [["i0", "i0", "i0"], ["i1", "i1", "i1"], ["i0", "u", "u"], ["u", "i1", "u"]],
        "identities": {"0": "i0", "1": "i1"},
        "symmetric": True,
    }
    path = tmp_path / "arrow.json"
    path.write_text(json.dumps(table))
    Q = operad_by_name(f"cat:{path}")
    assert Q.symmetric
    assert axiom_check(Q, 3).passed


def test_bad_category_table_rejected(tmp_path):
    table = {
        "objects": [0, 1],
        "morphisms": [["i0", 0, 0], ["i1", 1, 1], ["u", 0, 1]],
        "composition": [["i0", "i0", "i0"], ["i1", "i1", "i1"]],
        "identities": {"0": "i0", "1": "i1"},
    }
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(table))
    with pytest.raises(PlethyonError):
        operad_by_name(f"cat:{path}")
    with pytest.raises(ParseError):
        operad_by_name("nonsense")


def test_t_operad_seventeen_leaf_composition():
    # outer blocks of sizes 3 and 2; the first carries a piece with blocks 2,1,
    # the second a single block of size 4: 17 = 3*3 + 2*4
    T = t_operad("sym")
    outer = T.make(0, (3, 2))
    inners = [T.make(0, (2, 1)), T.make(0, (4,))]
    # canonical order sorts, so line the inners up with the sorted outer
    inners = [inners[1], inners[0]] if outer.arrows == (2, 3) else inners
    comp = T.compose(outer, inners)
    assert comp == TupleOperation(0, (3, 6, 8))
    assert sum(comp.arrows) == 17
    assert t_operad_compose(T.make(0, (3,)), [T.make(0, (2, 1))]) == TupleOperation(0, (3, 6))


@pytest.mark.parametrize("vec", [(1,), (2, 1), (0, 2), (1, 1, 1), (3, 0, 0, 1)])
def test_t_sym_aut_is_corolla_aut(vec):
    T = t_operad("sym")
    lam = Lambda.from_vector(vec)
    op = T.make(0, list(lam.elements()))
    assert T.aut(op) == aut_order(lam, AutFlavor.SYMMETRIC)


def test_intermediate_category_auts():
    assert t_intermediate_category("sym").arrow_aut(4) == 24
    assert t_intermediate_category("ass").arrow_aut(4) == 1
    assert t_intermediate_category("sym2").base.name == "N+,x[2]"
    with pytest.raises(UnsupportedFlavorError):
        t_intermediate_category("giraudo:N+,x")


def test_enumeration_counts():
    # multisets / sequences of 1..bound arrows over a single arrow
    assert len(sym().enumerate_ops(3)) == 3
    assert len(operad_by_name("ass2").enumerate_ops(2)) == 2 * (2 + 4)
    assert len(operad_by_name("sym2").enumerate_ops(2)) == 2 * (2 + 3)
