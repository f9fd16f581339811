import math
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plethyon.core import Generator, Lambda, UnsupportedFlavorError, Word
from plethyon.incidence import (
    FLAVORS,
    TensorElement,
    check_bialgebra_laws,
    counit,
    delta_combinatorial,
    delta_of_monomial,
    delta_symbolic,
    delta_symbolic_product,
    enumerate_decompositions,
    format_tensor,
    get_flavor,
    product,
    tensor_from_json,
    tensor_mul,
    tensor_to_json,
)

FDB = get_flavor("fdb")
P = get_flavor("classical")


def A(n):
    return Generator(0, Lambda({1: n}))


def set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def compositions(n):
    if n == 0:
        yield ()
        return
    for k in range(1, n + 1):
        for rest in compositions(n - k):
            yield (k,) + rest


def test_fdb_small_case_by_hand():
    t = delta_combinatorial(FDB, A(3))
    want = TensorElement([
        (((A(3),), (A(1),)), 1),
        (((A(1), A(2)), (A(2),)), 3),
        (((A(1), A(1), A(1)), (A(3),)), 1),
    ])
    assert t == want


@pytest.mark.parametrize("n", range(1, 7))
def test_fdb_counts_set_partitions(n):
    want = Counter()
    for part in set_partitions(list(range(n))):
        inner = tuple(sorted(A(len(b)) for b in part))
        want[(inner, (A(len(part)),))] += 1
    assert delta_combinatorial(FDB, A(n)).terms == {k: Fraction(v) for k, v in want.items()}


@pytest.mark.parametrize("n", range(1, 7))
def test_ordered_fdb_counts_compositions(n):
    f = get_flavor("fdb_ord")
    sigma = f.parse(".".join("1" * n))
    want = Counter()
    for comp in compositions(n):
        inner = f.monomial(Generator(0, Word((1,) * c)) for c in comp)
        want[(inner, (Generator(0, Word((1,) * len(comp))),))] += 1
    assert delta_combinatorial(f, sigma).terms == {k: Fraction(v) for k, v in want.items()}


@pytest.mark.parametrize("n", range(1, 6))
def test_noncommutative_fdb_one_term_per_composition(n):
    f = get_flavor("fdb_nc")
    t = delta_combinatorial(f, f.parse(".".join("1" * n)))
    assert len(t) == 2 ** (n - 1)
    assert set(t.terms.values()) == {1}


def test_classical_slice_by_hand():
    sigma = P.parse("(0,0,0,1,0,2)")
    t = delta_combinatorial(P, sigma, right=P.parse("(1,2)"))
    fact = math.factorial
    # aut(sigma) * prod lam_m! / (aut(lambda) * prod aut(mu)^c * c!)
    aut_sigma = fact(4) * fact(6) ** 2 * fact(2)
    aut_lam = 1 * (fact(2) ** 2 * fact(2))
    c1 = Fraction(aut_sigma * 1 * 2, aut_lam * (fact(4) * fact(3) ** 2 * fact(2)))
    c2 = Fraction(aut_sigma * 1 * 2, aut_lam * (fact(2) * fact(3) * fact(6)))
    rows = {P.format(g) for k in t.terms for g in k[0]}
    assert rows == {"(0,0,0,1)", "(0,0,1)", "(0,1)", "(0,0,0,0,0,1)"}
    assert sorted(t.terms.values()) == sorted([c1, c2]) == [720, 3600]


def test_decompositions_sum_to_restricted_delta():
    sigma = P.parse("(0,0,0,1,0,2)")
    for lam in ("(1,2)", "(1,1)", "(0,0,1)", "(1)", "(0,0,0,1,0,2)"):
        g = P.parse(lam)
        decs = enumerate_decompositions(P, sigma, g)
        t = delta_combinatorial(P, sigma, right=g)
        assert TensorElement([((d.inner, (g,)), d.coefficient) for d in decs]) == t


def test_decompositions_at_lambda_12():
    decs = enumerate_decompositions(P, P.parse("(0,0,0,1,0,2)"), P.parse("(1,2)"))
    assert len(decs) == 2
    assert sorted(d.coefficient for d in decs) == [720, 3600]


def test_linear_nc_coefficients_are_zero_one():
    f = get_flavor("lin_diamond_nc")
    for g in f.generators(6):
        assert set(delta_combinatorial(f, g).terms.values()) <= {1}
    t = delta_combinatorial(f, f.parse("6"))
    divisor_pairs = [(d, 6 // d) for d in (1, 2, 3, 6)]
    assert {(k[0][0].shape[0], k[1][0].shape[0]) for k in t.terms} == set(divisor_pairs)


@pytest.mark.parametrize("name", sorted(FLAVORS))
def test_laws_small_bound(name):
    f = FLAVORS[name]
    rep = check_bialgebra_laws(f, 3)
    assert rep.passed, rep.summary()


@pytest.mark.parametrize("name", ["classical", "exp", "diamond", "diamond_nc", "y_mult", "y_z2"])
def test_routes_agree(name):
    f = FLAVORS[name]
    for g in f.generators(5):
        assert delta_symbolic(f, g) == delta_combinatorial(f, g), f.format(g)


@pytest.mark.parametrize("name", sorted(FLAVORS))
def test_extremal_terms(name):
    # every generator has sigma (x) unit and the all-units term
    f = FLAVORS[name]
    for g in f.generators(3):
        t = delta_combinatorial(f, g)
        assert t.terms[((g,), (f.unit(g.color),))] == 1
        assert all(c > 0 for c in t.terms.values())


@pytest.mark.parametrize("name", ["classical", "fdb_nc", "biv"])
def test_counit_kills_non_units(name):
    f = FLAVORS[name]
    for g in f.generators(3):
        assert counit(f, (g,)) == (1 if f.is_unit(g) else 0)


vec = st.lists(st.integers(0, 2), min_size=1, max_size=4).filter(any)


@settings(max_examples=25)
@given(vec, vec)
def test_delta_is_multiplicative(u, v):
    a, b = Generator(0, Lambda.from_vector(u)), Generator(0, Lambda.from_vector(v))
    d = lambda g: delta_combinatorial(P, g)
    lhs = delta_of_monomial(P, product(P, (a,), (b,)), d)
    assert lhs == tensor_mul(P, d(a), d(b))
    assert delta_symbolic_product(P, [a, b]) == lhs


def test_noncommutative_product_keeps_order():
    f = get_flavor("fdb_nc")
    x, y = f.parse("1"), f.parse("1.1")
    assert product(f, (x,), (y,)) == (x, y)
    assert product(f, (y,), (x,)) == (y, x)


def test_tensor_json_and_swap_round_trip():
    sigma = P.parse("(1,1,1)")
    t = delta_combinatorial(P, sigma)
    f2, t2 = tensor_from_json(tensor_to_json(P, sigma, t))
    assert f2 is P and t2 == t
    assert t.swap().swap() == t
    assert t.swap() != t


def test_tensor_text_is_sorted_by_right_leg():
    t = delta_combinatorial(FDB, A(3))
    lines = format_tensor(FDB, t).splitlines()
    assert lines == ["1  A(3) (x) A(1)", "3  A(1)*A(2) (x) A(2)", "1  A(1)^3 (x) A(3)"]


def test_law_checker_catches_a_broken_delta():
    def bad(g):
        t = delta_combinatorial(P, g)
        if g.shape.size() >= 2:
            t = t + TensorElement([(((g,), (g,)), 1)])
        return t

    rep = check_bialgebra_laws(P, 3, delta=bad, routes=False)
    assert not rep.passed and rep.failures


def test_unknown_flavor():
    with pytest.raises(UnsupportedFlavorError):
        get_flavor("nope")


def test_symbolic_truncation_sanity():
    for n in range(1, 6):
        assert delta_symbolic(FDB, A(n)) == delta_combinatorial(FDB, A(n))


@pytest.mark.parametrize("name", ["classical", "exp", "diamond", "biv", "y_add"])
def test_coefficients_are_integers(name):
    # they count placements up to the free action of aut(lambda) * prod aut(mu)
    f = FLAVORS[name]
    for g in f.generators(5):
        assert all(c.denominator == 1 for c in delta_combinatorial(f, g).terms.values())
