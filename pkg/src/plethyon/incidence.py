"""Comultiplications of plethystic and Faa di Bruno type bialgebras.

Every flavor is a free (commutative or noncommutative) algebra on connected
classes ``A_sigma``.  ``delta_combinatorial`` counts two-level
decompositions weighted by automorphism orders; ``delta_symbolic`` reads
the same numbers off a substitution of generic series.  Tensor legs are
``inner forest monomial (x) outer generator``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from typing import Callable, Iterable

from .core import (
    ADDITIVE,
    CLASSICAL,
    TRIVIAL,
    Z2,
    AutFlavor,
    BaseCategory,
    ColoredBase,
    Generator,
    Lambda,
    PlethyonError,
    UnsupportedFlavorError,
    Word,
    aut_order,
    check_generator,
    format_generator,
    format_rational,
    parse_generator,
    rational_to_json,
    verschiebung,
    word_aut_order,
)
from .series import (
    LAMBDA,
    WORD,
    enumerate_lambdas,
    enumerate_words,
    generic_series,
    substitute_plethystic,
)

COMMUTATIVE = "commutative"
NONCOMMUTATIVE = "noncommutative"


@dataclass(frozen=True)
class Flavor:
    """One bialgebra: base category, inner automorphisms, variable and coefficient kinds."""

    name: str
    label: str
    base: BaseCategory = field(compare=False)
    inner: AutFlavor
    variables: str
    coefficients: str = COMMUTATIVE

    def __post_init__(self):
        if self.variables not in (LAMBDA, WORD):
            raise ValueError(f"bad variable kind {self.variables!r}")
        if self.coefficients == NONCOMMUTATIVE and self.variables != WORD:
            raise ValueError("noncommutative coefficients need word variables")

    @property
    def commutative(self) -> bool:
        return self.coefficients == COMMUTATIVE

    @property
    def colors(self) -> tuple:
        return self.base.objects

    @property
    def words(self) -> bool:
        return self.variables == WORD

    def aut(self, shape) -> int:
        if isinstance(shape, Word):
            return word_aut_order(shape, self.inner, self.base)
        return aut_order(shape, self.inner, self.base)

    def grade(self, shape) -> int:
        """Weighted degree on graded bases, number of variables otherwise."""
        return shape.weight(self.base) if self.base.has_size else shape.size()

    def generators(self, bound: int) -> list[Generator]:
        """All connected classes of grade at most ``bound``, canonically ordered."""
        out = []
        weighted = self.base.has_size
        for c in self.colors:
            arrows = self.base.arrows_from(c, bound)
            enum = enumerate_words if self.words else enumerate_lambdas
            keys = enum(arrows, bound, self.base, bound if weighted else None)
            out.extend(Generator(c, k) for k in keys)
        return out

    def unit(self, color) -> Generator:
        ident = self.base.identity(color)
        shape = Word((ident,)) if self.words else Lambda({ident: 1})
        return Generator(color, shape)

    def is_unit(self, g: Generator) -> bool:
        return g.shape.size() == 1 and self.base.is_identity(next(iter(_letters(g.shape))))

    def monomial(self, gens: Iterable[Generator]) -> tuple:
        gens = tuple(gens)
        return tuple(sorted(gens)) if self.commutative else gens

    def parse(self, text: str, color=None) -> Generator:
        return parse_generator(text, self.base, self.words, color)

    def format(self, g: Generator) -> str:
        return format_generator(g, self.base)


def _letters(shape):
    return shape.support() if isinstance(shape, Lambda) else shape


_C2 = ColoredBase(2, CLASSICAL)
_T2 = ColoredBase(2, TRIVIAL)
SYM, EXP = AutFlavor.SYMMETRIC, AutFlavor.EXPONENTIAL

FLAVORS: dict[str, Flavor] = {
    f.name: f
    for f in [
        Flavor("fdb", "F", TRIVIAL, SYM, LAMBDA),
        Flavor("fdb_ord", "F_ord", TRIVIAL, EXP, WORD),
        Flavor("fdb_nc", "F^nc", TRIVIAL, EXP, WORD, NONCOMMUTATIVE),
        Flavor("fdb2", "F^2", _T2, SYM, LAMBDA),
        Flavor("fdb_x2", "F<2>", _T2, EXP, WORD),
        Flavor("fdb_x2_nc", "F<2>^nc", _T2, EXP, WORD, NONCOMMUTATIVE),
        Flavor("classical", "P", CLASSICAL, SYM, LAMBDA),
        Flavor("diamond", "P^diamond", CLASSICAL, SYM, WORD),
        Flavor("diamond_nc", "P^diamond,nc", CLASSICAL, SYM, WORD, NONCOMMUTATIVE),
        Flavor("exp", "P_exp", CLASSICAL, EXP, LAMBDA),
        Flavor("lin_diamond", "P_lin^diamond", CLASSICAL, EXP, WORD),
        Flavor("lin_diamond_nc", "P_lin^diamond,nc", CLASSICAL, EXP, WORD, NONCOMMUTATIVE),
        Flavor("biv", "P^2", _C2, SYM, LAMBDA),
        Flavor("biv_exp", "P^2_exp", _C2, EXP, LAMBDA),
        Flavor("y_mult", "P^Y(N+,x)", CLASSICAL, EXP, LAMBDA),
        Flavor("y_add", "P^Y(N,+)", ADDITIVE, EXP, LAMBDA),
        Flavor("y_z2", "P^Y(Z/2)", Z2, EXP, LAMBDA),
    ]
}


def get_flavor(name: str | Flavor) -> Flavor:
    if isinstance(name, Flavor):
        return name
    try:
        return FLAVORS[name]
    except KeyError:
        raise UnsupportedFlavorError(
            f"unknown flavor {name!r}; choose from {', '.join(FLAVORS)}"
        ) from None


# --------------------------------------------------------------------------
# tensors


class TensorElement:
    """Finite sum of ``coeff * m_1 (x) ... (x) m_r`` over basis monomials."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        out: dict = {}
        pairs = terms.items() if isinstance(terms, dict) else (terms or ())
        for key, c in pairs:
            out[key] = out.get(key, 0) + Fraction(c)
        self.terms = {k: v for k, v in out.items() if v}

    def __add__(self, other: "TensorElement") -> "TensorElement":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return TensorElement(out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "TensorElement":
        return TensorElement({k: v * c for k, v in self.terms.items()})

    def swap(self) -> "TensorElement":
        return TensorElement({k[::-1]: v for k, v in self.terms.items()})

    def restrict_right(self, right: tuple) -> "TensorElement":
        return TensorElement({k: v for k, v in self.terms.items() if k[-1] == right})

    def items(self):
        """Terms sorted by (right leg, left leg)."""
        return sorted(self.terms.items(), key=lambda kv: (kv[0][::-1]))

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        return isinstance(other, TensorElement) and self.terms == other.terms

    def __repr__(self):
        return f"TensorElement({self.terms!r})"


def format_monomial(flavor: Flavor, mono: tuple, symbol: str = "A") -> str:
    if not mono:
        return "1"
    if not flavor.commutative:
        return "*".join(f"{symbol}{flavor.format(g)}" for g in mono)
    parts = []
    for g, grp in itertools.groupby(mono):
        n = len(list(grp))
        parts.append(f"{symbol}{flavor.format(g)}" + (f"^{n}" if n > 1 else ""))
    return "*".join(parts)


def format_tensor(flavor: Flavor, t: TensorElement) -> str:
    lines = []
    for key, c in t.items():
        legs = " (x) ".join(format_monomial(flavor, m) for m in key)
        lines.append(f"{format_rational(c)}  {legs}")
    return "\n".join(lines) if lines else "0"


def tensor_to_json(flavor: Flavor, sigma: Generator | None, t: TensorElement) -> dict:
    terms = []
    for key, c in t.items():
        entry = {"coeff": rational_to_json(c)}
        names = ["left", "right"] if len(key) == 2 else [f"leg{i}" for i in range(len(key))]
        for name, mono in zip(names, key):
            entry[name] = [flavor.format(g) for g in mono]
        terms.append(entry)
    return {
        "flavor": flavor.name,
        "sigma": flavor.format(sigma) if sigma is not None else None,
        "terms": terms,
    }


def tensor_from_json(data: dict) -> tuple[Flavor, TensorElement]:
    flavor = get_flavor(data["flavor"])
    terms = {}
    for entry in data["terms"]:
        legs = [entry["left"], entry["right"]] if "left" in entry else [
            entry[f"leg{i}"] for i in range(len(entry) - 1)
        ]
        key = tuple(flavor.monomial(flavor.parse(s) for s in leg) for leg in legs)
        terms[key] = Fraction(entry["coeff"]["num"], entry["coeff"]["den"])
    return flavor, TensorElement(terms)


# --------------------------------------------------------------------------
# algebra structure


def product(flavor: Flavor, a: tuple, b: tuple) -> tuple:
    return flavor.monomial(tuple(a) + tuple(b))


def counit(flavor: Flavor, mono: Iterable[Generator]) -> Fraction:
    return Fraction(int(all(flavor.is_unit(g) for g in mono)))


def tensor_mul(flavor: Flavor, x: TensorElement, y: TensorElement) -> TensorElement:
    out: dict = {}
    for k1, v1 in x.terms.items():
        for k2, v2 in y.terms.items():
            k = tuple(product(flavor, a, b) for a, b in zip(k1, k2))
            out[k] = out.get(k, 0) + v1 * v2
    return TensorElement(out)


def tensor_unit(arity: int = 2) -> TensorElement:
    return TensorElement({((),) * arity: 1})


def delta_of_monomial(flavor: Flavor, mono: tuple, delta: Callable) -> TensorElement:
    out = tensor_unit()
    for g in mono:
        out = tensor_mul(flavor, out, delta(g))
    return out


# --------------------------------------------------------------------------
# combinatorial route


@dataclass(frozen=True)
class Decomposition:
    """Inner classes placed into the outer grid, grouped by inner multiset.

    ``placements`` is the number of bijections from a fixed listing of the
    inner classes onto the grid cells that rebuild sigma; ``coefficient``
    is the resulting tensor coefficient.
    """

    outer: Generator
    inner: tuple
    placements: int
    coefficient: Fraction


def _left_factors(flavor: Flavor, sigma: Generator) -> dict:
    """m -> {k: m;k} over arrows m out of sigma's color with m;k in sigma."""
    base = flavor.base
    by_m: dict = {}
    for n in set(_letters(sigma.shape)):
        for m, k in base.factorizations(n):
            if base.source(m) == sigma.color:
                by_m.setdefault(m, {})[k] = n
    return by_m


def _lambda_pieces(flavor: Flavor, sigma: Generator) -> list[tuple]:
    """All (m, mu, V^m mu) with mu nonempty and V^m mu <= sigma."""
    base = flavor.base
    target = sigma.shape.as_dict()
    pieces = []
    for m, kmap in sorted(_left_factors(flavor, sigma).items()):
        ks = sorted(kmap)

        def rec(i, used, acc):
            if i == len(ks):
                if acc:
                    mu = Lambda(acc)
                    pieces.append((m, mu, verschiebung(m, mu, base)))
                return
            k = ks[i]
            n = kmap[k]
            for mult in range(target[n] - used.get(n, 0) + 1):
                used2 = dict(used)
                used2[n] = used.get(n, 0) + mult
                rec(i + 1, used2, acc + ([(k, mult)] if mult else []))

        rec(0, {}, [])
    return pieces


def _lambda_selections(flavor: Flavor, sigma: Generator):
    """Yield multisets of pieces (as {index: count}) whose images sum to sigma."""
    pieces = _lambda_pieces(flavor, sigma)
    images = [p[2].as_dict() for p in pieces]
    last_cover: dict = {}
    for i, img in enumerate(images):
        for a in img:
            last_cover[a] = i
    remaining0 = sigma.shape.as_dict()

    def rec(i, remaining, chosen):
        live = {a: v for a, v in remaining.items() if v}
        if not live:
            yield dict(chosen)
            return
        if i == len(pieces) or any(last_cover.get(a, -1) < i for a in live):
            return
        img = images[i]
        top = min(live.get(a, 0) // v for a, v in img.items())
        for c in range(top, -1, -1):
            rem = dict(live)
            for a, v in img.items():
                rem[a] = rem.get(a, 0) - c * v
            if c:
                chosen[i] = c
            yield from rec(i + 1, rem, chosen)
            chosen.pop(i, None)

    for sel in rec(0, remaining0, {}):
        yield pieces, sel


def _word_splits(flavor: Flavor, sigma: Generator):
    """Yield (outer letters, inner words) with sigma = concat of m_i * kappa_i."""
    base = flavor.base
    s = tuple(sigma.shape)
    c = sigma.color
    L = len(s)

    @lru_cache(maxsize=None)
    def seg(i, j):
        opts = []
        ms = sorted({m for m, _ in base.factorizations(s[i]) if base.source(m) == c})
        for m in ms:
            choices = []
            for t in s[i:j]:
                ks = sorted(k for m2, k in base.factorizations(t) if m2 == m)
                if not ks:
                    break
                choices.append(ks)
            else:
                for combo in itertools.product(*choices):
                    opts.append((m, Word(combo)))
        return opts

    def rec(i, ms, ks):
        if i == L:
            yield tuple(ms), tuple(ks)
            return
        for j in range(i + 1, L + 1):
            for m, kappa in seg(i, j):
                ms.append(m)
                ks.append(kappa)
                yield from rec(j, ms, ks)
                ms.pop()
                ks.pop()

    yield from rec(0, [], [])


def _raw_decompositions(flavor: Flavor, sigma: Generator):
    """Yield (outer generator, inner generators in slot order, filling count, weight)."""
    check_generator(flavor.base, sigma)
    base = flavor.base
    aut_sigma = flavor.aut(sigma.shape)
    if flavor.words:
        for ms, kappas in _word_splits(flavor, sigma):
            outer = Generator(sigma.color, Word(ms))
            inner = tuple(Generator(base.target(m), k) for m, k in zip(ms, kappas))
            w = Fraction(aut_sigma, flavor.aut(outer.shape) * prod(flavor.aut(k) for k in kappas))
            yield outer, inner, 1, w
        return
    for pieces, sel in _lambda_selections(flavor, sigma):
        col: dict = {}
        inner = []
        denom = 1
        for i, cnt in sel.items():
            m, mu, _ = pieces[i]
            col[m] = col.get(m, 0) + cnt
            inner += [Generator(base.target(m), mu)] * cnt
            denom *= flavor.aut(mu) ** cnt * factorial(cnt)
        lam = Lambda(col)
        fillings = prod(factorial(v) for v in col.values())
        for cnt in sel.values():
            fillings //= factorial(cnt)
        outer = Generator(sigma.color, lam)
        w = Fraction(aut_sigma * prod(factorial(v) for v in col.values()),
                     flavor.aut(lam) * denom)
        yield outer, tuple(inner), fillings, w


def delta_combinatorial(flavor, sigma: Generator, right: Generator | None = None) -> TensorElement:
    flavor = get_flavor(flavor)
    out: dict = {}
    for outer, inner, _, w in _raw_decompositions(flavor, sigma):
        if right is not None and outer != right:
            continue
        key = (flavor.monomial(inner), (outer,))
        out[key] = out.get(key, 0) + w
    return TensorElement(out)


def enumerate_decompositions(flavor, sigma: Generator, outer: Generator) -> list[Decomposition]:
    """Decompositions of ``sigma`` with the given outer class, grouped by inner multiset."""
    flavor = get_flavor(flavor)
    groups: dict = {}
    for o, inner, fillings, w in _raw_decompositions(flavor, sigma):
        if o != outer:
            continue
        key = flavor.monomial(inner)
        cnt, coef = groups.get(key, (0, Fraction(0)))
        groups[key] = (cnt + fillings, coef + w)
    out = []
    for key in sorted(groups):
        fillings, coef = groups[key]
        if flavor.commutative:
            reps = prod(factorial(len(list(g))) for _, g in itertools.groupby(key))
        else:
            reps = 1
        out.append(Decomposition(outer, key, fillings * reps, coef))
    return out


# --------------------------------------------------------------------------
# symbolic route


def _cap(sigma: Generator) -> Callable:
    if isinstance(sigma.shape, Word):
        s = tuple(sigma.shape)

        def keep(w):
            n = len(w)
            t = tuple(w)
            return any(s[i:i + n] == t for i in range(len(s) - n + 1))

        return keep
    shape = sigma.shape
    return lambda lam: lam <= shape


def symbolic_coefficient(flavor, sigma: Generator, D: int | None = None):
    """``aut(sigma)`` times the coefficient of ``x^sigma`` in ``G (*) F`` for generic F, G."""
    flavor = get_flavor(flavor)
    check_generator(flavor.base, sigma)
    n = sigma.size()
    D = n if D is None else D
    if D < n:
        raise PlethyonError(f"truncation {D} is below the size {n} of sigma")
    base = flavor.base
    by_m = _left_factors(flavor, sigma)
    rights: dict = {}
    for m, kmap in by_m.items():
        rights.setdefault(base.target(m), set()).update(kmap)
    keep = _cap(sigma)
    kind = flavor.variables
    G = generic_series("g", base, kind, flavor.inner, n, color=sigma.color,
                       arrows=sorted(by_m), commutative=flavor.commutative)
    Fs = {
        d: generic_series("f", base, kind, flavor.inner, n, color=d,
                          arrows=sorted(ks), commutative=flavor.commutative)
        for d, ks in rights.items()
    }
    H = substitute_plethystic(G, Fs, n, keep)
    return H.terms.get(sigma.shape, H.ring.zero()) * flavor.aut(sigma.shape)


def _poly_to_tensor(flavor: Flavor, poly) -> TensorElement:
    out: dict = {}
    for mono, c in poly.terms.items():
        left = [s.generator for s in mono if s.prefix == "f"]
        right = [s.generator for s in mono if s.prefix == "g"]
        key = (flavor.monomial(left), flavor.monomial(right))
        out[key] = out.get(key, 0) + c
    return TensorElement(out)


def delta_symbolic(flavor, sigma: Generator, D: int | None = None) -> TensorElement:
    flavor = get_flavor(flavor)
    poly = symbolic_coefficient(flavor, sigma, D)
    for mono in poly.terms:
        gs = sum(1 for s in mono if s.prefix == "g")
        if gs != 1:
            raise PlethyonError(f"extracted monomial is not linear in g ({gs} factors)")
    return _poly_to_tensor(flavor, poly)


def delta_symbolic_product(flavor, gens: Iterable[Generator]) -> TensorElement:
    """Coproduct of a product of generators, read off the product of functionals."""
    flavor = get_flavor(flavor)
    poly = None
    for g in gens:
        p = symbolic_coefficient(flavor, g)
        poly = p if poly is None else poly * p
    if poly is None:
        return tensor_unit()
    return _poly_to_tensor(flavor, poly)


# --------------------------------------------------------------------------
# law checks


@dataclass
class LawReport:
    flavor: str
    bound: int
    checks: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, law: str, witness: str):
        self.failures.append(f"{law}: {witness}")

    def tick(self, law: str):
        self.checks[law] = self.checks.get(law, 0) + 1

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        counts = ", ".join(f"{k}={v}" for k, v in sorted(self.checks.items()))
        head = f"{status} {self.flavor} (bound {self.bound}): {counts}"
        return "\n".join([head] + [f"  {f}" for f in self.failures[:5]])


def _apply_left(flavor, t: TensorElement, delta) -> TensorElement:
    out: dict = {}
    for (l, r), c in t.terms.items():
        for (l1, l2), c2 in delta_of_monomial(flavor, l, delta).terms.items():
            k = (l1, l2, r)
            out[k] = out.get(k, 0) + c * c2
    return TensorElement(out)


def _apply_right(flavor, t: TensorElement, delta) -> TensorElement:
    out: dict = {}
    for (l, r), c in t.terms.items():
        for (r1, r2), c2 in delta_of_monomial(flavor, r, delta).terms.items():
            k = (l, r1, r2)
            out[k] = out.get(k, 0) + c * c2
    return TensorElement(out)


def check_bialgebra_laws(
    flavor,
    bound: int,
    delta: Callable | None = None,
    routes: bool = True,
    max_pairs: int | None = 60,
) -> LawReport:
    """Coassociativity, counit, multiplicativity and route equality up to ``bound``."""
    flavor = get_flavor(flavor)
    base_delta = delta or (lambda g: delta_combinatorial(flavor, g))
    cache: dict = {}

    def d(g):
        if g not in cache:
            cache[g] = base_delta(g)
        return cache[g]

    rep = LawReport(flavor.name, bound)
    gens = flavor.generators(bound)
    for g in gens:
        name = flavor.format(g)
        t = d(g)
        if any(c < 0 for c in t.terms.values()):
            rep.fail("positivity", name)
        if _apply_left(flavor, t, d) != _apply_right(flavor, t, d):
            rep.fail("coassociativity", name)
        rep.tick("coassociativity")
        mono = (g,)
        left = TensorElement([((r,), c * counit(flavor, l)) for (l, r), c in t.terms.items()])
        right = TensorElement([((l,), c * counit(flavor, r)) for (l, r), c in t.terms.items()])
        if left != TensorElement({(mono,): 1}):
            rep.fail("left counit", name)
        if right != TensorElement({(mono,): 1}):
            rep.fail("right counit", name)
        rep.tick("counit")
        if routes:
            if delta_symbolic(flavor, g) != t:
                rep.fail("route equality", name)
            rep.tick("routes")
    pairs = [
        (a, b) for a, b in itertools.product(gens, repeat=2)
        if flavor.grade(a.shape) + flavor.grade(b.shape) <= bound
        and (not flavor.commutative or a <= b)
    ]
    if max_pairs is not None and len(pairs) > max_pairs:
        step = len(pairs) / max_pairs
        pairs = [pairs[int(i * step)] for i in range(max_pairs)]
    for a, b in pairs:
        lhs = tensor_mul(flavor, d(a), d(b))
        if lhs != delta_symbolic_product(flavor, (a, b)):
            rep.fail("multiplicativity", f"{flavor.format(a)} * {flavor.format(b)}")
        rep.tick("multiplicativity")
    return rep
