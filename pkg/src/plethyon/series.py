"""Truncated power series without constant term.

Keys are ``Lambda`` (commuting variables) or ``Word`` (noncommuting
variables).  Coefficients are exact rationals or polynomials in generic
symbols, which lets a substitution be read back as a comultiplication.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .core import (
    AutFlavor,
    BaseCategory,
    CLASSICAL,
    ColorMismatchError,
    Generator,
    Lambda,
    LimitExceededError,
    OutOfRangeError,
    ParseError,
    PlethyonError,
    Word,
    aut_order,
    base_by_name,
    format_rational,
    format_shape,
    parse_lambda,
    parse_word,
    rational_from_json,
    rational_to_json,
    verschiebung,
    verschiebung_word,
    word_aut_order,
)

LAMBDA = "lambda"
WORD = "word"


class Symbol(tuple):
    """Opaque indeterminate ``prefix_generator``; sortable and hashable."""

    def __new__(cls, prefix: str, gen: Generator):
        return super().__new__(cls, (prefix, gen))

    @property
    def prefix(self) -> str:
        return self[0]

    @property
    def generator(self) -> Generator:
        return self[1]

    def __repr__(self) -> str:
        return f"{self[0]}_{self[1].color}:{self[1].shape!r}"


class Poly:
    """Polynomial in generic symbols with rational coefficients.

    Monomials are tuples of symbols, sorted when commutative.  Products keep
    the left factor's symbols first.
    """

    __slots__ = ("terms", "commutative")

    def __init__(self, terms: Mapping[tuple, Fraction] | None = None, commutative: bool = True):
        self.commutative = commutative
        self.terms = {}
        for mono, c in (terms or {}).items():
            if c:
                key = tuple(sorted(mono)) if commutative else tuple(mono)
                self.terms[key] = self.terms.get(key, 0) + Fraction(c)
        self.terms = {k: v for k, v in self.terms.items() if v}

    @classmethod
    def symbol(cls, s: Symbol, commutative: bool = True) -> "Poly":
        return cls({(s,): Fraction(1)}, commutative)

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.commutative != self.commutative:
                raise PlethyonError("mixing commutative and noncommutative coefficients")
            return other
        return Poly({(): Fraction(other)}, self.commutative)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return Poly(out, self.commutative)

    __radd__ = __add__

    def __neg__(self):
        return Poly({k: -v for k, v in self.terms.items()}, self.commutative)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = Fraction(other)
            return Poly({k: v * c for k, v in self.terms.items()}, self.commutative)
        other = self._coerce(other)
        out: dict = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = k1 + k2
                if self.commutative:
                    k = tuple(sorted(k))
                out[k] = out.get(k, 0) + v1 * v2
        return Poly(out, self.commutative)

    def __rmul__(self, other):
        # scalars commute with everything
        return self * other

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return self.terms == {(): Fraction(other)}

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"Poly({self.terms!r})"


class CoefficientRing:
    """``rational``, ``commutativeGeneric`` or ``noncommutativeGeneric``."""

    KINDS = ("rational", "commutativeGeneric", "noncommutativeGeneric")

    def __init__(self, kind: str = "rational"):
        if kind not in self.KINDS:
            raise ValueError(f"unknown coefficient ring {kind!r}")
        self.kind = kind

    @property
    def generic(self) -> bool:
        return self.kind != "rational"

    def zero(self):
        if self.generic:
            return Poly(commutative=self.kind == "commutativeGeneric")
        return Fraction(0)

    def one(self):
        return self.zero() + 1

    def symbol(self, prefix: str, gen: Generator) -> Poly:
        if not self.generic:
            raise PlethyonError("the rational ring has no symbols")
        return Poly.symbol(Symbol(prefix, gen), self.kind == "commutativeGeneric")

    def __eq__(self, other):
        return isinstance(other, CoefficientRing) and other.kind == self.kind

    def __hash__(self):
        return hash(self.kind)

    def __repr__(self):
        return f"CoefficientRing({self.kind!r})"


RATIONAL = CoefficientRing("rational")


def _is_zero(c) -> bool:
    return not c


class Series:
    """Truncated series ``sum coeff[key] * x^key`` with every key of size 1..D.

    ``color`` is the common source of all variables.  Raw coefficients are
    stored; any ``1/aut`` normalization is the caller's business.
    """

    __slots__ = ("base", "kind", "terms", "D", "ring", "color")

    def __init__(
        self,
        base: BaseCategory,
        kind: str,
        terms: Mapping | Iterable[tuple] = (),
        D: int = 0,
        ring: CoefficientRing = RATIONAL,
        color=None,
    ):
        if kind not in (LAMBDA, WORD):
            raise ValueError(f"unknown variable kind {kind!r}")
        self.base = base
        self.kind = kind
        self.D = D
        self.ring = ring
        self.color = base.objects[0] if color is None else color
        out: dict = {}
        pairs = terms.items() if isinstance(terms, Mapping) else terms
        for key, c in pairs:
            if kind == LAMBDA and not isinstance(key, Lambda):
                raise TypeError(f"expected Lambda key, got {key!r}")
            if kind == WORD and not isinstance(key, Word):
                raise TypeError(f"expected Word key, got {key!r}")
            n = key.size()
            if n == 0:
                raise ValueError("series have no constant term")
            if n > D:
                raise OutOfRangeError(f"key of size {n} exceeds truncation {D}")
            letters = key.support() if kind == LAMBDA else key
            for a in letters:
                if base.source(a) != self.color:
                    raise ColorMismatchError(f"variable {a!r} does not start at color {self.color}")
            out[key] = out[key] + c if key in out else c
        self.terms = {k: v for k, v in out.items() if not _is_zero(v)}

    # construction helpers

    @classmethod
    def variable(cls, a, base: BaseCategory = CLASSICAL, D: int = 1, kind: str = LAMBDA) -> "Series":
        key = Lambda({a: 1}) if kind == LAMBDA else Word((a,))
        return cls(base, kind, {key: Fraction(1)}, D, color=base.source(a))

    def _like(self, terms, D=None, ring=None, color=None) -> "Series":
        return Series(
            self.base, self.kind, terms, self.D if D is None else D,
            self.ring if ring is None else ring, self.color if color is None else color,
        )

    def truncate(self, D: int) -> "Series":
        return self._like({k: v for k, v in self.terms.items() if k.size() <= D}, D=D)

    def filter_weight(self, w: int) -> "Series":
        """Keep only keys of weighted degree at most ``w`` (graded bases)."""
        return self._like({k: v for k, v in self.terms.items() if k.weight(self.base) <= w})

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: (kv[0].size(), kv[0]))

    # arithmetic

    def _check(self, other: "Series"):
        if other.base is not self.base and other.base.name != self.base.name:
            raise PlethyonError("series over different bases")
        if other.kind != self.kind:
            raise PlethyonError("series of different variable kinds")

    def __add__(self, other: "Series") -> "Series":
        self._check(other)
        if other.color != self.color:
            raise ColorMismatchError("adding series of different colors")
        D = min(self.D, other.D)
        out = {k: v for k, v in self.terms.items() if k.size() <= D}
        for k, v in other.terms.items():
            if k.size() <= D:
                out[k] = out[k] + v if k in out else v
        ring = self.ring if self.ring.generic else other.ring
        return self._like(out, D=D, ring=ring)

    def scale(self, c) -> "Series":
        return self._like({k: c * v for k, v in self.terms.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def mul(self, other: "Series", D: int | None = None, keep: Callable | None = None) -> "Series":
        """Truncated product; ``keep`` optionally prunes keys (must be closed under factors)."""
        self._check(other)
        D = min(self.D, other.D) if D is None else D
        out: dict = {}
        for k1, v1 in self.terms.items():
            s1 = k1.size()
            for k2, v2 in other.terms.items():
                if s1 + k2.size() > D:
                    continue
                k = k1 + k2
                if keep is not None and not keep(k):
                    continue
                v = v1 * v2
                out[k] = out[k] + v if k in out else v
        ring = self.ring if self.ring.generic else other.ring
        return self._like(out, D=D, ring=ring)

    def __mul__(self, other):
        if isinstance(other, Series):
            return self.mul(other)
        return self.scale(other)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Series)
            and self.kind == other.kind
            and self.color == other.color
            and self.terms == other.terms
        )

    def __repr__(self) -> str:
        return f"Series({format_series(self)}, D={self.D})"


def coefficient(F: Series, key):
    if key.size() > F.D:
        raise OutOfRangeError(f"key of size {key.size()} is beyond truncation {F.D}")
    return F.terms.get(key, F.ring.zero())


def plethystic_shift(F: Series, m, D: int | None = None, keep: Callable | None = None) -> Series:
    base = F.base
    if base.target(m) != F.color:
        raise ColorMismatchError(f"cannot shift a color-{F.color} series along {base.format_arrow(m)}")
    shift = verschiebung if F.kind == LAMBDA else verschiebung_word
    D = F.D if D is None else D
    out = {}
    for k, v in F.terms.items():
        if k.size() > D:
            continue
        k2 = shift(m, k, base)
        if keep is None or keep(k2):
            out[k2] = v
    return Series(base, F.kind, out, D, F.ring, color=base.source(m))


def substitute_plethystic(
    G: Series,
    F: Series | Mapping,
    D: int | None = None,
    keep: Callable | None = None,
) -> Series:
    """``G`` with variable ``x_m`` replaced by the shifted series ``F_m``.

    ``F`` is one series, or a mapping color -> series for colored bases
    (variable ``x_m`` then takes the series of color ``target(m)``).
    Noncommuting variables multiply shifted series in letter order.
    """
    base = G.base
    Fs = F if isinstance(F, Mapping) else {F.color: F}
    for Fc in Fs.values():
        G._check(Fc)
    D = min([G.D] + [Fc.D for Fc in Fs.values()]) if D is None else D
    cache: dict = {}

    def shifted(m):
        if m not in cache:
            t = base.target(m)
            if t not in Fs:
                raise ColorMismatchError(f"no inner series for color {t}")
            cache[m] = plethystic_shift(Fs[t], m, D, keep)
        return cache[m]

    out: dict = {}
    ring = G.ring
    for Fc in Fs.values():
        if Fc.ring.generic:
            ring = Fc.ring if not ring.generic else ring
    letters_of = (lambda k: list(k.elements())) if G.kind == LAMBDA else list
    for key, c in G.terms.items():
        if key.size() > D:
            continue
        prod = None
        for m in letters_of(key):
            S = shifted(m)
            prod = S if prod is None else prod.mul(S, D, keep)
            if not prod.terms:
                break
        if prod is None:
            continue
        for k, v in prod.terms.items():
            t = c * v
            out[k] = out[k] + t if k in out else t
    return Series(base, G.kind, out, D, ring, color=G.color)


def substitute_ordinary(
    G: Series,
    Fs: tuple,
    D: int,
    variables: list | None = None,
) -> Series:
    """Replace the i-th variable of ``G`` by ``Fs[i]`` (ordinary composition).

    Variables default to the first ``len(Fs)`` arrows of ``G``'s base in
    sort order (for the classical base: x1, x2, ...).
    """
    Fs = tuple(Fs)
    for Fi in Fs:
        if not isinstance(Fi, Series):
            raise PlethyonError("inner series must be constant-term-free Series objects")
        G._check(Fi)
    if variables is None:
        variables = G.base.arrows_from(G.color, max(len(Fs), 1))[: len(Fs)]
    if len(variables) != len(Fs):
        raise PlethyonError(f"{len(variables)} variables but {len(Fs)} inner series")
    index = {v: i for i, v in enumerate(variables)}
    colors = {Fi.color for Fi in Fs}
    if len(colors) > 1:
        raise ColorMismatchError("inner series must share a color")
    color = colors.pop() if colors else G.color
    out: dict = {}
    letters_of = (lambda k: list(k.elements())) if G.kind == LAMBDA else list
    for key, c in G.terms.items():
        letters = letters_of(key)
        if any(a not in index for a in letters):
            raise PlethyonError(f"G uses variable outside the {len(Fs)}-variable set")
        prod = None
        for a in letters:
            S = Fs[index[a]]
            prod = S.truncate(D) if prod is None else prod.mul(S, D)
        for k, v in prod.terms.items():
            if k.size() <= D:
                t = c * v
                out[k] = out[k] + t if k in out else t
    ring = G.ring
    for Fi in Fs:
        if Fi.ring.generic and not ring.generic:
            ring = Fi.ring
    return Series(G.base, G.kind, out, D, ring, color=color)


def enumerate_lambdas(arrows: list, max_size: int, base: BaseCategory | None = None,
                      max_weight: int | None = None) -> list[Lambda]:
    """All nonempty Lambdas over ``arrows`` with size (and optionally weight) bounded."""
    arrows = sorted(arrows)
    out = []

    def rec(i, size, weight, acc):
        if i == len(arrows):
            if acc:
                out.append(Lambda(acc))
            return
        a = arrows[i]
        w = base.size(a) if max_weight is not None else 0
        mult = 0
        while size + mult <= max_size and (max_weight is None or weight + mult * w <= max_weight):
            rec(i + 1, size + mult, weight + mult * w, acc + ([(a, mult)] if mult else []))
            mult += 1

    rec(0, 0, 0, [])
    return sorted(out, key=lambda lam: (lam.size(), lam))


def enumerate_words(arrows: list, max_size: int, base: BaseCategory | None = None,
                    max_weight: int | None = None) -> list[Word]:
    arrows = sorted(arrows)
    out = []
    for n in range(1, max_size + 1):
        for letters in itertools.product(arrows, repeat=n):
            w = Word(letters)
            if max_weight is None or w.weight(base) <= max_weight:
                out.append(w)
    return out


def generic_series(
    prefix: str,
    base: BaseCategory,
    kind: str,
    flavor: AutFlavor,
    D: int,
    color=None,
    arrows: list | None = None,
    commutative: bool = True,
    keep: Callable | None = None,
) -> Series:
    """``sum_k prefix_k / aut(k) * x^k`` over all keys up to ``D``.

    On a graded base with default arrows, ``D`` bounds the weighted degree;
    otherwise it bounds the number of variables in a key.
    """
    if D < 1:
        raise ValueError("D must be at least 1")
    color = base.objects[0] if color is None else color
    weighted = arrows is None and base.has_size
    if arrows is None:
        arrows = base.arrows_from(color, D)
    ring = CoefficientRing("commutativeGeneric" if commutative else "noncommutativeGeneric")
    enum = enumerate_lambdas if kind == LAMBDA else enumerate_words
    keys = enum(arrows, D, base, D if weighted else None)
    if len(keys) > 200_000:
        raise LimitExceededError(f"{len(keys)} keys requested")
    terms = {}
    for k in keys:
        if keep is not None and not keep(k):
            continue
        aut = aut_order(k, flavor, base) if kind == LAMBDA else word_aut_order(k, flavor, base)
        terms[k] = ring.symbol(prefix, Generator(color, k)) * Fraction(1, aut)
    return Series(base, kind, terms, D, ring, color=color)


# --------------------------------------------------------------------------
# text and JSON


def _format_coeff(c) -> str:
    if isinstance(c, Poly):
        parts = []
        for mono, v in sorted(c.terms.items(), key=lambda kv: repr(kv[0])):
            syms = "*".join(f"{s.prefix}_{format_shape(s.generator.shape)}" for s in mono)
            parts.append(f"{format_rational(v)}*{syms}" if syms else format_rational(v))
        return "(" + " + ".join(parts) + ")"
    return format_rational(c)


def format_monomial_vars(key, base: BaseCategory) -> str:
    """``x1^2*x3`` for Lambdas, ``x1.x3`` style concatenation for words."""
    if isinstance(key, Word):
        return "*".join(f"x{base.format_arrow(a)}" for a in key)
    parts = []
    for a, m in key.items():
        v = f"x{base.format_arrow(a)}"
        parts.append(v if m == 1 else f"{v}^{m}")
    return "*".join(parts)


def format_series(F: Series) -> str:
    if not F.terms:
        return "0"
    out = []
    for k, c in F.items():
        mon = format_monomial_vars(k, F.base)
        if not isinstance(c, Poly) and c == 1:
            term = mon
        elif not isinstance(c, Poly) and c == -1:
            term = "-" + mon
        else:
            term = f"{_format_coeff(c)}*{mon}"
        out.append(term)
    text = "+".join(out)
    return text.replace("+-", "-")


def parse_series(text: str, base: BaseCategory = CLASSICAL, D: int | None = None,
                 kind: str = LAMBDA) -> Series:
    """Parse sums like ``x1+x3``, ``1/2*x1^2-x2`` over a one-object base."""
    s = text.replace(" ", "")
    if not s:
        raise ParseError("empty series")
    if s == "0":
        return Series(base, kind, {}, D or 0)
    if s[0] not in "+-":
        s = "+" + s
    chunks = []
    i = 0
    while i < len(s):
        j = i + 1
        while j < len(s) and s[j] not in "+-":
            j += 1
        chunks.append(s[i:j])
        i = j
    terms = []
    for chunk in chunks:
        sign = -1 if chunk[0] == "-" else 1
        body = chunk[1:]
        if not body:
            raise ParseError(f"dangling sign in {text!r}")
        coeff = Fraction(sign)
        letters = []
        for factor in body.split("*"):
            if not factor:
                raise ParseError(f"bad term {chunk!r}")
            if factor[0] == "x":
                name, _, exp = factor[1:].partition("^")
                try:
                    e = int(exp) if exp else 1
                except ValueError as exc:
                    raise ParseError(f"bad exponent in {factor!r}") from exc
                letters += [base.parse_arrow(name)] * e
            else:
                try:
                    coeff *= Fraction(factor)
                except (ValueError, ZeroDivisionError) as exc:
                    raise ParseError(f"bad coefficient {factor!r}") from exc
        if not letters:
            raise ParseError("series have no constant term")
        key = Lambda((a, 1) for a in letters) if kind == LAMBDA else Word(letters)
        terms.append((key, coeff))
    top = max(k.size() for k, _ in terms)
    return Series(base, kind, terms, top if D is None else D)


def series_to_json(F: Series) -> dict:
    terms = []
    for k, c in F.items():
        key = format_shape(k, F.base)
        if isinstance(c, Poly):
            monos = [
                {"coeff": rational_to_json(v),
                 "symbols": [f"{s.prefix}_{s.generator.color}|{format_shape(s.generator.shape, F.base)}"
                             for s in mono]}
                for mono, v in sorted(c.terms.items(), key=lambda kv: repr(kv[0]))
            ]
            terms.append({"key": key, "coeff": {"monomials": monos}})
        else:
            terms.append({"key": key, "coeff": rational_to_json(c)})
    return {"base": F.base.name, "kind": F.kind, "ring": F.ring.kind, "D": F.D,
            "color": F.color, "terms": terms}


def series_from_json(data: Mapping) -> Series:
    """Inverse of ``series_to_json`` for rational and generic coefficients."""
    base = base_by_name(data["base"])
    kind = data["kind"]
    color = data.get("color", base.objects[0])
    parse = parse_lambda if kind == LAMBDA else parse_word
    ring = CoefficientRing(data.get("ring", "rational"))
    terms = []
    for t in data["terms"]:
        key = parse(t["key"], base)
        coeff = t["coeff"]
        if "monomials" in coeff:
            poly = ring.zero()
            for mono in coeff["monomials"]:
                syms = []
                for name in mono["symbols"]:
                    prefix, _, rest = name.partition("_")
                    c, _, shape = rest.partition("|")
                    syms.append(Symbol(prefix, Generator(int(c), parse(shape, base))))
                poly = poly + Poly({tuple(syms): rational_from_json(mono["coeff"])},
                                   ring.kind == "commutativeGeneric")
            terms.append((key, poly))
        else:
            terms.append((key, rational_from_json(coeff)))
    return Series(base, kind, terms, int(data["D"]), ring, color=color)
