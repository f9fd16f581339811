"""Index combinatorics shared by every flavor.

Base categories (monoids are the one-object case), multiplicity vectors
``Lambda``, words, Verschiebung operators and automorphism orders.
"""

from __future__ import annotations

import math
import re
from enum import Enum
from fractions import Fraction
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping, NamedTuple

Rational = Fraction


class PlethyonError(Exception):
    """Base class for all library errors."""


class ColorMismatchError(PlethyonError, ValueError):
    pass


class UnsupportedFlavorError(PlethyonError, ValueError):
    pass


class OutOfRangeError(PlethyonError, ValueError):
    pass


class LimitExceededError(PlethyonError, ValueError):
    pass


class ParseError(PlethyonError, ValueError):
    pass


class AutFlavor(str, Enum):
    """How the inner operad contributes automorphisms.

    ``SYMMETRIC`` is the Sym case (an arity-n corolla has n! automorphisms),
    ``EXPONENTIAL`` the Ass case (corollas are rigid).
    """

    SYMMETRIC = "symmetricInner"
    EXPONENTIAL = "exponential"


def factorial(n: int) -> int:
    if n < 0:
        raise ValueError(f"factorial of negative number {n}")
    return math.factorial(n)


# --------------------------------------------------------------------------
# base categories


class Arrow(NamedTuple):
    """Arrow of a colored base: a label from the inner monoid plus endpoints."""

    label: Any
    src: int
    tgt: int


class TableArrow(NamedTuple):
    """Arrow of a table-defined category; sorts by declaration index."""

    index: int
    name: str


class BaseCategory:
    """A locally finite category whose arrows index series variables.

    ``compose(a, b)`` is diagrammatic: ``a`` first, then ``b``, so it
    requires ``target(a) == source(b)``.  For a monoid this is the product
    ``a * b``.  ``factorizations(n)`` lists every pair ``(m, k)`` with
    ``compose(m, k) == n``.
    """

    name = "base"
    objects: tuple = (0,)

    def source(self, a) -> Hashable:
        raise NotImplementedError

    def target(self, a) -> Hashable:
        raise NotImplementedError

    def identity(self, obj) -> Hashable:
        raise NotImplementedError

    def _compose(self, a, b):
        raise NotImplementedError

    def compose(self, a, b):
        if self.target(a) != self.source(b):
            raise ColorMismatchError(
                f"cannot compose {self.format_arrow(a)} then {self.format_arrow(b)}"
            )
        return self._compose(a, b)

    def factorizations(self, n) -> list[tuple]:
        raise NotImplementedError

    @property
    def has_size(self) -> bool:
        return False

    def size(self, a) -> int:
        raise UnsupportedFlavorError(f"base {self.name} has no arrow size")

    def arrows_from(self, obj, bound: int) -> list:
        """Arrows with the given source inside the enumeration window.

        Graded bases return arrows of size at most ``bound``; sizeless bases
        return their fixed finite window and ignore ``bound``.
        """
        raise NotImplementedError

    def is_identity(self, a) -> bool:
        return a == self.identity(self.source(a))

    def format_arrow(self, a) -> str:
        return str(a)

    def parse_arrow(self, text: str):
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"


class MonoidBase(BaseCategory):
    """One-object base given by a monoid on hashable labels."""

    def __init__(
        self,
        name: str,
        unit,
        op: Callable[[Any, Any], Any],
        factor: Callable[[Any], list[tuple]],
        window: Callable[[int], list],
        size: Callable[[Any], int] | None = None,
        parse: Callable[[str], Any] = int,
        contains: Callable[[Any], bool] | None = None,
    ):
        self.name = name
        self.objects = (0,)
        self.unit = unit
        self._op = op
        self._factor = factor
        self._window = window
        self._size = size
        self._parse = parse
        self._contains = contains

    def source(self, a):
        return 0

    def target(self, a):
        return 0

    def identity(self, obj=0):
        return self.unit

    def _compose(self, a, b):
        return self._op(a, b)

    def factorizations(self, n):
        return self._factor(n)

    @property
    def has_size(self):
        return self._size is not None

    def size(self, a):
        if self._size is None:
            return super().size(a)
        return self._size(a)

    def arrows_from(self, obj, bound):
        return list(self._window(bound))

    def parse_arrow(self, text):
        try:
            a = self._parse(text.strip())
        except ValueError as exc:
            raise ParseError(f"bad arrow {text!r} for base {self.name}") from exc
        if self._contains is not None and not self._contains(a):
            raise ParseError(f"{text!r} is not an arrow of {self.name}")
        return a


def _divisor_pairs(n: int) -> list[tuple[int, int]]:
    return [(d, n // d) for d in range(1, n + 1) if n % d == 0]


def classical_base() -> MonoidBase:
    """(N+, x): arrow n has size n."""
    return MonoidBase(
        "N+,x", 1, lambda a, b: a * b, _divisor_pairs,
        window=lambda bound: range(1, bound + 1), size=lambda a: a,
        contains=lambda a: isinstance(a, int) and a >= 1,
    )


def additive_base(window: int = 3) -> MonoidBase:
    """(N, +) with enumeration window {0, ..., window-1}."""
    return MonoidBase(
        "N,+", 0, lambda a, b: a + b,
        lambda n: [(i, n - i) for i in range(n + 1)],
        window=lambda bound: range(window),
        contains=lambda a: isinstance(a, int) and a >= 0,
    )


def cyclic_base(order: int) -> MonoidBase:
    """Z/order under addition."""
    return MonoidBase(
        f"Z/{order}", 0, lambda a, b: (a + b) % order,
        lambda n: [(i, (n - i) % order) for i in range(order)],
        window=lambda bound: range(order),
        contains=lambda a: isinstance(a, int) and 0 <= a < order,
    )


def trivial_base() -> MonoidBase:
    """The trivial monoid; its single arrow has size 1."""
    return MonoidBase(
        "1", 1, lambda a, b: 1, lambda n: [(1, 1)],
        window=lambda bound: [1] if bound >= 1 else [], size=lambda a: 1,
        contains=lambda a: a == 1,
    )


class ColoredBase(BaseCategory):
    """Codiscrete category on ``k`` objects with every hom set a copy of ``inner``.

    Arrows are ``Arrow(label, src, tgt)``; composition composes labels in
    ``inner``.  Size is the label size, independent of colors.
    """

    def __init__(self, k: int, inner: MonoidBase):
        self.k = k
        self.inner = inner
        self.objects = tuple(range(k))
        self.name = f"{inner.name}[{k}]"

    def source(self, a):
        return a.src

    def target(self, a):
        return a.tgt

    def identity(self, obj):
        return Arrow(self.inner.unit, obj, obj)

    def _compose(self, a, b):
        return Arrow(self.inner.compose(a.label, b.label), a.src, b.tgt)

    def factorizations(self, n):
        return [
            (Arrow(x, n.src, d), Arrow(y, d, n.tgt))
            for d in self.objects
            for x, y in self.inner.factorizations(n.label)
        ]

    @property
    def has_size(self):
        return self.inner.has_size

    def size(self, a):
        return self.inner.size(a.label)

    def arrows_from(self, obj, bound):
        labels = self.inner.arrows_from(0, bound)
        return sorted(Arrow(x, obj, d) for x in labels for d in self.objects)

    def format_arrow(self, a):
        return f"{a.src}->{a.tgt}:{self.inner.format_arrow(a.label)}"

    def parse_arrow(self, text):
        m = re.fullmatch(r"\s*(\d+)\s*->\s*(\d+)\s*:\s*(.+?)\s*", text)
        if not m:
            raise ParseError(f"bad colored arrow {text!r}; expected src->tgt:n")
        src, tgt = int(m.group(1)), int(m.group(2))
        if src not in self.objects or tgt not in self.objects:
            raise ParseError(f"unknown color in {text!r}")
        return Arrow(self.inner.parse_arrow(m.group(3)), src, tgt)


class TableCategory(BaseCategory):
    """Finite category given by explicit object, morphism and composition tables.

    ``morphisms`` is a list of ``(name, src, tgt)``; ``composition`` maps
    ``(f, g)`` (f first) to the composite name.  Identities are looked up in
    ``identities`` (object -> morphism name).
    """

    def __init__(self, objects, morphisms, composition, identities, name="table"):
        self.name = name
        self.objects = tuple(objects)
        self._arrows = [TableArrow(i, m[0]) for i, m in enumerate(morphisms)]
        self._by_name = {a.name: a for a in self._arrows}
        if len(self._by_name) != len(self._arrows):
            raise ParseError("duplicate morphism names")
        self._ends = {self._by_name[m[0]]: (m[1], m[2]) for m in morphisms}
        self._ids = {o: self._by_name[n] for o, n in identities.items()}
        self._table = {}
        for (f, g), h in composition.items():
            self._table[self._by_name[f], self._by_name[g]] = self._by_name[h]
        self._factors: dict = {a: [] for a in self._arrows}
        for (f, g), h in self._table.items():
            self._factors[h].append((f, g))

    @classmethod
    def from_json(cls, data: Mapping, name: str = "table") -> "TableCategory":
        """Build from ``{"objects", "morphisms", "composition", "identities"}``.

        ``composition`` is a list of ``[f, g, f-then-g]`` triples.  An
        optional ``"symmetric"`` flag is read by the operad loader.
        """
        try:
            comp = {(f, g): h for f, g, h in data["composition"]}
            morphs = [tuple(m) for m in data["morphisms"]]
            # JSON object keys are strings; match them back to the objects
            by_text = {str(o): o for o in data["objects"]}
            ids = {by_text.get(str(k), k): v for k, v in data["identities"].items()}
            return cls(data["objects"], morphs, comp, ids, name=name)
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed category table: {exc}") from exc

    def arrow(self, name: str) -> TableArrow:
        return self._by_name[name]

    def source(self, a):
        return self._ends[a][0]

    def target(self, a):
        return self._ends[a][1]

    def identity(self, obj):
        return self._ids[obj]

    def _compose(self, a, b):
        try:
            return self._table[a, b]
        except KeyError:
            raise PlethyonError(f"composition {a.name};{b.name} missing from table") from None

    def factorizations(self, n):
        return list(self._factors[n])

    def arrows_from(self, obj, bound):
        return [a for a in self._arrows if self.source(a) == obj]

    def all_arrows(self):
        return list(self._arrows)

    def format_arrow(self, a):
        return a.name

    def parse_arrow(self, text):
        try:
            return self._by_name[text.strip()]
        except KeyError:
            raise ParseError(f"unknown morphism {text!r}") from None

    def check_axioms(self) -> list[str]:
        """Unit and associativity violations of the table, as messages."""
        bad = []
        arrows = self._arrows
        for a in arrows:
            for side, pair in (("left", (self._ids.get(self.source(a)), a)),
                               ("right", (a, self._ids.get(self.target(a))))):
                if None in pair or self._table.get(pair) != a:
                    bad.append(f"{side} unit fails at {a.name}")
        for f in arrows:
            for g in arrows:
                if self.target(f) != self.source(g):
                    continue
                fg = self._table.get((f, g))
                if fg is None:
                    bad.append(f"missing composite {f.name};{g.name}")
                    continue
                if (self.source(fg), self.target(fg)) != (self.source(f), self.target(g)):
                    bad.append(f"composite {f.name};{g.name} has wrong endpoints")
                for h in arrows:
                    if self.target(g) != self.source(h):
                        continue
                    gh = self._table.get((g, h))
                    lhs = self._table.get((fg, h))
                    rhs = self._table.get((f, gh)) if gh is not None else None
                    if lhs is None or lhs != rhs:
                        bad.append(f"associativity fails at ({f.name},{g.name},{h.name})")
        return bad


CLASSICAL = classical_base()
ADDITIVE = additive_base()
Z2 = cyclic_base(2)
TRIVIAL = trivial_base()


# --------------------------------------------------------------------------
# Lambda and Word


class Lambda:
    """Finite-support multiplicity map arrow -> positive integer.

    Zeros are dropped on construction; entries iterate in arrow sort order.
    """

    __slots__ = ("_items", "_hash")

    def __init__(self, entries: Mapping | Iterable[tuple] = ()):
        acc: dict = {}
        pairs = entries.items() if isinstance(entries, Mapping) else entries
        for a, m in pairs:
            if not isinstance(m, int) or m < 0:
                raise ValueError(f"multiplicity must be a natural number, got {m!r}")
            if m:
                acc[a] = acc.get(a, 0) + m
        self._items = tuple(sorted(acc.items()))
        self._hash = hash(self._items)

    @classmethod
    def from_vector(cls, vec: Iterable[int]) -> "Lambda":
        """Classical vector (l1, l2, ...): entry i is the multiplicity of arrow i+1."""
        return cls((i + 1, m) for i, m in enumerate(vec))

    def to_vector(self) -> tuple[int, ...]:
        if not self._items:
            return ()
        top = max(a for a, _ in self._items)
        vec = [0] * top
        for a, m in self._items:
            vec[a - 1] = m
        return tuple(vec)

    def __getitem__(self, a) -> int:
        for b, m in self._items:
            if b == a:
                return m
        return 0

    def items(self):
        return self._items

    def support(self) -> tuple:
        return tuple(a for a, _ in self._items)

    def elements(self) -> Iterator:
        """Arrows with repetition, in sort order."""
        for a, m in self._items:
            for _ in range(m):
                yield a

    def size(self) -> int:
        return sum(m for _, m in self._items)

    def __len__(self) -> int:
        return self.size()

    def __bool__(self) -> bool:
        return bool(self._items)

    def weight(self, base: BaseCategory) -> int:
        return sum(base.size(a) * m for a, m in self._items)

    def as_dict(self) -> dict:
        return dict(self._items)

    def __add__(self, other: "Lambda") -> "Lambda":
        return Lambda(list(self._items) + list(other._items))

    def __sub__(self, other: "Lambda") -> "Lambda":
        d = self.as_dict()
        for a, m in other._items:
            left = d.get(a, 0) - m
            if left < 0:
                raise ValueError("Lambda subtraction went negative")
            d[a] = left
        return Lambda(d)

    def __le__(self, other: "Lambda") -> bool:
        d = other.as_dict()
        return all(m <= d.get(a, 0) for a, m in self._items)

    def __eq__(self, other) -> bool:
        return isinstance(other, Lambda) and self._items == other._items

    def __lt__(self, other: "Lambda") -> bool:
        return self._items < other._items

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        if all(isinstance(a, int) and a >= 1 for a, _ in self._items):
            return f"Lambda({self.to_vector()})"
        return f"Lambda({dict(self._items)})"


class Word(tuple):
    """Nonempty sequence of arrows with a common source."""

    def __new__(cls, letters: Iterable = ()):
        w = super().__new__(cls, letters)
        if not w:
            raise ValueError("a word has at least one letter")
        return w

    def size(self) -> int:
        return len(self)

    def weight(self, base: BaseCategory) -> int:
        return sum(base.size(a) for a in self)

    def __repr__(self) -> str:
        return f"Word({tuple(self)})"

    def __add__(self, other):
        return Word(tuple(self) + tuple(other))


class Generator(NamedTuple):
    """Connected class: output color plus a Lambda or Word of arrows from it."""

    color: Any
    shape: Any

    def size(self) -> int:
        return self.shape.size()


def check_generator(base: BaseCategory, g: Generator) -> None:
    if not g.shape:
        raise ValueError("generator shape must be nonempty")
    letters = g.shape.support() if isinstance(g.shape, Lambda) else g.shape
    for a in letters:
        if base.source(a) != g.color:
            raise ColorMismatchError(
                f"arrow {base.format_arrow(a)} does not start at color {g.color}"
            )


# --------------------------------------------------------------------------
# automorphism orders and Verschiebung


def aut_order(lam: Lambda, flavor: AutFlavor, base: BaseCategory = CLASSICAL) -> int:
    flavor = AutFlavor(flavor)
    out = 1
    for a, m in lam.items():
        out *= math.factorial(m)
        if flavor is AutFlavor.SYMMETRIC:
            out *= math.factorial(base.size(a)) ** m
    return out


def word_aut_order(w: Word, flavor: AutFlavor, base: BaseCategory = CLASSICAL) -> int:
    if AutFlavor(flavor) is AutFlavor.EXPONENTIAL:
        return 1
    return math.prod(math.factorial(base.size(a)) for a in w)


def verschiebung(m, lam: Lambda, base: BaseCategory = CLASSICAL) -> Lambda:
    tgt = base.target(m)
    out = []
    for k, mult in lam.items():
        if base.source(k) != tgt:
            raise ColorMismatchError(
                f"{base.format_arrow(k)} is not composable after {base.format_arrow(m)}"
            )
        out.append((base.compose(m, k), mult))
    return Lambda(out)


def verschiebung_word(m, w: Word, base: BaseCategory = CLASSICAL) -> Word:
    tgt = base.target(m)
    for k in w:
        if base.source(k) != tgt:
            raise ColorMismatchError(
                f"{base.format_arrow(k)} is not composable after {base.format_arrow(m)}"
            )
    return Word(base.compose(m, k) for k in w)


def lambda_sum(*lams: Lambda) -> Lambda:
    return Lambda([p for lam in lams for p in lam.items()])


# --------------------------------------------------------------------------
# text forms


def _vector_form(base: BaseCategory) -> bool:
    return isinstance(base, MonoidBase) and base.name in (CLASSICAL.name, TRIVIAL.name)


def format_lambda(lam: Lambda, base: BaseCategory = CLASSICAL) -> str:
    if _vector_form(base):
        return "(" + ",".join(map(str, lam.to_vector())) + ")"
    inner = ",".join(f"{base.format_arrow(a)}:{m}" for a, m in lam.items())
    return "{" + inner + "}"


def parse_lambda(text: str, base: BaseCategory = CLASSICAL) -> Lambda:
    s = text.strip()
    if s.startswith("(") and s.endswith(")"):
        if not _vector_form(base):
            raise ParseError("vector form is only available over the classical base")
        body = s[1:-1].strip()
        if not body:
            return Lambda()
        try:
            vec = [int(x) for x in body.split(",")]
        except ValueError as exc:
            raise ParseError(f"bad vector {text!r}") from exc
        if any(v < 0 for v in vec):
            raise ParseError(f"negative multiplicity in {text!r}")
        for i, v in enumerate(vec):
            if v:
                base.parse_arrow(str(i + 1))
        return Lambda.from_vector(vec)
    if s.startswith("{") and s.endswith("}"):
        body = s[1:-1].strip()
        pairs = []
        for part in filter(None, (p.strip() for p in body.split(","))):
            arrow_text, _, mult = part.rpartition(":")
            if not arrow_text:
                raise ParseError(f"entry {part!r} needs arrow:multiplicity")
            try:
                pairs.append((base.parse_arrow(arrow_text), int(mult)))
            except ValueError as exc:
                raise ParseError(f"bad entry {part!r}") from exc
        return Lambda(pairs)
    raise ParseError(f"cannot parse Lambda from {text!r}")


def format_word(w: Word, base: BaseCategory = CLASSICAL) -> str:
    return ".".join(base.format_arrow(a) for a in w)


def parse_word(text: str, base: BaseCategory = CLASSICAL) -> Word:
    s = text.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1].replace(",", ".")
    parts = [p for p in s.split(".")]
    if not s or any(not p.strip() for p in parts):
        raise ParseError(f"cannot parse word from {text!r}")
    return Word(base.parse_arrow(p) for p in parts)


def format_shape(shape, base: BaseCategory = CLASSICAL) -> str:
    if isinstance(shape, Word):
        return format_word(shape, base)
    return format_lambda(shape, base)


def format_generator(g: Generator, base: BaseCategory = CLASSICAL) -> str:
    body = format_shape(g.shape, base)
    if len(base.objects) > 1:
        return f"{g.color}|{body}"
    return body


def parse_generator(text: str, base: BaseCategory, words: bool, color=None) -> Generator:
    """Parse ``"shape"`` or ``"color|shape"``."""
    s = text.strip()
    if "|" in s:
        head, s = s.split("|", 1)
        try:
            color = int(head)
        except ValueError as exc:
            raise ParseError(f"bad color {head!r}") from exc
    if color is None:
        color = base.objects[0]
    if color not in base.objects:
        raise ParseError(f"unknown color {color!r}")
    shape = parse_word(s, base) if words else parse_lambda(s, base)
    if not shape:
        raise ParseError(f"empty generator {text!r}")
    g = Generator(color, shape)
    check_generator(base, g)
    return g


def rational_to_json(q: Fraction) -> dict:
    return {"num": q.numerator, "den": q.denominator}


def rational_from_json(d: Mapping) -> Fraction:
    return Fraction(int(d["num"]), int(d["den"]))


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def base_by_name(name: str) -> BaseCategory:
    """Look up a built-in base: ``N+,x``, ``N,+``, ``Z/n``, ``1``, optionally ``[k]``-colored."""
    m = re.fullmatch(r"(.+?)\[(\d+)\]", name.strip())
    if m:
        return ColoredBase(int(m.group(2)), base_by_name(m.group(1)))
    key = name.strip()
    if key in ("N+,x", "classical", "N+"):
        return CLASSICAL
    if key in ("N,+", "additive", "N"):
        return ADDITIVE
    if key == "1":
        return TRIVIAL
    m = re.fullmatch(r"Z/(\d+)", key)
    if m:
        return cyclic_base(int(m.group(1)))
    raise ParseError(f"unknown base {name!r}")
