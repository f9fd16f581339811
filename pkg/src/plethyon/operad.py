"""Concrete operads built from categories.

An operation with output color ``c`` is a tuple (or multiset, in the
symmetric case) of arrows out of ``c``; composition plugs each inner
operation onto the arrow it sits on.  This covers Sym, Ass, their colored
versions, Giraudo's construction on a monoid and operads from finite
category tables, plus executable checks of the operad axioms.
"""

from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass, field
from math import factorial, prod
from pathlib import Path
from typing import Callable, NamedTuple, Sequence

from .core import (
    CLASSICAL,
    TRIVIAL,
    BaseCategory,
    ColoredBase,
    ColorMismatchError,
    MonoidBase,
    OutOfRangeError,
    ParseError,
    PlethyonError,
    TableCategory,
    UnsupportedFlavorError,
    base_by_name,
)


class TupleOperation(NamedTuple):
    """Operation with output ``color`` and one arrow per input."""

    color: object
    arrows: tuple

    @property
    def arity(self) -> int:
        return len(self.arrows)


def giraudo_full_compose(x: Sequence, inners: Sequence[Sequence], monoid: MonoidBase = CLASSICAL) -> tuple:
    """Concatenate ``(x_i * y^i_1, ..., x_i * y^i_k)`` over ``i``."""
    if len(inners) != len(x):
        raise PlethyonError(f"{len(x)} inputs but {len(inners)} inner tuples")
    return tuple(monoid.compose(xi, y) for xi, ys in zip(x, inners) for y in ys)


def giraudo_partial_compose(x: Sequence, i: int, y: Sequence, monoid: MonoidBase = CLASSICAL) -> tuple:
    """Plug ``y`` into position ``i`` (1-based) of ``x``."""
    if not 1 <= i <= len(x):
        raise OutOfRangeError(f"position {i} outside 1..{len(x)}")
    xi = x[i - 1]
    return tuple(x[: i - 1]) + tuple(monoid.compose(xi, b) for b in y) + tuple(x[i:])


class OperadInstance:
    """Operad of arrow tuples over a base category.

    With ``opposite`` (the default) an operation of color ``c`` is a tuple of
    arrows with source ``c`` and the inputs are their targets; composition
    sends arrow ``m`` and inner arrow ``y`` to ``m;y``.  Otherwise arrows
    share the target ``c`` and composition is ``y;m``.
    """

    def __init__(
        self,
        name: str,
        base: BaseCategory,
        symmetric: bool,
        opposite: bool = True,
        arrow_aut: Callable[[object], int] | None = None,
        composer: Callable | None = None,
    ):
        self.name = name
        self.base = base
        self.symmetric = symmetric
        self.opposite = opposite
        self.arrow_aut = arrow_aut or (lambda a: 1)
        self._composer = composer
        self._ops_cache: dict = {}

    @property
    def colors(self) -> tuple:
        return self.base.objects

    def __repr__(self):
        kind = "symmetric" if self.symmetric else "planar"
        return f"<OperadInstance {self.name} ({kind}, {len(self.colors)} colors)>"

    def _end(self, a):
        return self.base.target(a) if self.opposite else self.base.source(a)

    def _start(self, a):
        return self.base.source(a) if self.opposite else self.base.target(a)

    def canonical(self, op: TupleOperation) -> TupleOperation:
        return TupleOperation(op.color, tuple(sorted(op.arrows)) if self.symmetric else tuple(op.arrows))

    def make(self, color, arrows) -> TupleOperation:
        arrows = tuple(arrows)
        if not arrows:
            raise PlethyonError("operations are nonempty (no nullary operations)")
        for a in arrows:
            if self._start(a) != color:
                raise ColorMismatchError(f"arrow {self.base.format_arrow(a)} does not belong to color {color}")
        return self.canonical(TupleOperation(color, arrows))

    def input_colors(self, op: TupleOperation) -> tuple:
        return tuple(self._end(a) for a in op.arrows)

    def unit(self, color) -> TupleOperation:
        return TupleOperation(color, (self.base.identity(color),))

    def compose(self, outer: TupleOperation, inners: Sequence[TupleOperation],
                canonical: bool = True) -> TupleOperation:
        """``outer`` with ``inners[i]`` plugged into input ``i``.

        With ``canonical=False`` the result keeps concatenation order, so the
        inputs of the composite line up with the inners' inputs.
        """
        if len(inners) != outer.arity:
            raise PlethyonError(f"arity {outer.arity} but {len(inners)} inner operations")
        for i, (m, y) in enumerate(zip(outer.arrows, inners)):
            if self._end(m) != y.color:
                raise ColorMismatchError(f"input {i} has color {self._end(m)}, inner has color {y.color}")
        if self._composer is not None:
            arrows = self._composer(self, outer, inners)
        elif self.opposite:
            arrows = [self.base.compose(m, a) for m, y in zip(outer.arrows, inners) for a in y.arrows]
        else:
            arrows = [self.base.compose(a, m) for m, y in zip(outer.arrows, inners) for a in y.arrows]
        op = TupleOperation(outer.color, tuple(arrows))
        return self.canonical(op) if canonical else op

    def enumerate_ops(self, bound: int) -> list[TupleOperation]:
        """Operations of arity at most ``bound`` over arrows in the base window."""
        if bound in self._ops_cache:
            return self._ops_cache[bound]
        out = []
        for c in self.colors:
            if self.opposite:
                arrows = self.base.arrows_from(c, bound)
            else:
                arrows = [a for d in self.colors for a in self.base.arrows_from(d, bound)
                          if self.base.target(a) == c]
            arrows = sorted(arrows)
            for n in range(1, bound + 1):
                combos = (itertools.combinations_with_replacement(arrows, n) if self.symmetric
                          else itertools.product(arrows, repeat=n))
                out.extend(TupleOperation(c, tuple(t)) for t in combos)
        self._ops_cache[bound] = out
        return out

    def aut(self, op: TupleOperation) -> int:
        inner = prod(self.arrow_aut(a) for a in op.arrows)
        if not self.symmetric:
            return inner
        return inner * prod(factorial(v) for v in Counter(op.arrows).values())

    def with_composer(self, composer: Callable, name: str | None = None) -> "OperadInstance":
        """Same operations, different composition (used for negative controls)."""
        return OperadInstance(name or self.name + "*", self.base, self.symmetric, self.opposite,
                              self.arrow_aut, composer)


# --------------------------------------------------------------------------
# constructors


def codiscrete_category(k: int) -> TableCategory:
    """k objects, exactly one morphism between any ordered pair."""
    objs = list(range(k))
    morphs = [(f"{i}{j}", i, j) for i in objs for j in objs]
    comp = {(f"{i}{j}", f"{j}{l}"): f"{i}{l}" for i in objs for j in objs for l in objs}
    return TableCategory(objs, morphs, comp, {i: f"{i}{i}" for i in objs}, name=f"codiscrete{k}")


def arrow_category() -> TableCategory:
    """Objects 0, 1 and a single non-identity morphism 0 -> 1."""
    morphs = [("id0", 0, 0), ("id1", 1, 1), ("u", 0, 1)]
    comp = {("id0", "id0"): "id0", ("id1", "id1"): "id1", ("id0", "u"): "u", ("u", "id1"): "u"}
    return TableCategory([0, 1], morphs, comp, {0: "id0", 1: "id1"}, name="arrow")


def category_to_operad(C: BaseCategory, symmetric: bool, opposite: bool = True,
                       name: str | None = None, arrow_aut=None) -> OperadInstance:
    if isinstance(C, TableCategory):
        bad = C.check_axioms()
        if bad:
            raise PlethyonError(f"malformed category table: {bad[0]}")
    return OperadInstance(name or f"T({C.name})", C, symmetric, opposite, arrow_aut)


def sym(k: int = 1) -> OperadInstance:
    base = TRIVIAL if k == 1 else ColoredBase(k, TRIVIAL)
    return OperadInstance("sym" if k == 1 else f"sym{k}", base, True)


def ass(k: int = 1) -> OperadInstance:
    base = TRIVIAL if k == 1 else ColoredBase(k, TRIVIAL)
    return OperadInstance("ass" if k == 1 else f"ass{k}", base, False)


def giraudo(monoid: MonoidBase) -> OperadInstance:
    return OperadInstance(f"giraudo:{monoid.name}", monoid, False)


@dataclass(frozen=True)
class IntermediateCategory:
    """Arrows labeled by arities, composing by multiplication, with per-arrow aut order."""

    base: BaseCategory
    symmetric_inner: bool

    def arrow_aut(self, a) -> int:
        return factorial(self.base.size(a)) if self.symmetric_inner else 1


def _is_sym_like(Q: OperadInstance) -> bool:
    b = Q.base
    return b is TRIVIAL or (isinstance(b, ColoredBase) and b.inner is TRIVIAL)


def t_intermediate_category(Q: OperadInstance | str) -> IntermediateCategory:
    """Category indexing the T-construction over Sym/Ass (k-colored allowed)."""
    if isinstance(Q, str):
        Q = operad_by_name(Q)
    if not _is_sym_like(Q):
        raise UnsupportedFlavorError(f"{Q.name} is not Sym, Ass or a colored version")
    k = len(Q.colors)
    base = CLASSICAL if k == 1 else ColoredBase(k, CLASSICAL)
    return IntermediateCategory(base, Q.symmetric)


def t_operad(Q: OperadInstance | str, multisets: bool = True) -> OperadInstance:
    """Operad of multisets (or sequences) of arity-labeled arrows over Q."""
    cat = t_intermediate_category(Q)
    qname = Q if isinstance(Q, str) else Q.name
    return OperadInstance(f"T({qname})", cat.base, multisets, True, cat.arrow_aut)


def t_operad_compose(outer: TupleOperation, inners: Sequence[TupleOperation],
                     base: BaseCategory = CLASSICAL, symmetric: bool = True) -> TupleOperation:
    return OperadInstance("T", base, symmetric).compose(outer, inners)


def operad_by_name(name: str) -> OperadInstance:
    """``sym``, ``ass``, ``symK``, ``assK``, ``giraudo:<base>``, ``cat:<table.json>``."""
    key = name.strip()
    for prefix, ctor in (("sym", sym), ("ass", ass)):
        if key == prefix:
            return ctor()
        if key.startswith(prefix) and key[len(prefix):].isdigit():
            return ctor(int(key[len(prefix):]))
    if key.startswith("giraudo:"):
        base = base_by_name(key.split(":", 1)[1])
        if not isinstance(base, MonoidBase):
            raise ParseError("giraudo needs a one-object monoid")
        return giraudo(base)
    if key.startswith("cat:"):
        spec = key.split(":", 1)[1]
        builtin = {"codiscrete2": lambda: codiscrete_category(2), "arrow": arrow_category}
        symmetric = False
        if spec in builtin:
            C = builtin[spec]()
        else:
            try:
                data = json.loads(Path(spec).read_text())
            except (OSError, json.JSONDecodeError) as exc:
                raise ParseError(f"cannot read category table {spec!r}: {exc}") from exc
            C = TableCategory.from_json(data, name=Path(spec).stem)
            symmetric = bool(data.get("symmetric", False))
        return category_to_operad(C, symmetric=symmetric, name=key)
    raise ParseError(f"unknown operad {name!r}")


# --------------------------------------------------------------------------
# axioms


@dataclass
class AxiomReport:
    operad: str
    bound: int
    checks: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.witnesses

    def tick(self, law):
        self.checks[law] = self.checks.get(law, 0) + 1

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        counts = ", ".join(f"{k}={v}" for k, v in sorted(self.checks.items()))
        return "\n".join([f"{status} {self.operad} (bound {self.bound}): {counts}"]
                         + [f"  {w}" for w in self.witnesses[:5]])


def _fill(Q: OperadInstance, colors: Sequence, ops_by_color: dict, budget: int):
    """All tuples of operations with given output colors and total arity <= budget."""
    if not colors:
        yield ()
        return
    rest = len(colors) - 1
    for op in ops_by_color.get(colors[0], []):
        if op.arity + rest > budget:
            continue
        for tail in _fill(Q, colors[1:], ops_by_color, budget - op.arity):
            yield (op,) + tail


def axiom_check(Q: OperadInstance, bound: int, max_witnesses: int = 20) -> AxiomReport:
    """Units, associativity and color coherence on every triple whose final arity is <= bound."""
    rep = AxiomReport(Q.name, bound)
    ops = Q.enumerate_ops(bound)
    by_color: dict = {}
    for op in ops:
        by_color.setdefault(op.color, []).append(op)

    def witness(law, *parts):
        if len(rep.witnesses) < max_witnesses:
            rep.witnesses.append(f"{law}: " + " | ".join(map(str, parts)))

    for x in ops:
        ins = Q.input_colors(x)
        try:
            r = Q.compose(x, [Q.unit(c) for c in ins])
            if r != Q.canonical(x):
                witness("right unit", x, r)
            l = Q.compose(Q.unit(x.color), [x])
            if l != Q.canonical(x):
                witness("left unit", x, l)
        except PlethyonError as exc:
            witness("unit", x, exc)
        rep.tick("unit")
        for ys in _fill(Q, ins, by_color, bound):
            try:
                xy = Q.compose(x, list(ys))
            except PlethyonError as exc:
                witness("composability", x, ys, exc)
                continue
            expected_in = tuple(c for y in ys for c in Q.input_colors(y))
            if xy.color != x.color or (not Q.symmetric and Q.input_colors(xy) != expected_in) or \
                    (Q.symmetric and sorted(Q.input_colors(xy)) != sorted(expected_in)):
                witness("source/target", x, ys, xy)
            rep.tick("coherence")
            raw = Q.compose(x, list(ys), canonical=False)
            for zs in _fill(Q, expected_in, by_color, bound):
                try:
                    lhs = Q.compose(raw, list(zs))
                except PlethyonError as exc:
                    witness("composability", raw, zs, exc)
                    continue
                grouped, k = [], 0
                for y in ys:
                    grouped.append(Q.compose(y, list(zs[k:k + y.arity])))
                    k += y.arity
                rhs = Q.compose(x, grouped)
                if lhs != rhs:
                    witness("associativity", x, ys, zs, lhs, rhs)
                rep.tick("associativity")
    return rep

