"""Pyramids of finite-set surjections.

A connected 1-simplex is a span ``t00 <- t01 -> 1``: a surjection of a
finite set onto its blocks.  A 2-simplex glues an inner 1-simplex ``a`` to
an outer ``b`` along a bijection ``phi`` of the middle set and takes a set
pullback on top.  Counting 2-simplices with explicit value tables gives a
comultiplication that never looks at the operadic formulas.

Decorations: ``left`` marks the left-down maps, ``right`` the right-down
maps, each ``plain``, ``linear`` (fibers ordered) or ``monotone`` (sets
ordered, maps monotone).  With ``colors=k`` the elements of ``t00`` carry
colors and right-down maps preserve colors.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, prod
from typing import NamedTuple, Sequence

from .core import (
    Arrow,
    Generator,
    Lambda,
    LimitExceededError,
    ParseError,
    PlethyonError,
    Word,
)
from .incidence import Flavor, TensorElement, get_flavor

PLAIN, LINEAR, MONOTONE = "plain", "linear", "monotone"
_MARKS = (PLAIN, LINEAR, MONOTONE)
DEFAULT_LIMIT = 10


@dataclass(frozen=True)
class Decoration:
    left: str = PLAIN
    right: str = PLAIN

    def __post_init__(self):
        if self.left not in _MARKS or self.right not in _MARKS:
            raise ParseError(f"decorations are {', '.join(_MARKS)}")

    @classmethod
    def parse(cls, text: str) -> "Decoration":
        """``"left=linear,right=monotone"``; missing sides are plain."""
        vals = {}
        for part in filter(None, (p.strip() for p in text.split(","))):
            side, _, mark = part.partition("=")
            if side not in ("left", "right") or not mark:
                raise ParseError(f"bad decoration entry {part!r}")
            vals[side] = mark
        return cls(**vals)

    @property
    def ordered_blocks(self) -> bool:
        """Blocks of a connected diagram are totally ordered."""
        return self.right != PLAIN

    @property
    def rigid_blocks(self) -> bool:
        """Elements inside a block are totally ordered."""
        return self.left != PLAIN

    def __str__(self):
        return f"left={self.left},right={self.right}"


def flavor_for(decoration: Decoration, colors: int = 1) -> Flavor:
    """The incidence flavor whose generators are this decoration's connected classes."""
    d = decoration
    if colors == 2 and not d.ordered_blocks:
        return get_flavor("biv_exp" if d.rigid_blocks else "biv")
    if colors != 1:
        raise PlethyonError("only 1 or 2 colors are supported")
    if not d.ordered_blocks:
        return get_flavor("exp" if d.rigid_blocks else "classical")
    nc = "_nc" if d.right == MONOTONE else ""
    return get_flavor(("lin_diamond" if d.rigid_blocks else "diamond") + nc)


# --------------------------------------------------------------------------
# squares


class Square(NamedTuple):
    """Pullback apex of size ``size`` with projections ``p`` (to g's domain) and ``q`` (to f's)."""

    size: int
    p: tuple
    q: tuple


def is_surjective(f: Sequence[int], k: int) -> bool:
    return set(f) == set(range(k))


def is_monotone(f: Sequence[int]) -> bool:
    return all(a <= b for a, b in zip(f, f[1:]))


def pullback(g: Sequence[int], f: Sequence[int]) -> Square:
    """Set pullback of ``g`` and ``f`` with the apex ordered lexicographically."""
    by_value: dict = {}
    for b, v in enumerate(f):
        by_value.setdefault(v, []).append(b)
    pairs = [(a, b) for a, v in enumerate(g) for b in by_value.get(v, ())]
    return Square(len(pairs), tuple(a for a, _ in pairs), tuple(b for _, b in pairs))


def monotone_pullback(g: Sequence[int], f: Sequence[int]) -> Square:
    """The monotone pullback square of a monotone ``g`` and any surjection ``f``.

    The apex is ordered by ``p`` first, then by ``q``, so ``p`` is monotone
    and ``q`` is monotone on each fiber of ``p``.
    """
    k = max(list(g) + list(f), default=-1) + 1
    if not is_surjective(g, k) or not is_surjective(f, k):
        raise PlethyonError("pullback inputs must be surjections onto the same set")
    if not is_monotone(g):
        raise PlethyonError("the first leg must be monotone")
    return pullback(g, f)


def is_monotone_square(sq: Square) -> bool:
    if not is_monotone(sq.p):
        return False
    return all(
        sq.q[i] < sq.q[i + 1] for i in range(sq.size - 1) if sq.p[i] == sq.p[i + 1]
    )


def fibers(f: Sequence[int], k: int | None = None) -> list[list[int]]:
    k = max(f, default=-1) + 1 if k is None else k
    out: list[list[int]] = [[] for _ in range(k)]
    for x, v in enumerate(f):
        out[v].append(x)
    return out


# --------------------------------------------------------------------------
# level-1 diagrams


@dataclass(frozen=True)
class Span:
    """A 1-simplex ``t00 <- t01 -> t11`` with explicit value tables.

    ``left[x]`` is the block of element ``x``; ``down[b]`` is the point of
    ``t11`` under block ``b``.  ``colors00`` colors blocks, ``colors11``
    colors points; elements take the color of their point.  Index order in
    each set is the order used by linear/monotone decorations.
    """

    left: tuple
    down: tuple
    colors00: tuple = None
    colors11: tuple = None

    @property
    def n00(self) -> int:
        return len(self.down)

    @property
    def n11(self) -> int:
        return max(self.down, default=-1) + 1

    def block_colors(self) -> tuple:
        return self.colors00 if self.colors00 is not None else (0,) * self.n00

    def point_colors(self) -> tuple:
        return self.colors11 if self.colors11 is not None else (0,) * self.n11

    def is_valid(self) -> bool:
        return is_surjective(self.left, self.n00) and is_surjective(self.down, self.n11)

    def pieces(self) -> list["Span"]:
        """Connected components, one per point of ``t11``, in point order."""
        out = []
        bc = self.block_colors()
        pc = self.point_colors()
        for j in range(self.n11):
            blocks = [b for b in range(self.n00) if self.down[b] == j]
            idx = {b: i for i, b in enumerate(blocks)}
            left = tuple(idx[v] for v in self.left if v in idx)
            out.append(Span(left, (0,) * len(blocks), tuple(bc[b] for b in blocks), (pc[j],)))
        return out


def connected_span(blocks: Sequence[tuple[int, int]], out_color: int = 0) -> Span:
    """Monotone connected span with blocks ``(size, color)`` in the given order."""
    left = tuple(i for i, (s, _) in enumerate(blocks) for _ in range(s))
    return Span(left, (0,) * len(blocks), tuple(c for _, c in blocks), (out_color,))


def _arrow(size: int, out_color: int, color: int, colors: int):
    return size if colors == 1 else Arrow(size, out_color, color)


def _arrow_parts(a, out_color) -> tuple[int, int]:
    return (a, 0) if isinstance(a, int) else (a.label, a.tgt)


def class_of(span: Span, decoration: Decoration, colors: int = 1) -> Generator:
    """Canonical key of a connected span."""
    if span.n11 != 1:
        raise PlethyonError("class_of needs a connected span")
    out = span.point_colors()[0]
    sizes = Counter(span.left)
    bc = span.block_colors()
    arrows = [_arrow(sizes[b], out, bc[b], colors) for b in range(span.n00)]
    if decoration.ordered_blocks:
        return Generator(out, Word(arrows))
    return Generator(out, Lambda((a, 1) for a in arrows))


def representative(g: Generator, colors: int = 1) -> Span:
    """Monotone connected span in the class ``g`` (blocks in shape order)."""
    letters = list(g.shape) if isinstance(g.shape, Word) else list(g.shape.elements())
    return connected_span([_arrow_parts(a, g.color) for a in letters], g.color)


def class_aut(g: Generator, decoration: Decoration) -> int:
    """Automorphisms of a connected class respecting the decoration."""
    letters = list(g.shape) if isinstance(g.shape, Word) else list(g.shape.elements())
    sizes = [_arrow_parts(a, g.color)[0] for a in letters]
    inner = 1 if decoration.rigid_blocks else prod(factorial(s) for s in sizes)
    if decoration.ordered_blocks:
        return inner
    return inner * prod(factorial(m) for m in Counter(letters).values())


def monotone_form(span: Span) -> tuple[Span, tuple, tuple]:
    """Relabel to monotone maps; returns (span, perm01, perm00) with new index -> old index."""
    order00 = sorted(range(span.n00), key=lambda b: (span.down[b], b))
    new_of_block = {b: i for i, b in enumerate(order00)}
    order01 = sorted(range(len(span.left)), key=lambda x: (new_of_block[span.left[x]], x))
    left = tuple(new_of_block[span.left[x]] for x in order01)
    down = tuple(span.down[b] for b in order00)
    bc = span.block_colors()
    colors00 = tuple(bc[b] for b in order00) if span.colors00 is not None else None
    return Span(left, down, colors00, span.colors11), tuple(order01), tuple(order00)


def is_isomorphism(src: Span, dst: Span, perm01: Sequence[int], perm00: Sequence[int]) -> bool:
    """Whether new->old relabelings carry ``dst`` onto ``src`` (t11 fixed)."""
    inv00 = {old: new for new, old in enumerate(perm00)}
    if sorted(perm01) != list(range(len(src.left))) or sorted(perm00) != list(range(src.n00)):
        return False
    ok_left = all(inv00[src.left[old]] == dst.left[new] for new, old in enumerate(perm01))
    ok_down = all(src.down[old] == dst.down[new] for new, old in enumerate(perm00))
    ok_col = all(src.block_colors()[old] == dst.block_colors()[new] for new, old in enumerate(perm00))
    return ok_left and ok_down and ok_col


# --------------------------------------------------------------------------
# enumeration


@dataclass(frozen=True)
class IsoClass:
    key: Generator
    aut: int
    bottom: int


@dataclass(frozen=True)
class TwoSimplexClass:
    """2-simplices with given faces: ``count`` gluings of fixed representatives."""

    inner: tuple
    outer: Generator
    composite: Generator
    count: int
    aut_inner: int
    aut_outer: int

    @property
    def cardinality(self) -> Fraction:
        return Fraction(self.count, self.aut_inner * self.aut_outer)


def _check_limit(n: int, limit: int | None):
    limit = DEFAULT_LIMIT if limit is None else limit
    if n > limit:
        raise LimitExceededError(f"bottom size {n} exceeds the limit {limit}")


def _block_types(colors: int, max_size: int):
    return [(s, c) for s in range(1, max_size + 1) for c in range(colors)]


def enumerate_connected(max_bottom: int, decoration: Decoration, colors: int = 1) -> list[IsoClass]:
    """Connected level-1 classes with ``|t01| <= max_bottom``."""
    out = []
    for out_color in range(colors):
        types = _block_types(colors, max_bottom)

        def rec(total, acc, start):
            if acc:
                span = connected_span(acc, out_color)
                key = class_of(span, decoration, colors)
                out.append(IsoClass(key, class_aut(key, decoration), total))
            for i in range(0 if decoration.ordered_blocks else start, len(types)):
                s, c = types[i]
                if total + s <= max_bottom:
                    rec(total + s, acc + [(s, c)], i)

        rec(0, [], 0)
    return sorted(out, key=lambda ic: (ic.bottom, ic.key))


def enumerate_ts(level: int, max_bottom: int, decoration: Decoration | str = Decoration(),
                 colors: int = 1, limit: int | None = None) -> list:
    """Level 1: connected classes with aut orders.  Level 2: gluings of connected 2-simplices."""
    if isinstance(decoration, str):
        decoration = Decoration.parse(decoration)
    _check_limit(max_bottom, limit)
    if level == 1:
        return enumerate_connected(max_bottom, decoration, colors)
    if level == 2:
        out = []
        for ic in enumerate_connected(max_bottom, decoration, colors):
            out.extend(two_simplices(ic.key, decoration, colors))
        return out
    raise PlethyonError("only levels 1 and 2 are materialized")


# --------------------------------------------------------------------------
# 2-simplices


def _labels(g: Generator) -> list:
    return list(g.shape) if isinstance(g.shape, Word) else list(g.shape.elements())


def _outer_candidates(sigma: Generator, decoration: Decoration, colors: int) -> list[Generator]:
    """Connected classes that can sit on top of a decomposition of sigma."""
    parts = [_arrow_parts(a, sigma.color) for a in _labels(sigma)]
    divisors = sorted({d for s, _ in parts for d in range(1, s + 1) if s % d == 0})
    letters = [_arrow(d, sigma.color, c, colors) for d in divisors for c in range(colors)]
    n = len(parts)
    out = []
    if decoration.ordered_blocks:
        for k in range(1, n + 1):
            out.extend(Generator(sigma.color, Word(w)) for w in itertools.product(letters, repeat=k))
    else:
        for k in range(1, n + 1):
            for combo in itertools.combinations_with_replacement(letters, k):
                out.append(Generator(sigma.color, Lambda((a, 1) for a in combo)))
    return out


def _piece_candidates(sigma: Generator, scale: int, point_color: int, decoration: Decoration,
                      colors: int, budget: Counter) -> list[Generator]:
    """Connected inner pieces of output ``point_color`` whose blocks scale into sigma."""
    avail = []
    for (s, c), m in budget.items():
        if m > 0 and s % scale == 0:
            avail.append(((s // scale, c), m))
    types = [t for t, _ in avail]
    caps = dict(avail)
    out = []

    def rec(i, acc):
        if i == len(types):
            if acc:
                letters = [_arrow(s, point_color, c, colors) for s, c in acc]
                out.append(letters)
            return
        for mult in range(caps[types[i]] + 1):
            rec(i + 1, acc + [types[i]] * mult)

    rec(0, [])
    if not decoration.ordered_blocks:
        return [Generator(point_color, Lambda((a, 1) for a in ls)) for ls in out]
    words = set()
    for ls in out:
        for perm in set(itertools.permutations(ls)):
            words.add(Word(perm))
    return [Generator(point_color, w) for w in sorted(words)]


def _inner_span(pieces: Sequence[Generator]) -> Span:
    """Disjoint union of monotone piece representatives over points 0..k-1."""
    left, down, c00, c11 = [], [], [], []
    offset = 0
    for j, g in enumerate(pieces):
        rep = representative(g)
        left += [offset + v for v in rep.left]
        down += [j] * rep.n00
        c00 += list(rep.block_colors())
        c11.append(g.color)
        offset += rep.n00
    return Span(tuple(left), tuple(down), tuple(c00), tuple(c11))


def glue(a: Span, b: Span, phi: Sequence[int], decoration: Decoration, colors: int = 1) -> Generator:
    """Class of the long edge of the 2-simplex ``(a, b, phi)``.

    ``phi[i]`` is the block of ``b`` matched with point ``i`` of ``a``.
    The apex is the set pullback of ``t01 -> t11`` and ``t12 -> t11``.
    """
    f = [phi[a.down[a.left[x]]] for x in range(len(a.left))]
    sq = pullback(f, b.left)
    out_color = b.point_colors()[0]
    sizes = Counter(a.left[x] for x in sq.p)
    bc = a.block_colors()
    # long-edge block order: by outer block of its point, then within-point order
    rank = {}
    for blk in range(a.n00):
        rank[blk] = (phi[a.down[blk]], blk)
    blocks = sorted(range(a.n00), key=lambda blk: rank[blk])
    arrows = [_arrow(sizes[blk], out_color, bc[blk], colors) for blk in blocks]
    if decoration.ordered_blocks:
        return Generator(out_color, Word(arrows))
    return Generator(out_color, Lambda((x, 1) for x in arrows))


def _count_gluings(pieces: Sequence[Generator], outer: Generator, sigma: Generator,
                   decoration: Decoration, colors: int) -> int:
    """Number of bijections phi making the glued long edge isomorphic to sigma."""
    a = _inner_span(pieces)
    b = representative(outer)
    k = len(pieces)
    point_cols = a.point_colors()
    outer_cols = b.block_colors()
    outer_sizes = Counter(b.left)
    target = Counter(_labels(sigma))
    scaled = []
    for p in pieces:
        scaled.append([_arrow_parts(x, p.color) for x in _labels(p)])
    count = 0
    phi = [None] * k
    used = [False] * k

    def fits(i, j, acc: Counter) -> Counter | None:
        n = outer_sizes[j]
        add = Counter(_arrow(s * n, sigma.color, c, colors) for s, c in scaled[i])
        new = acc + add
        if any(new[x] > target[x] for x in add):
            return None
        return new

    def rec(i, acc):
        nonlocal count
        if i == k:
            if glue(a, b, phi, decoration, colors) == sigma:
                count += 1
            return
        for j in range(k):
            if used[j] or outer_cols[j] != point_cols[i]:
                continue
            if decoration.right == MONOTONE and j != i:
                continue
            new = fits(i, j, acc)
            if new is None:
                continue
            used[j] = True
            phi[i] = j
            rec(i + 1, new)
            used[j] = False
        phi[i] = None

    rec(0, Counter())
    return count


def _inner_classes(sigma: Generator, outer: Generator, decoration: Decoration, colors: int) -> set:
    """Inner monomials (canonical tuples of pieces) reachable on top of ``outer``."""
    b = representative(outer)
    sizes = Counter(b.left)
    cols = b.block_colors()
    k = b.n00
    sigma_parts = Counter(_arrow_parts(a, sigma.color) for a in _labels(sigma))
    sig_seq = [_arrow_parts(a, sigma.color) for a in _labels(sigma)] if decoration.ordered_blocks else None
    found = set()

    def rec(j, budget: Counter, pos, acc):
        if j == k:
            if not +budget:
                found.add(tuple(acc) if decoration.right == MONOTONE else tuple(sorted(acc)))
            return
        n = sizes[j]
        for p in _piece_candidates(sigma, n, cols[j], decoration, colors, budget):
            parts = [_arrow_parts(x, p.color) for x in _labels(p)]
            scaled = [(s * n, c) for s, c in parts]
            if sig_seq is not None:
                if sig_seq[pos:pos + len(scaled)] != scaled:
                    continue
            need = Counter(scaled)
            if any(need[x] > budget[x] for x in need):
                continue
            rec(j + 1, budget - need, pos + len(scaled), acc + [p])

    rec(0, sigma_parts, 0, [])
    return found


def two_simplices(sigma: Generator, decoration: Decoration | str = Decoration(), colors: int = 1,
                  limit: int | None = None) -> list[TwoSimplexClass]:
    """All (inner, outer) face pairs of 2-simplices with long edge sigma, with gluing counts."""
    if isinstance(decoration, str):
        decoration = Decoration.parse(decoration)
    bottom = sum(_arrow_parts(a, sigma.color)[0] for a in _labels(sigma))
    _check_limit(bottom, limit)
    out = []
    for outer in _outer_candidates(sigma, decoration, colors):
        for pieces in sorted(_inner_classes(sigma, outer, decoration, colors)):
            cnt = _count_gluings(pieces, outer, sigma, decoration, colors)
            if not cnt:
                continue
            if decoration.right == MONOTONE:
                aut_in = prod(class_aut(p, decoration) for p in pieces)
            else:
                aut_in = prod(class_aut(p, decoration) for p in pieces) * prod(
                    factorial(m) for m in Counter(pieces).values())
            out.append(TwoSimplexClass(pieces, outer, sigma, cnt, aut_in, class_aut(outer, decoration)))
    return out


def ts_delta(sigma: Generator, decoration: Decoration | str = Decoration(), colors: int = 1,
             limit: int | None = None) -> TensorElement:
    """Comultiplication of ``sigma`` from 2-simplex counts: aut(sigma) * count / (aut a * aut b)."""
    if isinstance(decoration, str):
        decoration = Decoration.parse(decoration)
    aut_sigma = class_aut(sigma, decoration)
    terms: dict = {}
    for t in two_simplices(sigma, decoration, colors, limit):
        key = (t.inner, (t.outer,))
        terms[key] = terms.get(key, 0) + aut_sigma * t.cardinality
    return TensorElement(terms)


# --------------------------------------------------------------------------
# forests


class Node(NamedTuple):
    """Tree node: ``label`` names the operation (None for a leaf)."""

    label: object
    color: object
    children: tuple = ()


def _canon(node: Node, symmetric: bool):
    kids = [_canon(c, symmetric) for c in node.children]
    if symmetric:
        kids.sort(key=repr)
    return (repr(node.label), repr(node.color), tuple(kids))


def _tree_aut(node: Node, symmetric: bool) -> int:
    if not node.children:
        return 1
    out = prod(_tree_aut(c, symmetric) for c in node.children)
    if symmetric:
        groups = Counter(_canon(c, True) for c in node.children)
        out *= prod(factorial(m) for m in groups.values())
    return out


def forest_aut_order(forest: Sequence[Node], symmetric: bool = True, forest_symmetric: bool = True) -> int:
    """Automorphisms of a forest of leveled trees.

    ``symmetric`` lets each operation permute isomorphic inputs;
    ``forest_symmetric`` lets identical trees of the forest swap.
    """
    for t in forest:
        if not isinstance(t, Node):
            raise PlethyonError(f"malformed forest entry {t!r}")
    out = prod(_tree_aut(t, symmetric) for t in forest)
    if forest_symmetric:
        groups = Counter(_canon(t, symmetric) for t in forest)
        out *= prod(factorial(m) for m in groups.values())
    return out


def corolla(label, color, leaf_colors: Sequence) -> Node:
    return Node(label, color, tuple(Node(None, c) for c in leaf_colors))
