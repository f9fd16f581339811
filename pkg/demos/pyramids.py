"""Surjections, pullbacks and the 17-point 2-simplex.

A 2-simplex glues an inner span 3 <- 7 -> 2 to an outer span 2 <- 5 -> 1
along a matching of the 2-point set with the outer blocks; the pullback
on top has 17 elements.
"""

from plethyon.incidence import format_monomial, get_flavor
from plethyon.surjections import Decoration, Span, enumerate_ts, glue, two_simplices

P = get_flavor("classical")

print("connected classes with at most 4 elements (class, aut):")
for c in enumerate_ts(1, 4):
    print(f"  {P.format(c.key):<10} {c.aut}")

inner = Span((0, 0, 1, 2, 2, 2, 2), (0, 0, 1))   # blocks 2,1 | 4
outer = Span((0, 0, 1, 1, 1), (0, 0))            # blocks 2 | 3
for phi in [(1, 0), (0, 1)]:
    print(f"glue with phi={phi}:", P.format(glue(inner, outer, phi, Decoration())))

sigma = P.parse("(0,0,1,0,0,1,0,1)")
print(f"\n2-simplices over {P.format(sigma)}:")
for r in two_simplices(sigma, limit=17):
    print(f"  {format_monomial(P, r.inner):<28} | {P.format(r.outer):<12} gluings={r.count}")
