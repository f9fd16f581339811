"""Giraudo's construction and the operad axiom checker.

Over (N+, x) the full composition multiplies each inner tuple by the
matching outer entry.  A deliberately broken composition is caught by
the associativity check.
"""

from plethyon.core import CLASSICAL
from plethyon.operad import axiom_check, giraudo, giraudo_full_compose, operad_by_name

print("(5,9) o ((2,3),(4,7)) =", giraudo_full_compose((5, 9), ((2, 3), (4, 7))))

for name in ["sym", "ass", "sym2", "giraudo:N+,x", "giraudo:N,+", "cat:arrow"]:
    print(axiom_check(operad_by_name(name), 3).summary())


def off_by_one(Q, outer, inners):
    arrows = [m * a for m, y in zip(outer.arrows, inners) for a in y.arrows]
    if outer.arity == 2:
        arrows[0] += 1
    return arrows


print(axiom_check(giraudo(CLASSICAL).with_composer(off_by_one, "broken"), 3).summary())
