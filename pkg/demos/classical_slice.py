"""One slice of the classical plethystic comultiplication, three ways.

sigma = (0,0,0,1,0,2) is a 4-block and two 6-blocks.  Restricting the
outer leg to lambda = (1,2) leaves two monomials.
"""

from plethyon import delta_combinatorial, delta_symbolic, enumerate_decompositions, get_flavor
from plethyon.core import format_rational
from plethyon.incidence import format_monomial, format_tensor
from plethyon.surjections import ts_delta

P = get_flavor("classical")
sigma = P.parse("(0,0,0,1,0,2)")
lam = P.parse("(1,2)")

routes = {
    "combinatorial": delta_combinatorial(P, sigma),
    "symbolic": delta_symbolic(P, sigma),
    "surjections": ts_delta(sigma, limit=16),
}
for name, t in routes.items():
    print(f"[{name}]")
    print(format_tensor(P, t.restrict_right((lam,))))
print("all routes equal:", len({frozenset(t.terms.items()) for t in routes.values()}) == 1)

for outer in ("(1,2)", "(1,1)"):
    print(f"\ndecompositions with outer {outer}:")
    for d in enumerate_decompositions(P, sigma, P.parse(outer)):
        print(f"  {format_rational(d.coefficient):>6}  {format_monomial(P, d.inner)}")
