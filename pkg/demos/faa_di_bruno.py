"""Faa di Bruno comultiplication next to Bell polynomial coefficients.

The coefficient of A_{j1}...A_{jk} (x) A_k in Delta(A_n) counts set
partitions of an n-set into blocks of those sizes.
"""

from plethyon import delta_combinatorial, get_flavor
from plethyon.incidence import format_tensor

F = get_flavor("fdb")

for n in range(1, 6):
    sigma = F.parse(f"({n})")
    t = delta_combinatorial(F, sigma)
    total = sum(t.terms.values())
    print(f"Delta A{n}   ({total} set partitions in all)")
    print(format_tensor(F, t))
    print()
