"""Compatible and incompatible families of subspaces and filtrations.

    python3 demos/compatibility.py
"""

from nearbycycles import hypercomplex as hc
from nearbycycles.compat import (Filtration, Subspace, are_filtrations_compatible, compatibility_hypercomplex,
                                 jump_box, multigraded, multigraded_all_orders)

line = lambda *v: Subspace.span(len(v), [list(v)])

# two subspaces are always compatible; the grid records intersection and sum
A1 = Subspace.span(4, [[1, 0, 0, 0], [0, 1, 0, 0]])
A2 = Subspace.span(4, [[0, 1, 0, 0], [0, 0, 1, 0]])
X = compatibility_hypercomplex(4, [A1, A2]).hypercomplex
print("grid dims:", {k: X.dim(k) for k in sorted(X.dims)})
print("total complex acyclic:", hc.cohomology_dims(hc.total_complex(X)) == {})

# three distinct lines in the plane are not
res = compatibility_hypercomplex(2, [line(1, 0), line(0, 1), line(1, 1)])
print("three lines compatible:", res.compatible, "|", res.failure)

# filtrations split by a common basis are compatible, and their multigraded pieces
# do not depend on the order in which the gradings are taken
whole = Subspace.whole(3)
Fs = [Filtration(3, ((0, line(1, 0, 0)), (1, whole))),
      Filtration(3, ((0, line(0, 1, 0)), (1, whole))),
      Filtration(3, ((-1, line(1, 0, 0)), (0, Subspace.span(3, [[1, 0, 0], [0, 0, 1]])), (1, whole)))]
print("filtrations compatible:", are_filtrations_compatible(Fs).ok)
for ell in jump_box(Fs):
    d = multigraded(Fs, ell).dim
    if d:
        orders = multigraded_all_orders(Fs, ell)
        print(f"gr at {ell}: dim {d}, same in all {len(orders)} orders:",
              all(r.iterated.dim == d and r.is_iso for r in orders.values()))
