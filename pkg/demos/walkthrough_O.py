"""Nearby cycles of O[1/t] and of a Nilsson module, step by step.

    python3 demos/walkthrough_O.py
"""

from fractions import Fraction as F

from nearbycycles.compare import i_dagger, i_sharp, nils_map, relative_dr
from nearbycycles.ncmod import lattice as L
from nearbycycles.ncmod.bernstein import bernstein_poly, v_membership
from nearbycycles.ncmod.vfilt import gr, psi_alg

O = L.O_loc(1)
print("module:", O.describe())

# t^-2 is killed by (E + 2): its b-function has the single root -2
m = L.Section.monomial(O, (-2,))
print("b-function of t^-2:", bernstein_poly(m, 0).to_dict())

# V_alpha is t^ceil(-alpha-1) K[t]; check a few memberships
for alpha in (F(-3), F(-1), F(-1, 2), F(1)):
    inside = [v for v in range(-3, 4) if v_membership(L.Section.monomial(O, (v,)), (alpha,))]
    print(f"V_{alpha} contains t^v for v in {inside[0]}..")

# gr_{-1} is one dimensional, spanned by t^0; the other graded pieces in (-1, 0] vanish
for alpha in (F(-1), F(-1, 2)):
    print(f"dim gr_{alpha} =", gr(O, (alpha,)).dim)

# all three complexes have cohomology K in degrees 0 and 1
for name, build in (("sharp", i_sharp), ("dagger", i_dagger), ("de Rham", relative_dr)):
    print(f"{name:>8} cohomology dims:", build(O).dim_vector())

# a Nilsson module carries a logarithm: gr has a Jordan block for the monodromy
N = L.nilsson((F(-1),), (1,))
for pc in psi_alg(N):
    print("Psi piece at", [str(a) for a in pc.alpha], "dim", pc.dim, "jordan", pc.jordan_data())
    r = nils_map(N, pc.alpha)
    print(f"  Nils map: quasi-iso from k={r.stabilizing_k}, classes compared {r.lag} levels higher")
