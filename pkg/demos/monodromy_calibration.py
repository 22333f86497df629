"""Pin the sign in the monodromy of the local-system model, then compare Jordan data.

    python3 demos/monodromy_calibration.py
"""

from fractions import Fraction as F

from nearbycycles.compare import calibrate, local_system_model, monodromy_commutation
from nearbycycles.compare.monodromy import jordan_comparison
from nearbycycles.ncmod import lattice as L

cal = calibrate()
print("calibrated sign:", cal.sign)
print("matches per sign on the logarithmic test case:", cal.matches)
print("rank-one case cannot decide:", cal.degenerate)

# t^{1/2}: the model monodromy is -1 whatever the sign
print("monodromy of t^(1/2):", local_system_model(L.nilsson((F(-1, 2),), (0,))).monodromy[0])

# with a logarithm the sign shows up in the off-diagonal entry
ls = local_system_model(L.nilsson((F(-1),), (1,)))
print("monodromy of the rank-two unipotent model:", ls.monodromy[0])

for M in (L.nilsson((F(-1, 2), F(-1, 3)), (1, 1)), L.tensor(L.O_loc(2), L.nilsson((F(-1), F(-1, 4)), (1, 0)))):
    print(M.describe())
    print("  Jordan data agree:", jordan_comparison(M).ok)
    print("  monodromy commutes with the comparison maps:", monodromy_commutation(M).ok)
