"""Shared module corpus: p in {1, 2, 3}, tensors and direct sums included."""

from fractions import Fraction as F

from nearbycycles.ncmod import lattice as L

h, t, q = F(-1, 2), F(-1, 3), F(-1, 4)


def build() -> dict:
    mods = {
        "O1": L.O_loc(1),
        "nil_half_0": L.nilsson((h,), (0,)),
        "nil_m1_1": L.nilsson((-1,), (1,)),
        "nil_half_2": L.nilsson((h,), (2,)),
        "sum_p1": L.direct_sum(L.O_loc(1), L.nilsson((t,), (1,)), L.nilsson((h,), (0,))),
        "lat_shift": L.lattice([[[F(3, 2), 0], [0, F(-5, 2)]]], name="lat_shift"),
        "O2": L.O_loc(2),
        "nil_ht_00": L.nilsson((h, t), (0, 0)),
        "nil_ht_11": L.nilsson((h, t), (1, 1)),
        "nil_m1m1_11": L.nilsson((-1, -1), (1, 1)),
        "tensor_p2": L.tensor(L.nilsson((h, -1), (1, 0)), L.nilsson((t, -1), (0, 1))),
        "sum_p2": L.direct_sum(L.nilsson((-1, h), (1, 0)), L.O_loc(2), L.nilsson((q, -1), (0, 1))),
        "lat_p2": L.lattice([[[F(1, 2), 1], [0, F(1, 2)]], [[-2, 0], [0, -2]]], name="lat_p2"),
        "O3": L.O_loc(3),
        "tensor_p3": L.tensor(L.nilsson((h, -1, t), (0, 0, 0)), L.nilsson((-1, -1, -1), (1, 0, 0))),
        "nil_p3": L.nilsson((-1, h, -1), (1, 0, 1)),
    }
    return mods


CORPUS = build()
