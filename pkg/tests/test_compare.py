from fractions import Fraction as F
from itertools import combinations, product

import pytest

from nearbycycles.compare import (calibrate, compgrad_arrows, comparison_report, i_dagger, i_sharp,
                                  local_system_model, monodromy_commutation, nils_level, nils_map,
                                  permutation_independence, permutation_independence_all, relative_dr,
                                  renumbering)
from nearbycycles.compare import monodromy as mono
from nearbycycles.compare import nils as nils_mod
from nearbycycles.compare import permutation as perm_mod
from nearbycycles.compare.nils import phi_fiber
from nearbycycles.errors import WindowTooSmall
from nearbycycles.ncmod import lattice as L
from nearbycycles.ncmod.vfilt import gr
from nearbycycles.scalars.field import ScalarField
from nearbycycles.scalars.matrix import Matrix

from corpus import CORPUS

h = F(-1, 2)


# -- an independent oracle for the cohomology dimensions ----------------------------------------
#
# Multiplying the corner-k summand of the relative de Rham cube by t^k turns ∂_i into
# E_i, so the weight-w part is the Koszul complex of the commuting maps w_i + C_i on
# the fiber.  For the graded cube only integral joint eigenvalues μ contribute, each
# through the Koszul complex of the nilpotent parts C_i − μ_i on the joint
# generalized eigenspace.


def koszul_dims(ops: list[Matrix], n: int) -> tuple[int, ...]:
    p = len(ops)
    subsets = {m: list(combinations(range(p), m)) for m in range(p + 1)}
    ranks = []
    for m in range(p):
        src, tgt = subsets[m], subsets[m + 1]
        rows = []
        for T in tgt:
            blocks = []
            for S in src:
                extra = set(T) - set(S)
                if len(extra) != 1 or not set(S) <= set(T):
                    blocks.append(Matrix.zeros(n, n))
                    continue
                (i,) = extra
                sgn = -1 if sum(1 for j in S if j < i) % 2 else 1
                blocks.append(ops[i] * sgn)
            rows.append(Matrix.hstack(blocks, nrows=n))
        D = Matrix.vstack(rows, ncols=len(src) * n)
        ranks.append(D.rank() if n else 0)
    out = []
    for m in range(p + 1):
        dim = len(subsets[m]) * n
        rin = ranks[m - 1] if m > 0 else 0
        rout = ranks[m] if m < p else 0
        out.append(dim - rin - rout)
    return tuple(out)


def oracle_dr(M, W: int = 8) -> tuple[int, ...]:
    total = [0] * (M.p + 1)
    for w in product(range(-W, W + 1), repeat=M.p):
        ops = [C + Matrix.identity(M.rank) * x for C, x in zip(M.residues, w)]
        for m, d in enumerate(koszul_dims(ops, M.rank)):
            total[m] += d
    return tuple(total)


def generalized_eigenspace(M, mu) -> Matrix:
    basis = Matrix.identity(M.rank)
    for C, m in zip(M.residues, mu):
        K = (C - Matrix.identity(M.rank) * m).power(M.rank).kernel()
        # intersect the running basis with ker (C − μ)^rank
        A = Matrix.hstack([basis, -K], nrows=M.rank).kernel()
        basis = (basis @ A.select(rows=range(basis.ncols))).image() if A.ncols else Matrix.zeros(M.rank, 0)
        if basis.ncols == 0:
            break
    return basis


def oracle_dagger(M) -> tuple[int, ...]:
    total = [0] * (M.p + 1)
    # integral eigenvalues of each residue, read off the characteristic polynomial
    per = [sorted({int(r) for r, _ in C.charpoly().roots() if r.q == 1}) for C in M.residues]
    for mu in product(*per):
        B = generalized_eigenspace(M, mu)
        if B.ncols == 0:
            continue
        ops = [B.solve((C - Matrix.identity(M.rank) * m) @ B) for C, m in zip(M.residues, mu)]
        for m, d in enumerate(koszul_dims(ops, B.ncols)):
            total[m] += d
    return tuple(total)


EXTRA = {
    "nilpotent_2": L.lattice([[[0, 1], [0, 0]]]),
    "diag_2_m1": L.lattice([[[2, 0], [0, -1]]]),
    "mixed_3": L.lattice([[[1, 1, 0], [0, 1, 0], [0, 0, F(1, 3)]]]),
    "p2_jordan": L.lattice([[[0, 1], [0, 0]], [[0, 0], [0, 0]]]),
    "p2_shifted": L.lattice([[[1, 0], [0, 0]], [[0, 0], [0, -2]]]),
}
ORACLE_CASES = {**CORPUS, **EXTRA}


# -- the three complexes ----------------------------------------------------------------------


def test_O_has_dims_one_one_everywhere():
    M = L.O_loc(1)
    assert i_dagger(M).dim_vector() == (1, 1)
    assert i_sharp(M).dim_vector() == (1, 1)
    assert relative_dr(M).dim_vector() == (1, 1)
    assert oracle_dr(M) == (1, 1)


def test_half_exponent_has_no_de_rham_cohomology():
    M = L.nilsson((h,), (0,))
    assert relative_dr(M).dim_vector() == (0, 0) == oracle_dr(M)
    assert i_dagger(M).complex.is_zero()


def test_O2_gives_three_term_complex():
    D = i_dagger(L.O_loc(2))
    assert D.dim_vector() == (1, 2, 1)
    C = D.complex
    assert sorted(C.dims.values()) == [1, 1, 2]


@pytest.mark.parametrize("name", sorted(ORACLE_CASES))
def test_dims_match_koszul_oracle(name):
    M = ORACLE_CASES[name]
    expect = oracle_dr(M, 8 if M.p < 3 else 4)
    assert relative_dr(M).dim_vector() == expect
    assert i_dagger(M).dim_vector() == oracle_dagger(M) == expect
    assert i_sharp(M).dim_vector() == expect


def test_oracle_cases_are_not_all_trivial():
    assert oracle_dr(EXTRA["diag_2_m1"]) == (2, 2)
    assert oracle_dr(EXTRA["mixed_3"]) == (1, 1)
    assert oracle_dr(EXTRA["p2_shifted"]) == (2, 4, 2)


def test_window_reproducibility():
    M = CORPUS["nil_ht_11"]
    W = relative_dr(M).window
    assert relative_dr(M, W + 1).dims() == relative_dr(M, W).dims()


def test_window_too_small_is_reported():
    M = L.lattice([[[3, 0], [0, -2]]])
    with pytest.raises(WindowTooSmall):
        relative_dr(M, 0)
    assert relative_dr(M).dim_vector() == (2, 2)


def test_renumbering_shifts_corners_down():
    assert renumbering(2) == {(0, 0): (-1, -1), (0, 1): (-1, 0), (1, 0): (0, -1), (1, 1): (0, 0)}


# -- comparison arrows ----------------------------------------------------------------------------


@pytest.mark.parametrize("name", ["O1", "nil_m1_1", "nil_ht_11", "lat_p2"])
def test_arrows_are_quasi_isos(name):
    res = compgrad_arrows(CORPUS[name])
    assert [a.quasi_iso for a in res["arrows"]] == [True, True]
    assert res["arrows"][0].source_dims == res["arrows"][0].target_dims


# -- the Nils map -----------------------------------------------------------------------------------


def test_phi_at_level_zero_is_inclusion():
    piece = gr(L.nilsson((h,), (1,)), (h,))
    assert phi_fiber(piece, (0,), 1) == piece.basis


def test_phi_formula_on_O():
    lvl = nils_level(L.O_loc(1), (-1,), (1,))
    # Φ(1) = 1⊗e₀ − (E·1)⊗e₁ with E·1 = 0
    assert lvl.fiber_phi == Matrix([[1], [0]])


def test_phi_formula_with_logarithm():
    M = L.nilsson((-1,), (1,))
    lvl = nils_level(M, (-1,), (1,))
    X = lvl.piece.basis
    N = M.residues[0]  # E + α + 1 at degree 0
    e0, e1 = Matrix([[1], [0]]), Matrix([[0], [1]])
    expect = X.kron(e0) - (N @ X).kron(e1)
    assert lvl.fiber_phi == expect


@pytest.mark.parametrize("name", ["O1", "nil_m1_1", "nil_half_2", "nil_ht_11"])
def test_nils_stabilizes(name):
    M = CORPUS[name]
    from nearbycycles.ncmod.vfilt import psi_alg
    for pc in psi_alg(M):
        r = nils_map(M, pc.alpha)
        assert r.quasi_iso and r.stabilizing_k is not None
        assert r.conditions["injective"]


def test_nils_lag_one_is_not_enough():
    M = L.nilsson((-1,), (1,))
    assert nils_map(M, (-1,)).lag == 2
    for j in range(1, 4):
        lo, hi = nils_level(M, (-1,), (j,)), nils_level(M, (-1,), (j + 1,))
        assert not nils_mod.colimit_conditions(lo, hi)["absorbed"]


# -- monodromy ------------------------------------------------------------------------------------


def test_calibration():
    cal = calibrate()
    assert cal.sign == -1
    assert cal.classical_eigenvalue == "1/2"
    assert cal.degenerate == {1: True, -1: True}
    assert cal.matches == {1: False, -1: True}


def test_local_system_examples():
    K = ScalarField(1)
    ls = local_system_model(L.O_loc(1))
    assert ls.dim == 1 and ls.monodromy[0] == Matrix([[K.one]])
    ls = local_system_model(L.nilsson((h,), (0,)))
    assert ls.monodromy[0] == Matrix([[ScalarField(2)(-1)]])
    ls = local_system_model(L.nilsson((-1,), (1,)))
    U = ls.monodromy[0] - Matrix.identity(2) * K.one
    assert U.rank() == 1 and U.power(2).is_zero()


@pytest.mark.parametrize("name", ["O1", "nil_half_2", "nil_ht_11", "sum_p2"])
def test_monodromy_commutes(name):
    assert monodromy_commutation(CORPUS[name]).ok


def test_wrong_nilsson_sign_breaks_commutation():
    M = L.nilsson((h,), (1,))
    assert mono.nils_commutation(M, (h,), nilsson_sign=1)["ok"]
    assert not mono.nils_commutation(M, (h,), nilsson_sign=-1)["ok"]
    # the rank-one case cannot tell the signs apart
    assert mono.nils_commutation(L.nilsson((h,), (0,)), (h,), nilsson_sign=-1)["ok"]


# -- permutation independence ------------------------------------------------------------------------------


@pytest.mark.parametrize("I", [(), (0,), (1,), (0, 1)])
def test_permutation_independence_on_O2(I):
    r = permutation_independence(L.O_loc(2), I)
    assert r.ok
    assert all(w.verticals_are_isos for w in r.weights)


def test_permutation_independence_on_nilsson():
    assert permutation_independence_all(CORPUS["nil_ht_11"]).ok


def test_constant_corner_sign_is_caught(monkeypatch):
    monkeypatch.setattr(perm_mod, "corner_sign", lambda k, I: 1)
    assert not permutation_independence(L.O_loc(2), (0,)).ok


def test_corner_sign():
    assert perm_mod.corner_sign((1, 1), (0,)) == -1
    assert perm_mod.corner_sign((1, 1), (1,)) == 1
    assert perm_mod.corner_sign((1, 0, 1), (1,)) == 1
    assert perm_mod.corner_sign((1, 1, 1), (0,)) == 1


# -- report ----------------------------------------------------------------------------------


def test_report_fields_on_O():
    rep = comparison_report(L.O_loc(1))
    d = rep.to_dict()
    assert rep.ok
    assert d["dims"] == {"sharp": {"0": 1, "1": 1}, "dagger": {"0": 1, "1": 1}, "dr": {"0": 1, "1": 1}}
    assert d["calibration_sign"] == -1
    assert d["jordan_data"]["psi"] == d["jordan_data"]["model"] == [{"q": ["0"], "partitions": [[1]], "dim": 1}]
    assert set(d["verdicts"]) == {"nils_quasi_iso", "monodromy_commutes", "jordan_matches_model",
                                  "permutation_independent"}
