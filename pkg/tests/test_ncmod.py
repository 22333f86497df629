import dataclasses
from fractions import Fraction as F
from math import ceil

import pytest
from hypothesis import given, settings, strategies as st

from nearbycycles.compat import Subspace
from nearbycycles.ncmod import lattice as L
from nearbycycles.ncmod.bernstein import bernstein_poly, v_membership
from nearbycycles.ncmod.checks import (check_compomult, check_nilpotency, check_nilpotency_piece,
                                       check_psi_iteration, check_psi_iteration_all_orders, check_sans_pente,
                                       check_v_compatibility, check_vnilsson, localize_check)
from nearbycycles.ncmod.vfilt import FiltrationLattice, canonical_alpha, gr, psi_alg, psi_jordan_data, v_basis
from nearbycycles.scalars.field import ScalarField
from nearbycycles.scalars.matrix import Matrix

from corpus import CORPUS
from strategies import commuting_family

h, t3 = F(-1, 2), F(-1, 3)


def local_minpoly(A: Matrix, x: Matrix) -> list[F]:
    """Ascending coefficients of the monic generator of {b : b(A)x = 0} (Krylov recurrence)."""
    vecs = [x]
    while True:
        K = Matrix.hstack(vecs, nrows=x.nrows)
        nxt = A @ vecs[-1]
        c = K.solve(nxt)
        if c is not None and K.rank() == len(vecs):
            return [-F(c[j, 0]) for j in range(len(vecs))] + [F(1)]
        if K.rank() < len(vecs):  # x = 0
            return [F(1)]
        vecs.append(nxt)


def column(vec) -> Matrix:
    return Matrix([[F(a)] for a in vec], ncols=1)


# -- constructions -------------------------------------------------------------------------


def test_nilsson_examples():
    M = L.nilsson((-1,), (0,))
    assert M.rank == 1 and M.residues[0] == Matrix([[0]])
    M = L.nilsson((h,), (1,))
    assert M.residues[0] == Matrix([[F(1, 2), 1], [0, F(1, 2)]])
    M = L.nilsson((h, t3), (1, 0))
    assert M.residues[0] == Matrix([[F(1, 2), 1], [0, F(1, 2)]])
    assert M.residues[1] == Matrix.identity(2) * F(2, 3)


@pytest.mark.parametrize("alpha", [(0,), (F(-3, 2),), (F(1, 2),)])
def test_nilsson_rejects_out_of_range(alpha):
    with pytest.raises(ValueError):
        L.nilsson(alpha, (0,))


def test_tensor_nilsson_examples():
    N = L.tensor_nilsson(L.O_loc(1), (h,), (1,))
    assert N.residues[0] == L.nilsson((h,), (1,)).residues[0]
    M = L.tensor_nilsson(L.nilsson((h,), (0,)), (h,), (0,))
    assert M.rank == 1 and M.residues[0] == Matrix([[1]])


def test_tensor_monodromy_is_product():
    A, B = L.nilsson((h, -1), (0, 0)), L.nilsson((t3, F(-1, 4)), (0, 0))
    qa, = psi_jordan_data(A, 12)
    qb, = psi_jordan_data(B, 12)
    qt, = psi_jordan_data(L.tensor(A, B), 12)
    assert qt[0] == tuple((x + y) % 1 for x, y in zip(qa[0], qb[0]))


def test_noncommuting_residues_rejected():
    from nearbycycles.errors import NonCommuting
    with pytest.raises(NonCommuting):
        L.lattice([[[0, 1], [0, 0]], [[0, 0], [1, 0]]])


# -- Bernstein polynomials ------------------------------------------------------------------


def test_bpoly_of_t_minus_two():
    m = L.Section.monomial(L.O_loc(1), (-2,))
    b = bernstein_poly(m, 0)
    assert b.roots == ((F(-2), 1),) and b.certified
    assert b.coefficients() == [2, 1]


def test_bpoly_of_nilsson_top_vector():
    m = L.Section.monomial(L.nilsson((h,), (1,)), (0,), 1)
    assert bernstein_poly(m, 0).roots == ((F(1, 2), 2),)
    m = L.Section.monomial(L.nilsson((h,), (1,)), (0,), 0)
    assert bernstein_poly(m, 0).roots == ((F(1, 2), 1),)


def test_bpoly_of_zero():
    b = bernstein_poly(L.Section.zero(L.O_loc(2)), 1)
    assert b.roots == () and b.coefficients() == [1]


def test_bpoly_json_shape():
    b = bernstein_poly(L.Section.monomial(L.nilsson((h,), (1,)), (0,), 1), 0)
    assert b.to_dict() == {"i": 0, "roots": [{"root": "1/2", "mult": 2}]}


@settings(max_examples=40)
@given(commuting_family(max_n=3, max_p=2), st.data())
def test_bpoly_matches_local_minimal_polynomial(family, data):
    M = L.lattice(family)
    v = tuple(data.draw(st.integers(-2, 2)) for _ in range(M.p))
    vec = [data.draw(st.integers(-2, 2)) for _ in range(M.rank)]
    i = data.draw(st.integers(0, M.p - 1))
    m = L.Section(M, {v: tuple(vec)})
    A = M.residues[i] + Matrix.identity(M.rank) * v[i]
    b = bernstein_poly(m, i)
    assert b.certified
    assert b.coefficients() == local_minpoly(A, column(vec))


# -- V-filtration -------------------------------------------------------------------------


@pytest.mark.parametrize("alpha", [F(-3), F(-5, 2), F(-1), F(-1, 2), F(0), F(1, 3), F(2)])
def test_O_V_alpha_is_shifted_polynomials(alpha):
    M = L.O_loc(1)
    thr = ceil(-alpha - 1)
    V = v_basis(M, (alpha,), 6)
    for (v,), B in V.items():
        assert B.ncols == (1 if v >= thr else 0)
        assert v_membership(L.Section.monomial(M, (v,)), (alpha,)) == (v >= thr)


def test_O_membership_examples():
    M = L.O_loc(1)
    assert v_membership(L.Section.monomial(M, (0,)), (-1,))
    assert not v_membership(L.Section.monomial(M, (-1,)), (-1,))


@settings(max_examples=40)
@given(commuting_family(max_n=3, max_p=2), st.data())
def test_v_membership_agrees_with_thresholds(family, data):
    M = L.lattice(family)
    F_ = FiltrationLattice(M)
    alpha = tuple(data.draw(st.fractions(-2, 2, max_denominator=4)) for _ in range(M.p))
    v = tuple(data.draw(st.integers(-3, 3)) for _ in range(M.p))
    vec = [data.draw(st.integers(-1, 1)) for _ in range(M.rank)]
    m = L.Section(M, {v: tuple(vec)})
    inside = Subspace.span(M.rank, F_.V(alpha, v)).contains(Subspace.span(M.rank, column(vec)))
    assert v_membership(m, alpha) == inside


@settings(max_examples=30)
@given(commuting_family(max_n=3, max_p=2), st.data())
def test_V_is_monotone_and_stable_under_t_and_d(family, data):
    M = L.lattice(family)
    Fl = FiltrationLattice(M)
    a = tuple(data.draw(st.fractions(-2, 2, max_denominator=3)) for _ in range(M.p))
    b = tuple(x + data.draw(st.fractions(0, 1, max_denominator=3)) for x in a)
    for v in L.window_points(M.p, 2):
        Va, Vb = Subspace.span(M.rank, Fl.V(a, v)), Subspace.span(M.rank, Fl.V(b, v))
        assert Vb.contains(Va)
        for i in range(M.p):
            e = tuple(int(j == i) for j in range(M.p))
            up = tuple(x + y for x, y in zip(v, e))
            down = tuple(x - y for x, y in zip(v, e))
            a_t = tuple(x - y for x, y in zip(a, e))
            a_d = tuple(x + y for x, y in zip(a, e))
            # t_i V_α ⊆ V_{α−1_i}: the fiber is unchanged, the degree goes up
            assert Subspace.span(M.rank, Fl.V(a_t, up)).contains(Va)
            # ∂_i V_α ⊆ V_{α+1_i}
            img = M.E_on_degree(i, v) @ Fl.V(a, v)
            assert Subspace.span(M.rank, Fl.V(a_d, down)).contains(Subspace.span(M.rank, img))


# -- graded pieces and nearby cycles ---------------------------------------------------------------


def test_gr_of_O():
    g = gr(L.O_loc(1), (-1,))
    assert g.dim == 1 and g.E[0] == Matrix([[0]])
    assert g.T[0] == Matrix([[ScalarField(1).one]])


def test_gr_of_nilsson_half():
    M = L.nilsson((h,), (0,))
    g = gr(M, (h,))
    assert g.dim == 1 and g.E[0] == Matrix([[h]])
    assert g.T[0] == Matrix([[ScalarField(2)(-1)]])
    for beta in (F(-1), F(-3, 4), F(-1, 3), F(-1, 4)):
        assert gr(M, (beta,)).dim == 0


def test_gr_of_nilsson_minus_one_shift():
    g = gr(L.nilsson((-1,), (1,)), (-1,))
    assert g.dim == 2
    assert g.E[0].rank() == 1 and g.E[0].power(2).is_zero()
    K = ScalarField(1)
    N = g.T[0] - Matrix.identity(2) * K.one
    assert N.rank() == 1 and N.power(2).is_zero()


def test_psi_examples():
    pieces = psi_alg(L.O_loc(1))
    assert [(p.alpha, p.dim) for p in pieces] == [((F(-1),), 1)]
    pieces = psi_alg(L.nilsson((h, t3), (0, 0)))
    # residue 2/3 in the second variable: E = −1/3 on gr at α₂ = −2/3, so T₂ = exp(2πi/3)
    assert len(pieces) == 1 and pieces[0].dim == 1 and pieces[0].alpha == (h, F(-2, 3))
    assert pieces[0].jordan_data() == (((F(1, 2), F(1, 3)), ((1,), (1,)), 1),)
    K = ScalarField(6)
    assert pieces[0].T[0] == Matrix([[K(-1)]])
    assert pieces[0].T[1] == Matrix([[K.root_of_unity(F(1, 3))]])


def test_psi_of_direct_sum_concatenates():
    A, B = L.nilsson((h,), (1,)), L.nilsson((t3,), (0,))
    S = L.direct_sum(A, B)
    assert psi_jordan_data(S, 6) == tuple(sorted(psi_jordan_data(A, 6) + psi_jordan_data(B, 6)))
    assert sum(p.dim for p in psi_alg(S)) == 3


@settings(max_examples=30)
@given(commuting_family(max_n=3, max_p=2), st.data())
def test_gr_dimensions_over_fundamental_domain_sum_to_rank(family, data):
    M = L.lattice(family)
    c = tuple(data.draw(st.fractions(-2, 1, max_denominator=3)) for _ in range(M.p))
    total = 0
    for b in range(len(M.spectrum.blocks)):
        mu = M.axis_mu(b)
        # the unique α in [c, c+1)^p with α + 1 + μ integral
        alpha = tuple(cc + ((-m - 1 - cc) % 1) for cc, m in zip(c, mu))
        assert all(cc <= a < cc + 1 for a, cc in zip(alpha, c))
    alphas = {tuple(cc + ((-m - 1 - cc) % 1) for cc, m in zip(c, M.axis_mu(b))) for b in range(len(M.spectrum.blocks))}
    for a in alphas:
        total += gr(M, a).dim
    assert total == M.rank


@settings(max_examples=30)
@given(commuting_family(max_n=3, max_p=2))
def test_T_eigenvalue_is_exp_of_alpha(family):
    M = L.lattice(family)
    for piece in psi_alg(M):
        K = ScalarField(piece.order)
        for pos, i in enumerate(piece.axes):
            lam = K.root_of_unity(piece.alpha[pos] + 1)
            U = piece.T[i] - Matrix.identity(piece.dim) * lam
            assert U.power(piece.dim).is_zero()


@settings(max_examples=30)
@given(commuting_family(max_n=3, max_p=2), st.data())
def test_translation_by_t_is_iso_on_gr(family, data):
    M = L.lattice(family)
    alpha = tuple(data.draw(st.sampled_from([F(-2), F(-3, 2), F(-4, 3), F(-5, 4)])) for _ in range(M.p))
    i = data.draw(st.integers(0, M.p - 1))
    up = tuple(a + (1 if j == i else 0) for j, a in enumerate(alpha))
    g_up, g = gr(M, up), gr(M, alpha)
    assert g_up.dim == g.dim
    if g.dim:
        # t_i acts as the identity on fibers; the two bases span the same blocks
        assert g.basis.solve(g_up.basis).rank() == g.dim


def test_canonical_alpha():
    assert canonical_alpha((F(0),)) == (F(-1),)
    assert canonical_alpha((F(1, 2), F(-1, 3))) == (F(-1, 2), F(-2, 3))


# -- nilpotency and sans-pente -----------------------------------------------------------------


def test_nilpotency_examples():
    assert check_nilpotency(L.O_loc(1), (-1,)).ok
    assert check_nilpotency(L.nilsson((h,), (0,)), (h,)).ok
    assert check_nilpotency(L.nilsson((-1,), (1,)), (-1,)).ok
    assert check_nilpotency(L.nilsson((h,), (0,)), (F(-1, 3),)).ok  # zero piece


def test_nilpotency_negative_control():
    g = gr(L.nilsson((-1,), (1,)), (-1,))
    bad = dataclasses.replace(g, E={0: g.E[0] + Matrix.identity(2) * F(1, 5)})
    assert not check_nilpotency_piece(bad).ok


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_nilpotency_on_corpus(name):
    M = CORPUS[name]
    for piece in psi_alg(M):
        assert check_nilpotency_piece(piece).ok


def test_sans_pente_examples():
    M = L.nilsson((h, t3), (1, 1))
    m = L.Section(M, {(0, 1): (1, 2, 0, 1), (-2, 0): (0, 0, 1, 0)})
    v = check_sans_pente(m)
    assert v.ok and len(v.details["witnesses"]) == 2
    assert check_sans_pente(L.Section.zero(M)).ok


# -- localization, multi-index filtrations, twisted modules -------------------------------------------


def test_localize_examples():
    v = localize_check(L.O_loc(1), 0, (h,))
    assert v.ok and v.details["asserted"]
    v = localize_check(L.O_loc(1), 0, (1,))
    assert v.ok and not v.details["asserted"] and not v.details["equal"]
    assert localize_check(L.O_loc(2), 0, (h, F(1, 2))).details["asserted"]
    assert not localize_check(L.O_loc(2), 1, (h, F(1, 2))).details["asserted"]


@pytest.mark.parametrize("alpha", [(h, t3), (-1, -1), (0, F(-3, 2)), (F(1, 3), F(2, 3))])
def test_compomult_on_nilsson(alpha):
    M = L.nilsson((h, t3), (1, 1))
    assert check_compomult(M, [0], [1], alpha).ok
    assert check_compomult(M, [], [0, 1], alpha).ok


def test_compomult_on_direct_sum_p3():
    M = L.direct_sum(L.nilsson((h, -1, t3), (1, 0, 1)), L.O_loc(3))
    assert check_compomult(M, [0, 2], [1], (h, 0, -1)).ok


def test_v_compatibility_examples():
    assert check_v_compatibility(L.nilsson((h, t3), (1, 1))).ok
    rank1 = L.tensor(L.nilsson((h, -1, t3), (0, 0, 0)), L.nilsson((-1, F(-1, 4), -1), (0, 0, 0)))
    assert check_v_compatibility(rank1).ok
    assert check_v_compatibility(L.nilsson((h,), (2,))).ok


@pytest.mark.parametrize("beta", [h, F(1, 2), F(-5, 2), F(3, 2)])
def test_vnilsson_on_O(beta):
    assert check_vnilsson(L.O_loc(1), (h,), (1,), (beta,)).ok


def test_vnilsson_k_zero():
    assert check_vnilsson(L.nilsson((t3,), (1,)), (h,), (0,), (F(-1, 6),)).ok


def test_psi_iteration_examples():
    M = L.nilsson((h, t3), (1, 1))
    assert check_psi_iteration(M, [0]).ok
    assert check_psi_iteration(M, [1]).ok
    assert check_psi_iteration(M, []).ok
    assert check_psi_iteration_all_orders(CORPUS["nil_p3"]).ok


# -- operator relations ---------------------------------------------------------------------------


@settings(max_examples=30)
@given(commuting_family(max_n=3, max_p=3), st.data())
def test_operator_relations(family, data):
    M = L.lattice(family)
    terms = {}
    for _ in range(data.draw(st.integers(1, 3))):
        v = tuple(data.draw(st.integers(-2, 2)) for _ in range(M.p))
        terms[v] = tuple(data.draw(st.integers(-2, 2)) for _ in range(M.rank))
    m = L.Section(M, terms)
    for i in range(M.p):
        assert m.d(i).t(i) == m.E(i)
        assert m.t(i).d(i) == m.E(i) + m
        for j in range(M.p):
            assert m.E(j).E(i) == m.E(i).E(j)
            if i != j:
                assert m.d(j).t(i) == m.t(i).d(j)
