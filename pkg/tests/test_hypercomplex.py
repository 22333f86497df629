from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from nearbycycles import hypercomplex as hc
from nearbycycles.errors import DirectionOutOfRange, InvalidHypercomplex, NonCommutingSquare, NotAChainMap
from nearbycycles.scalars.matrix import Matrix

from generators import exact_complex, rand_hypercomplex, rand_hypermap

I1 = Matrix.identity(1)
Z1 = Matrix.zeros(1, 1)


def square(top=I1, bottom=I1, left=I1, right=I1) -> hc.Hypercomplex:
    """Objects K on {0,1}²; direction 0 maps top/bottom, direction 1 maps left/right."""
    dims = {(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 1}
    diffs = {(0, (0, 0)): bottom, (0, (0, 1)): top, (1, (0, 0)): left, (1, (1, 0)): right}
    return hc.Hypercomplex(2, dims, diffs)


def point(n, k=None, dim=1) -> hc.Hypercomplex:
    return hc.Hypercomplex(n, {k or (0,) * n: dim})


# -- validate ------------------------------------------------------------------------------


def test_single_object_is_valid():
    assert hc.validate(point(3, dim=2)).ok


def test_identity_square_is_valid():
    assert hc.validate(square()).ok


def test_broken_square_names_the_square():
    v = hc.validate(square(right=Matrix([[2]])))
    assert not v.ok
    assert v.details["directions"] == (0, 1) and v.details["point"] == (0, 0)


def test_square_zero_violation():
    X = hc.make_complex({0: 1, 1: 1, 2: 1}, {0: I1, 1: I1})
    assert not hc.validate(X).ok


def test_shape_mismatch_is_rejected():
    with pytest.raises(InvalidHypercomplex):
        hc.make_complex({0: 1, 1: 2}, {0: I1})


# -- section complex and directional cohomology ----------------------------------------------


def test_section_complex_of_a_complex_is_itself():
    X = hc.make_complex({0: 2, 1: 1}, {0: Matrix([[1, 1]])})
    F = hc.section_complex(X, 0)
    assert sorted(F.terms) == [0, 1]
    assert all(T.n == 0 for T in F.terms.values())
    assert F.maps[0].at(()) == Matrix([[1, 1]])


def test_section_complex_of_square_is_two_term():
    F = hc.section_complex(square(), 0)
    assert sorted(F.terms) == [0, 1]
    assert F.terms[0].dims == {(0,): 1, (1,): 1}
    assert hc.check_hypermap(F.maps[0]).ok


def test_section_complex_of_cube_has_two_faces():
    X = hc.cube(3, lambda j: 1, lambda i, j: I1)
    F = hc.section_complex(X, 2)
    assert sorted(F.terms) == [0, 1]
    assert all(len(T.dims) == 4 and T.n == 2 for T in F.terms.values())


def test_section_complex_direction_out_of_range():
    with pytest.raises(DirectionOutOfRange):
        hc.section_complex(square(), 2)


def test_direction_cohomology_of_identity_square_vanishes():
    for p in (-1, 0, 1, 2):
        assert hc.direction_cohomology(square(), 0, p).is_zero()


def test_direction_cohomology_of_a_point():
    X = point(2, dim=3)
    H = hc.direction_cohomology(X, 0, 0)
    assert H.n == 1 and H.dims == {(0,): 3}


def test_direction_cohomology_with_zero_rows():
    X = square(top=Z1, bottom=Z1)
    for p in (0, 1):
        H = hc.direction_cohomology(X, 0, p)
        assert H.dims == {(0,): 1, (1,): 1}
        assert H.d(0, (0,)) == I1


# -- total complex ---------------------------------------------------------------------------


def test_total_complex_of_identity_square():
    T = hc.total_complex(square())
    assert T.dims == {(0,): 1, (1,): 2, (2,): 1}
    assert T.d(0, (0,)) == Matrix([[1], [1]])
    # summands of degree 1 are listed as (1,0), (0,1); d¹(a, b) = b − a
    assert T.labels[(1,)] == (((1, 0), 0), ((0, 1), 0))
    assert T.d(0, (1,)) == Matrix([[-1, 1]])
    assert hc.cohomology_dims(T) == {}


def test_total_complex_of_zero():
    assert hc.total_complex(hc.zero_hypercomplex(2)).is_zero()


def test_total_complex_of_two_direction_cube():
    # m ↦ (∂₁m, ∂₂m), then (a, b) ↦ −∂₂a + ∂₁b
    d1 = Matrix([[2]])
    d2 = Matrix([[3]])
    X = hc.cube(2, lambda j: 1, lambda i, j: d1 if i == 0 else d2)
    T = hc.total_complex(X)
    assert T.d(0, (0,)) == Matrix([[2], [3]])
    assert T.d(0, (1,)) == Matrix([[-3, 2]])


def test_total_complex_rejects_invalid():
    with pytest.raises(InvalidHypercomplex):
        hc.total_complex(square(right=Matrix([[2]])))


# -- cube ------------------------------------------------------------------------------------


def test_cube_n1_is_two_term_complex():
    X = hc.cube(1, {(-1,): 2, (0,): 1}, {(0, (-1,)): Matrix([[1, 1]])})
    assert X.dims == {(0,): 2, (1,): 1}
    assert X.d(0, (0,)) == Matrix([[1, 1]])


def test_cube_n3_bottom_corner_in_degree_zero():
    X = hc.cube(3, lambda j: 1, lambda i, j: I1)
    assert set(X.dims) == {(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)}
    assert hc.validate(X).ok
    assert hc.total_complex(X).degrees() == [0, 1, 2, 3]


def test_cube_rejects_noncommuting_family():
    with pytest.raises(NonCommutingSquare):
        hc.cube(2, lambda j: 1, lambda i, j: Matrix([[2]]) if (i, j) == (1, (0, -1)) else I1)


# -- cohomology and quasi-isomorphisms -------------------------------------------------------


def test_cohomology_examples():
    assert hc.cohomology_dims(hc.make_complex({0: 1, 1: 1}, {0: I1})) == {}
    assert hc.cohomology_dims(hc.make_complex({3: 1})) == {3: 1}


def test_quasi_iso_examples():
    X = hc.make_complex({0: 2, 1: 1}, {0: Matrix([[1, 0]])})
    assert hc.is_quasi_iso(hc.identity_map(X)).ok
    A = hc.make_complex({0: 1, 1: 1}, {0: I1})
    assert hc.is_quasi_iso(hc.HyperMap(A, A, {})).ok
    K = hc.make_complex({0: 1})
    assert not hc.is_quasi_iso(hc.HyperMap(K, K, {})).ok


def test_quasi_iso_rejects_non_chain_map():
    A = hc.make_complex({0: 1, 1: 1}, {0: I1})
    with pytest.raises(NotAChainMap):
        hc.is_quasi_iso(hc.HyperMap(A, A, {(0,): I1}))


def test_quasihyp_examples():
    r = hc.check_quasihyp(hc.identity_map(square()))
    assert (r.hypothesis_holds, r.conclusion_holds) == (True, True)
    X = square(top=Z1, bottom=Z1)
    C = hc.tensor(hc.make_complex({0: 1, 1: 1}, {0: I1}), hc.make_complex({0: 2}))
    r = hc.check_quasihyp(hc.inclusion_first(X, C))
    assert (r.hypothesis_holds, r.conclusion_holds) == (True, True)
    K = point(2)
    r = hc.check_quasihyp(hc.HyperMap(K, K, {}))
    assert (r.hypothesis_holds, r.conclusion_holds) == (False, False)


def test_acyclic_direction_examples():
    assert hc.check_acyclic_direction(square()).details["hypothesis"] == "present"
    assert hc.check_acyclic_direction(square()).ok
    v = hc.check_acyclic_direction(point(2))
    assert v.ok and v.details["hypothesis"] == "absent"


# -- properties ------------------------------------------------------------------------------


@settings(max_examples=80, deadline=None)
@given(st.randoms(use_true_random=False))
def test_total_complex_squares_to_zero(rng):
    X = rand_hypercomplex(rng)
    T = hc.total_complex(X)
    for (m,) in T.dims:
        assert (T.d(0, (m + 1,)) @ T.d(0, (m,))).is_zero()
    assert T.total_dim() == X.total_dim()


@settings(max_examples=80, deadline=None)
@given(st.randoms(use_true_random=False))
def test_iterated_iso_implies_total_quasi_iso(rng):
    f = rand_hypermap(rng)
    assert hc.check_hypermap(f).ok
    assert hc.check_quasihyp(f).implication_holds


@settings(max_examples=40, deadline=None)
@given(st.randoms(use_true_random=False))
def test_exact_tensor_anything_is_acyclic(rng):
    X = hc.tensor(exact_complex(rng), rand_hypercomplex(rng, rng.randint(1, 2), 2))
    v = hc.check_acyclic_direction(X)
    assert v.ok and v.details["hypothesis"] == "present"


@settings(max_examples=40, deadline=None)
@given(st.randoms(use_true_random=False))
def test_total_cohomology_respects_sums_and_permutations(rng):
    n = rng.randint(1, 3)
    X, Y = rand_hypercomplex(rng, n, 2), rand_hypercomplex(rng, n, 2)
    hx, hy = hc.cohomology_dims(hc.total_complex(X)), hc.cohomology_dims(hc.total_complex(Y))
    hs = hc.cohomology_dims(hc.total_complex(hc.direct_sum(X, Y)))
    assert hs == {m: hx.get(m, 0) + hy.get(m, 0) for m in set(hx) | set(hy) if hx.get(m, 0) + hy.get(m, 0)}
    for perm in permutations(range(n)):
        assert hc.cohomology_dims(hc.total_complex(hc.permute_directions(X, perm))) == hx


@settings(max_examples=30, deadline=None)
@given(st.randoms(use_true_random=False))
def test_sign_order_does_not_change_cohomology(rng):
    X = rand_hypercomplex(rng, 3, 2)
    base = hc.cohomology_dims(hc.total_complex(X))
    for order in permutations(range(3)):
        T = hc.total_complex(X, order)
        for (m,) in T.dims:
            assert (T.d(0, (m + 1,)) @ T.d(0, (m,))).is_zero()
        assert hc.cohomology_dims(T) == base
