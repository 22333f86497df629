"""Hypothesis strategies shared by the property tests."""

from fractions import Fraction as F

from hypothesis import strategies as st

from nearbycycles import hypercomplex as hc
from nearbycycles.scalars.field import ScalarField
from nearbycycles.scalars.matrix import Matrix

rationals = st.fractions(min_value=-4, max_value=4, max_denominator=6)
small_ints = st.integers(-3, 3)


@st.composite
def tower_elements(draw, orders=(1, 2, 3, 4, 6)):
    n = draw(st.sampled_from(orders))
    K = ScalarField(n)
    num = K.zero
    for j in range(draw(st.integers(0, 3))):
        num = num + K(draw(rationals)) * K.zeta(draw(st.integers(0, n))) * K.tau ** draw(st.integers(0, 2))
    den = K.one + K(draw(rationals)) * K.tau
    return num / den if den else num


@st.composite
def invertible(draw, n):
    while True:
        rows = [[draw(small_ints) for _ in range(n)] for _ in range(n)]
        P = Matrix(rows, ncols=n)
        if P.rank() == n:
            return P


@st.composite
def commuting_family(draw, max_n=4, max_p=3):
    """P·(block diagonal with scalar-plus-nilpotent blocks)·P⁻¹ for several commuting choices."""
    n = draw(st.integers(1, max_n))
    p = draw(st.integers(1, max_p))
    sizes = []
    left = n
    while left:
        s = draw(st.integers(1, left))
        sizes.append(s)
        left -= s
    P = draw(invertible(n))
    Pinv = P.inverse()
    family = []
    for _ in range(p):
        blocks = []
        for s in sizes:
            lam = draw(st.fractions(min_value=-2, max_value=2, max_denominator=4))
            c = draw(st.integers(0, 2))
            rows = [[lam if i == j else (c if j == i + 1 else 0) for j in range(s)] for i in range(s)]
            blocks.append(Matrix(rows, ncols=s))
        family.append(P @ Matrix.block_diag(blocks) @ Pinv)
    return family


def matrices(draw, rows: int, cols: int, values=small_ints) -> Matrix:
    return Matrix([[draw(values) for _ in range(cols)] for _ in range(rows)], ncols=cols)


@st.composite
def complexes(draw, length=3, max_dim=3):
    """A random 1-complex built from d = A·B-style factorization so d∘d = 0."""
    dims = [draw(st.integers(0, max_dim)) for _ in range(length)]
    diffs = {}
    prev = None
    for m in range(length - 1):
        if prev is None:
            d = matrices(draw, dims[m + 1], dims[m])
        else:
            # d^m must kill im d^{m-1}: compose with a projection onto a complement of the image
            K = prev.T.kernel().T if prev.ncols and dims[m] else Matrix.identity(dims[m])
            if K.nrows == 0:
                d = Matrix.zeros(dims[m + 1], dims[m])
            else:
                d = matrices(draw, dims[m + 1], K.nrows) @ K
        diffs[m] = d
        prev = d
    return hc.make_complex({m: dims[m] for m in range(length)}, diffs)
