"""Joint Jordan data of commuting tower matrices with root-of-unity spectrum."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .field import ScalarField
from .matrix import Matrix

# Specializing τ to a rational value cannot turn a singular matrix over
# Q(ζ)(τ) into a regular one, so a regular specialization rules a
# candidate eigenvalue out.
_PROBES = (Fraction(3, 7), Fraction(-5, 2))


def _specialize(A: Matrix, c) -> Matrix:
    if A.is_rational():
        return A
    return Matrix([[x.at_tau(c) for x in row] for row in A.tolist()], ncols=A.ncols)


def _maybe_eigenvalue(A: Matrix, lam) -> bool:
    n = A.nrows
    for c in _PROBES:
        try:
            S = _specialize(A, c)
        except ZeroDivisionError:
            continue
        if (S - Matrix.identity(n) * lam).rank() == n:
            return False
    return True


def _restrict(A: Matrix, B: Matrix) -> Matrix:
    X = B.solve(A @ B)
    if X is None:
        raise ValueError("subspace is not invariant")
    return X


def partition_from_ranks(N: Matrix) -> tuple[int, ...]:
    """Jordan block sizes of a nilpotent N, descending."""
    n = N.nrows
    ranks = [n]
    P = Matrix.identity(n)
    while ranks[-1] > 0:
        P = P @ N
        r = P.rank()
        if r == ranks[-1]:
            raise ValueError("matrix is not nilpotent on this block")
        ranks.append(r)
    ge = [ranks[j - 1] - ranks[j] for j in range(1, len(ranks))]  # blocks of size ≥ j
    sizes = []
    for j, count in enumerate(ge, start=1):
        nxt = ge[j] if j < len(ge) else 0
        sizes.extend([j] * (count - nxt))
    return tuple(sorted(sizes, reverse=True))


def joint_jordan_data(T: Sequence[Matrix], order: int) -> tuple:
    """Sorted tuple of (eigenvalue exponents, partitions, dimension).

    Eigenvalue λ_i = ζ_N^{N·q_i} is reported as the fraction q_i ∈ [0, 1).
    """
    if not T:
        return ()
    n = T[0].nrows
    if n == 0:
        return ()
    K = ScalarField(order)
    pieces = [((), Matrix.identity(n))]
    for A in T:
        refined = []
        for qs, B in pieces:
            X = _restrict(A, B)
            found = 0
            for j in range(order):
                lam = K.zeta(j)
                if not _maybe_eigenvalue(X, lam):
                    continue
                N = X - Matrix.identity(X.nrows) * lam
                ker = N.power(X.nrows).kernel()
                if ker.ncols:
                    refined.append((qs + (Fraction(j, order),), B @ ker))
                    found += ker.ncols
            if found != B.ncols:
                raise ValueError("spectrum is not contained in the N-th roots of unity")
        pieces = refined
    out = []
    for qs, B in pieces:
        parts = []
        for A, q in zip(T, qs):
            X = _restrict(A, B)
            lam = K.zeta(int(q * order))
            parts.append(partition_from_ranks(X - Matrix.identity(X.nrows) * lam))
        out.append((qs, tuple(parts), B.ncols))
    return tuple(sorted(out))
