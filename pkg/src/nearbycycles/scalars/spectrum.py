"""Joint spectra of commuting rational matrices and nilpotent exponentials."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import factorial
from typing import Sequence

from ..errors import IrrationalSpectrum, NonCommuting, NotNilpotent
from .field import Scalar, ScalarField, to_fraction
from .matrix import Matrix


@dataclass(frozen=True)
class SpectralBlock:
    mu: tuple[Fraction, ...]
    basis: Matrix  # ambient × dim, columns span the block
    degrees: tuple[int, ...]

    @property
    def dim(self) -> int:
        return self.basis.ncols


@dataclass(frozen=True)
class JointSpectrum:
    """Joint generalized eigenspace decomposition, blocks sorted by eigenvalue tuple."""

    ambient: int
    blocks: tuple[SpectralBlock, ...]

    @cached_property
    def change_of_basis(self) -> Matrix:
        """P whose columns list all block bases in order."""
        return Matrix.hstack([b.basis for b in self.blocks], nrows=self.ambient)

    @cached_property
    def inverse_change(self) -> Matrix:
        return self.change_of_basis.inverse()

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        out, acc = [], 0
        for b in self.blocks:
            out.append(acc)
            acc += b.dim
        return tuple(out)

    def coordinates(self, index: int) -> range:
        """Positions of block ``index`` inside the adapted basis."""
        start = self.offsets[index]
        return range(start, start + self.blocks[index].dim)

    def projector(self, index: int) -> Matrix:
        cols = list(self.coordinates(index))
        P, Pinv = self.change_of_basis, self.inverse_change
        return P.select(cols=cols) @ Pinv.select(rows=cols)

    def eigenvalues(self) -> list[tuple[Fraction, ...]]:
        return [b.mu for b in self.blocks]


def rational_roots(M: Matrix) -> list[tuple[Fraction, int]]:
    """Rational eigenvalues with algebraic multiplicities, ascending."""
    if M.nrows == 0:
        return []
    roots = [(to_fraction(r), int(m)) for r, m in M.charpoly().roots()]
    if sum(m for _, m in roots) != M.nrows:
        raise IrrationalSpectrum(f"characteristic polynomial {M.charpoly()} does not split over Q")
    return sorted(roots)


def _restrict(C: Matrix, B: Matrix) -> Matrix:
    """Matrix of C on the invariant column span of B, in that basis."""
    X = B.solve(C @ B)
    if X is None:
        raise ValueError("subspace is not invariant")
    return X


def nilpotency_degree(N: Matrix) -> int:
    """Least d ≥ 1 with N^d = 0."""
    P = N
    for d in range(1, N.nrows + 2):
        if P.is_zero():
            return d
        P = P @ N
    raise NotNilpotent("matrix is not nilpotent")


def check_commuting(C: Sequence[Matrix]) -> None:
    for i in range(len(C)):
        for j in range(i + 1, len(C)):
            if C[i] @ C[j] != C[j] @ C[i]:
                raise NonCommuting(i, j)


def joint_spectrum(C: Sequence[Matrix], ambient: int | None = None) -> JointSpectrum:
    """Decompose the ambient space into joint generalized eigenspaces of C."""
    C = [c if isinstance(c, Matrix) else Matrix(c) for c in C]
    if ambient is None:
        if not C:
            raise ValueError("ambient dimension needed for an empty family")
        ambient = C[0].nrows
    check_commuting(C)
    pieces = [((), Matrix.identity(ambient))] if ambient else []
    for Ci in C:
        refined = []
        for mu, B in pieces:
            X = _restrict(Ci, B)
            for lam, mult in rational_roots(X):
                N = X - Matrix.identity(X.nrows) * lam
                K = N.power(X.nrows).kernel()
                if K.ncols != mult:
                    raise ValueError("generalized eigenspace dimension mismatch")
                refined.append((mu + (lam,), B @ K))
        pieces = refined
    blocks = []
    for mu, B in sorted(pieces, key=lambda x: x[0]):
        degrees = tuple(
            nilpotency_degree(_restrict(Ci, B) - Matrix.identity(B.ncols) * m)
            for Ci, m in zip(C, mu)
        )
        blocks.append(SpectralBlock(mu, B, degrees))
    return JointSpectrum(ambient, tuple(blocks))


def exp_nilpotent(N: Matrix, scale) -> Matrix:
    """Σ scale^m N^m / m!, a terminating series for nilpotent N."""
    n = N.nrows
    if not N.power(n).is_zero():
        raise NotNilpotent("exp_nilpotent needs a nilpotent matrix")
    powers = [Matrix.identity(n)]
    while len(powers) < max(n, 1) and not powers[-1].is_zero():
        powers.append(powers[-1] @ N)
    if isinstance(scale, Scalar) and not scale.is_rational():
        K = ScalarField(max(scale.order, N.order))
        coeffs = [scale ** m * Fraction(1, factorial(m)) for m in range(len(powers))]
        out = Matrix.zeros(n, n).to_tower(K.cyclotomic_order)
        for c, P in zip(coeffs, powers):
            out = out + P * c
        return out
    s = to_fraction(scale)
    out = Matrix.zeros(n, n)
    for m, P in enumerate(powers):
        out = out + P * (s ** m / factorial(m))
    return out
