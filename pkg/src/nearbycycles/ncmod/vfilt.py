"""Canonical V-multifiltration, graded pieces and algebraic nearby cycles.

On a joint eigenblock μ of the residues, the symbol v⊗ℓ lies in V_α exactly
when v_i ≥ ⌈−α_i − 1 − μ_i⌉ for every lattice direction i.  The graded piece
gr_α collects the blocks with α + 1 + μ integral, each at the single degree
v = −α − 1 − μ.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import ceil, floor, lcm
from typing import Mapping, Sequence

from ..scalars.field import ScalarField
from ..scalars.jordan import joint_jordan_data
from ..scalars.matrix import Matrix
from ..scalars.spectrum import exp_nilpotent, joint_spectrum
from .lattice import LatticeModule, Point, window_points


def _frac_vec(alpha) -> tuple[Fraction, ...]:
    return tuple(Fraction(a) for a in alpha)


@dataclass(frozen=True, eq=False)
class FiltrationLattice:
    """Threshold description of V_α on a lattice module."""

    module: LatticeModule

    def threshold(self, b: int, alpha: Sequence) -> tuple[int, ...]:
        mu = self.module.axis_mu(b)
        return tuple(ceil(-a - 1 - m) for a, m in zip(_frac_vec(alpha), mu))

    def blocks_in(self, alpha: Sequence, v: Point) -> list[int]:
        return [b for b in range(len(self.module.spectrum.blocks))
                if all(x >= t for x, t in zip(v, self.threshold(b, alpha)))]

    def blocks_strictly_below(self, alpha: Sequence, v: Point) -> list[int]:
        """Blocks of V_{<α} at degree v: inside V_α and off the boundary in some direction."""
        alpha = _frac_vec(alpha)
        out = []
        for b in self.blocks_in(alpha, v):
            mu = self.module.axis_mu(b)
            if any(x > -a - 1 - m for x, a, m in zip(v, alpha, mu)):
                out.append(b)
        return out

    def _span(self, blocks: list[int]) -> Matrix:
        sp = self.module.spectrum
        return Matrix.hstack([sp.blocks[b].basis for b in blocks], nrows=self.module.rank)

    def V(self, alpha: Sequence, v: Point) -> Matrix:
        """Basis (fiber coordinates) of V_α at lattice degree v."""
        return self._span(self.blocks_in(alpha, v))

    def V_less(self, alpha: Sequence, v: Point) -> Matrix:
        return self._span(self.blocks_strictly_below(alpha, v))

    def thresholds(self, alpha: Sequence) -> list[tuple[int, ...]]:
        return [self.threshold(b, alpha) for b in range(len(self.module.spectrum.blocks))]


def default_window(M: LatticeModule, alphas: Sequence[Sequence] = ()) -> int:
    """max |threshold| + 2 over the given α (the α = −1 thresholds if none given)."""
    F = FiltrationLattice(M)
    alphas = list(alphas) or [(-1,) * M.p]
    m = 0
    for a in alphas:
        for t in F.thresholds(a):
            m = max([m] + [abs(x) for x in t])
    return m + 2


def v_basis(M: LatticeModule, alpha: Sequence, W: int) -> dict[Point, Matrix]:
    F = FiltrationLattice(M)
    return {v: F.V(alpha, v) for v in window_points(M.p, W)}


# -- graded pieces --------------------------------------------------------------


def field_order(M: LatticeModule, extra: Sequence = ()) -> int:
    dens = [Fraction(x).denominator for x in extra]
    return lcm(M.exponent_denominators, *dens) if dens else M.exponent_denominators


@dataclass(frozen=True, eq=False)
class GrPiece:
    """gr_α with exact E_i and T_i = exp(−2πi E_i), keyed by global index."""

    alpha: tuple[Fraction, ...]
    axes: tuple[int, ...]
    basis: Matrix
    labels: tuple
    blocks: tuple  # (block index, μ over all indices, degree v, dim)
    E: Mapping[int, Matrix]
    eigen: Mapping[int, tuple]  # index -> per-block eigenvalue of E
    order: int

    @property
    def dim(self) -> int:
        return self.basis.ncols

    @cached_property
    def T(self) -> dict[int, Matrix]:
        K = ScalarField(self.order)
        out = {}
        for i, Ei in self.E.items():
            parts = []
            off = 0
            for (b, mu, v, d), lam in zip(self.blocks, self.eigen[i]):
                rng = range(off, off + d)
                Nb = Ei.select(rows=rng, cols=rng) - Matrix.identity(d) * lam
                parts.append(exp_nilpotent(Nb, -K.tau) * K.root_of_unity(-lam))
                off += d
            out[i] = Matrix.block_diag(parts) if parts else Matrix.zeros(0, 0)
        return out

    def jordan_data(self) -> tuple:
        idx = sorted(self.T)
        return joint_jordan_data([self.T[i] for i in idx], self.order)


def gr(M: LatticeModule, alpha: Sequence, order: int | None = None) -> GrPiece:
    """gr_α(M) along the lattice axes of M."""
    alpha = _frac_vec(alpha)
    if len(alpha) != M.p:
        raise ValueError("alpha has the wrong length")
    order = order or field_order(M, alpha)
    sp = M.spectrum
    chosen = []
    for b, blk in enumerate(sp.blocks):
        mu = M.axis_mu(b)
        v = tuple(-a - 1 - m for a, m in zip(alpha, mu))
        if all(x.denominator == 1 for x in v):
            chosen.append((b, M.block_mu(b), tuple(int(x) for x in v), blk.dim))
    basis = Matrix.hstack([sp.blocks[b].basis for b, *_ in chosen], nrows=M.rank)
    labels = tuple((tuple(str(m) for m in mu.values()), v, j) for b, mu, v, d in chosen for j in range(d))
    E, eigen = {}, {}
    ops = dict(M.operators)
    for i in M.indices:
        parts, lams = [], []
        for b, mu, v, d in chosen:
            Bb = sp.blocks[b].basis
            X = Bb.solve(ops[i] @ Bb)
            if i in M.axes:
                shift = v[M.axes.index(i)]
                X = X + Matrix.identity(d) * shift
                lams.append(mu[i] + shift)
            else:
                lams.append(mu[i])
            parts.append(X)
        E[i] = Matrix.block_diag(parts) if parts else Matrix.zeros(0, 0)
        eigen[i] = tuple(lams)
    return GrPiece(alpha, M.axes, basis, labels, tuple(chosen), E, eigen, order)


def canonical_alpha(mu: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """The α ∈ [−1,0)^p with α + 1 + μ integral."""
    return tuple((-m) - floor(-m) - 1 for m in mu)


def psi_alg(M: LatticeModule, order: int | None = None) -> list[GrPiece]:
    """Nonzero gr_α for α ∈ [−1,0)^p, sorted by α."""
    alphas = sorted({canonical_alpha(M.axis_mu(b)) for b in range(len(M.spectrum.blocks))})
    order = order or field_order(M)
    return [gr(M, a, order) for a in alphas]


def psi_jordan_data(M: LatticeModule, order: int | None = None) -> tuple:
    order = order or field_order(M)
    out = []
    for piece in psi_alg(M, order):
        out.extend(piece.jordan_data())
    return tuple(sorted(out))


# -- graded pieces along part of the variables --------------------------------------


def partial_gr(M: LatticeModule, group: Sequence[int], beta: Sequence) -> LatticeModule:
    """gr^{group}_β(M) as a module in the remaining axes.

    The spectrum of the residues along ``group`` is recomputed from scratch; the
    graded-out E operators become frozen fiber endomorphisms.
    """
    group = list(group)
    beta = _frac_vec(beta)
    pos = [M.axes.index(g) for g in group]
    ops = [M.residues[q] for q in pos]
    sp = joint_spectrum(ops, ambient=M.rank)
    cols, shifts = [], []
    for blk in sp.blocks:
        v = tuple(-b - 1 - m for b, m in zip(beta, blk.mu))
        if all(x.denominator == 1 for x in v):
            cols.append(blk.basis)
            shifts.extend([tuple(int(x) for x in v)] * blk.dim)
    rest = [a for a in M.axes if a not in group]
    if not cols:
        zero = Matrix.zeros(0, 0)
        frozen = {i: zero for i in list(M.frozen) + group}
        return LatticeModule(0, tuple(zero for _ in rest), (), name="zero", axes=tuple(rest), frozen=frozen)
    B = Matrix.hstack(cols, nrows=M.rank)
    Binv = B.left_inverse()

    def restrict(A: Matrix) -> Matrix:
        return Binv @ A @ B

    residues = tuple(restrict(M.residues[M.axes.index(a)]) for a in rest)
    frozen = {i: restrict(F) for i, F in M.frozen.items()}
    for g, q in zip(group, pos):
        D = Matrix.diagonal([s[group.index(g)] for s in shifts])
        frozen[g] = restrict(M.residues[q]) + D
    labels = tuple(f"{M.name or 'M'}|{j}" for j in range(B.ncols))
    mod = LatticeModule(B.ncols, residues, labels, name=f"gr{group}_{[str(b) for b in beta]}({M.describe()})",
                        axes=tuple(rest), frozen=frozen)
    object.__setattr__(mod, "_embedding", B)
    return mod


def psi_partial(M: LatticeModule, group: Sequence[int]) -> list[tuple[tuple[Fraction, ...], LatticeModule]]:
    """Ψ along ``group``: the nonzero partial graded pieces for β ∈ [−1,0)^group."""
    pos = [M.axes.index(g) for g in group]
    sp = joint_spectrum([M.residues[q] for q in pos], ambient=M.rank)
    betas = sorted({canonical_alpha(b.mu) for b in sp.blocks})
    return [(b, partial_gr(M, group, b)) for b in betas]


def psi_iterated(M: LatticeModule, groups: Sequence[Sequence[int]], order: int | None = None) -> list[GrPiece]:
    """Ψ along groups[0], then groups[1], ...; returns the final pieces (all E frozen)."""
    order = order or field_order(M)
    mods = [M]
    for g in groups:
        nxt = []
        for mod in mods:
            if mod.rank == 0:
                continue
            nxt.extend(m for _, m in psi_partial(mod, g) if m.rank)
        mods = nxt
    pieces = []
    for mod in mods:
        pieces.extend(psi_alg(mod, order) if mod.p else [gr(mod, (), order)])
    return [p for p in pieces if p.dim]
