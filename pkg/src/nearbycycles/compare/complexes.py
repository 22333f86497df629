"""Cube complexes of a lattice module, split by weight.

The cube of {X_k, ∂_i} over k ∈ {0,1}^p sends lattice degree v at corner k
to degree v − e_i at corner k + e_i, so w = v + k is preserved.  Each weight
contributes the Koszul cube of the operators (w_i + C_i) on a fiber subspace
S(w), the same at every corner.  With corner k carrying the piece indexed by
k − 1, and a block of joint residue eigenvalue μ:

    dr      every block
    sharp   blocks with w_i ≥ ⌈−μ_i⌉
    dagger  blocks with μ_i = −w_i

and a kind may be chosen per direction.  In a basis adapted to the joint
spectrum every S(w) is a union of blocks and every natural map is a
coordinate projection or inclusion.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import ceil, lcm
from typing import Mapping, Sequence

from ..errors import WindowTooSmall
from ..hypercomplex import (Hypercomplex, HyperMap, Subquotient, cohomology_at, cube, direct_sum,
                            is_quasi_iso, make_complex, total_complex, total_map, zero_hypercomplex)
from ..ncmod.lattice import LatticeModule, window_points
from ..ncmod.vfilt import default_window
from ..scalars.field import ScalarField
from ..scalars.matrix import Matrix
from ..scalars.spectrum import exp_nilpotent, joint_spectrum

DR, SHARP, DAGGER = "dr", "sharp", "dagger"
KINDS = (DR, SHARP, DAGGER)


@dataclass(frozen=True, eq=False)
class Block:
    mu: tuple[Fraction, ...]
    offset: int
    dim: int
    residues: tuple[Matrix, ...]  # C_i restricted to the block, adapted coordinates

    @property
    def coords(self) -> range:
        return range(self.offset, self.offset + self.dim)


@dataclass(frozen=True, eq=False)
class Adapted:
    """Fiber basis adapted to a decomposition of the residues into joint blocks."""

    module: LatticeModule
    P: Matrix  # columns: adapted basis in fiber coordinates
    Pinv: Matrix
    blocks: tuple[Block, ...]

    @property
    def rank(self) -> int:
        return self.P.ncols

    @cached_property
    def order(self) -> int:
        return lcm(1, *[m.denominator for b in self.blocks for m in b.mu])


def _make_adapted(M: LatticeModule, bases: Sequence[Matrix], mus: Sequence[tuple]) -> Adapted:
    P = Matrix.hstack(list(bases), nrows=M.rank) if bases else Matrix.zeros(M.rank, 0)
    Pinv = P.inverse() if M.rank else P
    blocks, off = [], 0
    for B, mu in zip(bases, mus):
        d = B.ncols
        rows = range(off, off + d)
        res = tuple((Pinv @ C @ B).select(rows=rows) for C in M.residues)
        blocks.append(Block(tuple(mu), off, d, res))
        off += d
    return Adapted(M, P, Pinv, tuple(blocks))


def adapted(M: LatticeModule) -> Adapted:
    """One step: the joint spectrum of all residues."""
    if M.frozen:
        raise ValueError("cube complexes need a module without frozen operators")
    sp = joint_spectrum(list(M.residues), ambient=M.rank)
    return _make_adapted(M, [b.basis for b in sp.blocks], [b.mu for b in sp.blocks])


def adapted_twisted(M: LatticeModule, T: LatticeModule, alpha: Sequence, rank_N: int) -> Adapted:
    """Adapted data of T = M ⊗ N_{α,k} from that of M.

    Each C_N,i − (α_i + 1) is nilpotent, so the joint generalized eigenspaces of T
    are those of M tensored with the whole Nilsson fiber, with μ shifted by α + 1.
    """
    sp = joint_spectrum(list(M.residues), ambient=M.rank)
    I = Matrix.identity(rank_N)
    bases = [b.basis.kron(I) for b in sp.blocks]
    mus = [tuple(m + a + 1 for m, a in zip(b.mu, alpha)) for b in sp.blocks]
    return _make_adapted(T, bases, mus)


def adapted_two_step(M: LatticeModule, I: Sequence[int]) -> Adapted:
    """Spectrum of the residues along I first, then of the others restricted to each block."""
    I = sorted(I)
    Ic = [a for a in range(M.p) if a not in I]
    first = joint_spectrum([M.residues[a] for a in I], ambient=M.rank) if I else None
    outer = [(tuple(), Matrix.identity(M.rank))] if first is None else [(b.mu, b.basis) for b in first.blocks]
    bases, mus = [], []
    for mu_I, B in outer:
        if not Ic:
            bases.append(B)
            mus.append(mu_I)
            continue
        restricted = [B.solve(M.residues[a] @ B) for a in Ic]
        sp = joint_spectrum(restricted, ambient=B.ncols)
        for blk in sp.blocks:
            full = {}
            full.update(zip(I, mu_I))
            full.update(zip(Ic, blk.mu))
            bases.append(B @ blk.basis)
            mus.append(tuple(full[a] for a in range(M.p)))
    return _make_adapted(M, bases, mus)


def _admits(kind: str, mu: Fraction, w: int) -> bool:
    if kind == DR:
        return True
    if kind == SHARP:
        return w >= ceil(-mu)
    if kind == DAGGER:
        return mu == -w
    raise ValueError(f"unknown kind {kind!r}")


def normalize_kinds(kinds, p: int) -> tuple[str, ...]:
    if isinstance(kinds, str):
        kinds = (kinds,) * p
    kinds = tuple(kinds)
    if len(kinds) != p or any(k not in KINDS for k in kinds):
        raise ValueError(f"need {p} kinds from {KINDS}")
    return kinds


@dataclass(frozen=True, eq=False)
class WeightPiece:
    """The weight-w summand: Koszul cube on S(w)."""

    adapted: Adapted
    kinds: tuple[str, ...]
    weight: tuple[int, ...]
    blocks: tuple[int, ...]  # indices into adapted.blocks

    @cached_property
    def coords(self) -> list[int]:
        return [c for b in self.blocks for c in self.adapted.blocks[b].coords]

    @property
    def dim(self) -> int:
        return len(self.coords)

    @cached_property
    def ops(self) -> list[Matrix]:
        A = self.adapted
        out = []
        for i, w in enumerate(self.weight):
            parts = [A.blocks[b].residues[i] for b in self.blocks]
            out.append(Matrix.block_diag(parts) + Matrix.identity(self.dim) * w if parts else Matrix.zeros(0, 0))
        return out

    def provably_acyclic(self) -> bool:
        """Some w_i + C_i is invertible on S(w): no block has μ_i = −w_i."""
        A = self.adapted
        for i, w in enumerate(self.weight):
            if not any(A.blocks[b].mu[i] == -w for b in self.blocks):
                return True
        return False

    @cached_property
    def hyper(self) -> Hypercomplex:
        p = len(self.weight)
        return cube(p, lambda j: self.dim, lambda i, j: self.ops[i])

    @cached_property
    def total(self) -> Hypercomplex:
        return total_complex(self.hyper)

    def cube_map(self, other: WeightPiece, matrix: Matrix) -> HyperMap:
        """The same corner matrix at every corner, self → other."""
        return HyperMap(self.hyper, other.hyper, {k: matrix for k in self.hyper.dims})

    @cached_property
    def cohomology(self) -> dict[int, Subquotient]:
        C = self.total
        return {m: cohomology_at(C.d(0, (m - 1,)), C.d(0, (m,))) for (m,) in C.support}

    def dims(self) -> dict[int, int]:
        return {m: sq.dim for m, sq in self.cohomology.items() if sq.dim}


def weight_piece(A: Adapted, kinds: Sequence[str], w: Sequence[int]) -> WeightPiece:
    w = tuple(w)
    keep = tuple(b for b, blk in enumerate(A.blocks)
                 if all(_admits(kd, m, x) for kd, m, x in zip(kinds, blk.mu, w)))
    return WeightPiece(A, tuple(kinds), w, keep)


def relevant_weights(A: Adapted, kinds: Sequence[str], W: int) -> list[tuple[int, ...]]:
    """Weights in [−W, W]^p whose piece is not provably acyclic."""
    p = A.module.p
    out = []
    for w in window_points(p, W):
        pc = weight_piece(A, kinds, w)
        if pc.dim and not pc.provably_acyclic():
            out.append(w)
    return out


def candidate_weights(A: Adapted) -> list[tuple[int, ...]]:
    """Every weight whose piece can fail to be provably acyclic: w_i = −μ_i for some integral μ_i."""
    per = []
    for i in range(A.module.p):
        per.append(sorted({-int(blk.mu[i]) for blk in A.blocks if blk.mu[i].denominator == 1}))
    return list(product(*per))


def _sum_dims(pieces: Sequence[WeightPiece]) -> dict[int, int]:
    out: dict[int, int] = {}
    for pc in pieces:
        for m, d in pc.dims().items():
            out[m] = out.get(m, 0) + d
    return dict(sorted(out.items()))


@dataclass(frozen=True, eq=False)
class WeightedComplex:
    """A cube complex restricted to the weight box [−W, W]^p."""

    module: LatticeModule
    kinds: tuple[str, ...]
    window: int
    pieces: Mapping[tuple, WeightPiece]

    def dims(self) -> dict[int, int]:
        return _sum_dims(list(self.pieces.values()))

    def dim_vector(self) -> tuple[int, ...]:
        d = self.dims()
        return tuple(d.get(m, 0) for m in range(self.module.p + 1))

    @cached_property
    def complex(self) -> Hypercomplex:
        """Direct sum of the weight pieces that are not provably acyclic."""
        out = zero_hypercomplex(1)
        for w in sorted(self.pieces):
            out = direct_sum(out, self.pieces[w].total)
        return out


def cube_complex(M: LatticeModule, kinds, window: int | None = None, A: Adapted | None = None) -> WeightedComplex:
    kinds = normalize_kinds(kinds, M.p)
    A = A or adapted(M)
    W = window if window is not None else default_window(M)
    ws = relevant_weights(A, kinds, W)
    pieces = {w: weight_piece(A, kinds, w) for w in ws}
    dims = _sum_dims(list(pieces.values()))
    shell = [w for w in relevant_weights(A, kinds, W + 1) if w not in pieces]
    extra = _sum_dims([weight_piece(A, kinds, w) for w in shell])
    if any(extra.values()):
        raise WindowTooSmall(f"cohomology of the {'/'.join(kinds)} complex changes between windows {W} and {W + 1}", W)
    outside = [w for w in candidate_weights(A) if max(map(abs, w)) > W + 1]
    far = _sum_dims([pc for pc in (weight_piece(A, kinds, w) for w in outside)
                     if pc.dim and not pc.provably_acyclic()])
    if any(far.values()):
        raise WindowTooSmall(f"the {'/'.join(kinds)} complex has cohomology outside the window {W}", W)
    return WeightedComplex(M, kinds, W, pieces)


def i_dagger(M: LatticeModule, window: int | None = None) -> WeightedComplex:
    return cube_complex(M, DAGGER, window)


def i_sharp(M: LatticeModule, window: int | None = None) -> WeightedComplex:
    return cube_complex(M, SHARP, window)


def relative_dr(M: LatticeModule, window: int | None = None) -> WeightedComplex:
    return cube_complex(M, DR, window)


def renumbering(p: int) -> dict[tuple, tuple]:
    """Corner k of the cube carries the graded or V piece of index k − 1."""
    return {k: tuple(x - 1 for x in k) for k in product((0, 1), repeat=p)}


# -- maps between weight pieces ---------------------------------------------------------


def coordinate_map(src: WeightPiece, tgt: WeightPiece) -> Matrix:
    """Projection or inclusion between two pieces in the same adapted basis."""
    if src.adapted is not tgt.adapted:
        raise ValueError("pieces live in different adapted bases")
    pos = {c: j for j, c in enumerate(src.coords)}
    rows = []
    for c in tgt.coords:
        row = [Fraction(0)] * src.dim
        if c in pos:
            row[pos[c]] = Fraction(1)
        rows.append(row)
    return Matrix(rows, ncols=src.dim) if rows else Matrix.zeros(0, src.dim)


def induced(f: HyperMap, H_src: Mapping[int, Subquotient], H_tgt: Mapping[int, Subquotient]) -> dict[int, Matrix]:
    """Matrices of a chain map of complexes on cohomology, in the subquotient bases."""
    out = {}
    for m, sq in H_src.items():
        tq = H_tgt.get(m)
        if tq is None or sq.dim == 0 or tq.dim == 0:
            continue
        out[m] = tq.coords(f.at((m,)) @ sq.reps)
    return out


def endo_on_cohomology(C: Hypercomplex, comps: Mapping[int, Matrix], H: Mapping[int, Subquotient]) -> dict[int, Matrix]:
    out = {}
    for m, sq in H.items():
        if sq.dim:
            out[m] = sq.coords(comps[m] @ sq.reps)
    return out


@dataclass(frozen=True)
class ArrowResult:
    name: str
    quasi_iso: bool
    source_dims: tuple[int, ...]
    target_dims: tuple[int, ...]
    failing_weights: tuple = ()

    def to_dict(self) -> dict:
        return {"arrow": self.name, "quasi_iso": self.quasi_iso, "source_dims": list(self.source_dims),
                "target_dims": list(self.target_dims), "failing_weights": [list(w) for w in self.failing_weights]}


def arrow(M: LatticeModule, src_kinds, tgt_kinds, window: int | None = None, name: str = "") -> ArrowResult:
    """Compare two cube complexes through the per-corner coordinate maps."""
    A = adapted(M)
    src = cube_complex(M, src_kinds, window, A)
    tgt = cube_complex(M, tgt_kinds, window, A)
    bad = []
    for w in sorted(set(src.pieces) | set(tgt.pieces)):
        a = weight_piece(A, src.kinds, w)
        b = weight_piece(A, tgt.kinds, w)
        f = total_map(a.cube_map(b, coordinate_map(a, b)))
        if not is_quasi_iso(f):
            bad.append(w)
    return ArrowResult(name or f"{'/'.join(src.kinds)}->{'/'.join(tgt.kinds)}", not bad,
                       src.dim_vector(), tgt.dim_vector(), tuple(bad))


def compgrad_arrows(M: LatticeModule, window: int | None = None) -> dict:
    """i# → i† and i# → DR with their quasi-isomorphism verdicts."""
    W = window if window is not None else default_window(M)
    to_dagger = arrow(M, SHARP, DAGGER, W, "sharp->dagger")
    to_dr = arrow(M, SHARP, DR, W, "sharp->dr")
    return {"window": W, "arrows": [to_dagger, to_dr]}


# -- intrinsic monodromy -------------------------------------------------------------------


def intrinsic_monodromy(A: Adapted, i: int, blocks: Sequence[int], order: int | None = None) -> Matrix:
    """exp(−2πi C_i) on the given blocks: ζ-power times a unipotent exponential."""
    K = ScalarField(order or A.order)
    parts = []
    for b in blocks:
        blk = A.blocks[b]
        C = blk.residues[i]
        N = C - Matrix.identity(blk.dim) * blk.mu[i]
        parts.append(exp_nilpotent(N, -K.tau) * K.root_of_unity(-blk.mu[i]))
    return Matrix.block_diag(parts) if parts else Matrix.zeros(0, 0)


def degree_zero_complex(dim: int) -> Hypercomplex:
    return make_complex({0: dim})
