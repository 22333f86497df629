"""The map gr_α(M) → i†(M ⊗ N_{α,k}) and its behaviour as k grows.

Φ(m) = Σ_{0≤ℓ≤k} (−1)^{|ℓ|} N^ℓ m ⊗ e_ℓ with N_i = E_i + α_i + 1.  A block of
gr_α sitting at lattice degree v lands in the dagger piece of weight v.
For finite k the target still has cohomology in positive degrees, so the
quasi-isomorphism is tested against the colimit over k through the
transition maps e_ℓ ↦ e_ℓ.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Mapping, Sequence

from ..errors import NotAChainMap
from ..hypercomplex import HyperMap, check_hypermap, make_complex, total_layout
from ..ncmod.lattice import LatticeModule, tensor_nilsson
from ..ncmod.vfilt import GrPiece, field_order, gr
from ..scalars.matrix import Matrix
from ..scalars.spectrum import nilpotency_degree
from .complexes import DAGGER, Adapted, WeightPiece, adapted_twisted, weight_piece


def lex_points(k: Sequence[int]) -> list[tuple]:
    return list(product(*[range(x + 1) for x in k]))


def unit_vector(n: int, j: int) -> Matrix:
    rows = [[Fraction(0)] for _ in range(n)]
    rows[j][0] = Fraction(1)
    return Matrix(rows, ncols=1)


@dataclass(frozen=True, eq=False)
class NilsLevel:
    """Φ at one level k, split by weight."""

    module: LatticeModule
    alpha: tuple[Fraction, ...]
    k: tuple[int, ...]
    piece: GrPiece
    target: LatticeModule
    adapted: Adapted
    weights: tuple[tuple, ...]
    sources: Mapping[tuple, list[int]]  # weight -> gr coordinates
    targets: Mapping[tuple, WeightPiece]
    phi: Mapping[tuple, Matrix]  # weight -> degree-0 matrix (target coords × source coords)
    fiber_phi: Matrix  # all of gr → L ⊗ L_N in fiber coordinates

    def chain_map(self, w) -> HyperMap:
        src = make_complex({0: len(self.sources[w])})
        return HyperMap(src, self.targets[w].total, {(0,): self.phi[w]})

    def is_chain_map(self) -> bool:
        return all(check_hypermap(self.chain_map(w)) for w in self.weights)


def nilpotent_parts(piece: GrPiece) -> dict[int, Matrix]:
    n = piece.dim
    return {i: piece.E[i] + Matrix.identity(n) * (piece.alpha[pos] + 1) for pos, i in enumerate(piece.axes)}


def phi_fiber(piece: GrPiece, k: Sequence[int], rank_N: int) -> Matrix:
    """Φ on all of gr_α: columns are Φ(basis vector) in fiber coordinates of M ⊗ N_{α,k}."""
    N = nilpotent_parts(piece)
    idx = [piece.axes[pos] for pos in range(len(piece.axes))]
    pts = lex_points(k)
    total = None
    for j, ell in enumerate(pts):
        X = Matrix.identity(piece.dim)
        for i, e in zip(idx, ell):
            X = N[i].power(e) @ X
        term = (piece.basis @ X).kron(unit_vector(rank_N, j)) * (-1 if sum(ell) % 2 else 1)
        total = term if total is None else total + term
    return total


def _memo(M: LatticeModule) -> dict:
    """Per-module memo for levels and results (modules are immutable)."""
    return M.__dict__.setdefault("_nils_memo", {})


def nils_level(M: LatticeModule, alpha: Sequence, k: Sequence[int], piece: GrPiece | None = None) -> NilsLevel:
    alpha = tuple(Fraction(a) for a in alpha)
    k = tuple(int(x) for x in k)
    key = ("level", alpha, k)
    memo = _memo(M)
    if key not in memo:
        memo[key] = _nils_level(M, alpha, k, piece)
    return memo[key]


def _nils_level(M: LatticeModule, alpha: tuple, k: tuple, piece: GrPiece | None) -> NilsLevel:
    piece = piece or gr(M, alpha)
    T = tensor_nilsson(M, alpha, k)
    rank_N = len(lex_points(k))
    A = adapted_twisted(M, T, alpha, rank_N)
    F = phi_fiber(piece, k, rank_N) if piece.dim else Matrix.zeros(T.rank, 0)
    Y = A.Pinv @ F if piece.dim else F
    sources: dict[tuple, list[int]] = {}
    off = 0
    for b, mu, v, d in piece.blocks:
        sources.setdefault(tuple(v), []).extend(range(off, off + d))
        off += d
    targets, phi = {}, {}
    for w, cols in sorted(sources.items()):
        tp = weight_piece(A, (DAGGER,) * M.p, w)
        Yw = Y.select(cols=cols)
        inside = set(tp.coords)
        outside = [r for r in range(A.rank) if r not in inside]
        if outside and not Yw.select(rows=outside).is_zero():
            raise NotAChainMap(f"image of weight {w} leaves the graded piece of the twisted module")
        targets[w] = tp
        phi[w] = Yw.select(rows=tp.coords)
    return NilsLevel(M, alpha, k, piece, T, A, tuple(sorted(sources)), sources, targets, phi, F)


def transition(lo: NilsLevel, hi: NilsLevel, w) -> Matrix:
    """e_ℓ ↦ e_ℓ from level lo to level hi on the weight-w dagger pieces (adapted coordinates)."""
    pts_lo, pts_hi = lex_points(lo.k), lex_points(hi.k)
    pos = {p: j for j, p in enumerate(pts_hi)}
    J = Matrix([[Fraction(1) if pos[p] == r else Fraction(0) for p in pts_lo] for r in range(len(pts_hi))],
               ncols=len(pts_lo))
    r = lo.module.rank
    fiber = Matrix.identity(r).kron(J)
    a, b = lo.targets[w], hi.targets[w]
    full = hi.adapted.Pinv @ fiber @ lo.adapted.P
    return full.select(rows=b.coords, cols=a.coords)


def _in_span(S: Matrix, X: Matrix) -> bool:
    if X.ncols == 0 or X.is_zero():
        return True
    if S.ncols == 0:
        return False
    return S.solve(X) is not None


def colimit_conditions(lo: NilsLevel, hi: NilsLevel) -> dict:
    """Conditions for Φ to induce an isomorphism onto the colimit, tested between two levels."""
    out = {"chain_lo": lo.is_chain_map(), "chain_hi": hi.is_chain_map(),
           "injective": True, "compatible": True, "absorbed": True, "h0_dim": True}
    if not (out["chain_lo"] and out["chain_hi"]):
        return out
    for w in lo.weights:
        n = len(lo.sources[w])
        if lo.phi[w].rank() != n:
            out["injective"] = False
        t = transition(lo, hi, w)
        if t @ lo.phi[w] != hi.phi[w]:
            out["compatible"] = False
        Hlo = lo.targets[w].cohomology
        if Hlo.get(0) is not None and Hlo[0].dim != n:
            out["h0_dim"] = False
        C = hi.targets[w].total
        for (m,) in lo.targets[w].total.support:
            sq = Hlo.get(m)
            if sq is None or sq.dim == 0:
                continue
            tb = _corner_block(lo, hi, w, m)
            image = tb @ sq.reps
            B = C.d(0, (m - 1,))
            span = [B.image()] if B.ncols and not B.is_zero() else []
            if m == 0:
                span.append(hi.phi[w])
            S = Matrix.hstack(span, nrows=image.nrows) if span else Matrix.zeros(image.nrows, 0)
            if not _in_span(S, image):
                out["absorbed"] = False
    return out


def _corner_block(lo: NilsLevel, hi: NilsLevel, w, m: int) -> Matrix:
    """Transition on total degree m: the same corner matrix on every summand."""
    t = transition(lo, hi, w)
    corners = total_layout(lo.targets[w].hyper).summands.get(m, ())
    assert corners == total_layout(hi.targets[w].hyper).summands.get(m, ())
    return Matrix.block_diag([t] * len(corners))


@dataclass(frozen=True)
class NilsResult:
    alpha: tuple[Fraction, ...]
    gr_dim: int
    chain_k: int | None  # smallest uniform k with Φ a chain map
    stabilizing_k: int | None  # smallest uniform k passing the colimit conditions
    lag: int  # levels between k and the level where classes are compared
    conditions: Mapping
    quasi_iso: bool

    def to_dict(self) -> dict:
        return {"alpha": [str(a) for a in self.alpha], "gr_dim": self.gr_dim, "chain_k": self.chain_k,
                "stabilizing_k": self.stabilizing_k, "lag": self.lag, "quasi_iso": self.quasi_iso,
                "conditions": dict(sorted(self.conditions.items()))}


def nils_map(M: LatticeModule, alpha: Sequence, k_max: int | None = None) -> NilsResult:
    """Search k = (j, ..., j) for the first level at which Φ is a quasi-isomorphism onto the colimit.

    A class at level k is compared with im Φ at level k + s, where s is the
    nilpotency index of the N_i on gr_α: that many extra Nilsson vectors are
    enough to write every positive-degree class at level k as a boundary.
    """
    alpha = tuple(Fraction(a) for a in alpha)
    key = ("result", alpha, k_max)
    memo = _memo(M)
    if key not in memo:
        memo[key] = _nils_map(M, alpha, k_max)
    return memo[key]


def _nils_map(M: LatticeModule, alpha: tuple, k_max: int | None) -> NilsResult:
    piece = gr(M, alpha)
    if piece.dim == 0:
        return NilsResult(alpha, 0, 0, 0, 0, {}, True)
    lag = max(nilpotency_degree(N) for N in nilpotent_parts(piece).values())
    k_max = k_max if k_max is not None else lag + 1

    def level(j: int) -> NilsLevel:
        return nils_level(M, alpha, (j,) * M.p, piece)

    chain_k, conds = None, {}
    for j in range(k_max + 1):
        conds = colimit_conditions(level(j), level(j + lag))
        if chain_k is None and conds["chain_lo"]:
            chain_k = j
        if all(conds.values()):
            return NilsResult(alpha, piece.dim, chain_k, j, lag, conds, True)
    return NilsResult(alpha, piece.dim, chain_k, None, lag, conds, False)
