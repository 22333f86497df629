"""Verdict-returning checks on lattice modules."""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from math import ceil
from typing import Sequence

from ..compat import Filtration, Subspace, are_filtrations_compatible
from ..errors import WindowTooSmall
from ..hypercomplex import Verdict
from ..scalars.jordan import joint_jordan_data
from ..scalars.matrix import Matrix
from ..scalars.spectrum import joint_spectrum
from .bernstein import bernstein_poly
from .lattice import LatticeModule, Point, Section, tensor_nilsson, window_points
from .vfilt import (FiltrationLattice, GrPiece, default_window, field_order, gr, psi_alg,
                    psi_iterated)


def _fr(xs) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in xs)


def _stable(fn, W: int, what: str):
    """Run fn(W) and fn(W+1); the answers must agree."""
    a, b = fn(W), fn(W + 1)
    if a != b:
        raise WindowTooSmall(f"{what} differs between windows {W} and {W + 1}", W)
    return a


# -- nilpotency and sans-pente ---------------------------------------------------------


def check_nilpotency_piece(piece: GrPiece) -> Verdict:
    n = piece.dim
    bad = []
    for pos, i in enumerate(piece.axes):
        N = piece.E[i] + Matrix.identity(n) * (piece.alpha[pos] + 1)
        if n and not N.power(n).is_zero():
            bad.append(i)
    if bad:
        return Verdict(False, f"E_i + alpha_i + 1 not nilpotent for i in {bad}", {"indices": bad})
    return Verdict(True, f"nilpotent on gr of dim {n}", {"dim": n})


def check_nilpotency(M: LatticeModule, alpha: Sequence) -> Verdict:
    return check_nilpotency_piece(gr(M, alpha))


def check_sans_pente(m: Section, window: int | None = None) -> Verdict:
    witnesses = []
    for i in range(m.module.p):
        b = bernstein_poly(m, i, window)
        witnesses.append(b.to_dict())
        if not b.certified:
            return Verdict(False, f"no certified Bernstein relation for index {i}", {"witnesses": witnesses})
    return Verdict(True, "every index has a Bernstein relation", {"witnesses": witnesses})


# -- localization ------------------------------------------------------------------------


def submodel_fiber(M: LatticeModule, i: int, v: Point) -> Matrix:
    """Fiber at degree v of the submodule generated by the part with v_i ≥ 0.

    At v_i = −n < 0 this is the image of (C_i)(C_i − 1)...(C_i − n + 1)."""
    n = -v[i]
    if n <= 0:
        return Matrix.identity(M.rank)
    P = Matrix.identity(M.rank)
    for j in range(n):
        P = P @ (M.residues[i] - Matrix.identity(M.rank) * j)
    return P.image() if not P.is_zero() else Matrix.zeros(M.rank, 0)


def localize_check(M: LatticeModule, i: int, alpha: Sequence, window: int | None = None) -> Verdict:
    """Compare V_α of the v_i ≥ 0 submodel and of M degreewise."""
    alpha = _fr(alpha)
    F = FiltrationLattice(M)
    W = window if window is not None else default_window(M, [alpha])

    def run(w):
        bad = []
        for v in window_points(M.p, w):
            V = Subspace.span(M.rank, F.V(alpha, v))
            sub = Subspace.span(M.rank, submodel_fiber(M, i, v))
            if (sub & V).dim != V.dim:
                bad.append(v)
        return bool(bad), bad

    strict, bad = run(W)
    if strict != run(W + 1)[0]:
        raise WindowTooSmall(f"localization differs between windows {W} and {W + 1}", W)
    equal = not strict
    if alpha[i] < 0:
        if equal:
            return Verdict(True, "V_alpha of the submodel equals V_alpha of M", {"asserted": True, "window": W})
        return Verdict(False, f"V_alpha differs at degrees {bad[:4]}", {"asserted": True, "window": W})
    msg = "equal" if equal else "inclusion strict"
    return Verdict(True, f"{msg} (alpha_{i} >= 0, not asserted)", {"asserted": False, "equal": equal, "window": W})


# -- single-index and multi-index filtrations ----------------------------------------------


def partial_V(M: LatticeModule, group: Sequence[int], alpha_group: Sequence, v: Point,
              inside: Matrix | None = None, cache: dict | None = None) -> Matrix:
    """V^{H_group}_{α_group} at degree v, from the joint spectrum of the group residues alone.

    With ``inside`` given, the residues are first restricted to that invariant subspace.
    ``cache`` keeps spectra across degrees, keyed by group and subspace."""
    group = list(group)
    ambient = M.rank
    base = Matrix.identity(ambient) if inside is None else inside
    if not group:
        return base
    if base.ncols == 0:
        return base
    key = (tuple(group), None if inside is None else tuple(map(tuple, inside.tolist())))
    sp = cache.get(key) if cache is not None else None
    if sp is None:
        ops = [M.residues[g] for g in group]
        if inside is not None:
            ops = [base.solve(C @ base) for C in ops]
        sp = joint_spectrum(ops, ambient=base.ncols)
        if cache is not None:
            cache[key] = sp
    cols = []
    for blk in sp.blocks:
        if all(v[g] >= ceil(-Fraction(a) - 1 - mu) for g, a, mu in zip(group, alpha_group, blk.mu)):
            cols.append(blk.basis)
    B = Matrix.hstack(cols, nrows=base.ncols) if cols else Matrix.zeros(base.ncols, 0)
    return base @ B


def check_compomult(M: LatticeModule, I: Sequence[int], J: Sequence[int], alpha: Sequence,
                    window: int | None = None) -> Verdict:
    """V^{I∪J} = V^I ∩ V^J = V^I(V^J), degreewise; α is indexed by all axes."""
    I, J = sorted(I), sorted(J)
    if set(I) & set(J):
        raise ValueError("I and J must be disjoint")
    alpha = _fr(alpha)
    IJ = sorted(I + J)
    W = window if window is not None else default_window(M, [alpha])
    spectra: dict = {}

    def run(w):
        bad = []
        for v in window_points(M.p, w):
            joint = Subspace.span(M.rank, partial_V(M, IJ, [alpha[g] for g in IJ], v, cache=spectra))
            VI = Subspace.span(M.rank, partial_V(M, I, [alpha[g] for g in I], v, cache=spectra))
            VJ = Subspace.span(M.rank, partial_V(M, J, [alpha[g] for g in J], v, cache=spectra))
            nested = Subspace.span(M.rank, partial_V(M, I, [alpha[g] for g in I], v, inside=VJ.basis,
                                                     cache=spectra))
            if not (joint == (VI & VJ) and joint == nested):
                bad.append(v)
        return bad

    bad = _stable(run, W, "compomult")
    if bad:
        return Verdict(False, f"descriptions differ at {bad[:4]}", {"degrees": bad})
    return Verdict(True, "three descriptions agree", {"window": W})


def _index_entries(M: LatticeModule, alpha, v: Point) -> list[tuple]:
    """Per axis i, the level at which each block of C_i enters V^{H_i} at degree v."""
    out = []
    for i in range(M.p):
        sp = joint_spectrum([M.residues[i]], ambient=M.rank)
        out.append((sp, tuple(ceil(-alpha[i] - 1 - blk.mu[0] - v[i]) for blk in sp.blocks)))
    return out


def single_index_filtrations(M: LatticeModule, alpha: Sequence, v: Point) -> list[Filtration]:
    """F^i_ℓ = V^{H_i}_{α_i+ℓ} at degree v, for each axis i."""
    alpha = _fr(alpha)
    out = []
    for sp, entry in _index_entries(M, alpha, v):
        jumps = []
        for lv in sorted(set(entry)):
            cols = [blk.basis for blk, e in zip(sp.blocks, entry) if e <= lv]
            jumps.append((lv, Matrix.hstack(cols, nrows=M.rank)))
        out.append(Filtration.from_bases(M.rank, jumps))
    return out


def check_v_compatibility(M: LatticeModule, alpha: Sequence | None = None, window: int | None = None) -> Verdict:
    alpha = _fr(alpha) if alpha is not None else (Fraction(-1),) * M.p
    if M.p <= 1:
        return Verdict(True, "a single filtration is always compatible")
    W = window if window is not None else default_window(M, [alpha])
    # compatibility ignores a shift of levels, so degrees with the same entry pattern share a verdict
    seen: dict[tuple, Verdict] = {}

    def run(w):
        bad = []
        for v in window_points(M.p, w):
            key = tuple(tuple(e - min(entry, default=0) for e in entry) for _, entry in _index_entries(M, alpha, v))
            if key not in seen:
                seen[key] = are_filtrations_compatible(single_index_filtrations(M, alpha, v))
            res = seen[key]
            if not res:
                bad.append((v, res.message))
        return bad

    bad = _stable(run, W, "filtration compatibility")
    if bad:
        return Verdict(False, f"incompatible at degree {bad[0][0]}: {bad[0][1]}", {"degrees": [b[0] for b in bad]})
    return Verdict(True, "single-index V-filtrations are compatible", {"window": W})


def check_vnilsson(M: LatticeModule, alpha: Sequence, k: Sequence[int], beta: Sequence,
                   window: int | None = None) -> Verdict:
    """V_β(M ⊗ N_{α,k}) = V_{α+β+1}(M) ⊗ (full Nilsson fiber), degreewise."""
    alpha, beta = _fr(alpha), _fr(beta)
    T = tensor_nilsson(M, alpha, k)
    shifted = tuple(a + b + 1 for a, b in zip(alpha, beta))
    FT, FM = FiltrationLattice(T), FiltrationLattice(M)
    r2 = T.rank // M.rank if M.rank else 0
    W = window if window is not None else max(default_window(T, [beta]), default_window(M, [shifted]))

    def run(w):
        bad = []
        for v in window_points(M.p, w):
            lhs = Subspace.span(T.rank, FT.V(beta, v))
            rhs = Subspace.span(T.rank, FM.V(shifted, v).kron(Matrix.identity(r2)))
            if lhs != rhs:
                bad.append(v)
        return bad

    bad = _stable(run, W, "V of the twisted module")
    if bad:
        return Verdict(False, f"sides differ at {bad[:4]}", {"degrees": bad})
    return Verdict(True, "V_beta(M_alpha,k) matches the shifted V of M", {"window": W})


# -- Ψ in one step and iterated ----------------------------------------------------------


def _joint_monodromy(pieces: Sequence[GrPiece], indices: Sequence[int]) -> list[Matrix]:
    return [Matrix.block_diag([pc.T[i] for pc in pieces if pc.dim]) for i in indices]


def psi_data(pieces: Sequence[GrPiece], indices: Sequence[int], order: int) -> tuple[int, tuple]:
    dim = sum(pc.dim for pc in pieces)
    if dim == 0:
        return 0, ()
    return dim, joint_jordan_data(_joint_monodromy(pieces, indices), order)


def check_psi_iteration(M: LatticeModule, I: Sequence[int]) -> Verdict:
    """Ψ_H M against Ψ_{H_I}(Ψ_{H_{I^c}} M), graded along I^c first."""
    I = sorted(I)
    Ic = [a for a in range(M.p) if a not in I]
    order = field_order(M)
    one = psi_data(psi_alg(M, order), list(range(M.p)), order)
    groups = [g for g in (Ic, I) if g]
    two = psi_data(psi_iterated(M, groups, order), list(range(M.p)), order)
    details = {"one_step": one, "iterated": two, "I": I}
    if one != two:
        return Verdict(False, "one-step and iterated nearby cycles differ", details)
    return Verdict(True, f"isomorphic, dim {one[0]}", details)


def check_psi_iteration_all_orders(M: LatticeModule) -> Verdict:
    order = field_order(M)
    ref = psi_data(psi_alg(M, order), list(range(M.p)), order)
    for sigma in permutations(range(M.p)):
        got = psi_data(psi_iterated(M, [[a] for a in sigma], order), list(range(M.p)), order)
        if got != ref:
            return Verdict(False, f"order {sigma} differs", {"order": sigma, "got": got, "expected": ref})
    return Verdict(True, "all orders agree", {"data": ref})
