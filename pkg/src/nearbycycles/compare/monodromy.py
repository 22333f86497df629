"""Monodromy on the comparison complexes and the finite local-system model."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Sequence

from ..hypercomplex import Verdict, total_map
from ..ncmod.lattice import LatticeModule, nilsson
from ..ncmod.vfilt import field_order, gr, psi_alg
from ..ncmod.checks import psi_data
from ..scalars.field import ScalarField
from ..scalars.jordan import joint_jordan_data
from ..scalars.matrix import Matrix
from ..scalars.spectrum import exp_nilpotent, joint_spectrum
from .complexes import (DAGGER, DR, SHARP, adapted, coordinate_map, cube_complex, endo_on_cohomology,
                        induced, intrinsic_monodromy, weight_piece)
from .nils import NilsLevel, lex_points, nils_level, nils_map


# -- local system model -------------------------------------------------------------


def _exp_2pi(C: Matrix, sign: int, order: int) -> Matrix:
    """exp(sign·2πi·C) for a rational C with rational spectrum."""
    K = ScalarField(order)
    sp = joint_spectrum([C], ambient=C.nrows)
    parts = []
    for blk in sp.blocks:
        X = blk.basis.solve(C @ blk.basis)
        mu = blk.mu[0]
        N = X - Matrix.identity(blk.dim) * mu
        parts.append(exp_nilpotent(N, K.tau * sign) * K.root_of_unity(sign * mu))
    D = Matrix.block_diag(parts)
    P = sp.change_of_basis
    return P @ D @ sp.inverse_change


@dataclass(frozen=True)
class Calibration:
    sign: int
    classical_eigenvalue: str  # monodromy of the rank-one case, as a root-of-unity exponent
    matches: dict  # sign -> whether the model agrees with Ψ on the calibration module
    degenerate: dict  # sign -> agreement on the rank-one case (both signs agree there)

    def to_dict(self) -> dict:
        return {"calibration_sign": self.sign, "classical_eigenvalue": self.classical_eigenvalue,
                "matches": {str(k): v for k, v in sorted(self.matches.items())},
                "rank_one_matches": {str(k): v for k, v in sorted(self.degenerate.items())}}


def _model_vs_psi(M: LatticeModule, sign: int) -> bool:
    """Exact equality of the model monodromy with T on the single graded piece of M."""
    order = field_order(M)
    pieces = psi_alg(M, order)
    if len(pieces) != 1 or pieces[0].dim != M.rank:
        raise ValueError("calibration module must be concentrated in one graded piece")
    pc = pieces[0]
    for pos, i in enumerate(pc.axes):
        model = _exp_2pi(M.residues[pos], sign, order)
        # the piece basis sits at one lattice degree, so it is a basis of the fiber
        ours = pc.basis @ pc.T[i] @ pc.basis.inverse()
        if model != ours:
            return False
    return True


@lru_cache(maxsize=None)
def calibrate() -> Calibration:
    """Fix the sign ε in exp(ε·2πi·C) once.

    The rank-one module with exponent −1/2 has classical monodromy −1 for
    either sign; adding a logarithm separates the two.
    """
    half = Fraction(-1, 2)
    rank_one = nilsson((half,), (0,))
    with_log = nilsson((half,), (1,))
    degenerate = {s: _model_vs_psi(rank_one, s) for s in (1, -1)}
    matches = {s: _model_vs_psi(with_log, s) for s in (1, -1)}
    good = [s for s, ok in matches.items() if ok]
    if len(good) != 1:
        raise RuntimeError(f"calibration is ambiguous: {matches}")
    pc = psi_alg(rank_one)[0]
    q = joint_jordan_data([pc.T[0]], 2)[0][0][0]
    return Calibration(good[0], str(q), matches, degenerate)


@dataclass(frozen=True, eq=False)
class LocalSystem:
    dim: int
    monodromy: tuple[Matrix, ...]
    order: int
    sign: int

    def jordan_data(self) -> tuple:
        if self.dim == 0:
            return ()
        return joint_jordan_data(list(self.monodromy), self.order)


def local_system_model(M: LatticeModule, sign: int | None = None) -> LocalSystem:
    """The fiber with commuting monodromies exp(ε·2πi·C_i), ε from the calibration."""
    eps = calibrate().sign if sign is None else sign
    order = field_order(M)
    T = tuple(_exp_2pi(C, eps, order) for C in M.residues)
    return LocalSystem(M.rank, T, order, eps)


def jordan_comparison(M: LatticeModule) -> Verdict:
    """Joint Jordan data of (Ψ, T_i) against the local system model."""
    order = field_order(M)
    dim, psi = psi_data(psi_alg(M, order), list(range(M.p)), order)
    model = local_system_model(M)
    ls = model.jordan_data()
    details = {"psi": psi, "model": ls, "calibration_sign": model.sign}
    if dim != model.dim or psi != ls:
        return Verdict(False, "Jordan data of nearby cycles and of the local system differ", details)
    return Verdict(True, "Jordan data agree", details)


# -- commutation with the comparison maps -----------------------------------------------


def _commutes_on_cohomology(f, Ts: Matrix, Tt: Matrix, src, tgt) -> tuple[bool, bool]:
    """Chain level: f∘T_src = T_tgt∘f at every corner; cohomology level: the induced squares."""
    chain = all(Tt @ f.at(k) == f.at(k) @ Ts for k in f.source.dims)
    tf = total_map(f)
    Hs, Ht = src.cohomology, tgt.cohomology
    sT = {m: total_map(src.cube_map(src, Ts)).at((m,)) for (m,) in src.total.support}
    tT = {m: total_map(tgt.cube_map(tgt, Tt)).at((m,)) for (m,) in tgt.total.support}
    A = endo_on_cohomology(src.total, sT, Hs)
    B = endo_on_cohomology(tgt.total, tT, Ht)
    F = induced(tf, Hs, Ht)
    coh = all(F[m] @ A[m] == B[m] @ F[m] for m in F)
    return chain, coh


def _is_chain_endo(pc, T: Matrix) -> bool:
    return all(T @ D == D @ T for D in pc.ops)


def arrows_commutation(M: LatticeModule, window: int | None = None) -> dict:
    A = adapted(M)
    order = lcm(A.order, 1)
    sharp = cube_complex(M, SHARP, window, A)
    W = sharp.window
    rows = []
    ok = True
    for tgt_kind in (DAGGER, DR):
        tgt = cube_complex(M, tgt_kind, W, A)
        for w in sorted(set(sharp.pieces) | set(tgt.pieces)):
            a = weight_piece(A, sharp.kinds, w)
            b = weight_piece(A, tgt.kinds, w)
            f = a.cube_map(b, coordinate_map(a, b))
            for i in range(M.p):
                Ta = intrinsic_monodromy(A, i, a.blocks, order)
                Tb = intrinsic_monodromy(A, i, b.blocks, order)
                endo = _is_chain_endo(a, Ta) and _is_chain_endo(b, Tb)
                chain, coh = _commutes_on_cohomology(f, Ta, Tb, a, b)
                good = endo and chain and coh
                ok &= good
                rows.append({"arrow": f"sharp->{tgt_kind}", "weight": list(w), "index": i, "commutes": good})
    return {"ok": ok, "window": W, "checks": rows}


def nilsson_monodromy(level: NilsLevel, i: int, order: int, sign: int = 1) -> Matrix:
    """1 ⊗ exp(sign·2πi C^N_i) on M ⊗ N_{α,k}, in fiber coordinates."""
    N = nilsson(level.alpha, level.k)
    pos = level.module.axes.index(i)
    TN = _exp_2pi(N.residues[pos], sign, order)
    return Matrix.identity(level.module.rank).kron(TN)


def nils_commutation(M: LatticeModule, alpha: Sequence, nilsson_sign: int = 1) -> dict:
    """Φ∘T = (1 ⊗ T_N)∘Φ with T = exp(−2πiE_i) on gr_α, at the stabilizing level."""
    res = nils_map(M, alpha)
    if res.gr_dim == 0:
        return {"ok": True, "alpha": [str(a) for a in res.alpha], "checks": []}
    order = lcm(field_order(M), *[Fraction(a).denominator for a in alpha])
    piece = gr(M, alpha, order)
    lvl = nils_level(M, alpha, (res.stabilizing_k,) * M.p, piece)
    rows, ok = [], True
    for i in piece.axes:
        Tgr = piece.T[i]
        TN = nilsson_monodromy(lvl, i, order, nilsson_sign)
        fiber_ok = TN @ lvl.fiber_phi == lvl.fiber_phi @ Tgr
        TNa = lvl.adapted.Pinv @ TN @ lvl.adapted.P
        per_w = True
        for w in lvl.weights:
            tp = lvl.targets[w]
            Tw = TNa.select(rows=tp.coords, cols=tp.coords)
            src = lvl.sources[w]
            Tsrc = Tgr.select(rows=src, cols=src)
            if Tw @ lvl.phi[w] != lvl.phi[w] @ Tsrc or not _is_chain_endo(tp, Tw):
                per_w = False
        good = fiber_ok and per_w
        ok &= good
        rows.append({"index": i, "commutes": good})
    return {"ok": ok, "alpha": [str(a) for a in res.alpha], "k": res.stabilizing_k, "checks": rows}


def monodromy_commutation(M: LatticeModule, window: int | None = None) -> Verdict:
    arrows = arrows_commutation(M, window)
    nils = [nils_commutation(M, pc.alpha) for pc in psi_alg(M)]
    ok = arrows["ok"] and all(n["ok"] for n in nils)
    details = {"arrows": arrows, "nils": nils}
    if not ok:
        return Verdict(False, "a monodromy square does not commute", details)
    return Verdict(True, "monodromy commutes with every comparison map", details)
