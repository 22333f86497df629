"""Order independence: the direct comparison data against the route through I then I^c.

The two-step route decomposes the residues along I first and then the others
on each block, and forms nested total complexes (I collapsed first, placed
last).  A flat total complex and a nested one differ by the corner signs

    ε(k) = (−1)^{Σ k_a k_b  over b ∈ I, a ∉ I, b < a},

which together with the change of adapted basis give the vertical maps.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Mapping, Sequence

from ..hypercomplex import (Hypercomplex, HyperMap, Verdict, check_hypermap, cohomology_at,
                            partial_total, total_complex)
from ..ncmod.lattice import LatticeModule, partial_nilsson, tensor
from ..ncmod.vfilt import default_window, gr, psi_alg
from ..scalars.matrix import Matrix
from .complexes import (DAGGER, DR, SHARP, Adapted, WeightPiece, adapted, adapted_two_step, induced,
                        relevant_weights, weight_piece)
from .nils import lex_points, nils_map, phi_fiber


def corner_sign(k: Sequence[int], I: Sequence[int]) -> int:
    I = set(I)
    e = sum(k[a] * k[b] for a in range(len(k)) for b in range(a) if b in I and a not in I)
    return -1 if e % 2 else 1


@dataclass(frozen=True, eq=False)
class Totalized:
    """A weight piece with its (flat or nested) total complex and per-degree (corner, index) labels."""

    piece: WeightPiece
    complex: Hypercomplex
    labels: Mapping[int, tuple]

    @property
    def cohomology(self):
        C = self.complex
        return {m: cohomology_at(C.d(0, (m - 1,)), C.d(0, (m,))) for (m,) in C.support}


def flat(pc: WeightPiece) -> Totalized:
    C = pc.total
    return Totalized(pc, C, {m: C.labels[(m,)] for (m,) in C.support})


def nested(pc: WeightPiece, I: Sequence[int]) -> Totalized:
    Y = partial_total(pc.hyper, list(I))
    C = total_complex(Y)
    labels = {}
    for (m,) in C.support:
        labels[m] = tuple(Y.labels[q][a] for q, a in C.labels[(m,)])
    return Totalized(pc, C, labels)


def labelled_map(src: Totalized, tgt: Totalized, corner: Matrix, sign: Callable = lambda k: 1) -> HyperMap:
    """The same corner matrix (times sign(k)) at every corner, assembled on the totals."""
    comps = {}
    for m, slabels in src.labels.items():
        tlabels = tgt.labels.get(m)
        if not tlabels:
            continue
        pos = {lab: r for r, lab in enumerate(tlabels)}
        rows = [[Fraction(0)] * len(slabels) for _ in tlabels]
        for c, (k, a) in enumerate(slabels):
            s = sign(k)
            for b in range(corner.nrows):
                x = corner[b, a]
                if x:
                    rows[pos[(k, b)]][c] = s * x
        comps[(m,)] = Matrix(rows, ncols=len(slabels))
    return HyperMap(src.complex, tgt.complex, comps)


def coordinate_change(src: WeightPiece, tgt: WeightPiece) -> Matrix:
    """Coordinates in tgt's adapted basis of src's basis vectors, restricted to the two pieces."""
    full = tgt.adapted.Pinv @ src.adapted.P
    return full.select(rows=tgt.coords, cols=src.coords)


def _compose(*maps: HyperMap) -> HyperMap:
    out = maps[-1]
    for f in reversed(maps[:-1]):
        out = f.compose(out)
    return out


def _equal(f: HyperMap, g: HyperMap) -> bool:
    pts = set(f.source.dims) | set(g.source.dims)
    return all(f.at(k) == g.at(k) for k in pts)


def _equal_on_cohomology(f: HyperMap, g: HyperMap, Hs, Ht) -> bool:
    a, b = induced(f, Hs, Ht), induced(g, Hs, Ht)
    return all(a.get(m, None) == b.get(m, None) for m in set(a) | set(b))


@dataclass(frozen=True)
class WeightCheck:
    weight: tuple
    verticals_are_isos: bool
    dagger_square: bool
    dr_square: bool
    on_cohomology: bool

    @property
    def ok(self) -> bool:
        return self.verticals_are_isos and self.dagger_square and self.dr_square and self.on_cohomology


def _is_iso(f: HyperMap) -> bool:
    if not check_hypermap(f):
        return False
    for k in set(f.source.dims) | set(f.target.dims):
        if f.source.dim(k) != f.target.dim(k):
            return False
        if f.source.dim(k) and f.at(k).rank() != f.source.dim(k):
            return False
    return True


def check_weight(A1: Adapted, A2: Adapted, I: Sequence[int], w) -> WeightCheck:
    p = A1.module.p
    I = sorted(I)
    per = lambda on_I, off_I: tuple(on_I if a in I else off_I for a in range(p))
    # flat row
    f_dag = flat(weight_piece(A1, (DAGGER,) * p, w))
    f_sh = flat(weight_piece(A1, (SHARP,) * p, w))
    f_dr = flat(weight_piece(A1, (DR,) * p, w))
    # nested row
    n_dd = nested(weight_piece(A2, (DAGGER,) * p, w), I)
    n_sd = nested(weight_piece(A2, per(DAGGER, SHARP), w), I)
    n_ss = nested(weight_piece(A2, (SHARP,) * p, w), I)
    n_Ds = nested(weight_piece(A2, per(DR, SHARP), w), I)
    n_DD = nested(weight_piece(A2, (DR,) * p, w), I)

    eps = lambda k: corner_sign(k, I)
    a = labelled_map(f_sh, f_dag, coordinate_change(f_sh.piece, f_dag.piece))
    b = labelled_map(f_sh, f_dr, coordinate_change(f_sh.piece, f_dr.piece))
    c = labelled_map(n_sd, n_dd, coordinate_change(n_sd.piece, n_dd.piece))
    d = labelled_map(n_ss, n_sd, coordinate_change(n_ss.piece, n_sd.piece))
    e = labelled_map(n_ss, n_Ds, coordinate_change(n_ss.piece, n_Ds.piece))
    f = labelled_map(n_Ds, n_DD, coordinate_change(n_Ds.piece, n_DD.piece))
    v1 = labelled_map(f_dag, n_dd, coordinate_change(f_dag.piece, n_dd.piece), eps)
    v2 = labelled_map(f_sh, n_ss, coordinate_change(f_sh.piece, n_ss.piece), eps)
    v3 = labelled_map(f_dr, n_DD, coordinate_change(f_dr.piece, n_DD.piece), eps)

    isos = all(_is_iso(v) for v in (v1, v2, v3))
    left = _equal(_compose(v1, a), _compose(c, d, v2))
    right = _equal(_compose(v3, b), _compose(f, e, v2))
    coh = (_equal_on_cohomology(_compose(v1, a), _compose(c, d, v2), f_sh.cohomology, n_dd.cohomology)
           and _equal_on_cohomology(_compose(v3, b), _compose(f, e, v2), f_sh.cohomology, n_DD.cohomology))
    return WeightCheck(tuple(w), isos, left, right, coh)


def nils_route(M: LatticeModule, alpha: Sequence, I: Sequence[int], k: Sequence[int]) -> bool:
    """Φ in one step against Φ along I followed by Φ along I^c, in fiber coordinates."""
    alpha = tuple(Fraction(a) for a in alpha)
    I = sorted(I)
    Ic = [a for a in range(M.p) if a not in I]
    piece = gr(M, alpha)
    if piece.dim == 0:
        return True
    one = phi_fiber(piece, k, len(lex_points(k)))

    def twist(basis: Matrix, mod: LatticeModule, group: list[int], degrees: list) -> tuple[Matrix, LatticeModule]:
        """Σ_ℓ (−1)^{|ℓ|} N^ℓ x ⊗ e_ℓ along ``group``, N_j = v_j + C_j + α_j + 1 on each column."""
        if not group:
            return basis, mod
        N = partial_nilsson({g: alpha[g] for g in group}, {g: k[g] for g in group}, M.p)
        pts = lex_points([k[g] for g in group])
        cols = []
        for c in range(basis.ncols):
            x = basis.select(cols=[c])
            v = degrees[c]
            acc = None
            for j, ell in enumerate(pts):
                y = x
                for g, e in zip(group, ell):
                    Ng = mod.residues[g] + Matrix.identity(mod.rank) * (v[g] + alpha[g] + 1)
                    y = Ng.power(e) @ y
                unit = Matrix([[Fraction(1 if r == j else 0)] for r in range(len(pts))], ncols=1)
                term = y.kron(unit) * (-1 if sum(ell) % 2 else 1)
                acc = term if acc is None else acc + term
            cols.append(acc)
        return Matrix.hstack(cols, nrows=mod.rank * len(pts)), tensor(mod, N)

    degrees = [v for b, mu, v, d in piece.blocks for _ in range(d)]
    step1, mod1 = twist(piece.basis, M, I, degrees)
    step2, _ = twist(step1, mod1, Ic, degrees)
    # reorder (fiber, ℓ_I, ℓ_Ic) into (fiber, ℓ) with ℓ lexicographic over all indices
    pts_all = lex_points(k)
    pts_I = lex_points([k[g] for g in I]) if I else [()]
    pts_Ic = lex_points([k[g] for g in Ic]) if Ic else [()]
    pos = {ell: j for j, ell in enumerate(pts_all)}
    perm = []
    for a in pts_I:
        for b in pts_Ic:
            ell = [0] * M.p
            for g, x in zip(I, a):
                ell[g] = x
            for g, x in zip(Ic, b):
                ell[g] = x
            perm.append(pos[tuple(ell)])
    n_ell = len(pts_all)
    P = Matrix([[Fraction(1 if perm[c] == r else 0) for c in range(n_ell)] for r in range(n_ell)], ncols=n_ell)
    two = Matrix.identity(M.rank).kron(P) @ step2
    return one == two


@dataclass(frozen=True)
class PermutationResult:
    I: tuple[int, ...]
    window: int
    weights: tuple[WeightCheck, ...]
    nils: Mapping[str, bool]

    @property
    def ok(self) -> bool:
        return all(w.ok for w in self.weights) and all(self.nils.values())

    def to_dict(self) -> dict:
        return {"I": list(self.I), "window": self.window, "ok": self.ok,
                "weights": [{"weight": list(w.weight), "ok": w.ok} for w in self.weights],
                "nils": dict(sorted(self.nils.items()))}


def stabilizing_levels(M: LatticeModule) -> dict[tuple, int | None]:
    return {pc.alpha: nils_map(M, pc.alpha).stabilizing_k for pc in psi_alg(M)}


def permutation_independence(M: LatticeModule, I: Sequence[int], window: int | None = None,
                             levels: Mapping[tuple, int | None] | None = None) -> PermutationResult:
    I = tuple(sorted(I))
    levels = levels if levels is not None else stabilizing_levels(M)
    W = window if window is not None else default_window(M)
    A1, A2 = adapted(M), adapted_two_step(M, I)
    p = M.p
    ws = set()
    for kinds in ((DAGGER,) * p, (SHARP,) * p, (DR,) * p):
        ws |= set(relevant_weights(A1, kinds, W + 1))
    # an acyclic piece with every differential nonzero exercises the corner signs
    ws.add((1,) * p)
    checks = tuple(check_weight(A1, A2, I, w) for w in sorted(ws))
    nils = {}
    for alpha, k in levels.items():
        key = ",".join(map(str, alpha))
        nils[key] = k is not None and nils_route(M, alpha, I, (k,) * p)
    return PermutationResult(I, W, checks, nils)


def permutation_independence_all(M: LatticeModule, window: int | None = None) -> Verdict:
    levels = stabilizing_levels(M)
    results = []
    for r in range(M.p + 1):
        for I in combinations(range(M.p), r):
            results.append(permutation_independence(M, I, window, levels))
    bad = [r.I for r in results if not r.ok]
    details = {"results": [r.to_dict() for r in results]}
    if bad:
        return Verdict(False, f"routes differ for I in {bad}", details)
    return Verdict(True, "all routes agree", details)
