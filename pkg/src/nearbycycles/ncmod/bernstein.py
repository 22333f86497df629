"""Bernstein polynomials of sections along one index.

b(E_i)m must land in Σ_{u ≥ 0, u_i ≥ 1} t^u·K[E]m.  Two independent routes:

* eigen-split: t^u raises the joint E-eigenvalue by u, so the problem splits
  over eigenvalues λ and each factor is (s − λ_i)^e with e the order of m_λ
  modulo the span coming from lower eigenvalues;
* brute force: the span of shifts t^u K[E]m for u in a window box, with the
  candidate and every one-root divisor tested for membership.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from ..errors import WindowTooSmall
from ..scalars.matrix import Matrix
from .lattice import LatticeModule, Point, Section


@dataclass(frozen=True)
class BPoly:
    i: int
    roots: tuple[tuple[Fraction, int], ...]  # (root, multiplicity), ascending
    certified: bool = True
    window: int | None = None

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.roots)

    def root_set(self) -> list[Fraction]:
        return [r for r, _ in self.roots]

    def coefficients(self) -> list[Fraction]:
        """Ascending coefficients of Π(s − root)^mult."""
        c = [Fraction(1)]
        for r, m in self.roots:
            for _ in range(m):
                c = [Fraction(0)] + c
                for j in range(len(c) - 1):
                    c[j] -= r * c[j + 1]
        return c

    def to_dict(self) -> dict:
        return {"i": self.i, "roots": [{"root": _fmt(r), "mult": m} for r, m in self.roots]}


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class _Graded:
    """Flat coordinates on ⊕_{v ∈ degrees} L."""

    def __init__(self, M: LatticeModule, degrees: Iterable[Point]):
        self.M = M
        self.degrees = sorted(set(degrees))
        self.pos = {v: j for j, v in enumerate(self.degrees)}
        self.r = M.rank

    @property
    def dim(self) -> int:
        return len(self.degrees) * self.r

    def flatten(self, terms: dict) -> list[Fraction]:
        out = [Fraction(0)] * self.dim
        for v, vec in terms.items():
            o = self.pos[v] * self.r
            out[o:o + self.r] = vec
        return out

    def column(self, terms: dict) -> Matrix:
        return Matrix([[x] for x in self.flatten(terms)], ncols=1)

    def E(self, a: int) -> Matrix:
        return Matrix.block_diag([self.M.E_on_degree(a, v) for v in self.degrees])

    def embed(self, other: _Graded, shift: Point) -> Matrix:
        """Matrix of t^shift from ``other`` into self (degrees must land inside)."""
        rows = self.dim
        cols = other.dim
        entries = [[Fraction(0)] * cols for _ in range(rows)]
        for v in other.degrees:
            w = tuple(x + s for x, s in zip(v, shift))
            if w not in self.pos:
                raise KeyError(w)
            ro, co = self.pos[w] * self.r, other.pos[v] * self.r
            for j in range(self.r):
                entries[ro + j][co + j] = Fraction(1)
        return Matrix(entries, ncols=cols)


def krylov(ops: Sequence[Matrix], start: Matrix) -> Matrix:
    """Basis of the smallest subspace containing the columns of ``start`` and stable under ``ops``."""
    if start.ncols == 0 or start.is_zero():
        return Matrix.zeros(start.nrows, 0)
    B = start.image()
    while True:
        grown = Matrix.hstack([B] + [A @ B for A in ops], nrows=B.nrows).image()
        if grown.ncols == B.ncols:
            return B
        B = grown


def _in_span(S: Matrix, x: Matrix) -> bool:
    if x.is_zero():
        return True
    if S.ncols == 0:
        return False
    return S.solve(x) is not None


def eigen_components(m: Section) -> dict[tuple, dict]:
    """m = Σ_λ m_λ over joint eigenvalues λ of (E_1..E_p); each m_λ as {degree: fiber vector}."""
    M = m.module
    sp = M.spectrum
    out: dict[tuple, dict] = {}
    for v, vec in m.terms.items():
        x = Matrix([[c] for c in vec], ncols=1)
        coords = sp.inverse_change @ x
        for b, blk in enumerate(sp.blocks):
            o = sp.offsets[b]
            part = coords.select(rows=range(o, o + blk.dim))
            if part.is_zero():
                continue
            piece = blk.basis @ part
            lam = tuple(vi + mu for vi, mu in zip(v, M.axis_mu(b)))
            comp = out.setdefault(lam, {})
            prev = comp.get(v, (Fraction(0),) * M.rank)
            comp[v] = tuple(a + c for a, c in zip(prev, piece.column(0)))
    return {lam: {v: w for v, w in comp.items() if any(w)} for lam, comp in sorted(out.items())}


def _eigen_split(m: Section, a: int) -> Counter:
    """Route 1: exponent of (s − λ_a) for each eigenvalue, combined by lcm."""
    M = m.module
    comps = eigen_components(m)
    lams = list(comps)
    exps: Counter = Counter()
    for lam in lams:
        lower = []
        for mu in lams:
            u = tuple(x - y for x, y in zip(lam, mu))
            if all(x >= 0 and x.denominator == 1 for x in u) and u[a] >= 1:
                lower.append((mu, tuple(int(x) for x in u)))
        degs = set(comps[lam])
        for mu, u in lower:
            degs |= {tuple(x + s for x, s in zip(v, u)) for v in comps[mu]}
        G = _Graded(M, degs)
        ops = [G.E(j) for j in range(M.p)]
        cols = []
        for mu, u in lower:
            Gm = _Graded(M, comps[mu])
            Zm = krylov([Gm.E(j) for j in range(M.p)], Gm.column(comps[mu]))
            cols.append(G.embed(Gm, u) @ Zm)
        N = Matrix.hstack(cols, nrows=G.dim) if cols else Matrix.zeros(G.dim, 0)
        x = G.column(comps[lam])
        step = ops[a] - Matrix.identity(G.dim) * lam[a]
        e = 0
        while not _in_span(N, x):
            x = step @ x
            e += 1
            if e > G.dim + 1:
                raise RuntimeError("E is not locally finite on the section")
        if e:
            exps[lam[a]] = max(exps[lam[a]], e)
    return exps


def _apply_poly(G: _Graded, a: int, roots: Counter, x: Matrix) -> Matrix:
    Ea = G.E(a)
    for r, mult in roots.items():
        for _ in range(mult):
            x = Ea @ x - x * r
    return x


def _brute_force(m: Section, a: int, roots: Counter, W: int) -> tuple[bool, tuple[bool, ...]]:
    """Route 2 on the window [0, W]^p of shifts: membership of b and of each one-root divisor."""
    M = m.module
    p = M.p
    base = _Graded(M, m.terms)
    Z = krylov([base.E(j) for j in range(p)], base.column(dict(m.terms)))
    shifts = [u for u in product(range(W + 1), repeat=p) if u[a] >= 1]
    degs = set(base.degrees)
    for u in shifts:
        degs |= {tuple(x + s for x, s in zip(v, u)) for v in base.degrees}
    G = _Graded(M, degs)
    S = Matrix.hstack([G.embed(base, u) @ Z for u in shifts], nrows=G.dim)
    S = S.image() if S.ncols else S
    mvec = G.embed(base, (0,) * p) @ base.column(dict(m.terms))
    member = _in_span(S, _apply_poly(G, a, roots, mvec))
    drops = []
    for r in sorted(roots):
        smaller = Counter(roots)
        smaller[r] -= 1
        drops.append(_in_span(S, _apply_poly(G, a, +smaller, mvec)))
    return member, tuple(drops)


def default_bpoly_window(m: Section) -> int:
    degs = m.degrees()
    if not degs:
        return 1
    spread = max(max(v[j] for v in degs) - min(v[j] for v in degs) for j in range(m.module.p))
    return spread + 2


def bernstein_poly(m: Section, i: int, window: int | None = None) -> BPoly:
    """Minimal monic b with b(E_i)m in V_{−1_i}(D)·m; ``i`` is an axis position."""
    if not 0 <= i < m.module.p:
        raise IndexError(f"index {i} out of range for p={m.module.p}")
    if m.is_zero():
        return BPoly(i, (), True, window)
    roots = _eigen_split(m, i)
    W = window if window is not None else default_bpoly_window(m)
    first = _brute_force(m, i, roots, W)
    second = _brute_force(m, i, roots, W + 1)
    if first != second:
        raise WindowTooSmall(f"b-function membership for index {i} changes between windows {W} and {W + 1}", W)
    member, drops = second
    certified = member and not any(drops)
    return BPoly(i, tuple(sorted(roots.items())), certified, W)


def v_membership(m: Section, alpha: Sequence, window: int | None = None) -> bool:
    """m ∈ V_α iff every root s of b_{i,m} satisfies s ≥ −α_i − 1."""
    for i, a in enumerate(alpha):
        b = bernstein_poly(m, i, window)
        if any(r < -Fraction(a) - 1 for r in b.root_set()):
            return False
    return True
