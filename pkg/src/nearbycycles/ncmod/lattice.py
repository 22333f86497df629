"""Localized Nilsson-class lattice modules.

A module is K[t_1^{±1}, ..., t_p^{±1}] ⊗ L with a finite fiber L and
commuting rational residues C_i.  On a symbol v⊗ℓ:

    t_i (v⊗ℓ) = (v + e_i) ⊗ ℓ
    E_i (v⊗ℓ) = v ⊗ (v_i + C_i) ℓ
    ∂_i (v⊗ℓ) = (v − e_i) ⊗ (v_i + C_i) ℓ

Iterated constructions (graded pieces along some of the variables) keep the
remaining variables as lattice ``axes`` and carry the graded-out E operators
as ``frozen`` fiber endomorphisms, indexed by their original positions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import ceil, lcm
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from ..errors import NonCommuting
from ..scalars.matrix import Matrix
from ..scalars.spectrum import JointSpectrum, check_commuting, joint_spectrum, rational_roots

Point = tuple


@dataclass(frozen=True, eq=False)
class LatticeModule:
    rank: int
    residues: tuple[Matrix, ...]
    labels: tuple = ()
    name: str = ""
    axes: tuple[int, ...] | None = None
    frozen: Mapping[int, Matrix] = field(default_factory=dict)

    def __post_init__(self):
        residues = tuple(c if isinstance(c, Matrix) else Matrix(c) for c in self.residues)
        for c in residues:
            if c.shape != (self.rank, self.rank):
                raise ValueError(f"residue of shape {c.shape} on a rank {self.rank} fiber")
            if not c.is_rational():
                raise ValueError("residues must be rational")
        object.__setattr__(self, "residues", residues)
        axes = tuple(range(len(residues))) if self.axes is None else tuple(self.axes)
        if len(axes) != len(residues):
            raise ValueError("one axis index per residue")
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "frozen", MappingProxyType(dict(self.frozen)))
        if set(axes) & set(self.frozen):
            raise ValueError("an index cannot be both an axis and frozen")
        labels = tuple(self.labels) if self.labels else tuple(f"b{j}" for j in range(self.rank))
        if len(labels) != self.rank:
            raise ValueError("one label per fiber basis vector")
        object.__setattr__(self, "labels", labels)
        ops = self.operators
        try:
            check_commuting([m for _, m in ops])
        except NonCommuting as exc:
            a, b = exc.pair
            raise NonCommuting(ops[a][0], ops[b][0]) from None

    @property
    def p(self) -> int:
        return len(self.residues)

    @property
    def indices(self) -> tuple[int, ...]:
        """All global indices, axes and frozen, ascending."""
        return tuple(sorted(set(self.axes) | set(self.frozen)))

    @property
    def operators(self) -> list[tuple[int, Matrix]]:
        ops = dict(zip(self.axes, self.residues))
        ops.update(self.frozen)
        return [(i, ops[i]) for i in sorted(ops)]

    def residue(self, i: int) -> Matrix:
        """Residue or frozen operator for global index i."""
        return dict(self.operators)[i]

    @cached_property
    def spectrum(self) -> JointSpectrum:
        """Joint spectrum of all operators (global index order)."""
        return joint_spectrum([m for _, m in self.operators], ambient=self.rank)

    def block_mu(self, b: int) -> dict[int, Fraction]:
        return dict(zip(self.indices, self.spectrum.blocks[b].mu))

    def axis_mu(self, b: int) -> tuple[Fraction, ...]:
        mu = self.block_mu(b)
        return tuple(mu[i] for i in self.axes)

    @cached_property
    def exponent_denominators(self) -> int:
        dens = [m.denominator for b in self.spectrum.blocks for m in b.mu]
        return lcm(1, *dens)

    def E_on_degree(self, axis_pos: int, v: Point) -> Matrix:
        """Matrix of E along axis position ``axis_pos`` on the fiber at degree v."""
        return self.residues[axis_pos] + Matrix.identity(self.rank) * v[axis_pos]

    def describe(self) -> str:
        return self.name or f"lattice(rank={self.rank}, p={self.p})"


def _lex_points(k: Sequence[int]) -> list[Point]:
    return list(product(*[range(x + 1) for x in k]))


def O_loc(p: int = 1) -> LatticeModule:
    """K[t^{±1}] in p variables: rank one, zero residues."""
    return LatticeModule(1, tuple(Matrix.zeros(1, 1) for _ in range(p)), ("1",), name=f"O_loc(p={p})")


def nilsson(alpha: Sequence, k: Sequence[int]) -> LatticeModule:
    """N_{α,k}: basis e_ℓ (0 ≤ ℓ ≤ k), C_i e_ℓ = (α_i+1) e_ℓ + e_{ℓ−e_i}."""
    alpha = tuple(Fraction(a) for a in alpha)
    k = tuple(int(x) for x in k)
    if len(alpha) != len(k):
        raise ValueError("alpha and k must have the same length")
    for a in alpha:
        if not (-1 <= a < 0):
            raise ValueError(f"alpha component {a} outside [-1, 0)")
    if any(x < 0 for x in k):
        raise ValueError("k must be non-negative")
    pts = _lex_points(k)
    index = {ell: j for j, ell in enumerate(pts)}
    residues = []
    for i, a in enumerate(alpha):
        rows = [[Fraction(0)] * len(pts) for _ in pts]
        for ell, j in index.items():
            rows[j][j] = a + 1
            if ell[i] > 0:
                lower = ell[:i] + (ell[i] - 1,) + ell[i + 1:]
                rows[index[lower]][j] = Fraction(1)
        residues.append(Matrix(rows, ncols=len(pts)))
    labels = tuple("e" + "".join(map(str, ell)) for ell in pts)
    name = f"nilsson({[str(a) for a in alpha]}, {list(k)})"
    return LatticeModule(len(pts), tuple(residues), labels, name=name)


def lattice(residues: Sequence, labels: Sequence[str] = (), name: str = "") -> LatticeModule:
    residues = [c if isinstance(c, Matrix) else Matrix(c) for c in residues]
    if not residues:
        raise ValueError("need at least one residue")
    return LatticeModule(residues[0].nrows, tuple(residues), tuple(labels), name=name)


def tensor(M: LatticeModule, N: LatticeModule) -> LatticeModule:
    """Fiber L⊗L′ with residues C_i⊗1 + 1⊗C′_i."""
    if M.axes != N.axes or M.frozen or N.frozen:
        raise ValueError("tensor needs two plain modules in the same variables")
    I1, I2 = Matrix.identity(M.rank), Matrix.identity(N.rank)
    res = tuple(a.kron(I2) + I1.kron(b) for a, b in zip(M.residues, N.residues))
    labels = tuple(f"{x}*{y}" for x in M.labels for y in N.labels)
    return LatticeModule(M.rank * N.rank, res, labels, name=f"tensor({M.describe()}, {N.describe()})")


def tensor_nilsson(M: LatticeModule, alpha: Sequence, k: Sequence[int]) -> LatticeModule:
    """M_{α,k} = M ⊗ N_{α,k}."""
    return tensor(M, nilsson(alpha, k))


def direct_sum(*mods: LatticeModule) -> LatticeModule:
    if not mods:
        raise ValueError("empty direct sum")
    p = mods[0].p
    if any(m.p != p or m.frozen for m in mods):
        raise ValueError("direct sum needs plain modules in the same variables")
    res = tuple(Matrix.block_diag([m.residues[i] for m in mods]) for i in range(p))
    labels = tuple(f"{j}:{x}" for j, m in enumerate(mods) for x in m.labels)
    name = "direct_sum(" + ", ".join(m.describe() for m in mods) + ")"
    return LatticeModule(sum(m.rank for m in mods), res, labels, name=name)


def partial_nilsson(alpha: Mapping[int, Fraction], k: Mapping[int, int], p: int) -> LatticeModule:
    """N_{α_I,k_I} viewed in all p variables: C_j = 0 for j outside I."""
    idx = sorted(alpha)
    base = nilsson([alpha[i] for i in idx], [k[i] for i in idx])
    zero = Matrix.zeros(base.rank, base.rank)
    res = []
    for j in range(p):
        res.append(base.residues[idx.index(j)] if j in alpha else zero)
    return LatticeModule(base.rank, tuple(res), base.labels, name=f"partial_{base.describe()}")


# -- sections -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Section:
    """Finite K-combination of symbols v⊗ℓ; zero fiber vectors are dropped."""

    module: LatticeModule
    terms: Mapping[Point, tuple]

    def __post_init__(self):
        clean = {}
        for v, vec in self.terms.items():
            vec = tuple(Fraction(x) for x in vec)
            if len(vec) != self.module.rank:
                raise ValueError("fiber vector of wrong length")
            if any(vec):
                clean[tuple(v)] = vec
        object.__setattr__(self, "terms", MappingProxyType(dict(sorted(clean.items()))))

    @classmethod
    def monomial(cls, M: LatticeModule, v: Point, j: int = 0) -> Section:
        vec = [0] * M.rank
        vec[j] = 1
        return cls(M, {tuple(v): tuple(vec)})

    @classmethod
    def zero(cls, M: LatticeModule) -> Section:
        return cls(M, {})

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> list[Point]:
        return list(self.terms)

    def __add__(self, other: Section) -> Section:
        out = dict(self.terms)
        for v, vec in other.terms.items():
            if v in out:
                out[v] = tuple(a + b for a, b in zip(out[v], vec))
            else:
                out[v] = vec
        return Section(self.module, out)

    def __mul__(self, c) -> Section:
        c = Fraction(c)
        return Section(self.module, {v: tuple(c * x for x in vec) for v, vec in self.terms.items()})

    __rmul__ = __mul__

    def __sub__(self, other: Section) -> Section:
        return self + other * -1

    def __eq__(self, other) -> bool:
        if not isinstance(other, Section):
            return NotImplemented
        return dict(self.terms) == dict(other.terms)

    __hash__ = None

    def _apply(self, a: int, shift_by: int, with_e: bool) -> Section:
        M = self.module
        out = {}
        for v, vec in self.terms.items():
            if with_e:
                col = M.E_on_degree(a, v) @ Matrix([[x] for x in vec], ncols=1)
                vec = tuple(col.column(0))
            w = v[:a] + (v[a] + shift_by,) + v[a + 1:]
            out[w] = vec
        return Section(M, out)

    def t(self, a: int) -> Section:
        return self._apply(a, 1, False)

    def t_inv(self, a: int) -> Section:
        return self._apply(a, -1, False)

    def E(self, a: int) -> Section:
        return self._apply(a, 0, True)

    def d(self, a: int) -> Section:
        return self._apply(a, -1, True)


def window_points(p: int, W: int, center: Point | None = None) -> list[Point]:
    center = center or (0,) * p
    return [tuple(c + x for c, x in zip(center, pt)) for pt in product(range(-W, W + 1), repeat=p)]


def ceil_frac(q: Fraction) -> int:
    return ceil(q)
