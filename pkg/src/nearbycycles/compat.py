"""Compatible subspaces and compatible filtrations of a finite-dimensional space."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Iterable, Sequence

from .errors import IncompatibleFiltrations
from .hypercomplex import Hypercomplex, Subquotient, Verdict, shift, subquotient, validate
from .scalars.matrix import Matrix


@dataclass(frozen=True, eq=False)
class Subspace:
    """Column span of ``basis`` inside K^ambient; the basis has full column rank."""

    ambient: int
    basis: Matrix

    @classmethod
    def span(cls, ambient: int, vectors: Matrix | Sequence[Sequence]) -> Subspace:
        if not isinstance(vectors, Matrix):
            vectors = Matrix.from_columns(vectors, nrows=ambient) if vectors else Matrix.zeros(ambient, 0)
        if vectors.nrows != ambient:
            raise ValueError("vectors do not live in the ambient space")
        return cls(ambient, vectors.image() if vectors.ncols else vectors)

    @classmethod
    def zero(cls, ambient: int) -> Subspace:
        return cls(ambient, Matrix.zeros(ambient, 0))

    @classmethod
    def whole(cls, ambient: int) -> Subspace:
        return cls(ambient, Matrix.identity(ambient))

    @property
    def dim(self) -> int:
        return self.basis.ncols

    def __add__(self, other: Subspace) -> Subspace:
        return Subspace.span(self.ambient, Matrix.hstack([self.basis, other.basis], nrows=self.ambient))

    def __and__(self, other: Subspace) -> Subspace:
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient)
        if self.dim == self.ambient:
            return other
        if other.dim == self.ambient:
            return self
        K = Matrix.hstack([self.basis, -other.basis]).kernel()
        return Subspace.span(self.ambient, self.basis @ K.select(rows=range(self.dim)))

    def contains(self, other: Subspace) -> bool:
        if other.dim == 0:
            return True
        return self.basis.solve(other.basis) is not None

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.dim == other.dim and self.contains(other)

    __hash__ = None


def intersect_all(spaces: Iterable[Subspace], ambient: int) -> Subspace:
    out = Subspace.whole(ambient)
    for s in spaces:
        out = out & s
    return out


def sum_all(spaces: Iterable[Subspace], ambient: int) -> Subspace:
    out = Subspace.zero(ambient)
    for s in spaces:
        out = out + s
    return out


def quotient(top: Subspace, bottom: Subspace) -> Subquotient:
    return subquotient(top.basis, bottom.basis)


@dataclass(frozen=True)
class CompatibilityResult:
    compatible: bool
    hypercomplex: Hypercomplex | None = None
    failure: str = ""

    def __bool__(self) -> bool:
        return self.compatible


def compatibility_hypercomplex(ambient: int, subs: Sequence[Subspace]) -> CompatibilityResult:
    """The {−1,0,1}^n candidate hypercomplex, returned iff it is exact everywhere.

    At k with I = {k_i = −1} and J = {k_j = 1} the object is
    (∩_I A_i) / (∩_I A_i ∩ Σ_J A_j); all maps are induced by the identity.
    """
    n = len(subs)
    pts = list(product((-1, 0, 1), repeat=n))
    spaces: dict[tuple, Subquotient] = {}
    for k in pts:
        top = intersect_all((subs[i] for i in range(n) if k[i] == -1), ambient)
        bottom = top & sum_all((subs[j] for j in range(n) if k[j] == 1), ambient)
        spaces[k] = quotient(top, bottom)
    dims = {k: sq.dim for k, sq in spaces.items()}
    diffs = {}
    for k in pts:
        for i in range(n):
            if k[i] < 1 and dims[k] and dims[shift(k, i)]:
                diffs[(i, k)] = spaces[shift(k, i)].coords(spaces[k].reps)
    X = Hypercomplex(n, dims, diffs, {k: (k,) for k in pts})
    v = validate(X)
    if not v:
        return CompatibilityResult(False, None, v.message)
    for k in pts:
        for i in range(n):
            if k[i] != -1:
                continue
            a, b, c = k, shift(k, i), shift(k, i, 2)
            da, db, dc = dims[a], dims[b], dims[c]
            inj = X.d(i, a).rank() == da
            surj = X.d(i, b).rank() == dc
            if not (inj and surj and db == da + dc):
                return CompatibilityResult(
                    False, None, f"sequence in direction {i} through {b} is not short exact")
    return CompatibilityResult(True, X, "")


def restrict_directions(ambient: int, subs: Sequence[Subspace], keep: Sequence[int]) -> CompatibilityResult:
    return compatibility_hypercomplex(ambient, [subs[i] for i in keep])


@dataclass(frozen=True, eq=False)
class Filtration:
    """Increasing, exhaustive, bounded filtration given by its jumps.

    F_ℓ is the space of the last jump at level ≤ ℓ, and 0 below the first jump.
    """

    ambient: int
    jumps: tuple[tuple[int, Subspace], ...]

    def __post_init__(self):
        jumps = tuple(sorted(self.jumps, key=lambda x: x[0]))
        if not jumps:
            raise ValueError("a filtration needs at least one jump")
        levels = [l for l, _ in jumps]
        if len(set(levels)) != len(levels):
            raise ValueError("repeated jump level")
        for (_, a), (_, b) in zip(jumps, jumps[1:]):
            if not b.contains(a):
                raise ValueError("filtration is not increasing")
        if jumps[-1][1].dim != self.ambient:
            raise ValueError("filtration is not exhaustive")
        object.__setattr__(self, "jumps", jumps)

    @classmethod
    def from_bases(cls, ambient: int, jumps: Iterable[tuple[int, Matrix | Sequence]]) -> Filtration:
        return cls(ambient, tuple((int(l), Subspace.span(ambient, b)) for l, b in jumps))

    def levels(self) -> list[int]:
        return [l for l, _ in self.jumps]

    def __getitem__(self, level: int) -> Subspace:
        out = Subspace.zero(self.ambient)
        for l, s in self.jumps:
            if l <= level:
                out = s
        return out


def _relevant_levels(F: Filtration) -> list[int]:
    lv = F.levels()
    return [lv[0] - 1] + lv


def are_filtrations_compatible(filtrations: Sequence[Filtration]) -> Verdict:
    if not filtrations:
        return Verdict(True, "no filtrations")
    ambient = filtrations[0].ambient
    if any(F.ambient != ambient for F in filtrations):
        raise ValueError("filtrations live in different ambient spaces")
    for ell in product(*[_relevant_levels(F) for F in filtrations]):
        res = compatibility_hypercomplex(ambient, [F[l] for F, l in zip(filtrations, ell)])
        if not res:
            return Verdict(False, f"levels {ell}: {res.failure}", {"levels": ell})
    return Verdict(True, "compatible")


@dataclass(frozen=True, eq=False)
class MultigradedResult:
    iterated: Subquotient
    closed: Subquotient
    canonical_map: Matrix
    is_iso: bool

    @property
    def dim(self) -> int:
        return self.closed.dim


def iterated_graded(filtrations: Sequence[Filtration], ell: Sequence[int], sigma: Sequence[int]) -> Subquotient:
    """gr^{F_σ(n)} ... gr^{F_σ(1)} through successive induced filtrations."""
    ambient = filtrations[0].ambient
    top, bottom = Subspace.whole(ambient), Subspace.zero(ambient)
    for i in sigma:
        F, l = filtrations[i], ell[i]
        top, bottom = (top & F[l]) + bottom, (top & F[l - 1]) + bottom
    return quotient(top, bottom)


def closed_graded(filtrations: Sequence[Filtration], ell: Sequence[int]) -> Subquotient:
    ambient = filtrations[0].ambient
    n = len(filtrations)
    top = intersect_all((filtrations[i][ell[i]] for i in range(n)), ambient)
    parts = []
    for j in range(n):
        parts.append(intersect_all(
            (filtrations[i][ell[i] - (1 if i == j else 0)] for i in range(n)), ambient))
    return quotient(top, sum_all(parts, ambient))


def multigraded(filtrations: Sequence[Filtration], ell: Sequence[int], sigma: Sequence[int] | None = None,
                check: bool = True) -> MultigradedResult:
    """Iterated graded in the order σ together with the closed formula and the map between them."""
    n = len(filtrations)
    sigma = list(range(n)) if sigma is None else list(sigma)
    if check:
        v = are_filtrations_compatible(filtrations)
        if not v:
            raise IncompatibleFiltrations(v.message)
    it = iterated_graded(filtrations, ell, sigma)
    cl = closed_graded(filtrations, ell)
    ok = it.dim == cl.dim
    canon = Matrix.zeros(it.dim, cl.dim)
    if ok:
        inside = Subspace(cl.ambient, it.sub).contains(Subspace(cl.ambient, cl.sub)) and \
            Subspace(cl.ambient, it.den).contains(Subspace(cl.ambient, cl.den))
        if inside:
            canon = it.coords(cl.reps)
            ok = canon.rank() == cl.dim
        else:
            ok = False
    return MultigradedResult(it, cl, canon, ok)


def multigraded_all_orders(filtrations: Sequence[Filtration], ell: Sequence[int],
                           check: bool = True) -> dict[tuple, MultigradedResult]:
    if check:
        v = are_filtrations_compatible(filtrations)
        if not v:
            raise IncompatibleFiltrations(v.message)
    return {tuple(s): multigraded(filtrations, ell, s, check=False)
            for s in permutations(range(len(filtrations)))}


def jump_box(filtrations: Sequence[Filtration]) -> list[tuple[int, ...]]:
    """All level tuples at which some multigraded piece can be nonzero."""
    return list(product(*[F.levels() for F in filtrations]))
