"""n-hypercomplexes of finite-dimensional spaces.

A hypercomplex stores, for each lattice point k ∈ Z^n, the dimension of X^k
and for each direction i a matrix d^(i)k : X^k → X^{k+e_i}.  Directions are
0-based.  Differentials in different directions commute; signs appear only
when the total complex is formed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from types import MappingProxyType
from typing import Callable, Iterable, Mapping, Sequence

import flint

from .errors import DirectionOutOfRange, InvalidHypercomplex, NonCommutingSquare, NotAChainMap
from .scalars.matrix import Matrix

Point = tuple


def unit(n: int, i: int) -> Point:
    return tuple(1 if j == i else 0 for j in range(n))


def shift(k: Point, i: int, by: int = 1) -> Point:
    return k[:i] + (k[i] + by,) + k[i + 1:]


@dataclass(frozen=True)
class Verdict:
    ok: bool
    message: str = ""
    details: Mapping = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True, eq=False)
class Hypercomplex:
    """Finite-support n-hypercomplex; absent points are zero objects."""

    n: int
    dims: Mapping[Point, int]
    diffs: Mapping[tuple[int, Point], Matrix] = field(default_factory=dict)
    labels: Mapping[Point, tuple] = field(default_factory=dict)

    def __post_init__(self):
        dims = {tuple(k): int(d) for k, d in self.dims.items() if d}
        diffs = {}
        for (i, k), m in self.diffs.items():
            k = tuple(k)
            if not (0 <= i < self.n) or len(k) != self.n:
                raise InvalidHypercomplex(f"bad differential index {(i, k)}")
            src, tgt = dims.get(k, 0), dims.get(shift(k, i), 0)
            if m.shape != (tgt, src):
                raise InvalidHypercomplex(
                    f"d^({i}) at {k} has shape {m.shape}, expected {(tgt, src)}")
            if src and tgt and not m.is_zero():
                diffs[(i, k)] = m
        object.__setattr__(self, "dims", MappingProxyType(dims))
        object.__setattr__(self, "diffs", MappingProxyType(diffs))
        object.__setattr__(self, "labels", MappingProxyType(dict(self.labels)))

    def dim(self, k: Point) -> int:
        return self.dims.get(tuple(k), 0)

    def d(self, i: int, k: Point) -> Matrix:
        k = tuple(k)
        m = self.diffs.get((i, k))
        if m is None:
            return Matrix.zeros(self.dim(shift(k, i)), self.dim(k))
        return m

    @property
    def support(self) -> list[Point]:
        return sorted(self.dims)

    def is_zero(self) -> bool:
        return not self.dims

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def degrees(self) -> list[int]:
        return sorted({sum(k) for k in self.dims})


Complex = Hypercomplex


def make_complex(dims: Mapping[int, int], diffs: Mapping[int, Matrix] | None = None) -> Hypercomplex:
    """A 1-hypercomplex from degree → dim and degree → d^m."""
    return Hypercomplex(1, {(m,): d for m, d in dims.items()},
                        {(0, (m,)): mat for m, mat in (diffs or {}).items()})


def zero_hypercomplex(n: int) -> Hypercomplex:
    return Hypercomplex(n, {})


# -- validation ---------------------------------------------------------------


def validate(X: Hypercomplex) -> Verdict:
    """Square-zero in each direction and pairwise commuting squares."""
    for k in X.support:
        for i in range(X.n):
            if X.dim(shift(k, i)) == 0:
                continue
            if not (X.d(i, shift(k, i)) @ X.d(i, k)).is_zero():
                return Verdict(False, f"d^({i})∘d^({i}) != 0 at {k}", {"direction": i, "point": k})
            for j in range(i + 1, X.n):
                lhs = X.d(j, shift(k, i)) @ X.d(i, k)
                rhs = X.d(i, shift(k, j)) @ X.d(j, k)
                if lhs != rhs:
                    return Verdict(False, f"square in directions ({i},{j}) at {k} does not commute",
                                   {"directions": (i, j), "point": k})
    return Verdict(True, "valid")


def _require_valid(X: Hypercomplex):
    v = validate(X)
    if not v:
        raise InvalidHypercomplex(v.message)


# -- maps ---------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class HyperMap:
    source: Hypercomplex
    target: Hypercomplex
    components: Mapping[Point, Matrix] = field(default_factory=dict)

    def __post_init__(self):
        if self.source.n != self.target.n:
            raise InvalidHypercomplex("map between hypercomplexes of different dimension")
        comps = {}
        for k, m in self.components.items():
            k = tuple(k)
            if m.shape != (self.target.dim(k), self.source.dim(k)):
                raise InvalidHypercomplex(f"component at {k} has shape {m.shape}")
            if m.nrows and m.ncols:
                comps[k] = m
        object.__setattr__(self, "components", MappingProxyType(comps))

    def at(self, k: Point) -> Matrix:
        k = tuple(k)
        m = self.components.get(k)
        if m is None:
            return Matrix.zeros(self.target.dim(k), self.source.dim(k))
        return m

    def compose(self, g: HyperMap) -> HyperMap:
        """self ∘ g."""
        pts = set(g.source.dims) & set(self.target.dims)
        return HyperMap(g.source, self.target, {k: self.at(k) @ g.at(k) for k in pts})


def identity_map(X: Hypercomplex) -> HyperMap:
    return HyperMap(X, X, {k: Matrix.identity(d) for k, d in X.dims.items()})


def check_hypermap(f: HyperMap) -> Verdict:
    X, Y = f.source, f.target
    for k in set(X.dims) | set(Y.dims):
        for i in range(X.n):
            k1 = shift(k, i)
            if not (X.dim(k) and Y.dim(k1)):
                continue
            if Y.d(i, k) @ f.at(k) != f.at(k1) @ X.d(i, k):
                return Verdict(False, f"map does not commute with d^({i}) at {k}", {"point": k})
    return Verdict(True, "chain map")


# -- subquotients -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Subquotient:
    """Z/B for nested column spaces B ⊆ Z of an ambient space.

    ``reps`` are columns of Z completing a basis of B to one of Z; ``coords``
    sends vectors of Z to coordinates in the basis given by ``reps``.
    """

    ambient: int
    sub: Matrix
    den: Matrix
    reps: Matrix
    proj: Matrix

    @property
    def dim(self) -> int:
        return self.reps.ncols

    def coords(self, V: Matrix) -> Matrix:
        return self.proj @ V

    def contains(self, V: Matrix) -> bool:
        """Whether the columns of V lie in Z."""
        if V.ncols == 0 or self.sub.ncols == self.ambient:
            return True
        return self.sub.solve(V) is not None


def subquotient(Z: Matrix, B: Matrix) -> Subquotient:
    n = Z.nrows
    if B.ncols == 0:
        reps = Z
    else:
        _, pivots = Matrix.hstack([B, Z]).rref()
        reps = Z.select(cols=[p - B.ncols for p in pivots if p >= B.ncols])
    if reps.ncols == 0:
        proj = Matrix.zeros(0, n)
    else:
        L = Matrix.hstack([B, reps]).left_inverse()
        proj = L.select(rows=range(B.ncols, B.ncols + reps.ncols))
    return Subquotient(n, Z, B, reps, proj)


def cohomology_at(d_in: Matrix, d_out: Matrix) -> Subquotient:
    """ker d_out / im d_in."""
    Z = d_out.kernel() if d_out.nrows else Matrix.identity(d_out.ncols)
    B = d_in.image() if d_in.ncols else Matrix.zeros(d_in.nrows, 0)
    return subquotient(Z, B)


@dataclass(frozen=True)
class CohomologyGroup:
    degree: int
    dim: int
    basis: Matrix
    space: Subquotient


def cohomology(C: Hypercomplex) -> list[CohomologyGroup]:
    """Cohomology of a complex, one entry per degree carrying a nonzero object."""
    if C.n != 1:
        raise InvalidHypercomplex("cohomology expects a complex")
    out = []
    for (m,) in C.support:
        sq = cohomology_at(C.d(0, (m - 1,)), C.d(0, (m,)))
        out.append(CohomologyGroup(m, sq.dim, sq.reps, sq))
    return out


def cohomology_dims(C: Hypercomplex) -> dict[int, int]:
    return {g.degree: g.dim for g in cohomology(C) if g.dim}


def is_acyclic(C: Hypercomplex) -> bool:
    return all(g.dim == 0 for g in cohomology(C))


# -- assembly helpers ---------------------------------------------------------


def assemble(row_sizes: Sequence[int], col_sizes: Sequence[int], blocks: Mapping[tuple[int, int], Matrix]) -> Matrix:
    """Block matrix from (row block, column block) → Matrix; absent blocks are zero."""
    R, C = sum(row_sizes), sum(col_sizes)
    roff = [sum(row_sizes[:a]) for a in range(len(row_sizes))]
    coff = [sum(col_sizes[:b]) for b in range(len(col_sizes))]
    if all(m.is_rational() for m in blocks.values()):
        q = flint.fmpq_mat(R, C)
        for (a, b), m in blocks.items():
            if m.nrows == 0 or m.ncols == 0:
                continue
            ents = m.flint().entries()
            r0, c0, w = roff[a], coff[b], m.ncols
            for e, x in enumerate(ents):
                if x != 0:
                    q[r0 + e // w, c0 + e % w] = x
        return Matrix._wrap_q(q)
    rows = [[0] * C for _ in range(R)]
    for (a, b), m in blocks.items():
        for i, r in enumerate(m.tolist()):
            rows[roff[a] + i][coff[b]:coff[b] + m.ncols] = r
    return Matrix(rows, ncols=C)


@dataclass(frozen=True)
class TotalLayout:
    """Summands of each total degree, points in descending lexicographic order.

    In degree 1 this lists e_1, e_2, ... so the first summand is the step in
    the first direction.
    """

    summands: Mapping[int, tuple[Point, ...]]

    def offset(self, m: int, k: Point, X: Hypercomplex) -> int:
        off = 0
        for q in self.summands[m]:
            if q == k:
                return off
            off += X.dim(q)
        raise KeyError(k)


def total_layout(X: Hypercomplex) -> TotalLayout:
    by_deg: dict[int, list] = {}
    for k in X.support:
        by_deg.setdefault(sum(k), []).append(k)
    return TotalLayout(MappingProxyType({m: tuple(sorted(v, reverse=True)) for m, v in sorted(by_deg.items())}))


def sign(k: Point, j: int, order: Sequence[int] | None = None) -> int:
    """(−1)^{sum of k_l over directions l preceding j in ``order``}."""
    order = list(range(len(k))) if order is None else list(order)
    pos = order.index(j)
    return -1 if sum(k[l] for l in order[:pos]) % 2 else 1


def total_complex(X: Hypercomplex, order: Sequence[int] | None = None, check: bool = True) -> Hypercomplex:
    """s(X): sum over total degree, component (−1)^{k_1+...+k_{j−1}} d^(j)."""
    if check:
        _require_valid(X)
    lay = total_layout(X)
    dims = {}
    labels = {}
    for m, pts in lay.summands.items():
        dims[(m,)] = sum(X.dim(k) for k in pts)
        labels[(m,)] = tuple((k, a) for k in pts for a in range(X.dim(k)))
    diffs = {}
    for m, pts in lay.summands.items():
        tgt = lay.summands.get(m + 1)
        if not tgt:
            continue
        index = {k: b for b, k in enumerate(tgt)}
        blocks = {}
        for a, k in enumerate(pts):
            for j in range(X.n):
                k1 = shift(k, j)
                if k1 in index and (j, k) in X.diffs:
                    blocks[(index[k1], a)] = X.d(j, k) * sign(k, j, order)
        diffs[(0, (m,))] = assemble([X.dim(k) for k in tgt], [X.dim(k) for k in pts], blocks)
    return Hypercomplex(1, dims, diffs, labels)


def total_map(f: HyperMap, order: Sequence[int] | None = None) -> HyperMap:
    """s(f): block diagonal over summands."""
    X, Y = f.source, f.target
    sX, sY = total_complex(X, order, check=False), total_complex(Y, order, check=False)
    lx, ly = total_layout(X), total_layout(Y)
    comps = {}
    for m in set(lx.summands) & set(ly.summands):
        src, tgt = lx.summands[m], ly.summands[m]
        index = {k: b for b, k in enumerate(tgt)}
        blocks = {(index[k], a): f.at(k) for a, k in enumerate(src) if k in index}
        comps[(m,)] = assemble([Y.dim(k) for k in tgt], [X.dim(k) for k in src], blocks)
    return HyperMap(sX, sY, comps)


# -- section functor F_i and directional cohomology ------------------------------


def _drop(k: Point, i: int) -> Point:
    return k[:i] + k[i + 1:]


def _insert(q: Point, i: int, m: int) -> Point:
    return q[:i] + (m,) + q[i:]


def _check_direction(X: Hypercomplex, i: int):
    if not 0 <= i < X.n:
        raise DirectionOutOfRange(f"direction {i} outside 0..{X.n - 1}")


@dataclass(frozen=True)
class SectionComplex:
    """F_i(X): the complex m ↦ X_i^m of (n−1)-hypercomplexes."""

    direction: int
    terms: Mapping[int, Hypercomplex]
    maps: Mapping[int, HyperMap]


def slice_at(X: Hypercomplex, i: int, m: int) -> Hypercomplex:
    dims = {_drop(k, i): d for k, d in X.dims.items() if k[i] == m}
    diffs = {}
    for (j, k), mat in X.diffs.items():
        if j != i and k[i] == m:
            diffs[(j if j < i else j - 1, _drop(k, i))] = mat
    return Hypercomplex(X.n - 1, dims, diffs)


def section_complex(X: Hypercomplex, i: int) -> SectionComplex:
    _check_direction(X, i)
    levels = sorted({k[i] for k in X.dims})
    terms = {m: slice_at(X, i, m) for m in levels}
    maps = {}
    for m in levels:
        if m + 1 not in terms:
            continue
        comps = {q: X.d(i, _insert(q, i, m)) for q in terms[m].dims}
        maps[m] = HyperMap(terms[m], terms[m + 1], comps)
    return SectionComplex(i, MappingProxyType(terms), MappingProxyType(maps))


@dataclass(frozen=True)
class DirectionCohomology:
    """H_i(X) as an n-hypercomplex with zero differentials in direction i."""

    direction: int
    source: Hypercomplex
    result: Hypercomplex
    spaces: Mapping[Point, Subquotient]


def cohomology_in_direction(X: Hypercomplex, i: int) -> DirectionCohomology:
    _check_direction(X, i)
    spaces = {}
    for k in X.support:
        spaces[k] = cohomology_at(X.d(i, shift(k, i, -1)), X.d(i, k))
    dims = {k: sq.dim for k, sq in spaces.items() if sq.dim}
    diffs = {}
    for k in dims:
        for j in range(X.n):
            k1 = shift(k, j)
            if j == i or k1 not in dims:
                continue
            diffs[(j, k)] = spaces[k1].coords(X.d(j, k) @ spaces[k].reps)
    return DirectionCohomology(i, X, Hypercomplex(X.n, dims, diffs), MappingProxyType(spaces))


def direction_cohomology(X: Hypercomplex, i: int, p: int) -> Hypercomplex:
    """H_i^p(X) as an (n−1)-hypercomplex."""
    return slice_at(cohomology_in_direction(X, i).result, i, p)


def induced_on_direction(f: HyperMap, hx: DirectionCohomology, hy: DirectionCohomology) -> HyperMap:
    comps = {}
    for k in hx.result.dims:
        if k in hy.result.dims:
            comps[k] = hy.spaces[k].coords(f.at(k) @ hx.spaces[k].reps)
    return HyperMap(hx.result, hy.result, comps)


def iterated_cohomology(X: Hypercomplex, order: Sequence[int] | None = None) -> Hypercomplex:
    """H_{o_1}(H_{o_2}(...H_{o_n}(X))), taking the last direction of ``order`` first."""
    order = list(range(X.n)) if order is None else list(order)
    for i in reversed(order):
        X = cohomology_in_direction(X, i).result
    return X


# -- quasi-isomorphisms ---------------------------------------------------------


def cone(f: HyperMap) -> Hypercomplex:
    """Cone(f)^m = X^{m+1} ⊕ Y^m, d(x, y) = (−d x, f x + d y)."""
    X, Y = f.source, f.target
    if X.n != 1:
        raise InvalidHypercomplex("cone expects complexes")
    degs = sorted({m - 1 for (m,) in X.dims} | {m for (m,) in Y.dims})
    dims = {(m,): X.dim((m + 1,)) + Y.dim((m,)) for m in degs}
    diffs = {}
    for m in degs:
        xs, ys = X.dim((m + 1,)), Y.dim((m,))
        xt, yt = X.dim((m + 2,)), Y.dim((m + 1,))
        if not (xs + ys) or not (xt + yt):
            continue
        blocks = {(0, 0): -X.d(0, (m + 1,)), (1, 0): f.at((m + 1,)), (1, 1): Y.d(0, (m,))}
        diffs[(0, (m,))] = assemble([xt, yt], [xs, ys], blocks)
    return Hypercomplex(1, dims, diffs)


def is_quasi_iso(f: HyperMap) -> Verdict:
    if f.source.n != 1:
        raise InvalidHypercomplex("is_quasi_iso expects a map of complexes")
    chk = check_hypermap(f)
    if not chk:
        raise NotAChainMap(chk.message)
    dims = cohomology_dims(cone(f))
    if dims:
        return Verdict(False, "cone has cohomology", {"cone_dims": dims})
    return Verdict(True, "cone acyclic")


def is_iso_objectwise(f: HyperMap) -> bool:
    pts = set(f.source.dims) | set(f.target.dims)
    for k in pts:
        a, b = f.source.dim(k), f.target.dim(k)
        if a != b:
            return False
        if a and f.at(k).rank() != a:
            return False
    return True


@dataclass(frozen=True)
class QuasihypRecord:
    hypothesis_holds: bool
    conclusion_holds: bool

    @property
    def implication_holds(self) -> bool:
        return self.conclusion_holds or not self.hypothesis_holds


def induced_iterated(f: HyperMap, order: Sequence[int] | None = None) -> HyperMap:
    order = list(range(f.source.n)) if order is None else list(order)
    for i in reversed(order):
        hx = cohomology_in_direction(f.source, i)
        hy = cohomology_in_direction(f.target, i)
        f = induced_on_direction(f, hx, hy)
    return f


def check_quasihyp(f: HyperMap, order: Sequence[int] | None = None) -> QuasihypRecord:
    """Record whether f is an iso on iterated cohomology and whether s(f) is a quasi-iso."""
    _require_valid(f.source)
    _require_valid(f.target)
    chk = check_hypermap(f)
    if not chk:
        raise NotAChainMap(chk.message)
    hyp = is_iso_objectwise(induced_iterated(f, order))
    concl = bool(is_quasi_iso(total_map(f)))
    return QuasihypRecord(hyp, concl)


def check_acyclic_direction(X: Hypercomplex) -> Verdict:
    """If some F_i(X) is exact, assert that s(X) is acyclic."""
    _require_valid(X)
    for i in range(X.n):
        if cohomology_in_direction(X, i).result.is_zero():
            dims = cohomology_dims(total_complex(X))
            if dims:
                return Verdict(False, f"direction {i} exact but total complex has cohomology",
                               {"direction": i, "dims": dims, "hypothesis": "present"})
            return Verdict(True, f"direction {i} exact; total complex acyclic",
                           {"direction": i, "hypothesis": "present"})
    return Verdict(True, "hypothesis absent", {"hypothesis": "absent"})


# -- cube ---------------------------------------------------------------------


def cube(n: int, objects: Callable[[Point], int] | Mapping[Point, int],
         maps: Callable[[int, Point], Matrix] | Mapping[tuple[int, Point], Matrix],
         labels: Mapping[Point, tuple] | None = None) -> Hypercomplex:
    """Cube(X)^k = X^{k−1} for k ∈ {0,1}^n, zero elsewhere.

    ``objects`` gives dim X^j and ``maps`` the map f^(i)j : X^j → X^{j+e_i}
    for j ∈ {−1,0}^n; the commuting of every square is checked.
    """
    obj = objects if callable(objects) else (lambda j: objects.get(tuple(j), 0))
    mp = maps if callable(maps) else (lambda i, j: maps.get((i, tuple(j))))
    dims, diffs, labs = {}, {}, {}
    for k in product((0, 1), repeat=n):
        j = tuple(x - 1 for x in k)
        dims[k] = obj(j)
        if labels and j in labels:
            labs[k] = labels[j]
    for k in dims:
        for i in range(n):
            if k[i] == 0:
                j = tuple(x - 1 for x in k)
                m = mp(i, j)
                if m is None:
                    m = Matrix.zeros(dims[shift(k, i)], dims[k])
                diffs[(i, k)] = m
    X = Hypercomplex(n, dims, diffs, labs)
    v = validate(X)
    if not v:
        raise NonCommutingSquare(v.message)
    return X


# -- constructions ------------------------------------------------------------


def direct_sum(X: Hypercomplex, Y: Hypercomplex) -> Hypercomplex:
    if X.n != Y.n:
        raise InvalidHypercomplex("direct sum of different dimensions")
    pts = set(X.dims) | set(Y.dims)
    dims = {k: X.dim(k) + Y.dim(k) for k in pts}
    diffs = {}
    for k in pts:
        for i in range(X.n):
            k1 = shift(k, i)
            if k1 in pts:
                diffs[(i, k)] = Matrix.block_diag([X.d(i, k), Y.d(i, k)])
    return Hypercomplex(X.n, dims, diffs)


def inclusion_first(X: Hypercomplex, S: Hypercomplex) -> HyperMap:
    """X → X ⊕ S."""
    T = direct_sum(X, S)
    comps = {k: Matrix.vstack([Matrix.identity(X.dim(k)), Matrix.zeros(S.dim(k), X.dim(k))])
             for k in X.dims}
    return HyperMap(X, T, comps)


def projection_first(X: Hypercomplex, S: Hypercomplex) -> HyperMap:
    """X ⊕ S → X."""
    T = direct_sum(X, S)
    comps = {k: Matrix.hstack([Matrix.identity(X.dim(k)), Matrix.zeros(X.dim(k), S.dim(k))])
             for k in X.dims}
    return HyperMap(T, X, comps)


def tensor(X: Hypercomplex, Y: Hypercomplex) -> Hypercomplex:
    """External product: an (n+m)-hypercomplex with X^a ⊗ Y^b at (a, b)."""
    dims, diffs = {}, {}
    for a, da in X.dims.items():
        for b, db in Y.dims.items():
            dims[a + b] = da * db
    for a in X.dims:
        for b in Y.dims:
            k = a + b
            for i in range(X.n):
                if shift(a, i) in X.dims:
                    diffs[(i, k)] = X.d(i, a).kron(Matrix.identity(Y.dim(b)))
            for j in range(Y.n):
                if shift(b, j) in Y.dims:
                    diffs[(X.n + j, k)] = Matrix.identity(X.dim(a)).kron(Y.d(j, b))
    return Hypercomplex(X.n + Y.n, dims, diffs)


def conjugate(X: Hypercomplex, P: Mapping[Point, Matrix]) -> tuple[Hypercomplex, HyperMap]:
    """Change basis objectwise by invertible P_k; returns the new X and the iso X → X'."""
    Pinv = {k: P[k].inverse() for k in X.dims}
    diffs = {}
    for (i, k), m in X.diffs.items():
        diffs[(i, k)] = P[shift(k, i)] @ m @ Pinv[k]
    Y = Hypercomplex(X.n, dict(X.dims), diffs)
    return Y, HyperMap(X, Y, {k: P[k] for k in X.dims})


def permute_directions(X: Hypercomplex, perm: Sequence[int]) -> Hypercomplex:
    """Direction i of the result is direction perm[i] of X."""
    inv = {p: i for i, p in enumerate(perm)}
    dims = {tuple(k[p] for p in perm): d for k, d in X.dims.items()}
    diffs = {(inv[i], tuple(k[p] for p in perm)): m for (i, k), m in X.diffs.items()}
    return Hypercomplex(X.n, dims, diffs)


def partial_total(X: Hypercomplex, inner: Sequence[int]) -> Hypercomplex:
    """Collapse the ``inner`` directions into one total direction, placed last.

    The inner total degree uses the sign rule over ``inner`` in the given
    order; the remaining directions keep their order and carry no sign.
    """
    inner = list(inner)
    outer = [i for i in range(X.n) if i not in inner]
    dims: dict[Point, int] = {}
    members: dict[Point, list] = {}
    for k in X.support:
        q = tuple(k[i] for i in outer) + (sum(k[i] for i in inner),)
        members.setdefault(q, []).append(k)
        dims[q] = dims.get(q, 0) + X.dim(k)
    for q in members:
        members[q].sort(reverse=True)
    diffs = {}
    m_out = len(outer)
    for q, ks in members.items():
        for a in range(m_out + 1):
            q1 = shift(q, a)
            if q1 not in members:
                continue
            tgt = members[q1]
            index = {k: b for b, k in enumerate(tgt)}
            blocks = {}
            for c, k in enumerate(ks):
                if a < m_out:
                    i = outer[a]
                    k1 = shift(k, i)
                    if k1 in index:
                        blocks[(index[k1], c)] = X.d(i, k)
                else:
                    for pos, i in enumerate(inner):
                        k1 = shift(k, i)
                        if k1 in index:
                            s = -1 if sum(k[l] for l in inner[:pos]) % 2 else 1
                            blocks[(index[k1], c)] = X.d(i, k) * s
            diffs[(a, q)] = assemble([X.dim(k) for k in tgt], [X.dim(k) for k in ks], blocks)
    labels = {q: tuple((k, c) for k in ks for c in range(X.dim(k))) for q, ks in members.items()}
    return Hypercomplex(m_out + 1, dims, diffs, labels)
