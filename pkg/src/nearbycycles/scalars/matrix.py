"""Immutable dense matrices over Q or over the tower Q(ζ_N)(τ).

Rational matrices live in a flint ``fmpq_mat``; matrices with tower entries
keep a tuple of rows of :class:`Scalar` and use plain Gauss-Jordan
elimination.  Maps act on column vectors, so a map from a space of
dimension m to one of dimension n is an n×m matrix.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

import flint

from .field import Scalar, ScalarField, to_fmpq, to_fraction


def _is_rational_entry(x) -> bool:
    return isinstance(x, (int, Fraction, flint.fmpq, flint.fmpz)) or (
        isinstance(x, Scalar) and x.is_rational()
    )


def _as_fmpq(x) -> flint.fmpq:
    if isinstance(x, Scalar):
        return to_fmpq(x.to_fraction())
    return to_fmpq(x)


class Matrix:
    """Dense matrix; entries read back as ``Fraction`` or ``Scalar``."""

    __slots__ = ("nrows", "ncols", "_q", "_s", "order")

    def __init__(self, rows: Sequence[Sequence] = (), ncols: int | None = None):
        rows = [list(r) for r in rows]
        self.nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        self.ncols = ncols
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        if all(_is_rational_entry(x) for r in rows for x in r):
            self._q = flint.fmpq_mat(self.nrows, ncols, [_as_fmpq(x) for r in rows for x in r])
            self._s = None
            self.order = 1
        else:
            n = lcm(*[x.order for r in rows for x in r if isinstance(x, Scalar)])
            K = ScalarField(n)
            self._q = None
            self._s = tuple(tuple(K(x) for x in r) for r in rows)
            self.order = n

    # -- constructors -------------------------------------------------------

    @classmethod
    def _wrap_q(cls, q: flint.fmpq_mat) -> Matrix:
        out = cls.__new__(cls)
        out.nrows, out.ncols = q.nrows(), q.ncols()
        out._q, out._s, out.order = q, None, 1
        return out

    @classmethod
    def _wrap_s(cls, rows, nrows: int, ncols: int, order: int) -> Matrix:
        out = cls.__new__(cls)
        out.nrows, out.ncols = nrows, ncols
        out._q, out._s, out.order = None, tuple(tuple(r) for r in rows), order
        return out

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> Matrix:
        return cls._wrap_q(flint.fmpq_mat(nrows, ncols))

    @classmethod
    def identity(cls, n: int) -> Matrix:
        q = flint.fmpq_mat(n, n)
        for i in range(n):
            q[i, i] = 1
        return cls._wrap_q(q)

    @classmethod
    def diagonal(cls, entries: Sequence) -> Matrix:
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int | None = None) -> Matrix:
        columns = [list(c) for c in columns]
        if not columns:
            return cls.zeros(nrows or 0, 0)
        return cls([list(r) for r in zip(*columns)], ncols=len(columns))

    @classmethod
    def unit_columns(cls, n: int, indices: Sequence[int]) -> Matrix:
        """The n×len(indices) matrix whose columns are the chosen unit vectors."""
        q = flint.fmpq_mat(n, len(indices))
        for c, i in enumerate(indices):
            q[i, c] = 1
        return cls._wrap_q(q)

    # -- access -------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def is_rational(self) -> bool:
        return self._q is not None

    def __getitem__(self, ij):
        i, j = ij
        if self._q is not None:
            return to_fraction(self._q[i, j])
        return self._s[i][j]

    def tolist(self) -> list[list]:
        if self._q is not None:
            return [[to_fraction(self._q[i, j]) for j in range(self.ncols)] for i in range(self.nrows)]
        return [list(r) for r in self._s]

    def column(self, j: int) -> list:
        return [self[i, j] for i in range(self.nrows)]

    def columns(self) -> list[list]:
        return [self.column(j) for j in range(self.ncols)]

    def flint(self) -> flint.fmpq_mat:
        if self._q is None:
            raise ValueError("matrix has non-rational entries")
        return self._q

    def to_tower(self, order: int | None = None) -> Matrix:
        n = order or self.order
        K = ScalarField(n)
        rows = [[K(x) for x in r] for r in self.tolist()]
        return Matrix._wrap_s(rows, self.nrows, self.ncols, n)

    def simplify(self) -> Matrix:
        """Rational backend if every entry happens to be rational."""
        if self._q is not None:
            return self
        if all(x.is_rational() for r in self._s for x in r):
            return Matrix(self._s, ncols=self.ncols)
        return self

    # -- structure ----------------------------------------------------------

    @property
    def T(self) -> Matrix:
        if self._q is not None:
            return Matrix._wrap_q(self._q.transpose())
        return Matrix._wrap_s(zip(*self._s) if self.nrows else [[] for _ in range(self.ncols)],
                              self.ncols, self.nrows, self.order)

    def select(self, rows: Sequence[int] | None = None, cols: Sequence[int] | None = None) -> Matrix:
        rows = range(self.nrows) if rows is None else rows
        cols = range(self.ncols) if cols is None else cols
        if self._q is not None:
            q = flint.fmpq_mat(len(rows), len(cols))
            src = self._q
            for a, i in enumerate(rows):
                for b, j in enumerate(cols):
                    q[a, b] = src[i, j]
            return Matrix._wrap_q(q)
        return Matrix._wrap_s([[self._s[i][j] for j in cols] for i in rows],
                              len(rows), len(cols), self.order)

    @staticmethod
    def hstack(blocks: Sequence[Matrix], nrows: int | None = None) -> Matrix:
        blocks = list(blocks)
        if not blocks:
            return Matrix.zeros(nrows or 0, 0)
        n = blocks[0].nrows
        if any(b.nrows != n for b in blocks):
            raise ValueError("hstack: row mismatch")
        if all(b._q is not None for b in blocks):
            parts = [b._q.tolist() for b in blocks if b.ncols]
            flat = [x for i in range(n) for part in parts for x in part[i]]
            return Matrix._wrap_q(flint.fmpq_mat(n, sum(b.ncols for b in blocks), flat))
        rows = [[] for _ in range(n)]
        for b in blocks:
            for i, r in enumerate(b.tolist()):
                rows[i].extend(r)
        return Matrix(rows, ncols=sum(b.ncols for b in blocks))

    @staticmethod
    def vstack(blocks: Sequence[Matrix], ncols: int | None = None) -> Matrix:
        blocks = list(blocks)
        if not blocks:
            return Matrix.zeros(0, ncols or 0)
        return Matrix.hstack([b.T for b in blocks]).T

    @staticmethod
    def block_diag(blocks: Sequence[Matrix]) -> Matrix:
        blocks = list(blocks)
        R = sum(b.nrows for b in blocks)
        C = sum(b.ncols for b in blocks)
        if all(b._q is not None for b in blocks):
            q = flint.fmpq_mat(R, C)
            r0 = c0 = 0
            for b in blocks:
                for i in range(b.nrows):
                    for j in range(b.ncols):
                        q[r0 + i, c0 + j] = b._q[i, j]
                r0 += b.nrows
                c0 += b.ncols
            return Matrix._wrap_q(q)
        rows = [[0] * C for _ in range(R)]
        r0 = c0 = 0
        for b in blocks:
            for i, r in enumerate(b.tolist()):
                rows[r0 + i][c0:c0 + b.ncols] = r
            r0 += b.nrows
            c0 += b.ncols
        return Matrix(rows, ncols=C)

    def kron(self, other: Matrix) -> Matrix:
        if self._q is not None and other._q is not None:
            A, B = self._q, other._q
            rb, cb = B.nrows(), B.ncols()
            q = flint.fmpq_mat(self.nrows * rb, self.ncols * cb)
            bnz = [(k, l, B[k, l]) for k in range(rb) for l in range(cb) if B[k, l] != 0]
            for i in range(self.nrows):
                for j in range(self.ncols):
                    x = A[i, j]
                    if x != 0:
                        for k, l, y in bnz:
                            q[i * rb + k, j * cb + l] = x * y
            return Matrix._wrap_q(q)
        a, b = self.tolist(), other.tolist()
        rows = []
        for ra in a:
            for rb in b:
                rows.append([x * y for x in ra for y in rb])
        return Matrix(rows, ncols=self.ncols * other.ncols)

    # -- arithmetic ---------------------------------------------------------

    def _check_same(self, other: Matrix):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: Matrix) -> Matrix:
        self._check_same(other)
        if self._q is not None and other._q is not None:
            return Matrix._wrap_q(self._q + other._q)
        a, b = self.tolist(), other.tolist()
        return Matrix([[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)], ncols=self.ncols)

    def __neg__(self) -> Matrix:
        if self._q is not None:
            return Matrix._wrap_q(-self._q)
        return Matrix._wrap_s([[-x for x in r] for r in self._s], self.nrows, self.ncols, self.order)

    def __sub__(self, other: Matrix) -> Matrix:
        return self + (-other)

    def __mul__(self, c) -> Matrix:
        if isinstance(c, Matrix):
            return self @ c
        if self._q is not None and _is_rational_entry(c):
            return Matrix._wrap_q(self._q * _as_fmpq(c))
        return Matrix([[x * c for x in r] for r in self.tolist()], ncols=self.ncols)

    __rmul__ = __mul__

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        if self._q is not None and other._q is not None:
            return Matrix._wrap_q(self._q * other._q)
        a = self.tolist()
        bt = other.T.tolist()
        n = lcm(self.order, other.order)
        K = ScalarField(n)
        rows = []
        for ra in a:
            nz = [(k, x) for k, x in enumerate(ra) if x]
            row = []
            for cb in bt:
                acc = K.zero
                for k, x in nz:
                    y = cb[k]
                    if y:
                        acc = acc + x * y
                row.append(acc)
            rows.append(row)
        return Matrix._wrap_s(rows, self.nrows, other.ncols, n)

    def power(self, e: int) -> Matrix:
        if self.nrows != self.ncols:
            raise ValueError("power of a non-square matrix")
        out, base = Matrix.identity(self.nrows), self
        while e:
            if e & 1:
                out = out @ base
            e >>= 1
            if e:
                base = base @ base
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.shape != other.shape:
            return False
        if self._q is not None and other._q is not None:
            return self._q == other._q
        return all(x == y for ra, rb in zip(self.tolist(), other.tolist()) for x, y in zip(ra, rb))

    __hash__ = None

    def is_zero(self) -> bool:
        if self._q is not None:
            return self._q == flint.fmpq_mat(self.nrows, self.ncols)
        return not any(x for r in self._s for x in r)

    def is_identity(self) -> bool:
        return self.nrows == self.ncols and self == Matrix.identity(self.nrows)

    # -- elimination --------------------------------------------------------

    def rref(self) -> tuple[Matrix, list[int]]:
        """Reduced row echelon form and the pivot columns."""
        if self._q is not None:
            if self.nrows == 0 or self.ncols == 0:
                return self, []
            r, rank = self._q.rref()
            pivots = []
            for i in range(rank):
                j = pivots[-1] + 1 if pivots else 0
                while r[i, j] == 0:
                    j += 1
                pivots.append(j)
            return Matrix._wrap_q(r), pivots
        rows, pivots = _gauss_jordan([list(r) for r in self._s], self.ncols)
        return Matrix._wrap_s(rows, self.nrows, self.ncols, self.order), pivots

    def rank(self) -> int:
        if self._q is not None:
            if self.nrows == 0 or self.ncols == 0:
                return 0
            return self._q.rank()
        return len(self.rref()[1])

    def kernel(self) -> Matrix:
        """Columns spanning the null space, one per free column of the rref."""
        r, pivots = self.rref()
        free = [j for j in range(self.ncols) if j not in set(pivots)]
        if r._q is not None:
            q = flint.fmpq_mat(self.ncols, len(free))
            rq = r._q
            for c, f in enumerate(free):
                q[f, c] = 1
                for i, p in enumerate(pivots):
                    q[p, c] = -rq[i, f]
            return Matrix._wrap_q(q)
        K = ScalarField(self.order)
        cols = []
        for f in free:
            v = [K.zero] * self.ncols
            v[f] = K.one
            for i, p in enumerate(pivots):
                v[p] = -r[i, f]
            cols.append(v)
        return Matrix.from_columns(cols, nrows=self.ncols) if cols else Matrix.zeros(self.ncols, 0)

    def image(self) -> Matrix:
        """The pivot columns of the matrix itself: a basis of the column space."""
        _, pivots = self.rref()
        return self.select(cols=pivots)

    def solve(self, rhs: Matrix) -> Matrix | None:
        """Some X with self @ X = rhs, or None when the system is inconsistent."""
        if rhs.nrows != self.nrows:
            raise ValueError("solve: row mismatch")
        aug = Matrix.hstack([self, rhs]) if self.ncols else rhs
        r, pivots = aug.rref()
        if any(p >= self.ncols for p in pivots):
            return None
        if r._q is not None:
            q = flint.fmpq_mat(self.ncols, rhs.ncols)
            rows = r._q.tolist()
            for i, p in enumerate(pivots):
                for c in range(rhs.ncols):
                    q[p, c] = rows[i][self.ncols + c]
            return Matrix._wrap_q(q)
        X = [[0] * rhs.ncols for _ in range(self.ncols)]
        for i, p in enumerate(pivots):
            for c in range(rhs.ncols):
                X[p][c] = r[i, self.ncols + c]
        if not X:
            return Matrix.zeros(0, rhs.ncols)
        return Matrix(X, ncols=rhs.ncols)

    def left_inverse(self) -> Matrix:
        """L with L @ self = I, for a matrix of full column rank."""
        n, m = self.nrows, self.ncols
        r, pivots = Matrix.hstack([self, Matrix.identity(n)]).rref()
        if pivots[:m] != list(range(m)):
            raise ValueError("left_inverse needs full column rank")
        return r.select(rows=range(m), cols=range(m, m + n))

    def inverse(self) -> Matrix:
        if self.nrows != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        if self._q is not None:
            return Matrix._wrap_q(self._q.inv())
        return self.left_inverse()

    def det(self):
        if self._q is not None:
            return to_fraction(self._q.det())
        r = [list(x) for x in self._s]
        return _det_generic(r, ScalarField(self.order))

    def charpoly(self) -> flint.fmpq_poly:
        return self.flint().charpoly()

    def __repr__(self) -> str:
        from .serial import format_scalar

        body = "; ".join(", ".join(format_scalar(x) for x in r) for r in self.tolist())
        return f"Matrix({self.nrows}x{self.ncols})[{body}]"


def _gauss_jordan(rows: list[list], ncols: int) -> tuple[list[list], list[int]]:
    pivots = []
    prow = 0
    nrows = len(rows)
    for c in range(ncols):
        if prow >= nrows:
            break
        src = next((i for i in range(prow, nrows) if rows[i][c]), None)
        if src is None:
            continue
        rows[prow], rows[src] = rows[src], rows[prow]
        inv = rows[prow][c].inverse() if isinstance(rows[prow][c], Scalar) else 1 / Fraction(rows[prow][c])
        rows[prow] = [x * inv for x in rows[prow]]
        for i in range(nrows):
            if i != prow and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y if y else x for x, y in zip(rows[i], rows[prow])]
        pivots.append(c)
        prow += 1
    return rows, pivots


def _det_generic(rows: list[list], K: ScalarField):
    n = len(rows)
    det = K.one
    for c in range(n):
        src = next((i for i in range(c, n) if rows[i][c]), None)
        if src is None:
            return K.zero
        if src != c:
            rows[c], rows[src] = rows[src], rows[c]
            det = -det
        piv = rows[c][c]
        det = det * piv
        for i in range(c + 1, n):
            if rows[i][c]:
                f = rows[i][c] / piv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return det


def as_matrix(data) -> Matrix:
    return data if isinstance(data, Matrix) else Matrix(data)


def stack_columns(vectors: Iterable[Sequence], n: int) -> Matrix:
    vectors = list(vectors)
    return Matrix.from_columns(vectors, nrows=n) if vectors else Matrix.zeros(n, 0)
