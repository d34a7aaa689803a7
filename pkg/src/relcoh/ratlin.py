"""Exact linear algebra over the rationals.

Matrices are immutable and dense; elimination is done on sparse row
dictionaries internally because most matrices met here are sign matrices
with few nonzero entries.

Subspaces are always stored with a canonical basis: the columns are in
reduced echelon form with respect to their *last* nonzero coordinate, i.e.
column ``i`` has a 1 in row ``pivots[i]``, zeros below it, and every other
basis column vanishes in that row.  Two subspaces are equal iff their bases
are equal as data, and coordinates of a member vector are read off at the
pivot rows.

>>> m = Matrix([[1, 2], [2, 4]])
>>> kernel(m).dim, image(m).dim
(1, 1)
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ContainmentError, ShapeError

Scalar = Fraction
ZERO = Fraction(0)
ONE = Fraction(1)

Vector = tuple


def scalar(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def vector(values: Iterable) -> tuple:
    return tuple(scalar(v) for v in values)


def zero_vector(n: int) -> tuple:
    return (ZERO,) * n


class Matrix:
    """Immutable dense matrix of Fractions, stored row-major."""

    __slots__ = ("rows", "cols", "_data", "_hash")

    def __init__(self, entries: Sequence[Sequence] = (), cols: int | None = None):
        data = tuple(tuple(scalar(v) for v in row) for row in entries)
        if cols is None:
            cols = len(data[0]) if data else 0
        for row in data:
            if len(row) != cols:
                raise ShapeError("ragged matrix rows")
        self.rows = len(data)
        self.cols = cols
        self._data = data
        self._hash = None

    @classmethod
    def _raw(cls, rows: int, cols: int, data: tuple) -> "Matrix":
        m = object.__new__(cls)
        m.rows = rows
        m.cols = cols
        m._data = data
        m._hash = None
        return m

    # construction helpers

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        row = (ZERO,) * cols
        return cls._raw(rows, cols, (row,) * rows)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls._raw(n, n, tuple(
            tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "Matrix":
        columns = [tuple(scalar(v) for v in c) for c in columns]
        for c in columns:
            if len(c) != rows:
                raise ShapeError("column length mismatch")
        data = tuple(tuple(c[i] for c in columns) for i in range(rows))
        return cls._raw(rows, len(columns), data)

    @classmethod
    def from_sparse(cls, rows: int, cols: int, entries: dict) -> "Matrix":
        """Build from a mapping {(i, j): value}."""
        data = [[ZERO] * cols for _ in range(rows)]
        for (i, j), v in entries.items():
            data[i][j] = scalar(v)
        return cls._raw(rows, cols, tuple(tuple(r) for r in data))

    @classmethod
    def from_strings(cls, entries: Sequence[Sequence[str]], cols: int | None = None) -> "Matrix":
        return cls(entries, cols)

    @classmethod
    def block(cls, grid: Sequence[Sequence["Matrix | None"]],
              row_sizes: Sequence[int], col_sizes: Sequence[int]) -> "Matrix":
        """Assemble a block matrix; ``None`` blocks are zero."""
        nrows, ncols = sum(row_sizes), sum(col_sizes)
        data = [[ZERO] * ncols for _ in range(nrows)]
        r0 = 0
        for bi, rs in enumerate(row_sizes):
            c0 = 0
            for bj, cs in enumerate(col_sizes):
                blk = grid[bi][bj]
                if blk is not None:
                    if blk.shape != (rs, cs):
                        raise ShapeError(f"block ({bi},{bj}) has shape {blk.shape}, expected {(rs, cs)}")
                    for i, row in enumerate(blk._data):
                        target = data[r0 + i]
                        for j, v in enumerate(row):
                            if v:
                                target[c0 + j] = v
                c0 += cs
            r0 += rs
        return cls._raw(nrows, ncols, tuple(tuple(r) for r in data))

    @classmethod
    def diag(cls, blocks: Sequence["Matrix"]) -> "Matrix":
        n = len(blocks)
        grid = [[blocks[i] if i == j else None for j in range(n)] for i in range(n)]
        return cls.block(grid, [b.rows for b in blocks], [b.cols for b in blocks])

    @classmethod
    def hstack(cls, blocks: Sequence["Matrix"], rows: int | None = None) -> "Matrix":
        if rows is None:
            rows = blocks[0].rows if blocks else 0
        return cls.block([list(blocks)], [rows], [b.cols for b in blocks])

    @classmethod
    def vstack(cls, blocks: Sequence["Matrix"], cols: int | None = None) -> "Matrix":
        if cols is None:
            cols = blocks[0].cols if blocks else 0
        return cls.block([[b] for b in blocks], [b.rows for b in blocks], [cols])

    # access

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def entries(self) -> tuple:
        return tuple(v for row in self._data for v in row)

    def row(self, i: int) -> tuple:
        return self._data[i]

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self._data)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.cols)]

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    def to_strings(self) -> list[list[str]]:
        return [[str(v) for v in row] for row in self._data]

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def __repr__(self):
        return f"Matrix({self.to_strings()!r}, cols={self.cols})"

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self._data))
        return self._hash

    # arithmetic

    @property
    def T(self) -> "Matrix":
        return Matrix._raw(self.cols, self.rows, tuple(zip(*self._data)) if self.rows else
                           tuple(() for _ in range(self.cols)))

    def sparse_rows(self) -> list[list[tuple[int, Fraction]]]:
        return [[(j, v) for j, v in enumerate(row) if v] for row in self._data]

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
            brows = other.sparse_rows()
            out = []
            width = other.cols
            for row in self._data:
                acc = {}
                for k, a in enumerate(row):
                    if a:
                        for j, b in brows[k]:
                            acc[j] = acc.get(j, ZERO) + a * b
                r = [ZERO] * width
                for j, v in acc.items():
                    r[j] = v
                out.append(tuple(r))
            return Matrix._raw(self.rows, width, tuple(out))
        vec = tuple(other)
        if len(vec) != self.cols:
            raise ShapeError(f"cannot apply {self.shape} matrix to vector of length {len(vec)}")
        nz = [(k, v) for k, v in enumerate(vec) if v]
        return tuple(sum((row[k] * v for k, v in nz), ZERO) for row in self._data)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        return Matrix._raw(self.rows, self.cols, tuple(
            tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def __neg__(self) -> "Matrix":
        return Matrix._raw(self.rows, self.cols, tuple(tuple(-a for a in r) for r in self._data))

    def scale(self, c) -> "Matrix":
        c = scalar(c)
        if c == 1:
            return self
        return Matrix._raw(self.rows, self.cols, tuple(tuple(c * a for a in r) for r in self._data))

    def is_zero(self) -> bool:
        return not any(any(r) for r in self._data)

    def select_rows(self, idx: Sequence[int]) -> "Matrix":
        return Matrix._raw(len(idx), self.cols, tuple(self._data[i] for i in idx))

    def select_cols(self, idx: Sequence[int]) -> "Matrix":
        return Matrix._raw(self.rows, len(idx), tuple(tuple(r[j] for j in idx) for r in self._data))

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> "Matrix":
        return Matrix._raw(r1 - r0, c1 - c0, tuple(r[c0:c1] for r in self._data[r0:r1]))

    def rank(self) -> int:
        return len(_rref([_as_dict(r) for r in self._data], self.cols))


def _as_dict(row: Sequence) -> dict:
    return {j: v for j, v in enumerate(row) if v}


def _axpy(target: dict, a: Fraction, source: dict) -> None:
    """target += a * source, dropping cancelled entries."""
    for k, v in source.items():
        nv = target.get(k, ZERO) + a * v
        if nv:
            target[k] = nv
        else:
            target.pop(k, None)


def _rref(rows: list[dict], ncols: int) -> list[tuple[int, dict]]:
    """Reduced row echelon form of sparse rows; returns (pivot, row) pairs sorted by pivot."""
    active = [r for r in rows if r]
    done: list[tuple[int, dict]] = []
    for c in range(ncols):
        if not active:
            break
        best = None
        for i, r in enumerate(active):
            if c in r and (best is None or len(r) < len(active[best])):
                best = i
        if best is None:
            continue
        prow = active.pop(best)
        lead = prow[c]
        if lead != 1:
            inv = 1 / lead
            prow = {k: v * inv for k, v in prow.items()}
        for r in active:
            f = r.get(c)
            if f:
                _axpy(r, -f, prow)
        for _, r in done:
            f = r.get(c)
            if f:
                _axpy(r, -f, prow)
        active = [r for r in active if r]
        done.append((c, prow))
    return done


def rank(m: Matrix) -> int:
    return m.rank()


class Subspace:
    """A subspace of Q^n with its canonical basis (see module docstring)."""

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, ambient_dim: int, basis: Matrix, pivots: tuple):
        self.ambient_dim = ambient_dim
        self.basis = basis
        self.pivots = pivots

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> "Subspace":
        n = ambient_dim
        rows = []
        for v in vectors:
            if len(v) != n:
                raise ShapeError("vector length differs from ambient dimension")
            rows.append({n - 1 - j: scalar(x) for j, x in enumerate(v) if x})
        reduced = _rref(rows, n)
        cols = []
        pivots = []
        for p, r in reversed(reduced):
            col = [ZERO] * n
            for k, v in r.items():
                col[n - 1 - k] = v
            cols.append(col)
            pivots.append(n - 1 - p)
        return cls(n, Matrix.from_columns(cols, n), tuple(pivots))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, Matrix.zeros(n, 0), ())

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, Matrix.identity(n), tuple(range(n)))

    @property
    def dim(self) -> int:
        return self.basis.cols

    def vectors(self) -> list[tuple]:
        return self.basis.columns()

    def coords(self, v: Sequence) -> tuple:
        """Coordinates of a member vector in the canonical basis (membership not checked)."""
        return tuple(scalar(v[p]) for p in self.pivots)

    def coord_matrix(self) -> Matrix:
        """Matrix reading coordinates of member vectors (selects pivot rows)."""
        return Matrix.identity(self.ambient_dim).select_rows(self.pivots)

    def coords_of(self, m: Matrix) -> Matrix:
        """Coordinates of every column of ``m`` (all assumed to be members)."""
        return m.select_rows(self.pivots)

    def contains(self, v: Sequence) -> bool:
        v = vector(v)
        return self.basis @ self.coords(v) == v

    def contains_all(self, m: Matrix) -> bool:
        return self.basis @ self.coords_of(m) == m

    def is_subspace_of(self, other: "Subspace") -> bool:
        return other.contains_all(self.basis)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return f"Subspace(ambient_dim={self.ambient_dim}, dim={self.dim})"


def kernel(m: Matrix) -> Subspace:
    n = m.cols
    reduced = _rref([_as_dict(r) for r in m._data], n)
    pivot_cols = {p for p, _ in reduced}
    free = [j for j in range(n) if j not in pivot_cols]
    cols = []
    for j in free:
        col = [ZERO] * n
        col[j] = ONE
        for p, r in reduced:
            v = r.get(j)
            if v:
                col[p] = -v
        cols.append(col)
    return Subspace(n, Matrix.from_columns(cols, n), tuple(free))


def image(m: Matrix) -> Subspace:
    return Subspace.span(m.columns(), m.rows)


@dataclass(frozen=True)
class Quotient:
    """num/den with a projector (ambient -> quotient coords) and representatives."""
    dim: int
    projector: Matrix
    reps: Matrix

    def __iter__(self):
        yield self.dim
        yield self.projector


def quotient(num: Subspace, den: Subspace) -> Quotient:
    if num.ambient_dim != den.ambient_dim:
        raise ShapeError("subspaces live in different ambient spaces")
    n = num.ambient_dim
    den_coords = num.coords_of(den.basis)
    if num.basis @ den_coords != den.basis:
        raise ContainmentError("denominator is not contained in numerator")
    a = num.dim
    inner = Subspace.span(den_coords.columns(), a)
    taken = set(inner.pivots)
    free = [j for j in range(a) if j not in taken]
    # complement coordinates: v - D * v[pivots], then keep the free rows
    select_p = Matrix.identity(a).select_rows(inner.pivots)
    local = (Matrix.identity(a) - inner.basis @ select_p).select_rows(free)
    projector = local @ num.coord_matrix() if n else Matrix.zeros(len(free), 0)
    reps = num.basis.select_cols(free)
    return Quotient(len(free), projector, reps)


def _solve_augmented(m: Matrix, rhs: Matrix):
    rows, n = m.shape
    k = rhs.cols
    aug = []
    for i in range(rows):
        d = _as_dict(m._data[i])
        for j, v in enumerate(rhs._data[i]):
            if v:
                d[n + j] = v
        aug.append(d)
    reduced = _rref(aug, n + k)
    sol = [[ZERO] * k for _ in range(n)]
    for p, r in reduced:
        if p >= n:
            return None
        for key, v in r.items():
            if key >= n:
                sol[p][key - n] = v
    return Matrix._raw(n, k, tuple(tuple(r) for r in sol))


def solve(m: Matrix, b: Sequence):
    """Some x with m x = b, or None when the system is inconsistent."""
    b = vector(b)
    if len(b) != m.rows:
        raise ShapeError("right-hand side has the wrong length")
    x = _solve_augmented(m, Matrix.from_columns([b], m.rows))
    return None if x is None else x.column(0)


def solve_matrix(m: Matrix, rhs: Matrix):
    """Some X with m X = rhs, or None."""
    if rhs.rows != m.rows:
        raise ShapeError("right-hand side has the wrong number of rows")
    return _solve_augmented(m, rhs)


def is_invertible(m: Matrix) -> bool:
    return m.rows == m.cols and m.rank() == m.rows


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise ShapeError("only square matrices are invertible")
    x = solve_matrix(m, Matrix.identity(m.rows))
    if x is None or m @ x != Matrix.identity(m.rows):
        raise ZeroDivisionError("matrix is singular")
    return x
