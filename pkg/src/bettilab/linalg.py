"""Exact dense linear algebra over QQ or F_p.

Storage: characteristic zero uses numpy object arrays filled with Fraction;
prime characteristic uses int64 arrays with entries normalized to [0, p).
Elimination is classical Gauss-Jordan with deterministic pivoting: first
nonzero column, then first nonzero row.  Matrices are immutable; every
operation returns a fresh value.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .fields import FieldSpec, require_same_field

# int64 products factor * entry stay below 2^63 for p up to this bound
_INT64_CHAR_LIMIT = 2**31


def _uses_int64(field: FieldSpec) -> bool:
    return field.is_prime_field and field.characteristic < _INT64_CHAR_LIMIT


class Matrix:
    """Immutable exact matrix over a FieldSpec."""

    __slots__ = ("field", "_data")

    def __init__(self, field: FieldSpec, data: np.ndarray, *, _trusted=False):
        self.field = field
        if _trusted:
            self._data = data
            return
        arr = np.asarray(data)
        if arr.ndim != 2:
            raise ValueError(f"matrix data must be 2-dimensional, got shape {arr.shape}")
        if _uses_int64(field):
            p = field.characteristic
            if arr.dtype.kind in "iu":
                out = arr.astype(np.int64) % p
            else:
                out = np.empty(arr.shape, dtype=np.int64)
                flat = arr.reshape(-1)
                oflat = out.reshape(-1)
                for k in range(flat.size):
                    oflat[k] = field.coerce(flat[k])
        else:
            out = np.empty(arr.shape, dtype=object)
            flat = arr.reshape(-1)
            oflat = out.reshape(-1)
            for k in range(flat.size):
                oflat[k] = field.coerce(flat[k])
        out.setflags(write=False)
        self._data = out

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_rows(field: FieldSpec, rows: Sequence[Sequence]) -> "Matrix":
        if len(rows) == 0:
            return Matrix.zeros(field, 0, 0)
        return Matrix(field, np.array([list(r) for r in rows], dtype=object))

    @staticmethod
    def from_columns(field: FieldSpec, cols: Sequence[Sequence]) -> "Matrix":
        if len(cols) == 0:
            return Matrix.zeros(field, 0, 0)
        return Matrix.from_rows(field, list(map(list, zip(*cols))))

    @staticmethod
    def zeros(field: FieldSpec, nrows: int, ncols: int) -> "Matrix":
        if _uses_int64(field):
            data = np.zeros((nrows, ncols), dtype=np.int64)
        else:
            data = np.empty((nrows, ncols), dtype=object)
            data[...] = Fraction(0)
        data.setflags(write=False)
        return Matrix(field, data, _trusted=True)

    @staticmethod
    def identity(field: FieldSpec, n: int) -> "Matrix":
        m = Matrix.zeros(field, n, n)._mutable()
        one = 1 if _uses_int64(field) else Fraction(1)
        for i in range(n):
            m[i, i] = one
        return Matrix._freeze(field, m)

    @staticmethod
    def _freeze(field: FieldSpec, data: np.ndarray) -> "Matrix":
        data.setflags(write=False)
        return Matrix(field, data, _trusted=True)

    def _mutable(self) -> np.ndarray:
        return self._data.copy()

    # -- shape and access --------------------------------------------------

    @property
    def nrows(self) -> int:
        return self._data.shape[0]

    @property
    def ncols(self) -> int:
        return self._data.shape[1]

    @property
    def shape(self):
        return self._data.shape

    def __getitem__(self, key):
        return self._data[key]

    def column(self, j: int) -> "Matrix":
        return Matrix._freeze(self.field, self._data[:, j : j + 1].copy())

    def take_columns(self, indices: Sequence[int]) -> "Matrix":
        idx = list(indices)
        if not idx:
            return Matrix.zeros(self.field, self.nrows, 0)
        return Matrix._freeze(self.field, self._data[:, idx].copy())

    def take_rows(self, indices: Sequence[int]) -> "Matrix":
        idx = list(indices)
        if not idx:
            return Matrix.zeros(self.field, 0, self.ncols)
        return Matrix._freeze(self.field, self._data[idx, :].copy())

    def transpose(self) -> "Matrix":
        return Matrix._freeze(self.field, self._data.T.copy())

    def is_zero(self) -> bool:
        if self._data.size == 0:
            return True
        if self._data.dtype == np.int64:
            return not self._data.any()
        return all(x == 0 for x in self._data.reshape(-1))

    def column_vector(self, j: int) -> list:
        return list(self._data[:, j])

    def entries(self) -> np.ndarray:
        return self._data

    # -- arithmetic --------------------------------------------------------

    def _binop_check(self, other: "Matrix"):
        require_same_field(self.field, other.field)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._binop_check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        out = self._data + other._data
        if self._data.dtype == np.int64:
            out %= self.field.characteristic
        return Matrix._freeze(self.field, out)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._binop_check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        out = self._data - other._data
        if self._data.dtype == np.int64:
            out %= self.field.characteristic
        return Matrix._freeze(self.field, out)

    def scale(self, scalar) -> "Matrix":
        c = self.field.coerce(scalar)
        out = self._data * c
        if self._data.dtype == np.int64:
            out %= self.field.characteristic
        return Matrix._freeze(self.field, out)

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._binop_check(other)
        if self.ncols != other.nrows:
            raise ValueError(f"inner dimension mismatch {self.shape} @ {other.shape}")
        a, b = self._data, other._data
        if a.dtype == np.int64:
            p = self.field.characteristic
            inner = a.shape[1]
            # chunk so accumulated dot products cannot overflow int64
            chunk = max(1, (2**62) // max(1, (p - 1) ** 2))
            if inner <= chunk:
                out = (a @ b) % p
            else:
                out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
                for lo in range(0, inner, chunk):
                    hi = min(inner, lo + chunk)
                    out = (out + a[:, lo:hi] @ b[lo:hi, :]) % p
        else:
            if a.shape[0] == 0 or b.shape[1] == 0 or a.shape[1] == 0:
                out = np.empty((a.shape[0], b.shape[1]), dtype=object)
                out[...] = Fraction(0)
            else:
                out = a @ b
        return Matrix._freeze(self.field, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.field != other.field or self.shape != other.shape:
            return False
        if self._data.dtype == np.int64 and other._data.dtype == np.int64:
            return bool((self._data == other._data).all())
        a = self._data.reshape(-1)
        b = other._data.reshape(-1)
        return all(x == y for x, y in zip(a, b))

    def __ne__(self, other) -> bool:
        eq = self.__eq__(other)
        if eq is NotImplemented:
            return NotImplemented
        return not eq

    def __repr__(self):
        return f"Matrix({self.field}, {self.nrows}x{self.ncols})"

    def to_lists(self) -> list:
        return [list(row) for row in self._data]


def hstack(matrices: Sequence[Matrix]) -> Matrix:
    mats = [m for m in matrices]
    if not mats:
        raise ValueError("hstack of nothing")
    field = mats[0].field
    for m in mats[1:]:
        require_same_field(field, m.field)
    nrows = mats[0].nrows
    if any(m.nrows != nrows for m in mats):
        raise ValueError("row count mismatch in hstack")
    datas = [m._data for m in mats]
    if all(d.dtype == np.int64 for d in datas):
        out = np.hstack(datas) if datas else np.zeros((nrows, 0), dtype=np.int64)
    else:
        out = np.hstack([d.astype(object) for d in datas])
    return Matrix._freeze(field, out)


def vstack(matrices: Sequence[Matrix]) -> Matrix:
    mats = [m for m in matrices]
    if not mats:
        raise ValueError("vstack of nothing")
    field = mats[0].field
    for m in mats[1:]:
        require_same_field(field, m.field)
    ncols = mats[0].ncols
    if any(m.ncols != ncols for m in mats):
        raise ValueError("column count mismatch in vstack")
    datas = [m._data for m in mats]
    if all(d.dtype == np.int64 for d in datas):
        out = np.vstack(datas)
    else:
        out = np.vstack([d.astype(object) for d in datas])
    return Matrix._freeze(field, out)


@dataclass(frozen=True)
class RREF:
    rank: int
    pivot_columns: tuple
    matrix: Matrix


def rref(m: Matrix) -> RREF:
    """Reduced row echelon form with deterministic pivot order.

    Scans columns left to right; within a column takes the first nonzero row
    at or below the current one.  Pivots are normalized to 1 and cleared both
    above and below.
    """
    a = m._mutable()
    nrows, ncols = a.shape
    field = m.field
    pivots = []
    r = 0
    if a.dtype == np.int64:
        p = field.characteristic
        for c in range(ncols):
            if r == nrows:
                break
            col = a[r:, c]
            nz = np.nonzero(col)[0]
            if nz.size == 0:
                continue
            pr = r + int(nz[0])
            if pr != r:
                a[[r, pr], :] = a[[pr, r], :]
            inv = pow(int(a[r, c]), -1, p)
            a[r, :] = a[r, :] * inv % p
            factors = a[:, c].copy()
            factors[r] = 0
            rows = np.nonzero(factors)[0]
            if rows.size:
                a[rows, :] = (a[rows, :] - np.outer(factors[rows], a[r, :])) % p
            pivots.append(c)
            r += 1
    else:
        for c in range(ncols):
            if r == nrows:
                break
            pr = -1
            for rr in range(r, nrows):
                if a[rr, c] != 0:
                    pr = rr
                    break
            if pr < 0:
                continue
            if pr != r:
                a[[r, pr], :] = a[[pr, r], :]
            inv = field.invert(a[r, c])
            if inv != 1:
                a[r, :] = a[r, :] * inv
            for rr in range(nrows):
                if rr != r and a[rr, c] != 0:
                    a[rr, :] = a[rr, :] - a[rr, c] * a[r, :]
            pivots.append(c)
            r += 1
    return RREF(rank=len(pivots), pivot_columns=tuple(pivots), matrix=Matrix._freeze(field, a))


def rank(m: Matrix) -> int:
    return rref(m).rank


def kernel_basis(m: Matrix) -> Matrix:
    """Basis of the right null space, returned as columns.

    One basis column per free column of the rref, ordered by free column
    index; the free coordinate is set to 1.
    """
    red = rref(m)
    field = m.field
    ncols = m.ncols
    pivset = dict((c, i) for i, c in enumerate(red.pivot_columns))
    free = [c for c in range(ncols) if c not in pivset]
    out = Matrix.zeros(field, ncols, len(free))._mutable()
    one = 1 if out.dtype == np.int64 else Fraction(1)
    rm = red.matrix._data
    p = field.characteristic
    for k, f in enumerate(free):
        out[f, k] = one
        for c, i in pivset.items():
            v = rm[i, f]
            if v != 0:
                out[c, k] = (-v) % p if out.dtype == np.int64 else -v
    return Matrix._freeze(field, out)


def image_column_indices(m: Matrix) -> tuple:
    """Indices of a deterministic maximal independent set of columns."""
    return rref(m).pivot_columns


def image_basis(m: Matrix) -> Matrix:
    """Columns of m forming a basis of the column space."""
    return m.take_columns(image_column_indices(m))


def complement_indices(sub: Matrix, whole: Matrix) -> tuple:
    """Indices into whole whose columns complete col(sub) to col(whole).

    Requires col(sub) to be contained in col(whole).
    """
    require_same_field(sub.field, whole.field)
    if sub.nrows != whole.nrows:
        raise ValueError("ambient dimension mismatch")
    combined = hstack([sub, whole])
    red = rref(combined)
    ns = sub.ncols
    chosen = tuple(c - ns for c in red.pivot_columns if c >= ns)
    # containment check: adding sub to whole must not raise the rank
    if red.rank != rank(whole):
        raise ValueError("column space of sub is not contained in column space of whole")
    return chosen

def complement_in_span(sub: Matrix, whole: Matrix) -> Matrix:
    """Columns of whole spanning col(whole) modulo col(sub)."""
    return whole.take_columns(complement_indices(sub, whole))


def solve(a: Matrix, b: Matrix) -> Optional[Matrix]:
    """Solve a @ x = b columnwise; None when any column is unsolvable.

    Free variables are set to zero, so the solution is deterministic.
    """
    require_same_field(a.field, b.field)
    if a.nrows != b.nrows:
        raise ValueError("row count mismatch in solve")
    red = rref(hstack([a, b]))
    na = a.ncols
    if any(c >= na for c in red.pivot_columns):
        return None
    x = Matrix.zeros(a.field, na, b.ncols)._mutable()
    rm = red.matrix._data
    for i, c in enumerate(red.pivot_columns):
        x[c, :] = rm[i, na:]
    return Matrix._freeze(a.field, x)


def rank_of_stack(blocks: Sequence[Matrix]) -> int:
    """Rank of the horizontal concatenation without materializing it twice."""
    return rank(hstack(list(blocks)))
