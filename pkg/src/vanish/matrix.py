"""Dense exact matrices over GF(p) or Q with RREF, rank, kernels and products.

Matrices are immutable and hashable so results of the hot pure functions
(rref, kernels) can be memoized.  0 x k and k x 0 matrices are legal.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple


@dataclass(frozen=True)
class Mat:
    field: object
    rows: int
    cols: int
    entries: tuple  # tuple of row tuples, row-major

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix dimension")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entry grid does not match declared shape")

    @staticmethod
    def from_rows(field, rows: Iterable[Iterable], cols: int | None = None) -> "Mat":
        rws = tuple(tuple(field.canon(x) for x in r) for r in rows)
        if cols is None:
            if not rws:
                raise ValueError("cannot infer column count of an empty matrix")
            cols = len(rws[0])
        return Mat(field, len(rws), cols, rws)

    @staticmethod
    def zeros(field, rows: int, cols: int) -> "Mat":
        z = field.zero
        return Mat(field, rows, cols, tuple(tuple(z for _ in range(cols)) for _ in range(rows)))

    @staticmethod
    def identity(field, n: int) -> "Mat":
        z, o = field.zero, field.one
        return Mat(field, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    def row(self, i: int) -> tuple:
        return self.entries[i]

    def transpose(self) -> "Mat":
        return Mat(self.field, self.cols, self.rows,
                   tuple(tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols)))

    def mul(self, other: "Mat") -> "Mat":
        if self.field != other.field:
            raise ValueError("field mismatch in matrix product")
        if self.cols != other.rows:
            raise ValueError(f"dimension mismatch: {self.rows}x{self.cols} times {other.rows}x{other.cols}")
        f = self.field
        out = []
        for i in range(self.rows):
            ri = self.entries[i]
            out_row = []
            for j in range(other.cols):
                acc = f.zero
                for k in range(self.cols):
                    acc = f.add(acc, f.mul(ri[k], other.entries[k][j]))
                out_row.append(acc)
            out.append(tuple(out_row))
        return Mat(f, self.rows, other.cols, tuple(out))

    def mul_vector(self, v: tuple) -> tuple:
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        f = self.field
        out = []
        for i in range(self.rows):
            acc = f.zero
            ri = self.entries[i]
            for k in range(self.cols):
                acc = f.add(acc, f.mul(ri[k], v[k]))
            out.append(acc)
        return tuple(out)

    def stack(self, other: "Mat") -> "Mat":
        if self.cols != other.cols or self.field != other.field:
            raise ValueError("cannot stack matrices of different widths or fields")
        return Mat(self.field, self.rows + other.rows, self.cols, self.entries + other.entries)

    def is_zero(self) -> bool:
        z = self.field.zero
        return all(x == z for r in self.entries for x in r)


class RrefResult(NamedTuple):
    reduced: Mat
    rank: int
    pivots: tuple


@lru_cache(maxsize=1 << 16)
def rref(m: Mat) -> RrefResult:
    """Reduced row echelon form, rank, and pivot columns (strictly increasing)."""
    f = m.field
    work = [list(r) for r in m.entries]
    pivots = []
    pr = 0
    for c in range(m.cols):
        pivot_row = None
        for r in range(pr, m.rows):
            if work[r][c] != f.zero:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        work[pr], work[pivot_row] = work[pivot_row], work[pr]
        inv = f.inv(work[pr][c])
        work[pr] = [f.mul(inv, x) for x in work[pr]]
        for r in range(m.rows):
            if r != pr and work[r][c] != f.zero:
                factor = work[r][c]
                work[r] = [f.sub(x, f.mul(factor, y)) for x, y in zip(work[r], work[pr])]
        pivots.append(c)
        pr += 1
        if pr == m.rows:
            break
    reduced = Mat(f, m.rows, m.cols, tuple(tuple(r) for r in work))
    return RrefResult(reduced, pr, tuple(pivots))


def rank(m: Mat) -> int:
    return rref(m).rank


@lru_cache(maxsize=1 << 16)
def kernel_basis(m: Mat) -> Mat:
    """RREF basis of {x : m.x = 0}, one row per kernel basis vector."""
    f = m.field
    red, rk, pivots = rref(m)
    free = [c for c in range(m.cols) if c not in pivots]
    rows = []
    for fc in free:
        v = [f.zero] * m.cols
        v[fc] = f.one
        for i, pc in enumerate(pivots):
            v[pc] = f.neg(red.entries[i][fc])
        rows.append(tuple(v))
    basis = Mat(f, len(rows), m.cols, tuple(rows))
    # free columns chosen in increasing order already give an echelon basis,
    # but normalize through rref so callers can rely on canonical form
    return rref(basis).reduced if rows else basis


def row_space_basis(m: Mat) -> Mat:
    """Nonzero rows of the RREF: the canonical basis of the row space."""
    red, rk, _ = rref(m)
    return Mat(m.field, rk, m.cols, red.entries[:rk])


def reduce_vector(basis: Mat, pivots: tuple, v: tuple) -> tuple:
    """Residual of v after elimination against RREF rows; zero iff v in row space."""
    f = basis.field
    w = list(v)
    for i, pc in enumerate(pivots):
        if w[pc] != f.zero:
            factor = w[pc]
            row = basis.entries[i]
            w = [f.sub(x, f.mul(factor, y)) for x, y in zip(w, row)]
    return tuple(w)


def solve_right(a: Mat, b: tuple):
    """One solution x of a.x = b, or None if the system is inconsistent."""
    f = a.field
    aug = Mat(f, a.rows, a.cols + 1, tuple(r + (v,) for r, v in zip(a.entries, b)))
    red, rk, pivots = rref(aug)
    if a.cols in pivots:
        return None
    x = [f.zero] * a.cols
    for i, pc in enumerate(pivots):
        x[pc] = red.entries[i][a.cols]
    return tuple(x)


def express_in_rows(v: tuple, basis: Mat):
    """Coefficients c with c.basis = v, or None if v is outside the row space."""
    return solve_right(basis.transpose(), v)


@lru_cache(maxsize=1 << 15)
def inverse(m: Mat) -> Mat:
    if m.rows != m.cols:
        raise ValueError("only square matrices are invertible")
    n = m.rows
    aug = Mat(m.field, n, 2 * n,
              tuple(m.entries[i] + Mat.identity(m.field, n).entries[i] for i in range(n)))
    red, rk, _ = rref(aug)
    if rk < n or any(red.entries[i][i] != m.field.one for i in range(n)):
        raise ValueError("matrix is singular")
    return Mat(m.field, n, n, tuple(r[n:] for r in red.entries))
