"""The complemented modular lattice of subspaces of F^k.

A subspace is canonically represented by its reduced-row-echelon basis, so
equality is plain tuple comparison.  Meets go through kernels of stacked
constraints, joins through row-space closure.  The opposite lattice used on
the column side of the problem is handled by a chain orientation flag, not
a second type.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .matrix import Mat, kernel_basis, reduce_vector, row_space_basis, rref


@dataclass(frozen=True)
class Subspace:
    ambient: int
    basis: Mat  # RREF, no zero rows; rows are basis vectors

    def __post_init__(self):
        if self.basis.cols != self.ambient:
            raise ValueError("basis width does not match ambient dimension")

    @property
    def field(self):
        return self.basis.field

    @property
    def dim(self) -> int:
        return self.basis.rows

    def contains_vector(self, v: tuple) -> bool:
        z = self.field.zero
        res = reduce_vector(self.basis, rref(self.basis).pivots, tuple(v))
        return all(x == z for x in res)

    def serialize(self) -> dict:
        f = self.field
        return {"ambient": self.ambient,
                "basis": [[f.fmt(x) for x in row] for row in self.basis.entries]}


def from_spanning(field, ambient: int, vectors) -> Subspace:
    """Canonical subspace spanned by the given row vectors."""
    m = Mat.from_rows(field, vectors, cols=ambient) if not isinstance(vectors, Mat) else vectors
    return Subspace(ambient, row_space_basis(m))


def zero_subspace(field, ambient: int) -> Subspace:
    return Subspace(ambient, Mat.zeros(field, 0, ambient))


def full_subspace(field, ambient: int) -> Subspace:
    return Subspace(ambient, Mat.identity(field, ambient))


def contains(x: Subspace, y: Subspace) -> bool:
    """True iff y is a subspace of x."""
    _check_same_ambient(x, y)
    return all(x.contains_vector(r) for r in y.basis.entries)


@lru_cache(maxsize=1 << 15)
def meet(x: Subspace, y: Subspace) -> Subspace:
    """Intersection, computed via kernels of the stacked orthogonal constraints."""
    _check_same_ambient(x, y)
    cx = kernel_basis(x.basis)  # functionals vanishing on x
    cy = kernel_basis(y.basis)
    constraints = cx.stack(cy)
    return Subspace(x.ambient, kernel_basis(constraints))


def join(x: Subspace, y: Subspace) -> Subspace:
    _check_same_ambient(x, y)
    return from_spanning(x.field, x.ambient, x.basis.stack(y.basis))


def complement_within(inner: Subspace, outer: Subspace) -> Subspace:
    """Deterministic complement Q of inner inside outer (greedy by outer's basis).

    inner + Q = outer and inner ^ Q = {0}; ties broken by scanning outer's
    echelon basis rows in order.
    """
    _check_same_ambient(inner, outer)
    if not contains(outer, inner):
        raise ValueError("complement_within requires inner to lie inside outer")
    current = inner
    picked = []
    for v in outer.basis.entries:
        if not current.contains_vector(v):
            picked.append(v)
            current = join(current, from_spanning(inner.field, inner.ambient, [v]))
        if current.dim == outer.dim:
            break
    return from_spanning(inner.field, inner.ambient, picked) if picked else zero_subspace(inner.field, inner.ambient)


def _check_same_ambient(x: Subspace, y: Subspace):
    if x.ambient != y.ambient or x.field != y.field:
        raise ValueError("subspaces live in different ambient spaces")


ASCENDING = "ascending"
DESCENDING = "descending"


@dataclass(frozen=True)
class SubspaceChain:
    """Strictly nested chain; ascending for the lattice L, descending for the
    opposite lattice used on the column side."""

    elements: tuple
    orientation: str = ASCENDING

    def __post_init__(self):
        if self.orientation not in (ASCENDING, DESCENDING):
            raise ValueError(f"bad orientation {self.orientation!r}")
        elems = self.elements
        for a, b in zip(elems, elems[1:]):
            lo, hi = (a, b) if self.orientation == ASCENDING else (b, a)
            if not (lo.dim < hi.dim and contains(hi, lo)):
                raise ValueError("chain elements are not strictly nested in the stated orientation")
        if elems:
            amb = elems[0].ambient
            if any(e.ambient != amb or e.field != elems[0].field for e in elems):
                raise ValueError("chain elements share no common ambient space")

    @property
    def is_maximal(self) -> bool:
        if not self.elements:
            return False
        amb = self.elements[0].ambient
        return len(self.elements) == amb + 1


def extend_to_maximal_chain(chain: SubspaceChain, field=None, ambient: int | None = None) -> SubspaceChain:
    """Complete a chain to a maximal one ({0} up to the full space, one element
    per dimension), inserting joins with echelon basis vectors greedily.

    For an empty chain, field and ambient must be supplied.
    """
    if chain.elements:
        field = chain.elements[0].field
        ambient = chain.elements[0].ambient
    elif field is None or ambient is None:
        raise ValueError("empty chain needs an explicit field and ambient dimension")

    asc = list(chain.elements if chain.orientation == ASCENDING else reversed(chain.elements))
    if not asc or asc[0].dim > 0:
        asc.insert(0, zero_subspace(field, ambient))
    if asc[-1].dim < ambient:
        asc.append(full_subspace(field, ambient))

    filled = [asc[0]]
    for nxt in asc[1:]:
        cur = filled[-1]
        while cur.dim + 1 < nxt.dim:
            step = None
            for v in nxt.basis.entries:
                if not cur.contains_vector(v):
                    step = v
                    break
            cur = join(cur, from_spanning(field, ambient, [step]))
            filled.append(cur)
        filled.append(nxt)

    out = filled if chain.orientation == ASCENDING else list(reversed(filled))
    return SubspaceChain(tuple(out), chain.orientation)


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of GF(q)^n."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    assert num % den == 0
    return num // den


def count_subspaces(n: int, q: int) -> int:
    return sum(gaussian_binomial(n, k, q) for k in range(n + 1))


def enumerate_subspaces(field, ambient: int, limit: int = 10_000) -> list:
    """All subspaces of GF(p)^ambient, each exactly once, by direct RREF
    generation (pivot set, then free entries)."""
    if not hasattr(field, "p"):
        raise ValueError("subspace enumeration is only available over finite fields")
    total = count_subspaces(ambient, field.p)
    if total > limit:
        raise ValueError(f"{total} subspaces exceeds the enumeration limit {limit}")
    out = []
    elems = list(field.elements())
    for d in range(ambient + 1):
        for pivots in itertools.combinations(range(ambient), d):
            free_pos = [(i, c) for i in range(d) for c in range(ambient)
                        if c > pivots[i] and c not in pivots]
            for values in itertools.product(elems, repeat=len(free_pos)):
                rows = [[field.zero] * ambient for _ in range(d)]
                for i in range(d):
                    rows[i][pivots[i]] = field.one
                for (i, c), v in zip(free_pos, values):
                    rows[i][c] = v
                basis = Mat(field, d, ambient, tuple(tuple(r) for r in rows))
                out.append(Subspace(ambient, basis))
    return out
