"""Bilinear-form queries on a matrix block: restricted rank and orthogonals.

A block A is read as the form (u, v) -> u^T A v.  The restricted rank
R(X, Y) is always computed from the restriction matrix itself; the rank
identities relating it to orthogonals are exercised by the tests, not used
as the implementation.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .matrix import Mat, kernel_basis, rank
from .subspace import Subspace


@dataclass(frozen=True)
class Bilinear:
    matrix: Mat

    @property
    def field(self):
        return self.matrix.field

    @property
    def m(self) -> int:
        return self.matrix.rows

    @property
    def n(self) -> int:
        return self.matrix.cols


@lru_cache(maxsize=1 << 15)
def restricted_rank(a: Bilinear, x: Subspace, y: Subspace) -> int:
    """rank of (u_i^T A v_j) over bases of x and y; basis-independent."""
    if x.ambient != a.m or y.ambient != a.n:
        raise ValueError("subspace ambients do not match the form")
    restriction = x.basis.mul(a.matrix).mul(y.basis.transpose())
    return rank(restriction)


@lru_cache(maxsize=1 << 15)
def right_orth(a: Bilinear, x: Subspace) -> Subspace:
    """{y in V : A(x, y) = 0 for all x in X}."""
    if x.ambient != a.m:
        raise ValueError("subspace ambient does not match the form's row space")
    return Subspace(a.n, kernel_basis(x.basis.mul(a.matrix)))


@lru_cache(maxsize=1 << 15)
def left_orth(a: Bilinear, y: Subspace) -> Subspace:
    """{x in U : A(x, y) = 0 for all y in Y}; the mirror with A transposed."""
    if y.ambient != a.n:
        raise ValueError("subspace ambient does not match the form's column space")
    return Subspace(a.m, kernel_basis(y.basis.mul(a.matrix.transpose())))


def vanishes(a: Bilinear, x: Subspace, y: Subspace) -> bool:
    return restricted_rank(a, x, y) == 0
