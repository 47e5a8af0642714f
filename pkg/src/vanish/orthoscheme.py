"""Points of orthoscheme complexes: convex combinations along subspace chains.

A point carries an orientation: "L" points live over the subspace lattice
ordered by inclusion (bottom {0}, rank = dim); "M" points live over the
opposite lattice used for the column side (bottom is the full space, rank =
ambient - dim).  Coefficients are exact rationals throughout; the solver
path never touches a float.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bilinear import restricted_rank
from .subspace import Subspace, contains, full_subspace, zero_subspace

ORIENT_L = "L"
ORIENT_M = "M"


def oriented_rank(orientation: str, s: Subspace) -> int:
    return s.dim if orientation == ORIENT_L else s.ambient - s.dim


def oriented_bottom(orientation: str, field, ambient: int) -> Subspace:
    return zero_subspace(field, ambient) if orientation == ORIENT_L else full_subspace(field, ambient)


def oriented_top(orientation: str, field, ambient: int) -> Subspace:
    return full_subspace(field, ambient) if orientation == ORIENT_L else zero_subspace(field, ambient)


@dataclass(frozen=True)
class ComplexPoint:
    """Formal convex combination along a chain, stored bottom-to-top.

    terms: ((coeff, subspace), ...) with positive exact coefficients summing
    to 1 and supports strictly increasing in oriented rank.
    """

    orientation: str
    ambient: int
    terms: tuple

    def __post_init__(self):
        if self.orientation not in (ORIENT_L, ORIENT_M):
            raise ValueError(f"bad orientation {self.orientation!r}")
        if not self.terms:
            raise ValueError("a point needs at least one term")
        total = Fraction(0)
        prev = None
        for coeff, elem in self.terms:
            if coeff <= 0:
                raise ValueError("zero or negative coefficient stored in a point")
            if elem.ambient != self.ambient:
                raise ValueError("support element in the wrong ambient space")
            if prev is not None:
                lo, hi = (prev, elem) if self.orientation == ORIENT_L else (elem, prev)
                if not (lo.dim < hi.dim and contains(hi, lo)):
                    raise ValueError("support is not a strict chain in the stated orientation")
            prev = elem
            total += coeff
        if total != 1:
            raise ValueError(f"coefficients sum to {total}, not 1")

    @property
    def field(self):
        return self.terms[0][1].field

    @property
    def support(self) -> tuple:
        return tuple(elem for _, elem in self.terms)

    def serialize(self) -> list:
        return [{"coeff": f"{c.numerator}/{c.denominator}" if c.denominator != 1 else str(c.numerator),
                 "subspace": e.serialize()} for c, e in self.terms]


def vertex(orientation: str, s: Subspace) -> ComplexPoint:
    return ComplexPoint(orientation, s.ambient, ((Fraction(1), s),))


def make_point(orientation: str, ambient: int, pairs) -> ComplexPoint:
    """Build a point from (coeff, subspace) pairs: sorts by oriented rank,
    merges duplicates, and drops zero coefficients."""
    acc: dict = {}
    for coeff, elem in pairs:
        c = Fraction(coeff)
        if c == 0:
            continue
        acc[elem] = acc.get(elem, Fraction(0)) + c
    terms = sorted(((c, e) for e, c in acc.items() if c != 0),
                   key=lambda ce: oriented_rank(orientation, ce[1]))
    return ComplexPoint(orientation, ambient, tuple(terms))


def d1_value(x: ComplexPoint) -> Fraction:
    """Lovasz extension of the lattice rank at x (distance-from-bottom in l1)."""
    return sum((c * oriented_rank(x.orientation, e) for c, e in x.terms), Fraction(0))


def _sum_of_squared_coords(pairs) -> Fraction:
    """Sum of squared cube coordinates from (coeff, rank) pairs ascending in
    rank: each rank band is coordinate-constant at the coefficient suffix sum,
    so no frame needs to be materialized."""
    total = Fraction(0)
    suffix = sum((c for c, _ in pairs), Fraction(0))
    prev_rank = 0
    for c, r in pairs:
        width = r - prev_rank
        total += width * suffix * suffix
        suffix -= c
        prev_rank = r
    return total


def d2_value(x: ComplexPoint) -> Fraction:
    """Squared Euclidean distance from the orientation bottom ({0} for row
    points, the full space for column points)."""
    return _sum_of_squared_coords([(c, oriented_rank(x.orientation, e)) for c, e in x.terms])


def dim_extension(x: ComplexPoint) -> Fraction:
    """Lovasz extension of Y -> dim Y; equals d1_value on row-side points."""
    return sum((c * e.dim for c, e in x.terms), Fraction(0))


def dist2_from_zero(x: ComplexPoint) -> Fraction:
    """Squared distance from the zero-subspace vertex, regardless of the
    orientation flag.  This is the perturbation center on both sides: the
    column-side linear term rewards growing dim Y, so its resolvent (and the
    perturbation paired with it) is measured from {0} as well."""
    pairs = sorted(((c, e.dim) for c, e in x.terms), key=lambda p: p[1])
    return _sum_of_squared_coords(pairs)


def combine_product(parts) -> list:
    """Merge factor points into one chain of tuples by peeling tops.

    Each round emits the tuple of current top support elements with
    coefficient equal to the smallest remaining top coefficient, then peels
    it from every factor.  Coefficients stay positive and sum to 1, and
    projecting the output back onto any factor recovers that factor.
    Output runs top-to-bottom.
    """
    remaining = [list(p.terms[::-1]) for p in parts]  # top-first stacks
    budgets = [Fraction(t[0][0]) for t in remaining] if remaining else []
    out = []
    if not remaining:
        return out
    while all(stack for stack in remaining):
        lam = min(budgets)
        out.append((lam, tuple(stack[0][1] for stack in remaining)))
        for i, stack in enumerate(remaining):
            budgets[i] -= lam
            if budgets[i] == 0:
                stack.pop(0)
                if stack:
                    budgets[i] = Fraction(stack[0][0])
    return out


def support_tuples(x_parts, y_parts) -> list:
    """Support chain of the product point, as tuples (X_1..X_mu, Y_1..Y_nu)."""
    merged = combine_product(list(x_parts) + list(y_parts))
    mu = len(x_parts)
    return [(tup[:mu], tup[mu:]) for _, tup in merged]


def lovasz_restricted_rank(a, x: ComplexPoint, y: ComplexPoint) -> Fraction:
    """Definitional Lovasz extension of R at (x, y): merge the two factors,
    then average the restricted rank along the merged chain."""
    merged = combine_product([x, y])
    return sum((lam * restricted_rank(a, xs, ys) for lam, (xs, ys) in merged), Fraction(0))
