"""Closed-form proximal operators: the linear-plus-quadratic single-lattice
prox and the hinge-pair prox that handles one rank penalty term.

Both are exact.  The single-lattice prox works directly on the coordinate
bands of the input's support chain (any adapted frame gives band-constant
coordinates, and the per-coordinate closed form maps bands to bands).  The
rank prox builds the form-diagonalizing frame and applies the hinge
coordinate-wise on the paired indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bilinear import Bilinear
from .frames import coords_l, coords_m, orthogonal_frame, recover_l, recover_m
from .orthoscheme import ORIENT_L, ORIENT_M, ComplexPoint, make_point
from .subspace import (ASCENDING, DESCENDING, SubspaceChain,
                       extend_to_maximal_chain, full_subspace, zero_subspace)


@dataclass(frozen=True)
class ProxParams:
    """Step size and the weights entering one resolvent.

    step: the proximal step (lambda); epsilon: perturbation strength;
    weight: the linear weight (a row/column weight or the rank penalty).
    """

    step: Fraction
    epsilon: Fraction = Fraction(0)
    weight: Fraction = Fraction(0)

    def __post_init__(self):
        if self.step <= 0:
            raise ValueError("step size must be positive")
        if self.epsilon < 0 or self.weight < 0:
            raise ValueError("epsilon and weight must be nonnegative")


def _inclusion_bands(x: ComplexPoint):
    """(element, coordinate value) per nonempty dimension band of the support,
    measured in inclusion coordinates from the zero subspace (the base point
    of the linear term on both sides); values strictly decrease along
    ascending elements.  Also reports whether a zero-valued top band exists."""
    terms = x.terms if x.orientation == ORIENT_L else tuple(reversed(x.terms))
    bands = []
    suffix = sum((c for c, _ in terms), Fraction(0))
    prev_dim = 0
    for c, e in terms:
        if e.dim > prev_dim:
            bands.append((e, suffix))
        suffix -= c
        prev_dim = e.dim
    has_top_band = prev_dim < x.ambient
    return bands, has_top_band


def _recover_from_bands(x: ComplexPoint, levels) -> ComplexPoint:
    """Rebuild a point from (element, new value) levels sorted by ascending
    inclusion with nonincreasing values; ties collapse onto the larger
    element and the leftover mass sits on the zero subspace."""
    field = x.field
    pairs = []
    first_val = levels[0][1] if levels else Fraction(0)
    pairs.append((1 - first_val, zero_subspace(field, x.ambient)))
    for k, (elem, val) in enumerate(levels):
        nxt = levels[k + 1][1] if k + 1 < len(levels) else Fraction(0)
        pairs.append((val - nxt, elem))
    return make_point(x.orientation, x.ambient, pairs)


def prox_linear_quad(x0: ComplexPoint, params: ProxParams) -> ComplexPoint:
    """Resolvent of -weight*(dim extension) + epsilon*(distance from {0})^2.

    In inclusion coordinates over any frame adapted to the support chain the
    solution is coordinate-wise min(1, (t + lambda*C) / (1 + 2*epsilon*lambda));
    the lower clamp never binds for t >= 0 and C >= 0.  On column-side points
    the drift grows dim Y, as the objective demands.  The result stays in the
    simplex of any maximal chain through x0's support.
    """
    lam, eps, c = params.step, params.epsilon, params.weight
    denom = 1 + 2 * eps * lam
    shift = lam * c

    def g(t: Fraction) -> Fraction:
        return min(Fraction(1), (t + shift) / denom)

    bands, has_top = _inclusion_bands(x0)
    levels = [(elem, g(val)) for elem, val in bands]
    if has_top:
        top_val = g(Fraction(0))
        if top_val > 0:
            levels.append((full_subspace(x0.field, x0.ambient), top_val))
    return _recover_from_bands(x0, levels)


def prox_hinge_coord(x0: Fraction, y0: Fraction, c: Fraction):
    """Minimizer of c*max(0, x - y) + ((x - x0)^2 + (y - y0)^2)/2 on [0,1]^2.

    The pair moves toward each other along the hinge direction by
    t = min(c, max(0, (x0 - y0)/2)); inputs inside the box keep the
    output inside, so no clamp is needed.
    """
    if not (0 <= x0 <= 1 and 0 <= y0 <= 1):
        raise ValueError("hinge prox inputs must lie in [0, 1]")
    if c < 0:
        raise ValueError("hinge weight must be nonnegative")
    t = min(Fraction(c), max(Fraction(0), Fraction(x0 - y0) / 2))
    return x0 - t, y0 + t


def prox_restricted_rank(x0: ComplexPoint, y0: ComplexPoint, a: Bilinear,
                         params: ProxParams):
    """Joint resolvent of weight * (rank penalty Lovasz extension) at (x0, y0).

    Extends both supports to maximal chains, builds the form-diagonalizing
    frame adapted to them, applies the hinge prox with effective weight
    weight*step on each of the r paired coordinates, and recovers.
    """
    if x0.orientation != ORIENT_L or y0.orientation != ORIENT_M:
        raise ValueError("rank prox expects a row-side and a column-side point")
    if x0.ambient != a.m or y0.ambient != a.n:
        raise ValueError("point shapes do not match the form")

    x_chain = extend_to_maximal_chain(
        SubspaceChain(x0.support, ASCENDING), field=x0.field, ambient=x0.ambient)
    y_chain = extend_to_maximal_chain(
        SubspaceChain(y0.support, DESCENDING), field=y0.field, ambient=y0.ambient)
    fr = orthogonal_frame(a, x_chain, y_chain)

    xc = list(coords_l(x0, fr.e))
    yc = list(coords_m(y0, fr.f))
    eff = params.weight * params.step
    for i in range(fr.r):
        xc[i], yc[i] = prox_hinge_coord(xc[i], yc[i], eff)
    return recover_l(xc, fr.e, x0.field), recover_m(yc, fr.f, y0.field)
