"""Complex points, the product merge, extensions, and objective evaluation."""

import random
from fractions import Fraction

import pytest

from vanish.bilinear import Bilinear
from vanish.fields import PrimeField
from vanish.frames import orthogonal_frame, recover_l, recover_m
from vanish.matrix import Mat
from vanish.orthoscheme import (ORIENT_L, ORIENT_M, ComplexPoint, combine_product,
                                d1_value, d2_value, dim_extension, dist2_from_zero,
                                lovasz_restricted_rank, make_point, support_tuples,
                                vertex)
from vanish.solver import (ProductState, eval_objective, lattice_objective,
                           make_instance)
from vanish.subspace import (ASCENDING, DESCENDING, from_spanning,
                             full_subspace, zero_subspace)

from conftest import random_maximal_chain, random_point


def test_point_validation(gf2):
    full = full_subspace(gf2, 2)
    zero = zero_subspace(gf2, 2)
    with pytest.raises(ValueError):
        ComplexPoint(ORIENT_L, 2, ((Fraction(1, 2), full),))  # does not sum to 1
    with pytest.raises(ValueError):
        ComplexPoint(ORIENT_L, 2, ((Fraction(1), full), (Fraction(0), zero)))
    e1 = from_spanning(gf2, 2, [[1, 0]])
    e2 = from_spanning(gf2, 2, [[0, 1]])
    with pytest.raises(ValueError):  # not a chain
        ComplexPoint(ORIENT_L, 2, ((Fraction(1, 2), e1), (Fraction(1, 2), e2)))
    # descending order is fine for the column side
    ComplexPoint(ORIENT_M, 2, ((Fraction(1, 2), full), (Fraction(1, 2), e1)))


def test_combine_product_peeling_example(gf2):
    zero = zero_subspace(gf2, 2)
    e1 = from_spanning(gf2, 2, [[1, 0]])
    full = full_subspace(gf2, 2)
    x = make_point(ORIENT_L, 2, [(Fraction(1, 2), e1), (Fraction(1, 2), full)])
    y = vertex(ORIENT_M, zero)
    merged = combine_product([x, y])
    assert merged == [(Fraction(1, 2), (full, zero)), (Fraction(1, 2), (e1, zero))]


def test_combine_product_single_factor(gf2):
    x = vertex(ORIENT_L, full_subspace(gf2, 2))
    assert combine_product([x]) == [(Fraction(1), (full_subspace(gf2, 2),))]


def _marginal(merged, t):
    pairs = {}
    for lam, tup in merged:
        pairs[tup[t]] = pairs.get(tup[t], Fraction(0)) + lam
    return pairs


def test_combine_product_marginal_round_trip():
    rng = random.Random(161)
    field = PrimeField(2)
    for _ in range(60):
        parts = [random_point(rng, field, rng.randint(1, 3), ORIENT_L) for _ in range(3)]
        merged = combine_product(parts)
        assert sum(lam for lam, _ in merged) == 1
        assert all(lam > 0 for lam, _ in merged)
        for t, part in enumerate(parts):
            assert _marginal(merged, t) == {e: c for c, e in part.terms}
        # chain property in the product order, top down
        for (_, a), (_, b) in zip(merged, merged[1:]):
            assert all(x.dim >= y.dim for x, y in zip(a, b))
        # length bound from the peeling argument
        assert len(merged) <= 1 + sum(len(p.terms) - 1 for p in parts)


def test_d1_examples(gf2):
    zero = zero_subspace(gf2, 2)
    full = full_subspace(gf2, 2)
    assert d1_value(vertex(ORIENT_L, zero)) == 0
    half = make_point(ORIENT_L, 2, [(Fraction(1, 2), zero), (Fraction(1, 2), full)])
    assert d1_value(half) == 1
    assert d1_value(vertex(ORIENT_M, full)) == 0  # column-side bottom
    assert d1_value(vertex(ORIENT_M, zero)) == 2
    assert dim_extension(vertex(ORIENT_M, full)) == 2


def test_d2_examples(gf2):
    full = full_subspace(gf2, 2)
    zero = zero_subspace(gf2, 2)
    assert d2_value(vertex(ORIENT_L, full)) == 2  # squared diameter = ambient
    assert d2_value(vertex(ORIENT_L, zero)) == 0
    e1 = from_spanning(gf2, 2, [[1, 0]])
    half = make_point(ORIENT_L, 2, [(Fraction(1, 2), zero), (Fraction(1, 2), e1)])
    assert d2_value(half) == Fraction(1, 4)
    assert dist2_from_zero(vertex(ORIENT_M, zero)) == 0
    assert dist2_from_zero(vertex(ORIENT_M, full)) == 2


def test_d2_bounded_by_ambient():
    rng = random.Random(33)
    field = PrimeField(3)
    for _ in range(40):
        n = rng.randint(1, 4)
        pt = random_point(rng, field, n, rng.choice([ORIENT_L, ORIENT_M]))
        assert 0 <= d2_value(pt) <= n
        assert 0 <= dist2_from_zero(pt) <= n


def test_support_tuples_examples(gf2):
    zero = zero_subspace(gf2, 2)
    full = full_subspace(gf2, 2)
    e1 = from_spanning(gf2, 2, [[1, 0]])
    xs = (make_point(ORIENT_L, 2, [(Fraction(1, 2), e1), (Fraction(1, 2), full)]),)
    ys = (vertex(ORIENT_M, zero),)
    tuples = support_tuples(xs, ys)
    assert tuples == [((full,), (zero,)), ((e1,), (zero,))]
    assert support_tuples((vertex(ORIENT_L, e1),), ys) == [((e1,), (zero,))]


def test_eval_objective_vertex_consistency():
    rng = random.Random(99)
    for _ in range(40):
        field = PrimeField(rng.choice([2, 3]))
        mu, nu = rng.randint(1, 2), rng.randint(1, 2)
        rd = [rng.randint(1, 2) for _ in range(mu)]
        cd = [rng.randint(1, 2) for _ in range(nu)]
        blocks = [[[[rng.randrange(field.p) for _ in range(cd[b])] for _ in range(rd[a])]
                   for b in range(nu)] for a in range(mu)]
        inst = make_instance(field, rd, cd, blocks,
                             [rng.randint(0, 3) for _ in range(mu)],
                             [rng.randint(0, 3) for _ in range(nu)])
        xs = tuple(random_point(rng, field, d, ORIENT_L).support[-1] for d in rd)
        ys = tuple(random_point(rng, field, d, ORIENT_M).support[-1] for d in cd)
        state = ProductState(tuple(vertex(ORIENT_L, x) for x in xs),
                             tuple(vertex(ORIENT_M, y) for y in ys))
        assert eval_objective(inst, state, perturbed=False) == lattice_objective(inst, xs, ys)


def test_eval_objective_zero_matrix_full_tuple(gf2):
    inst = make_instance(gf2, [2], [2], [[[[0, 0], [0, 0]]]], [1], [1])
    state = ProductState((vertex(ORIENT_L, full_subspace(gf2, 2)),),
                         (vertex(ORIENT_M, full_subspace(gf2, 2)),))
    assert eval_objective(inst, state, perturbed=False) == -4


def test_lovasz_restricted_rank_coordinate_formula():
    """Definitional merged-chain evaluation equals the hinge-sum coordinate
    formula inside a form-diagonalizing frame."""
    rng = random.Random(424242)
    for _ in range(150):
        p = rng.choice([2, 3])
        field = PrimeField(p)
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        mat = Mat.from_rows(field, [[rng.randrange(p) for _ in range(n)]
                                    for _ in range(m)], cols=n)
        a = Bilinear(mat)
        fr = orthogonal_frame(a, random_maximal_chain(rng, field, m, ASCENDING),
                              random_maximal_chain(rng, field, n, DESCENDING))
        xc = tuple(Fraction(rng.randint(0, 10), 10) for _ in range(m))
        yc = tuple(Fraction(rng.randint(0, 10), 10) for _ in range(n))
        x = recover_l(xc, fr.e, field)
        y = recover_m(yc, fr.f, field)
        expected = sum(max(Fraction(0), xc[i] - yc[i]) for i in range(fr.r))
        assert lovasz_restricted_rank(a, x, y) == expected


def test_extension_convex_along_frame_segments():
    """Midpoint value never exceeds the average of the endpoint values for
    points sharing a form-diagonalizing frame (single-block objective)."""
    rng = random.Random(512)
    for _ in range(60):
        field = PrimeField(2)
        n = rng.randint(1, 3)
        mat = Mat.from_rows(field, [[rng.randrange(2) for _ in range(n)]
                                    for _ in range(n)], cols=n)
        inst = make_instance(field, [n], [n], [[mat]], [rng.randint(0, 2)], [rng.randint(0, 2)])
        a = inst.blocks[0][0]
        fr = orthogonal_frame(a, random_maximal_chain(rng, field, n, ASCENDING),
                              random_maximal_chain(rng, field, n, DESCENDING))
        c1 = tuple(Fraction(rng.randint(0, 8), 8) for _ in range(n))
        c2 = tuple(Fraction(rng.randint(0, 8), 8) for _ in range(n))
        d1c = tuple(Fraction(rng.randint(0, 8), 8) for _ in range(n))
        d2c = tuple(Fraction(rng.randint(0, 8), 8) for _ in range(n))
        mid_x = tuple((u + v) / 2 for u, v in zip(c1, c2))
        mid_y = tuple((u + v) / 2 for u, v in zip(d1c, d2c))

        def value(xc, yc):
            state = ProductState((recover_l(xc, fr.e, field),),
                                 (recover_m(yc, fr.f, field),))
            return eval_objective(inst, state, perturbed=True)

        assert 2 * value(mid_x, mid_y) <= value(c1, d1c) + value(c2, d2c)
