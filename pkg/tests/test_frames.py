"""Frame constructions and coordinate maps."""

import itertools
import random
from fractions import Fraction

import pytest

from vanish.bilinear import Bilinear, left_orth, right_orth
from vanish.fields import PrimeField
from vanish.frames import (FrameL, FrameM, coords_l, coords_m,
                           frame_for_two_chains, orthogonal_frame,
                           pairing_matrix, recover_l, recover_m)
from vanish.matrix import Mat, rank
from vanish.orthoscheme import ORIENT_L, ORIENT_M, make_point, vertex
from vanish.subspace import (ASCENDING, DESCENDING, SubspaceChain, contains,
                             enumerate_subspaces, extend_to_maximal_chain,
                             from_spanning, full_subspace, zero_subspace)

from conftest import random_maximal_chain, random_point


def _standard_flag(field, n, orientation=ASCENDING):
    elems = [from_spanning(field, n, Mat.identity(field, n).entries[:k])
             if k else zero_subspace(field, n) for k in range(n + 1)]
    if orientation == DESCENDING:
        elems = list(reversed(elems))
    return SubspaceChain(tuple(elems), orientation)


def _is_subset_join(s, vectors) -> bool:
    inside = [v for v in vectors if s.contains_vector(v)]
    return len(inside) == s.dim


def test_frame_for_identical_standard_flags(gf2):
    flag = _standard_flag(gf2, 2)
    fr = frame_for_two_chains(flag, flag)
    assert fr.atoms == ((1, 0), (0, 1))


def test_frame_for_crossing_chains(gf2):
    e1 = from_spanning(gf2, 2, [[1, 0]])
    diag = from_spanning(gf2, 2, [[1, 1]])
    c = SubspaceChain((zero_subspace(gf2, 2), e1, full_subspace(gf2, 2)), ASCENDING)
    d = SubspaceChain((zero_subspace(gf2, 2), diag, full_subspace(gf2, 2)), ASCENDING)
    fr = frame_for_two_chains(c, d)
    assert set(fr.atoms) == {(1, 0), (1, 1)}
    for s in (*c.elements, *d.elements):
        assert _is_subset_join(s, fr.atoms)


def _all_maximal_chains(field, n):
    subs = enumerate_subspaces(field, n)
    by_dim = [[s for s in subs if s.dim == d] for d in range(n + 1)]

    def grow(chain):
        if len(chain) == n + 1:
            yield tuple(chain)
            return
        for nxt in by_dim[len(chain)]:
            if contains(nxt, chain[-1]):
                yield from grow(chain + [nxt])

    yield from grow([zero_subspace(field, n)])


def test_frame_for_all_chain_pairs_gf2_cubed():
    """Exhaustive over every pair of maximal chains of GF(2)^3: atoms span,
    are independent, and reproduce every chain element as a subset join."""
    field = PrimeField(2)
    chains = [SubspaceChain(c, ASCENDING) for c in _all_maximal_chains(field, 3)]
    assert len(chains) == 21
    for c, d in itertools.product(chains, repeat=2):
        fr = frame_for_two_chains(c, d)
        assert rank(Mat.from_rows(field, fr.atoms, cols=3)) == 3
        for s in (*c.elements, *d.elements):
            assert _is_subset_join(s, fr.atoms)


def test_frame_rejects_non_maximal(gf2):
    partial = SubspaceChain((zero_subspace(gf2, 2), full_subspace(gf2, 2)), ASCENDING)
    flag = _standard_flag(gf2, 2)
    with pytest.raises(ValueError):
        frame_for_two_chains(partial, flag)


def test_orthogonal_frame_identity_standard_flags(gf2):
    a = Bilinear(Mat.identity(gf2, 2))
    fr = orthogonal_frame(a, _standard_flag(gf2, 2), _standard_flag(gf2, 2, DESCENDING))
    assert fr.r == 2
    assert pairing_matrix(a, fr) == Mat.identity(gf2, 2)


def test_orthogonal_frame_rank_one_block(gf2):
    a = Bilinear(Mat.from_rows(gf2, [[1, 0], [0, 0]]))
    fr = orthogonal_frame(a, _standard_flag(gf2, 2), _standard_flag(gf2, 2, DESCENDING))
    assert fr.r == 1
    p = pairing_matrix(a, fr)
    assert p.entries[0][0] != 0
    assert all(p.entries[i][j] == 0 for i in range(2) for j in range(2) if (i, j) != (0, 0))
    # tail atom spans the left kernel, tail dual spans the right kernel
    assert left_orth(a, full_subspace(gf2, 2)).contains_vector(fr.e.atoms[1])
    assert right_orth(a, full_subspace(gf2, 2)).contains_vector(fr.f.duals[1])


def test_orthogonal_frame_random_invariants():
    """Pairing matrix diagonal with exactly r nonzeros, and both chains plus
    their orthogonals realized as subset joins, on random instances."""
    rng = random.Random(314)
    for _ in range(250):
        p = rng.choice([2, 3])
        field = PrimeField(p)
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        mat = Mat.from_rows(field, [[rng.randrange(p) for _ in range(n)]
                                    for _ in range(m)], cols=n)
        a = Bilinear(mat)
        xc = random_maximal_chain(rng, field, m, ASCENDING)
        yc = random_maximal_chain(rng, field, n, DESCENDING)
        fr = orthogonal_frame(a, xc, yc)
        assert fr.r == rank(mat)
        pm = pairing_matrix(a, fr)
        for i in range(m):
            for j in range(n):
                if i == j and i < fr.r:
                    assert pm.entries[i][j] != field.zero
                else:
                    assert pm.entries[i][j] == field.zero
        for s in xc.elements:
            assert _is_subset_join(s, fr.e.atoms)
            assert _is_subset_join(right_orth(a, s), fr.f.duals)
        for s in yc.elements:
            assert _is_subset_join(s, fr.f.duals)
            assert _is_subset_join(left_orth(a, s), fr.e.atoms)


def test_coords_l_examples(gf2):
    fr = FrameL(2, ((1, 0), (0, 1)))
    full = vertex(ORIENT_L, full_subspace(gf2, 2))
    assert coords_l(full, fr) == (1, 1)
    half = make_point(ORIENT_L, 2, [(Fraction(1, 2), zero_subspace(gf2, 2)),
                                    (Fraction(1, 2), from_spanning(gf2, 2, [[1, 0]]))])
    assert coords_l(half, fr) == (Fraction(1, 2), 0)


def test_recover_l_examples(gf2):
    fr = FrameL(2, ((1, 0), (0, 1)))
    pt = recover_l((Fraction(7, 10), Fraction(3, 10)), fr, gf2)
    coeffs = {e: c for c, e in pt.terms}
    assert coeffs[zero_subspace(gf2, 2)] == Fraction(3, 10)
    assert coeffs[from_spanning(gf2, 2, [[1, 0]])] == Fraction(4, 10)
    assert coeffs[full_subspace(gf2, 2)] == Fraction(3, 10)

    tied = recover_l((Fraction(1, 3), Fraction(1, 3)), fr, gf2)
    assert tied.terms == ((Fraction(2, 3), zero_subspace(gf2, 2)),
                          (Fraction(1, 3), full_subspace(gf2, 2)))


def test_coords_m_examples(gf2):
    v1, v2 = (1, 0), (0, 1)
    fr = FrameM(2, (v1, v2))
    bottom = vertex(ORIENT_M, full_subspace(gf2, 2))
    assert coords_m(bottom, fr) == (0, 0)
    top = vertex(ORIENT_M, zero_subspace(gf2, 2))
    assert coords_m(top, fr) == (1, 1)
    hyper = make_point(ORIENT_M, 2, [(Fraction(1, 2), full_subspace(gf2, 2)),
                                     (Fraction(1, 2), from_spanning(gf2, 2, [v2]))])
    assert coords_m(hyper, fr) == (Fraction(1, 2), 0)


def test_coords_recover_round_trips():
    rng = random.Random(2718)
    for _ in range(120):
        p = rng.choice([2, 3])
        field = PrimeField(p)
        n = rng.randint(1, 4)
        mat = Mat.from_rows(field, [[rng.randrange(p) for _ in range(n)]
                                    for _ in range(n)], cols=n)
        a = Bilinear(mat)
        fr = orthogonal_frame(a, random_maximal_chain(rng, field, n, ASCENDING),
                              random_maximal_chain(rng, field, n, DESCENDING))
        coords = tuple(Fraction(rng.randint(0, 12), 12) for _ in range(n))
        assert coords_l(recover_l(coords, fr.e, field), fr.e) == coords
        assert coords_m(recover_m(coords, fr.f, field), fr.f) == coords
        # and the reverse round trip from a random point
        pt = random_point(rng, field, n, ORIENT_L)
        chain = extend_to_maximal_chain(SubspaceChain(pt.support, ASCENDING),
                                        field=field, ambient=n)
        fr2 = orthogonal_frame(a, chain, random_maximal_chain(rng, field, n, DESCENDING))
        assert recover_l(coords_l(pt, fr2.e), fr2.e, field) == pt


def test_coords_reject_unrepresentable_support(gf2):
    fr = FrameL(2, ((1, 0), (0, 1)))
    diag = vertex(ORIENT_L, from_spanning(gf2, 2, [[1, 1]]))
    with pytest.raises(ValueError):
        coords_l(diag, fr)


def test_recover_rejects_out_of_box(gf2):
    fr = FrameL(1, ((1,),))
    with pytest.raises(ValueError):
        recover_l((Fraction(3, 2),), fr, gf2)
