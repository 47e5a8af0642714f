"""Shared builders for the test suite: fields, random subspaces, chains,
points, and random solver instances."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from vanish.fields import PrimeField, QQ
from vanish.orthoscheme import make_point
from vanish.solver import WmvspInstance, make_instance
from vanish.subspace import (ASCENDING, DESCENDING, SubspaceChain, contains,
                             from_spanning, join, zero_subspace)


@pytest.fixture
def gf2():
    return PrimeField(2)


@pytest.fixture
def gf3():
    return PrimeField(3)


@pytest.fixture
def qq():
    return QQ


def random_subspace(rng: random.Random, field, ambient: int, dim: int | None = None):
    vectors = [[rng.randrange(field.p) for _ in range(ambient)]
               for _ in range(dim if dim is not None else rng.randint(0, ambient))]
    if not vectors:
        return zero_subspace(field, ambient)
    return from_spanning(field, ambient, vectors)


def random_maximal_chain(rng: random.Random, field, ambient: int, orientation=ASCENDING):
    cur = zero_subspace(field, ambient)
    elems = [cur]
    while cur.dim < ambient:
        v = tuple(rng.randrange(field.p) for _ in range(ambient))
        step = from_spanning(field, ambient, [v])
        if step.dim == 0 or contains(cur, step):
            continue
        cur = join(cur, step)
        elems.append(cur)
    if orientation == DESCENDING:
        elems = list(reversed(elems))
    return SubspaceChain(tuple(elems), orientation)


def random_point(rng: random.Random, field, ambient: int, orientation):
    """Random complex point: random subchain of a random maximal chain with
    random positive rational coefficients summing to one."""
    chain = random_maximal_chain(rng, field, ambient)
    subset = [s for s in chain.elements if rng.random() < 0.6]
    if not subset:
        subset = [chain.elements[rng.randrange(len(chain.elements))]]
    weights = [Fraction(rng.randint(1, 8)) for _ in subset]
    total = sum(weights)
    return make_point(orientation, ambient, [(w / total, s) for w, s in zip(weights, subset)])


def random_instance(rng: random.Random, fields=(2, 3), max_blocks=2, max_dim=2,
                    max_weight=3, unit_weights=False) -> WmvspInstance:
    field = PrimeField(rng.choice(fields))
    mu, nu = rng.randint(1, max_blocks), rng.randint(1, max_blocks)
    row_dims = [rng.randint(1, max_dim) for _ in range(mu)]
    col_dims = [rng.randint(1, max_dim) for _ in range(nu)]
    blocks = [[[[rng.randrange(field.p) for _ in range(col_dims[b])]
                for _ in range(row_dims[a])] for b in range(nu)] for a in range(mu)]
    if unit_weights:
        wc, wd = [1] * mu, [1] * nu
    else:
        wc = [rng.randint(0, max_weight) for _ in range(mu)]
        wd = [rng.randint(0, max_weight) for _ in range(nu)]
    return make_instance(field, row_dims, col_dims, blocks, wc, wd)


def random_fraction(rng: random.Random, max_den: int = 24) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(0, den), den)
