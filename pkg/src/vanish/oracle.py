"""Ground-truth brute force over small finite fields.

Enumerates every tuple of subspaces, keeps the vanishing ones, and
maximizes the weighted dimension.  The Y side factorizes once the X side is
fixed (the constraints on each column part are independent), which speeds
the scan up without changing the enumerated set; the guard limit is still
the full tuple product.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .bilinear import restricted_rank
from .solver import WmvspInstance
from .subspace import enumerate_subspaces

DEFAULT_TUPLE_LIMIT = 1_000_000


@dataclass(frozen=True)
class OracleLimit:
    max_tuples: int = DEFAULT_TUPLE_LIMIT

    def __post_init__(self):
        if self.max_tuples <= 0:
            raise ValueError("tuple limit must be positive")


def brute_force_wmvsp(inst: WmvspInstance, limit: OracleLimit = OracleLimit()):
    """(optimum, all optimal tuples) by exhaustive enumeration.

    Returns the maximum of sum(C_a dim X_a) + sum(D_b dim Y_b) over vanishing
    tuples, and every tuple attaining it as (xs, ys) pairs.
    """
    if not hasattr(inst.field, "p"):
        raise ValueError("the oracle only runs over finite fields")
    x_lists = [enumerate_subspaces(inst.field, d, limit.max_tuples) for d in inst.row_dims]
    y_lists = [enumerate_subspaces(inst.field, d, limit.max_tuples) for d in inst.col_dims]

    total = 1
    for lst in x_lists + y_lists:
        total *= len(lst)
        if total > limit.max_tuples:
            raise ValueError(f"tuple product exceeds the oracle limit {limit.max_tuples}")

    # vanish[a][b][ix] = set of column-subspace indices that pair with X_a = x_lists[a][ix]
    vanish = [[[set() for _ in x_lists[a]] for b in range(inst.nu)] for a in range(inst.mu)]
    for a in range(inst.mu):
        for b in range(inst.nu):
            blk = inst.blocks[a][b]
            for ix, x in enumerate(x_lists[a]):
                allowed = vanish[a][b][ix]
                for iy, y in enumerate(y_lists[b]):
                    if restricted_rank(blk, x, y) == 0:
                        allowed.add(iy)

    best = None
    best_tuples = []
    for xidx in itertools.product(*(range(len(l)) for l in x_lists)):
        xs = tuple(x_lists[a][i] for a, i in enumerate(xidx))
        x_score = sum(c * x.dim for c, x in zip(inst.weights_c, xs))
        per_beta_choices = []
        score = x_score
        feasible = True
        for b in range(inst.nu):
            allowed = set(range(len(y_lists[b])))
            for a in range(inst.mu):
                allowed &= vanish[a][b][xidx[a]]
            if not allowed:
                feasible = False
                break
            d = inst.weights_d[b]
            best_contrib = max(d * y_lists[b][iy].dim for iy in allowed)
            choices = [iy for iy in allowed if d * y_lists[b][iy].dim == best_contrib]
            per_beta_choices.append(choices)
            score += best_contrib
        if not feasible:
            continue
        if best is None or score > best:
            best = score
            best_tuples = []
        if score == best:
            for combo in itertools.product(*per_beta_choices):
                ys = tuple(y_lists[b][iy] for b, iy in enumerate(combo))
                best_tuples.append((xs, ys))
    return best, best_tuples


def brute_force_ncrank(forms, limit: OracleLimit = OracleLimit()) -> int:
    """m + n - max{dim X + dim Y : all forms vanish on X x Y}, exhaustively."""
    forms = list(forms)
    if not forms:
        raise ValueError("need at least one matrix")
    field = forms[0].field
    if not hasattr(field, "p"):
        raise ValueError("the oracle only runs over finite fields")
    m, n = forms[0].m, forms[0].n
    xs = enumerate_subspaces(field, m, limit.max_tuples)
    ys = enumerate_subspaces(field, n, limit.max_tuples)
    if len(xs) * len(ys) > limit.max_tuples:
        raise ValueError(f"tuple product exceeds the oracle limit {limit.max_tuples}")
    best = 0
    for x in xs:
        for y in ys:
            if x.dim + y.dim <= best:
                continue
            if all(restricted_rank(f, x, y) == 0 for f in forms):
                best = x.dim + y.dim
    return m + n - best
