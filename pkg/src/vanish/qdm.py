"""Quasi block-triangularization of a partitioned matrix.

A chain of maximum vanishing tuples, found by solving the weighted problem
under a few special weight families, yields nested adapted bases and а
block-triangular form whose diagonal blocks cannot be split further by any
weight choice.  Restrictions to a vanishing tuple and its complements drive
the recursion; embeddings lift sub-solutions back to original coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .bilinear import Bilinear, restricted_rank
from .matrix import Mat, express_in_rows
from .solver import SolverConfig, WmvspInstance, solve_wmvsp
from .subspace import (Subspace, complement_within, contains, from_spanning,
                       full_subspace, join, zero_subspace)

KEEP_X_COMPL_Y = "keep-X-compl-Y"
KEEP_COMPL_X_KEEP_Y = "keep-compl-X-keep-Y"


def with_weights(inst: WmvspInstance, weights_c, weights_d) -> WmvspInstance:
    return replace(inst, weights_c=tuple(weights_c), weights_d=tuple(weights_d))


def _probe_solve(inst: WmvspInstance, cfg: SolverConfig):
    """Solve an internal weighted probe with the schedule parameter scaled to
    the weight magnitude: a = 1 - 1/(2W) keeps the early steps on the scale
    where the weight differences are informative instead of saturating every
    coordinate clamp for the first W*(m+n) sweeps."""
    w = max((*inst.weights_c, *inst.weights_d, 1))
    probe_cfg = replace(cfg, a=Fraction(1) - Fraction(1, 2 * w)) if w > 1 else cfg
    return solve_wmvsp(inst, probe_cfg)


def weights_extreme(inst: WmvspInstance, which: str):
    """Weight families whose unique optimum is the maximal (resp. minimal)
    maximum vanishing tuple: max uses C = m+2, D = m+1; min uses C = n+1,
    D = n+2."""
    if which == "max":
        c, d = inst.m + 2, inst.m + 1
    elif which == "min":
        c, d = inst.n + 1, inst.n + 2
    else:
        raise ValueError("which must be 'max' or 'min'")
    return tuple(c for _ in range(inst.mu)), tuple(d for _ in range(inst.nu))


def weights_row(inst: WmvspInstance, alpha: int):
    """Row family for a DM-regular instance: any optimum is a maximum
    vanishing tuple, and a nontrivial optimum exposes a split at row block
    alpha."""
    if not 0 <= alpha < inst.mu:
        raise ValueError("row block index out of range")
    m, ma = inst.m, inst.row_dims[alpha]
    big = 2 * ma + 1
    c = tuple(m * big * (big + 1) if a == alpha else m * big * big for a in range(inst.mu))
    d = tuple(big * (m * big + ma) for _ in range(inst.nu))
    return c, d


def weights_col(inst: WmvspInstance, beta: int):
    """Column mirror of weights_row."""
    if not 0 <= beta < inst.nu:
        raise ValueError("column block index out of range")
    n, nb = inst.n, inst.col_dims[beta]
    big = 2 * nb + 1
    c = tuple(big * (n * big + nb) for _ in range(inst.mu))
    d = tuple(n * big * (big + 1) if b == beta else n * big * big for b in range(inst.nu))
    return c, d


@dataclass(frozen=True)
class SideEmbedding:
    """Per-block lift data for one side of a restriction: offset subspace
    plus the map sending kept-coordinate rows to ambient vectors (None for
    blocks dropped as empty)."""

    bases: tuple
    maps: tuple
    core_of: tuple

    def lift_one(self, i: int, core_sub) -> Subspace:
        base = self.bases[i]
        if self.maps[i] is None or core_sub is None or core_sub.dim == 0:
            return base
        vecs = core_sub.basis.mul(self.maps[i])
        lifted = from_spanning(base.field, base.ambient, vecs)
        return join(base, lifted)


@dataclass(frozen=True)
class Embedding:
    rows: SideEmbedding
    cols: SideEmbedding

    def lift(self, xs_core, ys_core):
        xs = tuple(self.rows.lift_one(a, xs_core[self.rows.core_of[a]]
                                      if self.rows.core_of[a] is not None else None)
                   for a in range(len(self.rows.bases)))
        ys = tuple(self.cols.lift_one(b, ys_core[self.cols.core_of[b]]
                                      if self.cols.core_of[b] is not None else None)
                   for b in range(len(self.cols.bases)))
        return xs, ys


def _kept_basis(space_or_mat, ambient, field) -> Mat:
    if isinstance(space_or_mat, Mat):
        if space_or_mat.cols != ambient:
            raise ValueError("kept basis has the wrong ambient width")
        return space_or_mat
    return space_or_mat.basis


def restrict_matrix(inst: WmvspInstance, xs, ys, side: str,
                    row_spaces=None, col_spaces=None):
    """Restricted instance for a vanishing tuple, with its lift embedding.

    side keep-X-compl-Y keeps the X_a row spaces and complements of the Y_b
    (sub-solutions lift by adding Y back on the column side); the other side
    mirrors it.  Explicit row_spaces / col_spaces (Subspace or basis Mat)
    override the deterministic complement choice; empty blocks are dropped
    and re-indexed.
    """
    if not all(restricted_rank(inst.blocks[a][b], xs[a], ys[b]) == 0
               for a in range(inst.mu) for b in range(inst.nu)):
        raise ValueError("restriction requires a vanishing tuple")
    field = inst.field

    if side == KEEP_X_COMPL_Y:
        row_kept = [xs[a].basis for a in range(inst.mu)]
        row_bases = [zero_subspace(field, inst.row_dims[a]) for a in range(inst.mu)]
        if col_spaces is None:
            col_spaces = [complement_within(ys[b], full_subspace(field, inst.col_dims[b]))
                          for b in range(inst.nu)]
        col_kept = [_kept_basis(col_spaces[b], inst.col_dims[b], field) for b in range(inst.nu)]
        col_bases = [ys[b] for b in range(inst.nu)]
    elif side == KEEP_COMPL_X_KEEP_Y:
        if row_spaces is None:
            row_spaces = [complement_within(xs[a], full_subspace(field, inst.row_dims[a]))
                          for a in range(inst.mu)]
        row_kept = [_kept_basis(row_spaces[a], inst.row_dims[a], field) for a in range(inst.mu)]
        row_bases = [xs[a] for a in range(inst.mu)]
        col_kept = [ys[b].basis for b in range(inst.nu)]
        col_bases = [zero_subspace(field, inst.col_dims[b]) for b in range(inst.nu)]
    else:
        raise ValueError(f"unknown restriction side {side!r}")

    row_alive = [a for a in range(inst.mu) if row_kept[a].rows > 0]
    col_alive = [b for b in range(inst.nu) if col_kept[b].rows > 0]
    row_core_of = [row_alive.index(a) if a in row_alive else None for a in range(inst.mu)]
    col_core_of = [col_alive.index(b) if b in col_alive else None for b in range(inst.nu)]

    core_blocks = tuple(
        tuple(Bilinear(row_kept[a].mul(inst.blocks[a][b].matrix).mul(col_kept[b].transpose()))
              for b in col_alive)
        for a in row_alive)
    core = WmvspInstance(field,
                         tuple(row_kept[a].rows for a in row_alive),
                         tuple(col_kept[b].rows for b in col_alive),
                         core_blocks,
                         tuple(1 for _ in row_alive),
                         tuple(1 for _ in col_alive))
    emb = Embedding(
        SideEmbedding(tuple(row_bases),
                      tuple(row_kept[a] if a in row_alive else None for a in range(inst.mu)),
                      tuple(row_core_of)),
        SideEmbedding(tuple(col_bases),
                      tuple(col_kept[b] if b in col_alive else None for b in range(inst.nu)),
                      tuple(col_core_of)))
    return core, emb


@dataclass(frozen=True)
class MvChain:
    """Chain of maximum vanishing tuples, ascending in the order
    (X, Y) <= (X', Y') iff X_a inside X'_a and Y_b containing Y'_b."""

    elements: tuple  # of (xs, ys)
    dims: tuple      # unweighted dimension of each element

    def __post_init__(self):
        for (xs, ys), (xs2, ys2) in zip(self.elements, self.elements[1:]):
            ok = (all(contains(b, a) for a, b in zip(xs, xs2))
                  and all(contains(a, b) for a, b in zip(ys, ys2))
                  and (xs, ys) != (xs2, ys2))
            if not ok:
                raise ValueError("mv tuples are not strictly increasing in the chain order")

    def __len__(self):
        return len(self.elements)


def _dedupe(elems):
    out = []
    for e in elems:
        if not out or out[-1] != e:
            out.append(e)
    return out


def _dim_of(xs, ys) -> int:
    return sum(x.dim for x in xs) + sum(y.dim for y in ys)


def is_quasi_irreducible(inst: WmvspInstance, cfg: SolverConfig = SolverConfig()):
    """(True, None) if no weight family exposes a nontrivial maximum
    vanishing tuple; otherwise (False, witness).  Requires a DM-regular
    instance: square, with the trivial tuples already maximum."""
    if inst.m != inst.n:
        raise ValueError("quasi-irreducibility is defined for square instances only")
    unweighted = _probe_solve(with_weights(inst, [1] * inst.mu, [1] * inst.nu), cfg)
    if unweighted.weighted_dim != inst.n:
        raise ValueError("instance is not DM-regular: maximum vanishing dimension "
                         f"{unweighted.weighted_dim} differs from {inst.n}")
    for kind, count, family in (("row", inst.mu, weights_row), ("col", inst.nu, weights_col)):
        for idx in range(count):
            c, d = family(inst, idx)
            probe = with_weights(inst, c, d)
            trivial = sum(ci * mi for ci, mi in zip(c, inst.row_dims))
            rep = _probe_solve(probe, cfg)
            if rep.weighted_dim > trivial:
                return False, (rep.xs, rep.ys)
    return True, None


def _qdm_regular(inst: WmvspInstance, cfg: SolverConfig):
    """q-DM chain of a DM-regular instance, in its own coordinates."""
    irreducible, witness = is_quasi_irreducible(inst, cfg)
    field = inst.field
    lo = (tuple(zero_subspace(field, d) for d in inst.row_dims),
          tuple(full_subspace(field, d) for d in inst.col_dims))
    hi = (tuple(full_subspace(field, d) for d in inst.row_dims),
          tuple(zero_subspace(field, d) for d in inst.col_dims))
    if irreducible:
        return _dedupe([lo, hi])

    xs, ys = witness
    upper_core, upper_emb = restrict_matrix(inst, xs, ys, KEEP_COMPL_X_KEEP_Y)
    lower_core, lower_emb = restrict_matrix(inst, xs, ys, KEEP_X_COMPL_Y)
    upper = [upper_emb.lift(cx, cy) for cx, cy in _qdm_regular(upper_core, cfg)]
    lower = [lower_emb.lift(cx, cy) for cx, cy in _qdm_regular(lower_core, cfg)]
    return _dedupe(lower + upper)


def qdm(inst: WmvspInstance, cfg: SolverConfig = SolverConfig()) -> MvChain:
    """The q-DM chain of maximum vanishing tuples for an arbitrary instance.

    Finds the extreme maximum vanishing tuples, restricts twice to the
    regular core between them (with chain-compatible complements so the
    second restriction is well typed), recurses, and lifts.
    """
    field = inst.field
    cmax, dmax = weights_extreme(inst, "max")
    rep_max = _probe_solve(with_weights(inst, cmax, dmax), cfg)
    x_max, y_min = rep_max.xs, rep_max.ys
    cmin, dmin = weights_extreme(inst, "min")
    rep_min = _probe_solve(with_weights(inst, cmin, dmin), cfg)
    x_min, y_max = rep_min.xs, rep_min.ys

    # complement of Y_min chosen inside Y_max first, then extended, so the
    # image of Y_max in the first core is a coordinate prefix
    col_bases = []
    q_dims = []
    for b in range(inst.nu):
        q = complement_within(y_min[b], y_max[b])
        w = complement_within(y_max[b], full_subspace(field, inst.col_dims[b]))
        col_bases.append(q.basis.stack(w.basis))
        q_dims.append(q.dim)
    core1, emb1 = restrict_matrix(inst, x_max, y_min, KEEP_X_COMPL_Y, col_spaces=col_bases)

    # X_min expressed in the X_max coordinates of the first core
    xs_in_core1 = []
    for a in range(inst.mu):
        if emb1.rows.core_of[a] is None:
            continue
        rows = []
        for v in x_min[a].basis.entries:
            coeffs = express_in_rows(v, x_max[a].basis)
            if coeffs is None:
                raise ValueError("extreme tuples are not nested")
            rows.append(coeffs)
        amb = x_max[a].dim
        xs_in_core1.append(from_spanning(field, amb, Mat.from_rows(field, rows, cols=amb))
                           if rows else zero_subspace(field, amb))
    ys_in_core1 = []
    for b in range(inst.nu):
        if emb1.cols.core_of[b] is None:
            continue
        amb = core1.col_dims[emb1.cols.core_of[b]]
        prefix = Mat.identity(field, amb).entries[:q_dims[b]]
        ys_in_core1.append(from_spanning(field, amb, Mat.from_rows(field, prefix, cols=amb))
                           if q_dims[b] else zero_subspace(field, amb))

    core2, emb2 = restrict_matrix(core1, tuple(xs_in_core1), tuple(ys_in_core1),
                                  KEEP_COMPL_X_KEEP_Y)
    core_chain = _qdm_regular(core2, cfg) if core2.m > 0 or core2.n > 0 else \
        [((), ())]
    lifted = []
    for cx, cy in core_chain:
        mid = emb2.lift(cx, cy)
        lifted.append(emb1.lift(*mid))
    elements = _dedupe(lifted)
    return MvChain(tuple(elements), tuple(_dim_of(xs, ys) for xs, ys in elements))


@dataclass(frozen=True)
class BlockTriangularForm:
    """Result of the basis change: invertible per-block transforms, the
    global row/column permutations, the staircase sizes (top-left to
    bottom-right), and the transformed matrix itself."""

    e_mats: tuple
    f_mats: tuple
    row_perm: tuple
    col_perm: tuple
    diag_sizes: tuple
    transformed: Mat


def _adapted_row_basis(field, ambient, nested):
    """Rows extending each nested subspace in turn, then to the full space."""
    rows = []
    cur = zero_subspace(field, ambient)
    for s in nested:
        for v in s.basis.entries:
            if not cur.contains_vector(v):
                rows.append(v)
                cur = join(cur, from_spanning(field, ambient, [v]))
    for v in full_subspace(field, ambient).basis.entries:
        if not cur.contains_vector(v):
            rows.append(v)
            cur = join(cur, from_spanning(field, ambient, [v]))
    return Mat.from_rows(field, rows, cols=ambient) if rows else Mat.zeros(field, 0, ambient)


def assemble_block_triangular(inst: WmvspInstance, chain: MvChain) -> BlockTriangularForm:
    """Adapted bases from the chain, the corresponding transformation, and
    the staircase permutation; verifies the zero pattern exactly."""
    field = inst.field
    ell = len(chain) - 1
    xs_chain = [xs for xs, _ in chain.elements]
    ys_chain = [ys for _, ys in chain.elements]

    e_rows = [_adapted_row_basis(field, inst.row_dims[a], [xs[a] for xs in xs_chain])
              for a in range(inst.mu)]
    f_rows = [_adapted_row_basis(field, inst.col_dims[b], [ys[b] for ys in reversed(ys_chain)])
              for b in range(inst.nu)]

    def row_band(a: int, i: int) -> int:
        for k in range(ell + 1):
            if i < xs_chain[k][a].dim:
                return k
        return ell + 1

    def col_band(b: int, j: int) -> int:
        for k in range(ell, -1, -1):
            if j < ys_chain[k][b].dim:
                return ell + 1 - (ell - k)
        return 0

    global_rows = [(a, i) for a in range(inst.mu) for i in range(inst.row_dims[a])]
    global_cols = [(b, j) for b in range(inst.nu) for j in range(inst.col_dims[b])]
    row_offsets = [sum(inst.row_dims[:a]) for a in range(inst.mu)]
    col_offsets = [sum(inst.col_dims[:b]) for b in range(inst.nu)]

    row_order = sorted(global_rows, key=lambda ai: (-row_band(*ai), ai))
    col_order = sorted(global_cols, key=lambda bj: (-col_band(*bj), bj))
    row_perm = tuple(row_offsets[a] + i for a, i in row_order)
    col_perm = tuple(col_offsets[b] + j for b, j in col_order)

    blocks = [[e_rows[a].mul(inst.blocks[a][b].matrix).mul(f_rows[b].transpose())
               for b in range(inst.nu)] for a in range(inst.mu)]
    entries = []
    for a, i in row_order:
        row = []
        for b, j in col_order:
            row.append(blocks[a][b].entries[i][j])
        entries.append(tuple(row))
    transformed = Mat(field, inst.m, inst.n, tuple(entries))

    zero = field.zero
    for ri, (a, i) in enumerate(row_order):
        rb = row_band(a, i)
        for ci, (b, j) in enumerate(col_order):
            if rb < col_band(b, j) and transformed.entries[ri][ci] != zero:
                raise ValueError("zero pattern violated below the staircase")

    sizes = []
    for k in range(ell + 1, -1, -1):
        nrows = sum(1 for a, i in global_rows if row_band(a, i) == k)
        ncols = sum(1 for b, j in global_cols if col_band(b, j) == k)
        sizes.append((nrows, ncols))

    e_mats = tuple(er.transpose() for er in e_rows)
    f_mats = tuple(fr.transpose() for fr in f_rows)
    return BlockTriangularForm(e_mats, f_mats, row_perm, col_perm, tuple(sizes), transformed)
