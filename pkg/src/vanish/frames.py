"""Frame constructions: a common frame for two maximal chains, frames
diagonalizing a bilinear form, and the cube-coordinate maps.

A row-side frame is an ordered basis a_1..a_m of F^m whose subset spans
realize the chains of interest.  A column-side frame is stored by its dual
basis v_1..v_n: the j-th hyperplane atom of the opposite lattice is
span{v_k : k != j}, so an element is a subset span of the v's and the
opposite-lattice join of atoms {f_j : j in S} is span{v_k : k not in S}.
All tie-breaking is by fixed echelon sweeps, so reruns are bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .bilinear import Bilinear, left_orth
from .matrix import Mat, inverse, kernel_basis, rank
from .orthoscheme import ORIENT_L, ORIENT_M, ComplexPoint, make_point
from .subspace import (ASCENDING, DESCENDING, Subspace, SubspaceChain,
                       extend_to_maximal_chain, from_spanning, full_subspace,
                       meet, zero_subspace)


@dataclass(frozen=True)
class FrameL:
    """Ordered independent vectors a_1..a_m spanning F^m (one per atom)."""

    ambient: int
    atoms: tuple  # tuple of row vectors

    @property
    def size(self) -> int:
        return len(self.atoms)


@dataclass(frozen=True)
class FrameM:
    """Ordered dual basis v_1..v_n of F^n; atom f_j = span{v_k : k != j}."""

    ambient: int
    duals: tuple

    @property
    def size(self) -> int:
        return len(self.duals)


@dataclass(frozen=True)
class OrthFrame:
    """Frame pair diagonalizing a bilinear form.

    The pairing matrix P[i][j] = e_i^T A v_j is diagonal with exactly r
    nonzero entries (r = rank of the form); atoms e_{r+1}..e_m span the left
    kernel and duals v_{r+1}..v_n span the right kernel.
    """

    e: FrameL
    f: FrameM
    r: int
    diag: tuple


def _dim_table(ps, qs):
    return [[meet(p, q).dim for q in qs] for p in ps]


def frame_for_two_chains(c: SubspaceChain, d: SubspaceChain) -> FrameL:
    """Common frame for two maximal ascending chains.

    Runs the matching procedure between the chains: for each step i of c
    there is a unique step j of d where the meet dimension jumps, and an
    atom taken from that corner extends both chains at once.
    """
    if c.orientation != ASCENDING or d.orientation != ASCENDING:
        raise ValueError("frame construction expects ascending chains")
    if not (c.is_maximal and d.is_maximal):
        raise ValueError("frame construction expects maximal chains")
    ps, qs = c.elements, d.elements
    if ps[0].ambient != qs[0].ambient or ps[0].field != qs[0].field:
        raise ValueError("chains live in different spaces")
    n = ps[0].ambient
    dims = _dim_table(ps, qs)

    atoms = []
    sigma = []
    for i in range(1, n + 1):
        j_found = None
        for j in range(1, n + 1):
            if dims[i][j] - dims[i - 1][j] == 1 and dims[i][j - 1] - dims[i - 1][j - 1] == 0:
                j_found = j
                break
        if j_found is None:
            raise ValueError("no matching step found; chains are not maximal")
        corner = meet(ps[i], qs[j_found])
        floor = meet(ps[i - 1], qs[j_found - 1])
        atom = None
        for v in corner.basis.entries:
            if not floor.contains_vector(v):
                atom = v
                break
        assert atom is not None
        atoms.append(atom)
        sigma.append(j_found)

    if len(set(sigma)) != n:
        raise ValueError("matching between the chains is not a bijection")
    if rank(Mat.from_rows(ps[0].field, atoms, cols=n)) != n:
        raise ValueError("constructed atoms do not span the ambient space")
    return FrameL(n, tuple(atoms))


def _atom_in(atom, s: Subspace) -> bool:
    return s.contains_vector(atom)


@lru_cache(maxsize=1 << 12)
def orthogonal_frame(a: Bilinear, x_chain: SubspaceChain, y_chain: SubspaceChain) -> OrthFrame:
    """Frame pair diagonalizing the form a, adapted to the given chains.

    x_chain is a maximal ascending chain in F^m; y_chain a maximal descending
    chain in F^n (full space down to {0}).  The row frame's subset spans
    include x_chain and the orthogonals of y_chain; the column frame's subset
    spans include y_chain and the orthogonals of x_chain.
    """
    if x_chain.orientation != ASCENDING or y_chain.orientation != DESCENDING:
        raise ValueError("expected an ascending row chain and a descending column chain")
    if not (x_chain.is_maximal and y_chain.is_maximal):
        raise ValueError("chains must be maximal")
    field = a.field
    m, n = a.m, a.n

    ys = y_chain.elements  # full space V down to {0}, length n+1
    yorth = [left_orth(a, y) for y in ys]  # ascends from the left kernel to F^m

    distinct = []
    for s in yorth:
        if not distinct or distinct[-1] != s:
            distinct.append(s)
    ortho_chain = extend_to_maximal_chain(
        SubspaceChain(tuple(distinct), ASCENDING), field=field, ambient=m)

    base = frame_for_two_chains(x_chain, ortho_chain)
    left_kernel = yorth[0]
    r = m - left_kernel.dim

    regular = [v for v in base.atoms if not _atom_in(v, left_kernel)]
    kernel_atoms = [v for v in base.atoms if _atom_in(v, left_kernel)]
    if len(regular) != r:
        raise ValueError("atom split does not match the rank of the form")
    e_atoms = tuple(regular + kernel_atoms)

    # normals of the column-side hyperplane atoms, one per index
    normals: list = [None] * n
    for j in range(r):
        normals[j] = a.matrix.transpose().mul_vector(e_atoms[j])

    assigned = set()
    next_free = r
    for i in range(1, n + 1):
        if yorth[i].dim > yorth[i - 1].dim:
            new_j = None
            for j in range(r):
                if j not in assigned and _atom_in(e_atoms[j], yorth[i]):
                    new_j = j
                    break
            if new_j is None:
                raise ValueError("no fresh diagonal atom at a rank step")
            assigned.add(new_j)
        else:
            cands = kernel_basis(ys[i].basis)  # functionals vanishing on Y_i
            w = None
            zero = field.zero
            for cand in cands.entries:
                if any(x != zero for x in ys[i - 1].basis.mul_vector(cand)):
                    w = cand
                    break
            if w is None:
                raise ValueError("no separating functional at a kernel step")
            normals[next_free] = w
            next_free += 1
    if len(assigned) != r or next_free != n:
        raise ValueError("index assignment did not cover the frame")

    w_mat = Mat.from_rows(field, normals, cols=n)
    duals_cols = inverse(w_mat)
    duals = tuple(tuple(duals_cols.entries[i][j] for i in range(n)) for j in range(n))

    diag = tuple(field.one for _ in range(r))
    return OrthFrame(FrameL(m, e_atoms), FrameM(n, duals), r, diag)


def pairing_matrix(a: Bilinear, fr: OrthFrame) -> Mat:
    e_mat = Mat.from_rows(a.field, fr.e.atoms, cols=a.m) if fr.e.atoms else Mat.zeros(a.field, 0, a.m)
    v_mat = Mat.from_rows(a.field, fr.f.duals, cols=a.n) if fr.f.duals else Mat.zeros(a.field, 0, a.n)
    return e_mat.mul(a.matrix).mul(v_mat.transpose())


def _subset_of_atoms(s: Subspace, vectors) -> tuple:
    """Indices of the vectors lying in s; raises unless they span s exactly."""
    idx = tuple(i for i, v in enumerate(vectors) if s.contains_vector(v))
    if len(idx) != s.dim:
        raise ValueError("support element is not a subset span of the frame")
    return idx


def coords_l(x: ComplexPoint, fr: FrameL) -> tuple:
    """Cube coordinates: coordinate i sums the coefficients of support
    elements containing atom i."""
    if x.orientation != ORIENT_L or x.ambient != fr.ambient:
        raise ValueError("point and frame do not match")
    coords = [Fraction(0)] * fr.size
    for coeff, elem in x.terms:
        for i in _subset_of_atoms(elem, fr.atoms):
            coords[i] += coeff
    return tuple(coords)


def coords_m(y: ComplexPoint, fr: FrameM) -> tuple:
    """Cube coordinates on the column side: coordinate j sums the
    coefficients of support elements NOT containing dual vector j (the
    opposite-lattice bottom, the full space, is all zeros)."""
    if y.orientation != ORIENT_M or y.ambient != fr.ambient:
        raise ValueError("point and frame do not match")
    coords = [Fraction(0)] * fr.size
    for coeff, elem in y.terms:
        inside = set(_subset_of_atoms(elem, fr.duals))
        for j in range(fr.size):
            if j not in inside:
                coords[j] += coeff
    return tuple(coords)


def _check_unit_box(coords):
    for c in coords:
        if c < 0 or c > 1:
            raise ValueError(f"coordinate {c} outside [0, 1]")


def recover_l(coords, fr: FrameL, field) -> ComplexPoint:
    """Point of the complex with the given cube coordinates: sort decreasing
    (ties by atom index; equal values merge levels) and emit prefix spans."""
    _check_unit_box(coords)
    order = sorted(range(fr.size), key=lambda i: (-coords[i], i))
    pairs = []
    top = Fraction(1)
    prefix: list = []
    prev_val = None
    levels = []  # (value, prefix span) with strictly decreasing positive values
    for i in order:
        v = coords[i]
        if v == 0:
            break
        if prev_val is not None and v == prev_val:
            prefix.append(fr.atoms[i])
            levels[-1] = (v, prefix.copy())
            continue
        prefix.append(fr.atoms[i])
        levels.append((v, prefix.copy()))
        prev_val = v
    pairs.append((1 - (levels[0][0] if levels else Fraction(0)), zero_subspace(field, fr.ambient)))
    for k, (v, pref) in enumerate(levels):
        nxt = levels[k + 1][0] if k + 1 < len(levels) else Fraction(0)
        pairs.append((v - nxt, from_spanning(field, fr.ambient, pref)))
    return make_point(ORIENT_L, fr.ambient, pairs)


def recover_m(coords, fr: FrameM, field) -> ComplexPoint:
    """Column-side mirror of recover_l: the prefix of removed dual vectors
    grows as the coordinate value drops; the bottom is the full space."""
    _check_unit_box(coords)
    order = sorted(range(fr.size), key=lambda j: (-coords[j], j))
    removed: set = set()
    levels = []
    prev_val = None
    for j in order:
        v = coords[j]
        if v == 0:
            break
        removed.add(j)
        if prev_val is not None and v == prev_val:
            levels[-1] = (v, removed.copy())
        else:
            levels.append((v, removed.copy()))
            prev_val = v
    pairs = [(1 - (levels[0][0] if levels else Fraction(0)), full_subspace(field, fr.ambient))]
    for k, (v, rem) in enumerate(levels):
        nxt = levels[k + 1][0] if k + 1 < len(levels) else Fraction(0)
        keep = [fr.duals[t] for t in range(fr.size) if t not in rem]
        elem = from_spanning(field, fr.ambient, keep) if keep else zero_subspace(field, fr.ambient)
        pairs.append((v - nxt, elem))
    return make_point(ORIENT_M, fr.ambient, pairs)
