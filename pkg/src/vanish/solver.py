"""The main solver: penalty reduction, perturbation, cyclic splitting
proximal iteration on the product of orthoscheme complexes, candidate
extraction, stopping, and the nc-rank variant.

The iteration runs the resolvents of the summands cyclically (row terms,
column terms, then one rank-penalty term per block, row-major) with step
sizes lambda_k = (n+m)/(k+1).  Every sweep the support of the current point
is scanned for the best integral candidate; the best feasible tuple seen so
far is reported.  Stopping is by the unit-weight duality certificate, by
stall, or by the sweep limit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bilinear import Bilinear, left_orth, restricted_rank, right_orth
from .matrix import Mat, rank
from .orthoscheme import (ORIENT_L, ORIENT_M, dim_extension, dist2_from_zero,
                          lovasz_restricted_rank, support_tuples, vertex)
from .resolvent import ProxParams, prox_linear_quad, prox_restricted_rank
from .subspace import Subspace, full_subspace, meet, zero_subspace

CERT_TIGHT = "weak-duality-tight"
CERT_STALL = "stall"
CERT_SWEEP_LIMIT = "sweep-limit"


@dataclass(frozen=True)
class WmvspInstance:
    """A partitioned matrix with nonnegative integer row/column weights."""

    field: object
    row_dims: tuple
    col_dims: tuple
    blocks: tuple  # mu x nu grid of Bilinear
    weights_c: tuple
    weights_d: tuple

    def __post_init__(self):
        mu, nu = len(self.row_dims), len(self.col_dims)
        if len(self.blocks) != mu or any(len(r) != nu for r in self.blocks):
            raise ValueError("block grid shape does not match the declared type")
        for a, row in enumerate(self.blocks):
            for b, blk in enumerate(row):
                if blk.m != self.row_dims[a] or blk.n != self.col_dims[b]:
                    raise ValueError(f"block ({a},{b}) has shape {blk.m}x{blk.n}, "
                                     f"expected {self.row_dims[a]}x{self.col_dims[b]}")
                if blk.field != self.field:
                    raise ValueError("blocks do not share the instance field")
        if len(self.weights_c) != mu or len(self.weights_d) != nu:
            raise ValueError("weight vectors do not match the block counts")
        if any(w < 0 or w != int(w) for w in self.weights_c + self.weights_d):
            raise ValueError("weights must be nonnegative integers")

    @property
    def mu(self) -> int:
        return len(self.row_dims)

    @property
    def nu(self) -> int:
        return len(self.col_dims)

    @property
    def m(self) -> int:
        return sum(self.row_dims)

    @property
    def n(self) -> int:
        return sum(self.col_dims)

    def assembled(self) -> Mat:
        """The full m x n matrix with the blocks in place."""
        rows = []
        for a in range(self.mu):
            for i in range(self.row_dims[a]):
                row = []
                for b in range(self.nu):
                    row.extend(self.blocks[a][b].matrix.entries[i])
                rows.append(tuple(row))
        return Mat(self.field, self.m, self.n, tuple(rows))


def make_instance(field, row_dims, col_dims, block_mats, weights_c=None, weights_d=None) -> WmvspInstance:
    blocks = tuple(tuple(Bilinear(m if isinstance(m, Mat) else Mat.from_rows(field, m, cols=col_dims[b]))
                         for b, m in enumerate(row)) for row in block_mats)
    wc = tuple(weights_c) if weights_c is not None else tuple(1 for _ in row_dims)
    wd = tuple(weights_d) if weights_d is not None else tuple(1 for _ in col_dims)
    return WmvspInstance(field, tuple(row_dims), tuple(col_dims), blocks, wc, wd)


def penalty_weight(inst: WmvspInstance) -> int:
    """Rank-penalty weight sum(C_a m_a) + sum(D_b n_b) + 1."""
    return (sum(c * m for c, m in zip(inst.weights_c, inst.row_dims))
            + sum(d * n for d, n in zip(inst.weights_d, inst.col_dims)) + 1)


def perturbation_epsilon(total_dim: int) -> Fraction:
    """Perturbation strength 1/(4(n+m)) for total dimension n+m."""
    return Fraction(1, 4 * total_dim)


def step_size(k: int, total_dim: int, a: Fraction = Fraction(1, 2)) -> Fraction:
    """Step schedule (1-a)/(kappa*(k+1)) with kappa = 2*epsilon, i.e. the
    strong-convexity parameter of the perturbed objective; a = 1/2 gives
    (n+m)/(k+1)."""
    if k < 0:
        raise ValueError("sweep index must be nonnegative")
    kappa = 2 * perturbation_epsilon(total_dim)
    return (1 - a) / (kappa * (k + 1))


def paper_sweep_bound(inst: WmvspInstance) -> int:
    """Worst-case iteration bound W^8 m^9 n^9 (m+n)^24 (reported, never run)."""
    w = max((*inst.weights_c, *inst.weights_d, 1))
    m, n = inst.m, inst.n
    return w ** 8 * m ** 9 * n ** 9 * (m + n) ** 24


RATE_CONSTANT_NOTE = "h(1/2) = 2^(3/2)*(1/4)*(3/2) = 3*sqrt(2)/4"


@dataclass(frozen=True)
class SolverConfig:
    max_sweeps: int = 10_000
    stall_sweeps: int | None = None  # default 50*(m+n)
    a: Fraction = Fraction(1, 2)
    sweep_order: tuple | None = None  # permutation of range(N)

    def __post_init__(self):
        if self.max_sweeps < 1:
            raise ValueError("max_sweeps must be at least 1")
        if not (0 < self.a < 1):
            raise ValueError("the schedule parameter a must lie in (0, 1)")


@dataclass(frozen=True)
class SolutionReport:
    xs: tuple
    ys: tuple
    weighted_dim: int
    objective: int
    sweeps: int
    certificate: str
    trace: tuple


@dataclass(frozen=True)
class ProductState:
    x_parts: tuple
    y_parts: tuple


def initial_point(inst: WmvspInstance) -> ProductState:
    """The product-lattice bottom: every row part at {0}, every column part
    at the full space."""
    xs = tuple(vertex(ORIENT_L, zero_subspace(inst.field, d)) for d in inst.row_dims)
    ys = tuple(vertex(ORIENT_M, full_subspace(inst.field, d)) for d in inst.col_dims)
    return ProductState(xs, ys)


def _summand_schedule(inst: WmvspInstance) -> tuple:
    ops = [("x", a) for a in range(inst.mu)]
    ops += [("y", b) for b in range(inst.nu)]
    ops += [("r", a, b) for a in range(inst.mu) for b in range(inst.nu)]
    return tuple(ops)


def sweep(state: ProductState, k: int, inst: WmvspInstance,
          cfg: SolverConfig = SolverConfig()) -> ProductState:
    """One full cycle of resolvents at step lambda_k."""
    lam = step_size(k, inst.m + inst.n, cfg.a)
    eps = perturbation_epsilon(inst.m + inst.n)
    big_m = penalty_weight(inst)
    ops = _summand_schedule(inst)
    if cfg.sweep_order is not None:
        if sorted(cfg.sweep_order) != list(range(len(ops))):
            raise ValueError("sweep_order must be a permutation of the summands")
        ops = tuple(ops[i] for i in cfg.sweep_order)

    xs = list(state.x_parts)
    ys = list(state.y_parts)
    for op in ops:
        if op[0] == "x":
            a = op[1]
            xs[a] = prox_linear_quad(xs[a], ProxParams(lam, eps, Fraction(inst.weights_c[a])))
        elif op[0] == "y":
            b = op[1]
            ys[b] = prox_linear_quad(ys[b], ProxParams(lam, eps, Fraction(inst.weights_d[b])))
        else:
            a, b = op[1], op[2]
            xs[a], ys[b] = prox_restricted_rank(xs[a], ys[b], inst.blocks[a][b],
                                                ProxParams(lam, weight=Fraction(big_m)))
    return ProductState(tuple(xs), tuple(ys))


def lattice_objective(inst: WmvspInstance, xs, ys) -> int:
    """Integer objective -sum C dim X - sum D dim Y + M sum R(X, Y)."""
    big_m = penalty_weight(inst)
    total = 0
    for c, x in zip(inst.weights_c, xs):
        total -= c * x.dim
    for d, y in zip(inst.weights_d, ys):
        total -= d * y.dim
    for a in range(inst.mu):
        for b in range(inst.nu):
            total += big_m * restricted_rank(inst.blocks[a][b], xs[a], ys[b])
    return total


def weighted_dim(inst: WmvspInstance, xs, ys) -> int:
    return (sum(c * x.dim for c, x in zip(inst.weights_c, xs))
            + sum(d * y.dim for d, y in zip(inst.weights_d, ys)))


def is_feasible(inst: WmvspInstance, xs, ys) -> bool:
    return all(restricted_rank(inst.blocks[a][b], xs[a], ys[b]) == 0
               for a in range(inst.mu) for b in range(inst.nu))


def extract_candidate(state: ProductState, inst: WmvspInstance):
    """Best integral tuple in the support of the state (ties to the first
    occurrence along the merged chain, top down)."""
    best = None
    best_g = None
    for xs, ys in support_tuples(state.x_parts, state.y_parts):
        g = lattice_objective(inst, xs, ys)
        if best_g is None or g < best_g:
            best, best_g = (xs, ys), g
    return best, best_g


def polar_closure_y(inst: WmvspInstance, xs) -> tuple:
    """The largest column tuple vanishing against the given row tuple."""
    out = []
    for b in range(inst.nu):
        cur = full_subspace(inst.field, inst.col_dims[b])
        for a in range(inst.mu):
            cur = meet(cur, right_orth(inst.blocks[a][b], xs[a]))
        out.append(cur)
    return tuple(out)


def polar_closure_x(inst: WmvspInstance, ys) -> tuple:
    """The largest row tuple vanishing against the given column tuple."""
    out = []
    for a in range(inst.mu):
        cur = full_subspace(inst.field, inst.row_dims[a])
        for b in range(inst.nu):
            cur = meet(cur, left_orth(inst.blocks[a][b], ys[b]))
        out.append(cur)
    return tuple(out)


def eval_objective(inst: WmvspInstance, state: ProductState, perturbed: bool) -> Fraction:
    """Exact extension objective at a product point; agrees with the integer
    lattice objective at vertex tuples, and with the perturbation it is the
    strongly convex function the iteration minimizes.

    Both linear terms are the extensions of X -> dim X and Y -> dim Y
    (distance from the zero-subspace vertex), matching the maximization of
    weighted dimension on both sides; the perturbation is centered there too.
    """
    big_m = penalty_weight(inst)
    total = Fraction(0)
    for c, x in zip(inst.weights_c, state.x_parts):
        total -= c * dim_extension(x)
    for d, y in zip(inst.weights_d, state.y_parts):
        total -= d * dim_extension(y)
    for a in range(inst.mu):
        for b in range(inst.nu):
            total += big_m * lovasz_restricted_rank(inst.blocks[a][b],
                                                    state.x_parts[a], state.y_parts[b])
    if perturbed:
        eps = perturbation_epsilon(inst.m + inst.n)
        total += eps * (sum((dist2_from_zero(x) for x in state.x_parts), Fraction(0))
                        + sum((dist2_from_zero(y) for y in state.y_parts), Fraction(0)))
    return total


def solve_wmvsp(inst: WmvspInstance, cfg: SolverConfig = SolverConfig(),
                on_sweep=None) -> SolutionReport:
    """Run the splitting proximal iteration and report the best feasible tuple.

    on_sweep, if given, is called with (k, state) after every sweep; it is a
    hook for tracing and tests, not part of the solver contract.
    """
    stall_limit = cfg.stall_sweeps if cfg.stall_sweeps is not None else 50 * (inst.m + inst.n)
    unit_weights = all(w == 1 for w in inst.weights_c + inst.weights_d)
    duality_cap = inst.m + inst.n - rank(inst.assembled()) if unit_weights else None

    state = initial_point(inst)
    best_xs, best_ys = _trivial_tuple(inst)
    best_wdim = weighted_dim(inst, best_xs, best_ys)
    trace = []
    certificate = CERT_SWEEP_LIMIT
    sweeps_used = 0
    since_improvement = 0

    for k in range(cfg.max_sweeps):
        state = sweep(state, k, inst, cfg)
        sweeps_used = k + 1
        if on_sweep is not None:
            on_sweep(k, state)
        improved = False
        sweep_best_g = None
        for xs, ys in support_tuples(state.x_parts, state.y_parts):
            g = lattice_objective(inst, xs, ys)
            wd = weighted_dim(inst, xs, ys)
            if sweep_best_g is None or g < sweep_best_g:
                sweep_best_g = g
            if g == -wd and wd > best_wdim:  # feasible: no rank penalty active
                best_xs, best_ys, best_wdim = xs, ys, wd
                improved = True
            # polar closures of the support tuple: feasible by construction
            # and often reach the optimum many sweeps before the iterate does
            for cand in ((xs, polar_closure_y(inst, xs)),
                         (polar_closure_x(inst, ys), ys)):
                wd_c = weighted_dim(inst, *cand)
                if wd_c > best_wdim:
                    best_xs, best_ys = cand
                    best_wdim = wd_c
                    improved = True
        trace.append(sweep_best_g)
        if improved:
            since_improvement = 0
        else:
            since_improvement += 1
        if duality_cap is not None and best_wdim == duality_cap:
            certificate = CERT_TIGHT
            break
        if since_improvement >= stall_limit:
            certificate = CERT_STALL
            break

    return SolutionReport(best_xs, best_ys, best_wdim, -best_wdim,
                          sweeps_used, certificate, tuple(trace))


def _meet_all(subs):
    cur = subs[0]
    for s in subs[1:]:
        cur = meet(cur, s)
    return cur


def _trivial_tuple(inst: WmvspInstance):
    """The better of the two always-vanishing trivial tuples (zero rows with
    full columns, or full rows with zero columns)."""
    lo = (tuple(zero_subspace(inst.field, d) for d in inst.row_dims),
          tuple(full_subspace(inst.field, d) for d in inst.col_dims))
    hi = (tuple(full_subspace(inst.field, d) for d in inst.row_dims),
          tuple(zero_subspace(inst.field, d) for d in inst.col_dims))
    return lo if weighted_dim(inst, *lo) >= weighted_dim(inst, *hi) else hi


@dataclass(frozen=True)
class NcrankReport:
    nc_rank: int
    shrunk: Subspace
    x: Subspace
    y: Subspace
    shrink_certificate: int
    sweeps: int
    certificate: str
    trace: tuple


def solve_ncrank(forms, cfg: SolverConfig = SolverConfig()) -> NcrankReport:
    """nc-rank of the matrix space spanned by the given blocks.

    Same iteration with a single row part and a single column part; the
    summands are one rank penalty per generator plus the two unit-weight
    linear terms.  Reports m + n - (dim X + dim Y) of the best common
    vanishing pair, together with the shrunk subspace X.
    """
    forms = list(forms)
    if not forms:
        raise ValueError("need at least one matrix")
    field = forms[0].field
    m, n = forms[0].m, forms[0].n
    if any(f.m != m or f.n != n or f.field != field for f in forms):
        raise ValueError("all matrices must share one shape and field")

    total = m + n
    big_m = Fraction(total + 1)
    eps = perturbation_epsilon(total)
    stall_limit = cfg.stall_sweeps if cfg.stall_sweeps is not None else 50 * total
    rank_floor = max(rank(f.matrix) for f in forms)

    x = vertex(ORIENT_L, zero_subspace(field, m))
    y = vertex(ORIENT_M, full_subspace(field, n))
    best = (zero_subspace(field, m), full_subspace(field, n))
    best_dim = n
    trace = []
    certificate = CERT_SWEEP_LIMIT
    sweeps_used = 0
    since_improvement = 0

    for k in range(cfg.max_sweeps):
        lam = step_size(k, total, cfg.a)
        for f in forms:
            x, y = prox_restricted_rank(x, y, f, ProxParams(lam, weight=big_m))
        x = prox_linear_quad(x, ProxParams(lam, eps, Fraction(1)))
        y = prox_linear_quad(y, ProxParams(lam, eps, Fraction(1)))
        sweeps_used = k + 1

        improved = False
        sweep_best_g = None
        for (xs,), (ys,) in support_tuples((x,), (y,)):
            rsum = sum(restricted_rank(f, xs, ys) for f in forms)
            g = -(xs.dim + ys.dim) + int(big_m) * rsum
            if sweep_best_g is None or g < sweep_best_g:
                sweep_best_g = g
            candidates = [(xs, _meet_all([right_orth(f, xs) for f in forms])),
                          (_meet_all([left_orth(f, ys) for f in forms]), ys)]
            if rsum == 0:
                candidates.insert(0, (xs, ys))
            for cx, cy in candidates:
                if cx.dim + cy.dim > best_dim:
                    best = (cx, cy)
                    best_dim = cx.dim + cy.dim
                    improved = True
        trace.append(sweep_best_g)
        since_improvement = 0 if improved else since_improvement + 1
        if best_dim == total - rank_floor:
            certificate = CERT_TIGHT
            break
        if since_improvement >= stall_limit:
            certificate = CERT_STALL
            break

    bx, by = best
    return NcrankReport(total - best_dim, bx, bx, by, bx.dim + by.dim - n,
                        sweeps_used, certificate, tuple(trace))
