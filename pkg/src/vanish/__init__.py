"""Exact solver for weighted maximum vanishing subspace problems on
partitioned matrices, with quasi block-triangularization and nc-rank."""

from .fields import PrimeField, QQ, RationalField, field_from_tag
from .matrix import Mat, kernel_basis, rank, rref
from .subspace import (Subspace, SubspaceChain, complement_within, contains,
                       enumerate_subspaces, extend_to_maximal_chain,
                       from_spanning, full_subspace, join, meet, zero_subspace)
from .bilinear import Bilinear, left_orth, restricted_rank, right_orth
from .orthoscheme import (ComplexPoint, combine_product, d1_value, d2_value,
                          lovasz_restricted_rank, support_tuples, vertex)
from .frames import (FrameL, FrameM, OrthFrame, coords_l, coords_m,
                     frame_for_two_chains, orthogonal_frame, recover_l,
                     recover_m)
from .resolvent import (ProxParams, prox_hinge_coord, prox_linear_quad,
                        prox_restricted_rank)
from .solver import (NcrankReport, SolutionReport, SolverConfig, WmvspInstance,
                     eval_objective, extract_candidate, make_instance,
                     paper_sweep_bound, penalty_weight, perturbation_epsilon,
                     solve_ncrank, solve_wmvsp, step_size, sweep)
from .qdm import (BlockTriangularForm, MvChain, assemble_block_triangular,
                  is_quasi_irreducible, qdm, restrict_matrix, weights_col,
                  weights_extreme, weights_row)
from .oracle import OracleLimit, brute_force_ncrank, brute_force_wmvsp

__all__ = [
    "PrimeField", "QQ", "RationalField", "field_from_tag",
    "Mat", "kernel_basis", "rank", "rref",
    "Subspace", "SubspaceChain", "complement_within", "contains",
    "enumerate_subspaces", "extend_to_maximal_chain", "from_spanning",
    "full_subspace", "join", "meet", "zero_subspace",
    "Bilinear", "left_orth", "restricted_rank", "right_orth",
    "ComplexPoint", "combine_product", "d1_value", "d2_value",
    "lovasz_restricted_rank", "support_tuples", "vertex",
    "FrameL", "FrameM", "OrthFrame", "coords_l", "coords_m",
    "frame_for_two_chains", "orthogonal_frame", "recover_l", "recover_m",
    "ProxParams", "prox_hinge_coord", "prox_linear_quad", "prox_restricted_rank",
    "NcrankReport", "SolutionReport", "SolverConfig", "WmvspInstance",
    "eval_objective", "extract_candidate", "make_instance", "paper_sweep_bound",
    "penalty_weight", "perturbation_epsilon", "solve_ncrank", "solve_wmvsp",
    "step_size", "sweep",
    "BlockTriangularForm", "MvChain", "assemble_block_triangular",
    "is_quasi_irreducible", "qdm", "restrict_matrix", "weights_col",
    "weights_extreme", "weights_row",
    "OracleLimit", "brute_force_ncrank", "brute_force_wmvsp",
]

__version__ = "0.1.0"
