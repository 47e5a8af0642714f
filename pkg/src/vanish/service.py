"""HTTP service wrapping the solver: one POST endpoint per subcommand.

Every endpoint takes the instance document plus options and returns one
machine-readable record {command, instance_hash, result, certificate,
sweeps, trace}.  Runs are pure and deterministic, so identical requests
produce identical responses.
"""

from __future__ import annotations

from typing import Any, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .instancefile import (InstanceFormatError, document_hash, instance_to_doc,
                           ncrank_to_doc, parse_instance, parse_ncrank_input,
                           subspace_to_doc)
from .matrix import rank
from .oracle import OracleLimit, brute_force_ncrank, brute_force_wmvsp
from .qdm import assemble_block_triangular, qdm
from .solver import (RATE_CONSTANT_NOTE, SolverConfig, paper_sweep_bound,
                     solve_ncrank, solve_wmvsp)

app = FastAPI(title="vanish", description="Exact vanishing-subspace solver service")


class SolveOptions(BaseModel):
    max_sweeps: int = Field(default=10_000, ge=1)
    stall_sweeps: Optional[int] = Field(default=None, ge=1)
    check_oracle: bool = False
    paper_bound: bool = False
    include_trace: bool = False


class SolveRequest(BaseModel):
    instance: dict
    options: SolveOptions = SolveOptions()


class QdmOptions(BaseModel):
    max_sweeps: int = Field(default=10_000, ge=1)
    stall_sweeps: Optional[int] = Field(default=None, ge=1)
    verify: bool = False


class QdmRequest(BaseModel):
    instance: dict
    options: QdmOptions = QdmOptions()


class OracleOptions(BaseModel):
    max_tuples: int = Field(default=1_000_000, ge=1)


class OracleRequest(BaseModel):
    instance: dict
    options: OracleOptions = OracleOptions()


class NcrankOptions(BaseModel):
    max_sweeps: int = Field(default=10_000, ge=1)
    stall_sweeps: Optional[int] = Field(default=None, ge=1)
    check_oracle: bool = False
    include_trace: bool = False


class NcrankRequest(BaseModel):
    instance: dict
    options: NcrankOptions = NcrankOptions()


class RunRecord(BaseModel):
    command: str
    instance_hash: str
    result: dict
    certificate: Optional[str] = None
    sweeps: Optional[int] = None
    trace: Optional[list] = None


def _parse_or_400(parser, doc):
    try:
        return parser(doc)
    except InstanceFormatError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from None


@app.post("/solve", response_model=RunRecord, response_model_exclude_none=True)
def solve_endpoint(req: SolveRequest) -> RunRecord:
    inst = _parse_or_400(parse_instance, req.instance)
    cfg = SolverConfig(max_sweeps=req.options.max_sweeps,
                       stall_sweeps=req.options.stall_sweeps)
    rep = solve_wmvsp(inst, cfg)
    result: dict[str, Any] = {
        "weighted_dim": rep.weighted_dim,
        "objective": rep.objective,
        "X": [subspace_to_doc(x) for x in rep.xs],
        "Y": [subspace_to_doc(y) for y in rep.ys],
        "unit_weight_bound": inst.m + inst.n - rank(inst.assembled()),
    }
    if req.options.paper_bound:
        result["paper_sweep_bound"] = str(paper_sweep_bound(inst))
        result["rate_constant"] = RATE_CONSTANT_NOTE
    if req.options.check_oracle:
        try:
            optimum, _ = brute_force_wmvsp(inst)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=f"oracle unavailable: {exc}") from None
        result["oracle_optimum"] = optimum
        result["oracle_match"] = optimum == rep.weighted_dim
    return RunRecord(command="solve", instance_hash=document_hash(instance_to_doc(inst)),
                     result=result, certificate=rep.certificate, sweeps=rep.sweeps,
                     trace=list(rep.trace) if req.options.include_trace else None)


@app.post("/qdm", response_model=RunRecord, response_model_exclude_none=True)
def qdm_endpoint(req: QdmRequest) -> RunRecord:
    inst = _parse_or_400(parse_instance, req.instance)
    cfg = SolverConfig(max_sweeps=req.options.max_sweeps,
                       stall_sweeps=req.options.stall_sweeps)
    chain = qdm(inst, cfg)
    form = assemble_block_triangular(inst, chain)
    f = inst.field
    result: dict[str, Any] = {
        "chain_dims": list(chain.dims),
        "chain": [{"X": [subspace_to_doc(x) for x in xs],
                   "Y": [subspace_to_doc(y) for y in ys]} for xs, ys in chain.elements],
        "E": [[[f.fmt(x) for x in row] for row in e.entries] for e in form.e_mats],
        "F": [[[f.fmt(x) for x in row] for row in fm.entries] for fm in form.f_mats],
        "row_perm": list(form.row_perm),
        "col_perm": list(form.col_perm),
        "diag_sizes": [list(s) for s in form.diag_sizes],
        "transformed": [[f.fmt(x) for x in row] for row in form.transformed.entries],
    }
    if req.options.verify:
        # assemble_block_triangular re-checks the zero pattern on every call;
        # reaching this point means the verification passed
        result["verified"] = True
    return RunRecord(command="qdm", instance_hash=document_hash(instance_to_doc(inst)),
                     result=result)


@app.post("/ncrank", response_model=RunRecord, response_model_exclude_none=True)
def ncrank_endpoint(req: NcrankRequest) -> RunRecord:
    forms = _parse_or_400(parse_ncrank_input, req.instance)
    cfg = SolverConfig(max_sweeps=req.options.max_sweeps,
                       stall_sweeps=req.options.stall_sweeps)
    rep = solve_ncrank(forms, cfg)
    shrunk_image_dim = _image_sum_dim(forms, rep.shrunk)
    result: dict[str, Any] = {
        "nc_rank": rep.nc_rank,
        "shrunk_subspace": subspace_to_doc(rep.shrunk),
        "Y": subspace_to_doc(rep.y),
        "shrink_certificate": rep.shrink_certificate,
        "image_sum_dim": shrunk_image_dim,
        "shrink_inequality_holds": shrunk_image_dim <= rep.shrunk.dim - rep.shrink_certificate,
    }
    if req.options.check_oracle:
        try:
            oracle_value = brute_force_ncrank(forms)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=f"oracle unavailable: {exc}") from None
        result["oracle_nc_rank"] = oracle_value
        result["oracle_match"] = oracle_value == rep.nc_rank
    return RunRecord(command="ncrank", instance_hash=document_hash(ncrank_to_doc(forms)),
                     result=result, certificate=rep.certificate, sweeps=rep.sweeps,
                     trace=list(rep.trace) if req.options.include_trace else None)


@app.post("/oracle", response_model=RunRecord, response_model_exclude_none=True)
def oracle_endpoint(req: OracleRequest) -> RunRecord:
    inst = _parse_or_400(parse_instance, req.instance)
    try:
        optimum, optima = brute_force_wmvsp(inst, OracleLimit(req.options.max_tuples))
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from None
    result = {
        "optimum": optimum,
        "optima_count": len(optima),
        "optima": [{"X": [subspace_to_doc(x) for x in xs],
                    "Y": [subspace_to_doc(y) for y in ys]} for xs, ys in optima],
    }
    return RunRecord(command="oracle", instance_hash=document_hash(instance_to_doc(inst)),
                     result=result)


def _image_sum_dim(forms, x) -> int:
    """dim of sum_i A_i(X): row space of the stacked X-basis images."""
    stacked = None
    for blk in forms:
        img = x.basis.mul(blk.matrix)
        stacked = img if stacked is None else stacked.stack(img)
    return rank(stacked)
