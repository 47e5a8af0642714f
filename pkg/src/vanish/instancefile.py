"""The self-describing instance format shared by every subcommand.

A JSON document with a field tag, block dimensions, blocks as nested arrays
of scalar strings (so rational entries stay exact), and optional weights;
nc-rank inputs carry a list of same-shape matrices instead of a block grid.
Canonical serialization backs the instance hash reported with every run.
"""

from __future__ import annotations

import hashlib
import json

from .bilinear import Bilinear
from .fields import field_from_tag
from .matrix import Mat
from .solver import WmvspInstance
from .subspace import Subspace, from_spanning


class InstanceFormatError(ValueError):
    """Raised for malformed instance documents; maps to CLI exit code 2."""


def _require(cond: bool, msg: str):
    if not cond:
        raise InstanceFormatError(msg)


def _parse_matrix(field, rows, cols, data, where: str) -> Mat:
    _require(isinstance(data, list) and len(data) == rows,
             f"{where}: expected {rows} rows")
    parsed = []
    for i, row in enumerate(data):
        _require(isinstance(row, list) and len(row) == cols,
                 f"{where}: row {i} should have {cols} entries")
        try:
            parsed.append(tuple(field.parse(str(x)) for x in row))
        except ValueError as exc:
            raise InstanceFormatError(f"{where}: {exc}") from None
    return Mat(field, rows, cols, tuple(parsed))


def parse_instance(doc: dict) -> WmvspInstance:
    _require(isinstance(doc, dict), "instance document must be a JSON object")
    for key in ("field", "row_blocks", "col_blocks", "blocks"):
        _require(key in doc, f"missing key {key!r}")
    try:
        field = field_from_tag(str(doc["field"]))
    except ValueError as exc:
        raise InstanceFormatError(str(exc)) from None
    row_dims = doc["row_blocks"]
    col_dims = doc["col_blocks"]
    _require(isinstance(row_dims, list) and all(isinstance(d, int) and d >= 1 for d in row_dims),
             "row_blocks must be a list of positive integers")
    _require(isinstance(col_dims, list) and all(isinstance(d, int) and d >= 1 for d in col_dims),
             "col_blocks must be a list of positive integers")
    mu, nu = len(row_dims), len(col_dims)
    grid = doc["blocks"]
    _require(isinstance(grid, list) and len(grid) == mu, f"blocks must have {mu} rows of blocks")
    blocks = []
    for a, brow in enumerate(grid):
        _require(isinstance(brow, list) and len(brow) == nu,
                 f"block row {a} must have {nu} blocks")
        blocks.append(tuple(Bilinear(_parse_matrix(field, row_dims[a], col_dims[b],
                                                   brow[b], f"block ({a},{b})"))
                            for b in range(nu)))
    weights = doc.get("weights") or {}
    _require(isinstance(weights, dict), "weights must be an object with C and D lists")
    wc = weights.get("C", [1] * mu)
    wd = weights.get("D", [1] * nu)
    _require(isinstance(wc, list) and len(wc) == mu and
             all(isinstance(w, int) and w >= 0 for w in wc),
             "weights.C must be a list of nonnegative integers, one per row block")
    _require(isinstance(wd, list) and len(wd) == nu and
             all(isinstance(w, int) and w >= 0 for w in wd),
             "weights.D must be a list of nonnegative integers, one per column block")
    try:
        return WmvspInstance(field, tuple(row_dims), tuple(col_dims), tuple(blocks),
                             tuple(wc), tuple(wd))
    except ValueError as exc:
        raise InstanceFormatError(str(exc)) from None


def parse_ncrank_input(doc: dict):
    _require(isinstance(doc, dict), "instance document must be a JSON object")
    for key in ("field", "matrices"):
        _require(key in doc, f"missing key {key!r}")
    try:
        field = field_from_tag(str(doc["field"]))
    except ValueError as exc:
        raise InstanceFormatError(str(exc)) from None
    mats = doc["matrices"]
    _require(isinstance(mats, list) and mats, "matrices must be a nonempty list")
    first = mats[0]
    _require(isinstance(first, list) and first and isinstance(first[0], list),
             "matrices must be lists of rows")
    rows, cols = len(first), len(first[0])
    return [Bilinear(_parse_matrix(field, rows, cols, m, f"matrix {i}"))
            for i, m in enumerate(mats)]


def instance_to_doc(inst: WmvspInstance) -> dict:
    f = inst.field
    return {
        "field": f.tag,
        "row_blocks": list(inst.row_dims),
        "col_blocks": list(inst.col_dims),
        "blocks": [[[[f.fmt(x) for x in row] for row in inst.blocks[a][b].matrix.entries]
                    for b in range(inst.nu)] for a in range(inst.mu)],
        "weights": {"C": list(inst.weights_c), "D": list(inst.weights_d)},
    }


def ncrank_to_doc(forms) -> dict:
    f = forms[0].field
    return {
        "field": f.tag,
        "matrices": [[[f.fmt(x) for x in row] for row in blk.matrix.entries] for blk in forms],
    }


def canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def document_hash(doc) -> str:
    return hashlib.sha256(canonical_json(doc).encode("utf-8")).hexdigest()


def subspace_to_doc(s: Subspace) -> dict:
    return s.serialize()


def subspace_from_doc(field, doc: dict) -> Subspace:
    ambient = int(doc["ambient"])
    rows = [[field.parse(str(x)) for x in row] for row in doc["basis"]]
    return from_spanning(field, ambient, Mat.from_rows(field, rows, cols=ambient)
                         if rows else Mat.zeros(field, 0, ambient))
