"""Thin command-line client for the solver service.

Subcommands post the instance file to the service endpoints and render the
returned record.  By default the requests run against the app in-process
(no server needed); --server points them at a remote service instead.

Exit codes: 0 success, 2 malformed input, 3 oracle/verification mismatch,
1 anything unexpected.
"""

from __future__ import annotations

import asyncio
import json
import sys

import click
import httpx

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_PARSE = 2
EXIT_MISMATCH = 3


def _load_doc(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        click.echo(f"error: cannot read instance file: {exc}", err=True)
        sys.exit(EXIT_PARSE)


def _request(server: str | None, endpoint: str, payload: dict) -> httpx.Response:
    if server:
        with httpx.Client(base_url=server.rstrip("/"), timeout=None) as client:
            return client.post(endpoint, json=payload)

    from .service import app

    async def go() -> httpx.Response:
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(transport=transport,
                                     base_url="http://vanish.local",
                                     timeout=None) as client:
            return await client.post(endpoint, json=payload)

    return asyncio.run(go())


def _post(server: str | None, endpoint: str, payload: dict) -> dict:
    try:
        resp = _request(server, endpoint, payload)
    except httpx.HTTPError as exc:
        click.echo(f"error: service unreachable: {exc}", err=True)
        sys.exit(EXIT_UNEXPECTED)
    if resp.status_code in (400, 422):
        detail = resp.json().get("detail", resp.text)
        click.echo(f"error: {detail}", err=True)
        sys.exit(EXIT_PARSE)
    if resp.status_code != 200:
        click.echo(f"error: service returned {resp.status_code}: {resp.text}", err=True)
        sys.exit(EXIT_UNEXPECTED)
    return resp.json()


def _emit(record: dict, as_json: bool, human) -> None:
    if as_json:
        click.echo(json.dumps(record, sort_keys=True, separators=(",", ":")))
    else:
        human(record)


def _fmt_subspace(doc: dict) -> str:
    rows = doc["basis"]
    if not rows:
        return "{0}"
    return "span{" + "; ".join("(" + ", ".join(r) + ")" for r in rows) + "}"


@click.group()
def main():
    """Exact solver for maximum vanishing subspace problems."""


@main.command()
@click.argument("file", type=click.Path(exists=False))
@click.option("--json", "as_json", is_flag=True, help="machine-readable output")
@click.option("--max-sweeps", type=int, default=10_000, show_default=True)
@click.option("--stall", type=int, default=None, help="stop after this many sweeps without improvement")
@click.option("--check-oracle", is_flag=True, help="compare against brute force (finite fields)")
@click.option("--paper-bound", is_flag=True, help="report (do not run) the worst-case sweep bound")
@click.option("--verbose", is_flag=True, help="include the per-sweep trace")
@click.option("--server", default=None, help="remote service URL (default: in-process)")
def solve(file, as_json, max_sweeps, stall, check_oracle, paper_bound, verbose, server):
    """Solve the weighted maximum vanishing subspace problem."""
    doc = _load_doc(file)
    record = _post(server, "/solve", {
        "instance": doc,
        "options": {"max_sweeps": max_sweeps, "stall_sweeps": stall,
                    "check_oracle": check_oracle, "paper_bound": paper_bound,
                    "include_trace": verbose},
    })

    def human(rec):
        res = rec["result"]
        click.echo(f"weighted dimension: {res['weighted_dim']}")
        click.echo(f"certificate: {rec['certificate']} (after {rec['sweeps']} sweeps)")
        click.echo(f"unit-weight duality bound: {res['unit_weight_bound']}")
        for i, x in enumerate(res["X"]):
            click.echo(f"X[{i}] = {_fmt_subspace(x)}")
        for i, y in enumerate(res["Y"]):
            click.echo(f"Y[{i}] = {_fmt_subspace(y)}")
        if "paper_sweep_bound" in res:
            click.echo(f"worst-case sweep bound (not run): {res['paper_sweep_bound']}")
            click.echo(f"rate constant: {res['rate_constant']}")
        if "oracle_optimum" in res:
            click.echo(f"oracle optimum: {res['oracle_optimum']} "
                       f"({'match' if res['oracle_match'] else 'MISMATCH'})")
        if verbose and rec.get("trace") is not None:
            click.echo(f"trace: {rec['trace']}")

    _emit(record, as_json, human)
    if check_oracle and not record["result"].get("oracle_match", True):
        sys.exit(EXIT_MISMATCH)


@main.command()
@click.argument("file", type=click.Path(exists=False))
@click.option("--json", "as_json", is_flag=True, help="machine-readable output")
@click.option("--max-sweeps", type=int, default=10_000, show_default=True)
@click.option("--stall", type=int, default=None)
@click.option("--verify", is_flag=True, help="re-multiply and assert the zero pattern")
@click.option("--server", default=None)
def qdm(file, as_json, max_sweeps, stall, verify, server):
    """Quasi block-triangularization via a chain of maximum vanishing tuples."""
    doc = _load_doc(file)
    record = _post(server, "/qdm", {
        "instance": doc,
        "options": {"max_sweeps": max_sweeps, "stall_sweeps": stall, "verify": verify},
    })

    def human(rec):
        res = rec["result"]
        sizes = res["diag_sizes"]
        click.echo(f"chain dimensions: {res['chain_dims']}")
        click.echo(f"diagonal blocks (top-left to bottom-right): {sizes}")
        interior = [s for s in sizes[1:-1]]
        if len(sizes) == 1:
            click.echo("single quasi-irreducible block")
        elif not interior and all(s[0] == 0 or s[1] == 0 for s in sizes):
            click.echo("no square regular part")
        click.echo(_staircase_sketch(sizes))
        for i, e in enumerate(res["E"]):
            click.echo(f"E[{i}] = {e}")
        for i, fmat in enumerate(res["F"]):
            click.echo(f"F[{i}] = {fmat}")
        click.echo(f"row permutation: {res['row_perm']}")
        click.echo(f"col permutation: {res['col_perm']}")
        click.echo("transformed:")
        for row in res["transformed"]:
            click.echo("  [" + " ".join(str(x) for x in row) + "]")
        if res.get("verified"):
            click.echo("zero pattern verified")

    _emit(record, as_json, human)


@main.command()
@click.argument("file", type=click.Path(exists=False))
@click.option("--json", "as_json", is_flag=True, help="machine-readable output")
@click.option("--max-sweeps", type=int, default=10_000, show_default=True)
@click.option("--stall", type=int, default=None)
@click.option("--check-oracle", is_flag=True)
@click.option("--verbose", is_flag=True)
@click.option("--server", default=None)
def ncrank(file, as_json, max_sweeps, stall, check_oracle, verbose, server):
    """Noncommutative rank of the span of the given matrices."""
    doc = _load_doc(file)
    record = _post(server, "/ncrank", {
        "instance": doc,
        "options": {"max_sweeps": max_sweeps, "stall_sweeps": stall,
                    "check_oracle": check_oracle, "include_trace": verbose},
    })

    def human(rec):
        res = rec["result"]
        click.echo(f"nc-rank: {res['nc_rank']}")
        click.echo(f"shrunk subspace X = {_fmt_subspace(res['shrunk_subspace'])}")
        click.echo(f"shrink certificate c = {res['shrink_certificate']}; "
                   f"dim sum A_i(X) = {res['image_sum_dim']} <= dim X - c: "
                   f"{res['shrink_inequality_holds']}")
        click.echo(f"certificate: {rec['certificate']} (after {rec['sweeps']} sweeps)")
        if "oracle_nc_rank" in res:
            click.echo(f"oracle nc-rank: {res['oracle_nc_rank']} "
                       f"({'match' if res['oracle_match'] else 'MISMATCH'})")

    _emit(record, as_json, human)
    res = record["result"]
    if not res["shrink_inequality_holds"]:
        sys.exit(EXIT_MISMATCH)
    if check_oracle and not res.get("oracle_match", True):
        sys.exit(EXIT_MISMATCH)


@main.command()
@click.argument("file", type=click.Path(exists=False))
@click.option("--json", "as_json", is_flag=True, help="machine-readable output")
@click.option("--limit", type=int, default=1_000_000, show_default=True,
              help="maximum number of tuples to enumerate")
@click.option("--server", default=None)
def oracle(file, as_json, limit, server):
    """Brute-force optimum by exhaustive enumeration (finite fields only)."""
    doc = _load_doc(file)
    record = _post(server, "/oracle", {
        "instance": doc,
        "options": {"max_tuples": limit},
    })

    def human(rec):
        res = rec["result"]
        click.echo(f"optimum: {res['optimum']} ({res['optima_count']} optimal tuples)")
        for t in res["optima"][:10]:
            xs = ", ".join(_fmt_subspace(x) for x in t["X"])
            ys = ", ".join(_fmt_subspace(y) for y in t["Y"])
            click.echo(f"  X: {xs} | Y: {ys}")
        if res["optima_count"] > 10:
            click.echo(f"  ... and {res['optima_count'] - 10} more")

    _emit(record, as_json, human)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8321, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service import app

    uvicorn.run(app, host=host, port=port)


def _staircase_sketch(sizes) -> str:
    """ASCII sketch of the staircase: one cell per diagonal block."""
    k = len(sizes)
    lines = []
    for i, (r, c) in enumerate(sizes):
        cells = []
        for j in range(k):
            if j < i:
                cells.append("0" if sizes[j][1] and r else ".")
            elif j == i:
                cells.append(f"D{k - 1 - i}[{r}x{c}]")
            else:
                cells.append("*")
        lines.append("  " + " ".join(cells))
    return "\n".join(lines)


if __name__ == "__main__":
    main()
