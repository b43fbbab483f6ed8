"""``ncdist`` command-line front end.

Exit codes: 0 on success, 1 when a computation or input document fails,
2 on a malformed command line.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from typing import Sequence

import networkx as nx
import numpy as np

from .chains import Chain, chain_bounds, lambda_chain
from .decomposition import blob_chain, block_cut_tree, prune, support_graph
from .estimators import estimate
from .graph import (
    DiracOperator,
    GraphError,
    as_dirac,
    components,
    dump_graph,
    parse_graph,
    random_instance,
)
from .solver import SolverConfig, nc_distance

EXACT_TOL = 1e-6
APPROX_TOL = 0.05


class CommandError(Exception):
    """Raised for failures that should exit with status 1."""


# --- rendering ----------------------------------------------------------------


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            return None
        return x
    if isinstance(x, (frozenset, set)):
        return sorted(_jsonable(v) for v in x)
    return x


def _fmt(x) -> str:
    if isinstance(x, bool) or x is None:
        return str(x).lower() if isinstance(x, bool) else "-"
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return f"{x:.6g}"
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in x) + "]"
    return str(x)


def _table(rows: list[dict], columns: Sequence[str]) -> str:
    cells = [[_fmt(r.get(c)) for c in columns] for r in rows]
    widths = [max(len(c), *(len(row[k]) for row in cells)) if cells else len(c) for k, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(lines)


def _pairs(doc: dict) -> str:
    width = max(len(k) for k in doc)
    return "\n".join(f"{k.ljust(width)}  {_fmt(v)}" for k, v in doc.items())


# --- commands -------------------------------------------------------------------


def _config(args) -> SolverConfig:
    return SolverConfig(tol=args.tol, max_iterations=args.max_iter, restarts=args.restarts, seed=args.seed)


def _load(args) -> DiracOperator:
    if args.input == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise CommandError(f"cannot read {args.input}: {exc.strerror}") from None
    return as_dirac(parse_graph(text))


def cmd_validate(args):
    D = _load(args)
    labels = components(D)
    doc = {
        "valid": True,
        "n": D.n,
        "edges": len(D.edges),
        "support_edges": len(D.support()),
        "real": D.is_real(),
        "components": int(labels.max()) + 1,
    }
    return doc, lambda: _pairs(doc)


def _distance_doc(D, i, j, cfg):
    res = nc_distance(D, i, j, cfg)
    return {
        "i": i,
        "j": j,
        "value": res.value,
        "witness": res.witness,
        "iterations": res.iterations,
        "converged": res.converged,
        "gap": res.gap,
    }


def cmd_distance(args):
    D = _load(args)
    cfg = _config(args)
    if args.all_pairs:
        if args.i is not None:
            raise CommandError("--all-pairs takes no vertex arguments")
        rows = [
            _distance_doc(D, i, j, cfg) for i in range(1, D.n + 1) for j in range(i + 1, D.n + 1)
        ]
        doc = {"n": D.n, "pairs": rows}
        return doc, lambda: _table(rows, ["i", "j", "value", "converged", "gap"])
    if args.i is None or args.j is None:
        raise CommandError("distance needs two vertices or --all-pairs")
    doc = _distance_doc(D, args.i, args.j, cfg)
    return doc, lambda: _pairs(doc)


def cmd_bounds(args):
    D = _load(args)
    est = estimate(D, args.i, args.j, _config(args), exact=args.exact)
    doc = {"i": args.i, "j": args.j, **est.to_dict()}
    if args.exact and est.exact is not None:
        doc["contains_exact"] = est.contains(est.exact)

    def render():
        head = {k: doc[k] for k in ("i", "j", "lower", "upper", "exact")}
        if "contains_exact" in doc:
            head["contains_exact"] = doc["contains_exact"]
        return _pairs(head) + "\n\n" + _table(doc["provenance"], ["bound", "value"])

    return doc, render


def cmd_chain(args):
    try:
        chain = Chain.parse(args.chain)
    except ValueError as exc:
        raise CommandError(str(exc)) from None
    rep = chain_bounds(chain, exact=True, cfg=_config(args), numeric=args.numeric)
    doc = rep.to_dict()
    return doc, lambda: _pairs(doc)


def cmd_decompose(args):
    D = _load(args)
    G = support_graph(D)
    if not 1 <= args.i <= D.n or not 1 <= args.j <= D.n:
        raise CommandError(f"vertices must lie in 1..{D.n}")
    if args.i == args.j:
        raise CommandError("decompose needs two distinct vertices")
    comp = G.subgraph(nx.node_connected_component(G, args.i)).copy()
    tree = block_cut_tree(comp)
    pruned = prune(G, args.i, args.j, tree)
    dec = blob_chain(G, args.i, args.j)
    doc = {
        "blocks": [sorted(b) for b in tree.blocks],
        "cutpoints": sorted(tree.cutpoints),
        "tree_edges": sorted([[k, c] for (_, k), (_, c) in (sorted(e) for e in tree.tree.edges)]),
        "pruned": sorted(pruned),
        "blob_chain": dec.to_dict(),
    }

    def render():
        lines = [
            _pairs({"blocks": doc["blocks"], "cutpoints": doc["cutpoints"], "pruned": doc["pruned"]}),
            "",
        ]
        for b, blob in enumerate(dec.blobs):
            lines.append(f"blob {b + 1}: {sorted(blob.vertices)} entry {blob.entry} exit {blob.exit}")
            if b < len(dec.chains):
                c = dec.chains[b]
                lines.append(f"chain {b + 1}: {list(c.path)} weights {c.chain()}")
        return "\n".join(lines)

    return doc, render


def cmd_gen(args):
    if args.n < 1:
        raise CommandError("--n must be positive")
    g = random_instance(args.seed, args.n, args.density, (args.wmin, args.wmax))
    doc = json.loads(dump_graph(g))
    return doc, lambda: dump_graph(g, indent=2)


# --- reference chain table --------------------------------------------------------


def _unit_rows(k: int) -> list[tuple[str, Chain, dict]]:
    odd = Chain((1.0,) * (2 * k - 1))
    even = Chain((1.0,) * (2 * k))
    return [
        (
            f"1-1-1... ({2 * k - 1} times, k={k})",
            odd,
            {
                "R1": (k, True),
                "R2": ((k - 0.5) / math.cos(math.pi / (2 * k + 1)), True),
                "lambda": (k, True),
                "L1": (math.sqrt(k * k + (k - 1) ** 2), True),
                "L2": (k, True),
            },
        ),
        (
            f"1-1-1... ({2 * k} times, k={k})",
            even,
            {
                "R1": (k, True),
                "R2": (k / math.cos(math.pi / (2 * k + 2)), True),
                "lambda": (math.sqrt(k * (k + 1)), True),
                "L1": (k * math.sqrt(2), True),
                "L2": (k + 0.5, True),
            },
        ),
    ]


def reference_rows(ks: Sequence[int] = (2, 3)) -> list[tuple[str, Chain, dict]]:
    """Rows of the reference table: ``(label, chain, {column: (value, exact?)})``.

    Exact entries are closed forms; inexact ones are published to one decimal.
    """
    rows = []
    for k in ks:
        rows += _unit_rows(k)
    rows.append(
        (
            "2-1-2-1-2",
            Chain.parse("2-1-2-1-2"),
            {"R1": (6, True), "R2": (4.4, False), "lambda": (6, True), "L1": (6.3, False), "L2": (6, True)},
        )
    )
    rows.append(
        (
            "1-2-1-2-1",
            Chain.parse("1-2-1-2-1"),
            {"R1": (4, True), "R2": (3.9, False), "lambda": (4.4, False), "L1": (5.1, False), "L2": (6, True)},
        )
    )
    return rows


def table1_report(cfg: SolverConfig | None = None, ks: Sequence[int] = (2, 3)) -> dict:
    """Recompute the reference table of chain bounds and flag any mismatch.

    ``lambda`` is always computed by the numerical solver.  Exact cells must
    match within ``1e-6`` (relative), approximate cells within ``0.05``.
    """
    cfg = cfg or SolverConfig(tol=1e-10)
    rows = []
    for label, chain, reference in reference_rows(ks):
        rep = chain_bounds(chain, exact=False)
        computed = {
            "R1": rep.r1,
            "R2": rep.r2,
            "lambda": lambda_chain(chain, cfg, numeric=True),
            "L1": rep.l1,
            "L2": rep.l2,
        }
        cells = []
        for col, (ref, exact) in reference.items():
            value = computed[col]
            if exact:
                ok = abs(value - ref) <= EXACT_TOL * max(1.0, abs(ref))
            else:
                ok = abs(value - ref) <= APPROX_TOL
            cells.append(
                {"column": col, "reference": float(ref), "computed": value, "exact": exact, "ok": bool(ok)}
            )
        rows.append({"row": label, "chain": str(chain), "cells": cells})
    mismatches = [
        {"row": r["row"], **c} for r in rows for c in r["cells"] if not c["ok"]
    ]
    return {
        "tolerances": {"exact": EXACT_TOL, "approximate": APPROX_TOL},
        "rows": rows,
        "mismatches": mismatches,
    }


def cmd_table1(args):
    cfg = SolverConfig(tol=min(args.tol, 1e-10), max_iterations=args.max_iter, seed=args.seed)
    doc = table1_report(cfg)

    def render():
        flat = []
        for r in doc["rows"]:
            row = {"weights": r["row"]}
            for c in r["cells"]:
                mark = "" if c["ok"] else " !"
                ref = _fmt(c["reference"]) if c["exact"] else "~" + _fmt(c["reference"])
                row[c["column"]] = f"{_fmt(c['computed'])} ({ref}){mark}"
            flat.append(row)
        out = _table(flat, ["weights", "R1", "R2", "lambda", "L1", "L2"])
        out += f"\n\n{len(doc['mismatches'])} cell(s) outside tolerance"
        return out

    return doc, render


# --- parser -----------------------------------------------------------------------


def _positive_float(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (x > 0 and math.isfinite(x)):
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return x


def _positive_int(text: str) -> int:
    try:
        x = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if x < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return x


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=_positive_float, default=1e-8, help="relative solver tolerance")
    common.add_argument("--max-iter", type=_positive_int, default=500, help="Newton iteration budget")
    common.add_argument("--restarts", type=_positive_int, default=1)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("table", "json"), default="table")
    common.add_argument("--input", default="-", help="graph document path, or '-' for stdin")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="ncdist", description="Noncommutative distances on weighted graphs."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check a graph or Dirac document")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("distance", parents=[common], help="exact distance with a witness potential")
    p.add_argument("i", type=int, nargs="?")
    p.add_argument("j", type=int, nargs="?")
    p.add_argument("--all-pairs", action="store_true")
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("bounds", parents=[common], help="merged interval from every estimator")
    p.add_argument("i", type=int)
    p.add_argument("j", type=int)
    p.add_argument("--exact", action="store_true", help="also solve for the exact distance")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("chain", parents=[common], help="bounds and length of a chain literal w1-w2-...")
    p.add_argument("chain")
    p.add_argument("--numeric", action="store_true", help="solve for lambda even when a closed form exists")
    p.set_defaults(func=cmd_chain)

    p = sub.add_parser("decompose", parents=[common], help="block-cut tree, pruning and blob-chain")
    p.add_argument("i", type=int)
    p.add_argument("j", type=int)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("gen", parents=[common], help="random connected instance document")
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--density", type=float, default=0.5)
    p.add_argument("--wmin", type=_positive_float, default=0.5)
    p.add_argument("--wmax", type=_positive_float, default=2.0)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("table1", parents=[common], help="recompute the reference table of chain bounds")
    p.set_defaults(func=cmd_table1)
    return parser


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s: %(message)s")
    try:
        doc, render = args.func(args)
    except (CommandError, GraphError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    if args.format == "json":
        print(json.dumps(_jsonable(doc), sort_keys=True), file=stdout)
    else:
        print(render(), file=stdout)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
