"""Command-line front end.

    leavitt analyze   --graph G.json
    leavitt decompose --graph G.json [--field q|qi|gf:<p>]
    leavitt iso       --graph G.json --graph H.json
    leavitt eval      --graph G.json --expr "e* e"
    leavitt monoid    --graph G.json [--bound N] [--depth N] [--expr "a_v = a_w"]
    leavitt witness   --graph G.json [--bound N]

Reports are JSON (default) or text.  Exit status: 0 on success, 1 for
unreadable or malformed input, 2 when a command's precondition fails (the
report then carries the offending witness).
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path as FsPath
from typing import List, Optional, Sequence

from . import __version__
from .graph import Graph, GraphError, find_exit, is_no_exit, parse_graph
from .lpa import ExpressionError, LeavittPathAlgebra, NoExitCycle, nonfinite_witness, orthogonal_idempotents
from .monoid import (
    MonoidElement,
    cancellativity_search,
    eq_bounded,
    eq_no_exit,
    parse_monoid_element,
    rank_vector,
    relation_str,
    relations,
)
from .scalar import Field, FieldError
from .structure import NotNoExit, decompose, iso_decide, phi

COMMANDS = ("analyze", "decompose", "iso", "eval", "monoid", "witness")


class InputError(Exception):
    pass


class PreconditionError(Exception):
    def __init__(self, message: str, witness: Optional[dict] = None):
        super().__init__(message)
        self.witness = witness


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="leavitt", description="Leavitt path algebras of finite graphs")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--graph", action="append", required=True, metavar="FILE")
        p.add_argument("--field", default="q", help="q, qi or gf:<p> (default q)")
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--depth", type=int, default=6)
        p.add_argument("--bound", type=int, default=None)
        p.add_argument("--samples", type=int, default=20)
        p.add_argument("--expr", default=None)
    return ap


def _load_graph(path: str):
    try:
        data = FsPath(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        g = parse_graph(data.decode("utf-8"))
    except (GraphError, UnicodeDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from exc
    return g, {"path": path, "sha256": hashlib.sha256(data).hexdigest()}


def _exit_witness_dict(w) -> dict:
    c, e, pos = w
    return {"cycle": list(c.edges), "exit": e, "position": pos}


def _analyze(graphs, field, args) -> dict:
    g = graphs[0]
    cycles = []
    for c in g.cycles:
        ex = find_exit(g, c)
        cycles.append({
            "edges": list(c.edges),
            "base": c.base,
            "exit": None if ex is None else {"edge": ex[0], "position": ex[1]},
        })
    return {
        "sinks": g.ordered(g.sinks()),
        "sources": g.ordered(g.sources()),
        "cycles": cycles,
        "is_no_exit": is_no_exit(g),
    }


def _decompose(g: Graph):
    try:
        return decompose(g)
    except NotNoExit as exc:
        raise PreconditionError(str(exc), _exit_witness_dict(exc.witness)) from exc


def _decompose_cmd(graphs, field, args) -> dict:
    d = _decompose(graphs[0])
    return {"decomposition": d.to_dict(), "shape": d.shape("L"), "q_shape": d.shape("Q")}


def _iso(graphs, field, args) -> dict:
    if len(graphs) != 2:
        raise InputError("iso needs exactly two --graph arguments")
    for g in graphs:
        _decompose(g)
    res = iso_decide(*graphs)
    return {"decision": "isomorphic" if res.isomorphic else "not-isomorphic", **res.to_dict()}


def _eval(graphs, field, args) -> dict:
    if args.expr is None:
        raise InputError("eval needs --expr")
    alg = LeavittPathAlgebra(graphs[0], field)
    try:
        a = alg.parse(args.expr)
    except ExpressionError as exc:
        raise InputError(str(exc)) from exc
    out = {
        "expression": args.expr,
        "normal_form": str(a),
        "degree_components": {str(k): str(v) for k, v in a.degree_components().items()},
        "star": str(a.star()),
        "phi": None,
    }
    if is_no_exit(alg.graph):
        out["phi"] = phi(a, decompose(alg.graph)).to_strings()
    return out


def _monoid(graphs, field, args) -> dict:
    g = graphs[0]
    out: dict = {"relations": [relation_str(r) for r in relations(g)], "rank_vectors": None}
    no_exit = is_no_exit(g)
    d = decompose(g) if no_exit else None
    if d is not None:
        out["rank_vectors"] = {v: list(rank_vector(d, MonoidElement.generator(g, v))) for v in g.vertices}
    if args.expr is not None:
        if "=" not in args.expr:
            raise InputError("monoid --expr must have the form 'X = Y'")
        left, right = args.expr.split("=", 1)
        try:
            x, y = parse_monoid_element(g, left), parse_monoid_element(g, right)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        if d is not None:
            verdict = "equal" if eq_no_exit(d, x, y) else "distinct"
        else:
            verdict = eq_bounded(g, x, y, args.depth)
        out["equality"] = {"left": str(x), "right": str(y), "verdict": verdict}
    if args.bound is not None:
        if args.bound < 1:
            raise InputError("--bound must be at least 1")
        ce = cancellativity_search(g, args.bound, args.depth)
        out["cancellativity"] = {
            "bound": args.bound,
            "counterexample": None if ce is None else {"a": str(ce.a), "b": str(ce.b), "c": str(ce.c)},
        }
    return out


def _witness(graphs, field, args) -> dict:
    alg = LeavittPathAlgebra(graphs[0], field)
    one = alg.unit()
    w = nonfinite_witness(alg)
    out: dict = {"nonfinite": None, "idempotents": None}
    if w is None:
        return out
    x = w.x
    xs = x.star()
    out["nonfinite"] = {
        "cycle": list(w.exit.closed_path.edges),
        "exit": w.exit.exit_edge,
        "base": w.exit.base,
        "x": str(x),
        "x_star_x": str(xs * x),
        "x_x_star": str(x * xs),
        "x_star_x_is_one": xs * x == one,
        "x_x_star_is_one": x * xs == one,
    }
    n = args.bound if args.bound is not None else 3
    try:
        fam = orthogonal_idempotents(alg, n)
    except NoExitCycle:
        return out
    out["idempotents"] = {
        "elements": [str(f) for f in fam],
        "idempotent": all(f * f == f for f in fam),
        "orthogonal": all(not (a * b) for i, a in enumerate(fam) for j, b in enumerate(fam) if i != j),
        "distinct": len(set(fam)) == len(fam),
    }
    return out


HANDLERS = {
    "analyze": _analyze,
    "decompose": _decompose_cmd,
    "iso": _iso,
    "eval": _eval,
    "monoid": _monoid,
    "witness": _witness,
}


def _text(report: dict) -> str:
    lines: List[str] = []

    def walk(obj, indent):
        pad = "  " * indent
        if isinstance(obj, dict):
            for k, v in obj.items():
                if isinstance(v, (dict, list)) and v:
                    lines.append(f"{pad}{k}:")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}{k}: {_scalar_text(v)}")
        elif isinstance(obj, list):
            for v in obj:
                if isinstance(v, (dict, list)) and v:
                    lines.append(f"{pad}-")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}- {_scalar_text(v)}")

    walk(report, 0)
    return "\n".join(lines)


def _scalar_text(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (list, dict)):
        return "[]" if isinstance(v, list) else "{}"
    return str(v)


def run(argv: Sequence[str], out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(list(argv))
    report: dict = {"tool": "leavitt", "version": __version__, "command": args.command}
    status = 0
    try:
        try:
            field = Field.from_selector(args.field)
        except FieldError as exc:
            raise InputError(str(exc)) from exc
        report["field"] = field.selector
        loaded = [_load_graph(p) for p in args.graph]
        report["inputs"] = [meta for _, meta in loaded]
        if args.command != "iso" and len(loaded) != 1:
            raise InputError(f"{args.command} takes exactly one --graph")
        report["result"] = HANDLERS[args.command]([g for g, _ in loaded], field, args)
    except InputError as exc:
        status = 1
        report["error"] = {"kind": "input", "message": str(exc)}
    except PreconditionError as exc:
        status = 2
        report["error"] = {"kind": "precondition", "message": str(exc), "witness": exc.witness}
    if "error" in report:
        print(f"leavitt: {report['error']['message']}", file=err)
    if args.format == "json":
        out.write(json.dumps(report, indent=2, ensure_ascii=False) + "\n")
    else:
        out.write(_text(report) + "\n")
    return status


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
