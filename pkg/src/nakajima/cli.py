"""Command-line interface: ``nakajima <command> ...``.

Exit status is 0 on success, 1 on a domain error (bad type, seed, failed
check, node cap hit) and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import graph as graph_mod
from .cartan import CartanError, cartan_type, format_weight, parse_weight, simple_root
from .graph import GraphError, export_dot, generate, stembridge_check
from .kostant import (
    KostantCrystal, KostantError, dual_bzl_word, format_partition, from_lusztig_data,
    kostant_to_monomial, lusztig_data, monomial_to_kostant, parse_partition,
    virtualize_lusztig_data,
)
from .monomial import (
    CArray, InfinityMonomialCrystal, Monomial, MonomialCrystal, MonomialError, Style,
    nakajima_y_lambda, parse_monomial, y_lambda,
)
from .mutation import (
    Mutation, MutationError, format_matrix, mutate_carray, parse_matrix, reorient_path,
)
from .virtual import NotInVirtualCrystal, folding, verify_virtualization

CAP_ENV = "NAKAJIMA_NODE_CAP"
DOMAIN_ERRORS = (CartanError, MonomialError, GraphError, KostantError, MutationError,
                 NotInVirtualCrystal)


class DomainFailure(Exception):
    """A check ran but did not pass; reported with exit status 1."""


def _csv_ints(text: str) -> list[int]:
    return [int(x) for x in text.replace(" ", "").split(",") if x]


def _depth(text: str) -> int | None:
    if text in ("full", "inf", "unbounded"):
        return None
    d = int(text)
    if d < 0:
        raise argparse.ArgumentTypeError("depth must be nonnegative")
    return d


def _cap(args) -> int:
    if args.cap is not None:
        return args.cap
    return int(os.environ.get(CAP_ENV, graph_mod.DEFAULT_CAP))


def _fmt(notation: str):
    return (lambda M: M.to_latex()) if notation == "latex" else str


def _crystal(args):
    C = cartan_type(args.type)
    style = Style(args.style)
    c = None
    if args.c:
        with open(args.c) as fh:
            c = CArray.from_matrix(C, parse_matrix(fh.read()), style)
    if args.ops == "fbar":
        return C, InfinityMonomialCrystal(C, c, style=style)
    return C, MonomialCrystal(C, c, style=style)


def _seed(args, C):
    if args.seed:
        return parse_monomial(args.seed)
    if args.highest_weight:
        lam = parse_weight(args.highest_weight, C)
        if getattr(args, "style", "kashiwara") == "nakajima":
            return nakajima_y_lambda(C, lam)
        return y_lambda(C, lam)
    if getattr(args, "ops", None) == "fbar":
        return Monomial.one()
    raise CartanError("give --seed or --highest-weight")


def _emit_graph(G, C, emit, fmt, out):
    if emit == "dot":
        out.write(export_dot(G, fmt))
    elif emit == "json":
        out.write(json.dumps(G.to_json(fmt), indent=1) + "\n")
    else:
        for x in G.nodes:
            out.write(f"{G.depth_of[x]}\t{fmt(x)}\t{format_weight(G.weights[x], C)}\n")
        for s, i, t in G.edges:
            out.write(f"{fmt(G.nodes[s])} -{i}-> {fmt(G.nodes[t])}\n")


# -- commands -----------------------------------------------------------------

def cmd_gen(args, out):
    C, M = _crystal(args)
    seed = _seed(args, C)
    ops = "f" if args.ops == "fbar" else args.ops
    G = generate(M, [seed], depth=args.depth, cap=_cap(args), ops=ops,
                 unbounded=args.depth is None)
    _emit_graph(G, C, args.emit, _fmt(args.notation), out)
    if G.cap_exceeded:
        raise GraphError(f"node cap {_cap(args)} reached; output is partial")


def cmd_virtualize(args, out):
    ctx = folding(args.folding)
    if args.style == "nakajima":
        ctx = ctx.nakajima()
    ctx.check()
    C = ctx.spec.source
    seed = _seed(args, C)
    report = verify_virtualization(seed, ctx, depth=args.depth, cap=_cap(args))
    fmt = _fmt(args.notation)
    G = report.graph
    if args.emit == "table":
        for x in G.nodes:
            out.write(f"{fmt(x)} | {fmt(report.images[x])}\n")
    elif args.emit in ("dot", "json"):
        image = graph_mod.graph_from_edges(
            C.labels, [report.images[x] for x in G.nodes],
            {report.images[x]: G.weights[x] for x in G.nodes},
            [(report.images[a], i, report.images[b]) for a, i, b in G.edge_set()])
        _emit_graph(image, C, args.emit, fmt, out)
    else:
        _emit_graph(G, C, "text", fmt, out)
    print(report.summary(), file=sys.stderr)
    if G.cap_exceeded:
        raise GraphError("node cap reached; output is partial")
    if not report.ok:
        raise DomainFailure(report.summary())


def cmd_to_kostant(args, out):
    M = parse_monomial(args.monomial)
    a = monomial_to_kostant(M, args.n)
    out.write((json.dumps(a.to_json()) if args.emit == "json" else format_partition(a)) + "\n")


def _partition(args):
    if args.partition.lstrip().startswith("{"):
        from .kostant import KostantPartition
        return KostantPartition.from_json(json.loads(args.partition))
    return parse_partition(args.partition, args.n)


def cmd_from_kostant(args, out):
    M = kostant_to_monomial(_partition(args))
    out.write((M.to_latex() if args.notation == "latex" else str(M)) + "\n")


def _word(text, n):
    return dual_bzl_word(n) if text in (None, "dualBZL") else tuple(_csv_ints(text))


def cmd_lusztig(args, out):
    if args.folding:
        ctx = folding(args.folding)
        if args.data is None or args.word in (None, "dualBZL"):
            raise CartanError("--folding needs --data and an explicit --word")
        ihat, L = virtualize_lusztig_data(_csv_ints(args.data), _csv_ints(args.word), ctx.spec)
        out.write("word: " + ",".join(map(str, ihat)) + "\n")
        out.write("data: " + ",".join(map(str, L)) + "\n")
        return
    if args.n is None:
        raise CartanError("--n is required")
    word = _word(args.word, args.n)
    if args.data is not None:
        a = from_lusztig_data(_csv_ints(args.data), args.n, word)
        out.write(format_partition(a) + "\n")
    else:
        if args.partition is None:
            raise CartanError("give --partition or --data")
        out.write(",".join(map(str, lusztig_data(_partition(args), word))) + "\n")


def cmd_mutate(args, out):
    with open(args.c) as fh:
        rows = parse_matrix(fh.read())
    n = len(rows)
    C = cartan_type(args.type) if args.type else cartan_type(f"A{n}")
    if C.n != n:
        raise CartanError(f"type {C.name} has rank {C.n}, array has size {n}")
    c = CArray.from_matrix(C, rows)
    if args.reorient:
        arrows = []
        for part in args.reorient.split(","):
            a, b = part.split(">")
            arrows.append((int(a), int(b)))
        m, cp = reorient_path(c, C, arrows)
        out.write("m = [" + ", ".join(map(str, m.as_list(C))) + "]\n")
    else:
        if args.m is None:
            raise CartanError("give --m or --reorient")
        cp = mutate_carray(c, Mutation.from_seq(C, _csv_ints(args.m)))
    out.write(format_matrix(cp.to_matrix(C)) + "\n")


def cmd_check(args, out):
    if args.suite == "virtualization":
        return cmd_virtualize_check(args, out)
    if args.suite == "kostant":
        return cmd_kostant_check(args, out)
    C, M = _crystal(args)
    seed = _seed(args, C)
    G = generate(M, [seed], depth=args.depth, cap=_cap(args), ops="ef",
                 unbounded=args.depth is None)
    if G.cap_exceeded:
        raise GraphError("node cap reached")
    if args.suite == "stembridge":
        rep = stembridge_check(G, C)
        out.write(f"stembridge: {'pass' if rep.ok else 'FAIL'} ({len(G)} nodes, {rep.checked} checks)\n")
        for msg in rep.failures:
            out.write(f"  {msg}\n")
        if not rep.ok:
            raise DomainFailure("Stembridge axioms fail")
        return
    problems = graph_mod.check_graph_invariants(G, M, lambda i: simple_root(C, i))
    for x in G.nodes:
        for i in C.labels:
            if M.epsilon(x, i) != M.phi(x, i) - G.weights[x][C.pos(i)]:
                problems.append(f"epsilon identity fails at {x}, i={i}")
            y = M.f(x, i)
            if y is not None and M.e(y, i) != x:
                problems.append(f"e_{i} f_{i} != id at {x}")
            y = M.e(x, i)
            if y is not None and M.f(y, i) != x:
                problems.append(f"f_{i} e_{i} != id at {x}")
    out.write(f"invariants: {'pass' if not problems else 'FAIL'} ({len(G)} nodes)\n")
    for p in problems[:20]:
        out.write(f"  {p}\n")
    if problems:
        raise DomainFailure("invariant check failed")


def cmd_virtualize_check(args, out):
    if not args.folding:
        raise CartanError("--suite virtualization needs --folding")
    ctx = folding(args.folding).check()
    report = verify_virtualization(_seed(args, ctx.spec.source), ctx, depth=args.depth, cap=_cap(args))
    out.write(f"virtualization: {report.summary()}\n")
    if not report.ok:
        raise DomainFailure(report.summary())


def cmd_kostant_check(args, out):
    C = cartan_type(args.type)
    n = C.n
    if C.name != f"A{n}":
        raise CartanError("the Kostant suite is for type A only")
    K = KostantCrystal(n)
    I = InfinityMonomialCrystal(C, CArray.standard(C))
    depth = 6 if args.depth is None else args.depth
    G = generate(I, [Monomial.one()], depth=depth, cap=_cap(args), ops="ef")
    bad = 0
    for x in G.nodes:
        a = monomial_to_kostant(x, n, I)
        for i in C.labels:
            if monomial_to_kostant(I.f(x, i), n, I) != K.f(a, i):
                bad += 1
            ex, ea = I.e(x, i), K.e(a, i)
            if (ex is None) != (ea is None) or (ex is not None and monomial_to_kostant(ex, n, I) != ea):
                bad += 1
            if K.stats(a, i) != (I.weight(x), I.epsilon(x, i), I.phi(x, i)):
                bad += 1
    out.write(f"kostant: {'pass' if not bad else 'FAIL'} ({len(G)} nodes, {bad} failures)\n")
    if bad:
        raise DomainFailure("Kostant intertwining failed")


# -- parser -------------------------------------------------------------------

def _add_crystal_opts(p, need_type=True, need_depth=False):
    p.add_argument("--type", required=need_type, help='Cartan type, e.g. "A3", "F4", "C3~"')
    p.add_argument("--highest-weight", help='dominant weight, e.g. "L1+2*L3"')
    p.add_argument("--seed", help='monomial, e.g. "Y(1,0)^2 * Y(2,1)^-1"')
    p.add_argument("--depth", type=_depth, default=None, required=need_depth,
                   help='BFS depth, or "full" for a finite crystal')
    p.add_argument("--cap", type=int, default=None, help=f"node cap (env {CAP_ENV})")
    p.add_argument("--style", choices=["kashiwara", "nakajima"], default="kashiwara")
    p.add_argument("--c", help="file with the c-array as a square matrix")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nakajima", description="Crystals of Nakajima monomials.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a crystal graph")
    _add_crystal_opts(p, need_depth=True)
    p.add_argument("--ops", choices=["f", "ef", "fbar"], default="f")
    p.add_argument("--emit", choices=["dot", "json", "text"], default="text")
    p.add_argument("--notation", choices=["plain", "latex"], default="plain")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("virtualize", help="apply and verify a virtualization map")
    p.add_argument("--folding", required=True, help="C2-A3, B2-A3, F4-E6, G2-D4, C3~-D5~, identity:TYPE")
    p.add_argument("--seed")
    p.add_argument("--highest-weight")
    p.add_argument("--depth", type=_depth, default=None)
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--style", choices=["kashiwara", "nakajima"], default="kashiwara")
    p.add_argument("--emit", choices=["dot", "json", "table", "text"], default="table")
    p.add_argument("--notation", choices=["plain", "latex"], default="plain")
    p.set_defaults(func=cmd_virtualize)

    p = sub.add_parser("to-kostant", help="M(infinity) monomial of type A_n -> Kostant partition")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--monomial", required=True)
    p.add_argument("--emit", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_to_kostant)

    p = sub.add_parser("from-kostant", help="Kostant partition -> M(infinity) monomial")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--partition", required=True)
    p.add_argument("--notation", choices=["plain", "latex"], default="plain")
    p.set_defaults(func=cmd_from_kostant)

    p = sub.add_parser("lusztig", help="Lusztig data of a Kostant partition")
    p.add_argument("--n", type=int)
    p.add_argument("--partition")
    p.add_argument("--data", help="Lusztig data as CSV (inverse direction, or with --folding)")
    p.add_argument("--word", default=None, help='"dualBZL" (default) or a CSV reduced word')
    p.add_argument("--folding", help="virtualize --data along this folding")
    p.set_defaults(func=cmd_lusztig)

    p = sub.add_parser("mutate", help="mutate a c-array")
    p.add_argument("--c", required=True, help="file with the c-array as a square matrix")
    p.add_argument("--m", help="mutation vector as CSV")
    p.add_argument("--reorient", help='target arrows for a path diagram, e.g. "2>1,2>3,3>4"')
    p.add_argument("--type", help="Cartan type (default A_n of the array size)")
    p.set_defaults(func=cmd_mutate)

    p = sub.add_parser("check", help="run a verification suite")
    p.add_argument("--suite", choices=["stembridge", "invariants", "virtualization", "kostant"],
                   required=True)
    _add_crystal_opts(p, need_type=False)
    p.add_argument("--folding")
    p.set_defaults(func=cmd_check, ops="f")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "check" and args.suite in ("stembridge", "invariants", "kostant") and not args.type:
        ap.error(f"--suite {args.suite} needs --type")
    try:
        args.func(args, sys.stdout)
    except DomainFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
