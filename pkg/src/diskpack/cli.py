"""Command line interface: ``diskpack <group> <command> ...``.

Exit status: 0 for a yes-verdict or valid packing, 1 for a no-verdict or
invalid packing, 2 for usage and input errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import List, Optional

from . import caterpillar as cat
from . import hardness as hd
from .geometry import DEFAULT_TOL, GeometryError, Packing, render_svg, validate_dcr
from .graph import (GraphError, Graph, caterpillar_from_degrees, caterpillar_view, graph_to_json,
                    load_graph, star_view)
from .oracle import OracleError, ThreePartitionInstance, star_wdc_bruteforce, three_partition_bruteforce
from .rigidity import (NotUnitRealizable, RigidityError, check_rigidity_precondition, reconstruct_rigid,
                       triangle_strip_graph)
from .star import StarInputError, decide_and_construct_embedded_star

YES, NO, USAGE = 0, 1, 2


class InputError(Exception):
    pass


EXAMPLES = {
    "gen caterpillar": "diskpack gen caterpillar --degrees 2,5,3,5,2 -o cat.json",
    "gen star": "diskpack gen star --radii 1,1,1,1,1 -o star5.json",
    "gen strip": "diskpack gen strip --n 8 --seed 3 -o strip.json",
    "caterpillar decide": "diskpack caterpillar decide cat.json",
    "caterpillar construct": "diskpack caterpillar construct cat.json -o cat_packing.json --svg cat.svg",
    "star decide-embedded": "diskpack star decide-embedded star5.json --center-radius 1",
    "star construct-embedded": "diskpack star construct-embedded star5.json -o star_packing.json",
    "star bruteforce": "diskpack star bruteforce star5.json --max-leaves 10",
    "3part solve": "diskpack 3part solve --A 6,6,7,7,7,7 --B 20",
    "rigid check": "diskpack rigid check strip.json",
    "rigid reconstruct": "diskpack rigid reconstruct strip.json -o strip_packing.json",
    "reduce 3part-to-star": "diskpack reduce 3part-to-star --A 6,7,7 --B 20 --m 8 --mode demo -o red.json",
    "reduce check-conditions": "diskpack reduce check-conditions --B 180",
    "reduce report": "diskpack reduce report --B 180",
    "reduce embed": "diskpack reduce embed --instance red.json -o red_packing.json",
    "validate": "diskpack validate cat_packing.json cat.json",
}


def _epilog(key: str) -> str:
    return f"example:\n  $ {EXAMPLES[key]}"


# ---------------------------------------------------------------- helpers

def _ints(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _floats(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _positive(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not v > 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return v


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}")
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: line {e.lineno}: {e.msg}")


def _graph(path: str):
    try:
        return load_graph(path)
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}")


def _write(path: Optional[str], data) -> None:
    if path:
        with open(path, "w") as fh:
            if isinstance(data, str):
                fh.write(data)
            else:
                json.dump(data, fh, indent=1)
                fh.write("\n")


class Out:
    def __init__(self, args):
        self.fmt = getattr(args, "format", "json")

    def emit(self, data: dict, packing: Optional[Packing] = None) -> None:
        if self.fmt == "svg" and packing is not None:
            sys.stdout.write(render_svg(packing, labels=True))
        elif self.fmt == "text":
            for k, v in data.items():
                print(f"{k}: {v if not isinstance(v, (dict, list)) else json.dumps(v)}")
        else:
            print(json.dumps(data))


def _tol(args) -> float:
    return getattr(args, "tol", DEFAULT_TOL)


def _svg(args, packing: Optional[Packing]) -> None:
    path = getattr(args, "svg", None)
    if path and packing is not None:
        _write(path, render_svg(packing, labels=True))


# ---------------------------------------------------------------- commands

def cmd_gen(args) -> int:
    if args.kind == "caterpillar":
        c = caterpillar_from_degrees(args.degrees)
        data = graph_to_json(c.graph)
    elif args.kind == "star":
        leaves = [f"l{i}" for i in range(len(args.radii))]
        w = {"c": args.center_radius, **dict(zip(leaves, args.radii))}
        g = Graph(["c"] + leaves, [("c", v) for v in leaves], w)
        data = graph_to_json(g)
        data["rotation"] = {"c": leaves, **{v: ["c"] for v in leaves}}
    else:
        g, rs = triangle_strip_graph(args.n, random.Random(getattr(args, "seed", 0)))
        data = graph_to_json(g, rs)
    if args.output:
        _write(args.output, data)
    else:
        print(json.dumps(data))
    return YES


def _caterpillar(path):
    g, _ = _graph(path)
    c = caterpillar_view(g)
    if c is None:
        raise InputError(f"{path}: graph is not a caterpillar")
    return c


def cmd_cat_decide(args) -> int:
    d = cat.decide_caterpillar_udc(_caterpillar(args.graph))
    Out(args).emit(d.to_json())
    return YES if d.realizable else NO


def cmd_cat_construct(args) -> int:
    c = _caterpillar(args.graph)
    try:
        p = cat.construct_caterpillar_udc(c, _tol(args))
    except cat.NotRealizableError as e:
        Out(args).emit({"realizable": False, "reason": str(e)})
        return NO
    _write(args.output, p.to_json())
    _svg(args, p)
    Out(args).emit({"realizable": True, "disks": len(p)}, p)
    return YES


def _star(args, embedded: bool):
    g, rs = _graph(args.graph)
    s = star_view(g, rs, embedded=embedded)
    if s is None:
        raise InputError(f"{args.graph}: graph is not a star")
    R = args.center_radius
    if R is None:
        R = (g.weights or {}).get(s.center, 1.0)
    return s, R


def cmd_star_decide(args, construct: bool = False) -> int:
    s, R = _star(args, True)
    res = decide_and_construct_embedded_star(s, R, _tol(args))
    if construct and res.packing is not None:
        _write(args.output, res.packing.to_json())
        _svg(args, res.packing)
    Out(args).emit(res.to_json(), res.packing)
    return YES if res.realizable else NO


def cmd_star_brute(args) -> int:
    s, R = _star(args, False)
    found = star_wdc_bruteforce(s, R, args.max_leaves, _tol(args))
    if found is None:
        Out(args).emit({"realizable": False})
        return NO
    order, p = found
    _write(args.output, p.to_json())
    Out(args).emit({"realizable": True, "order": order}, p)
    return YES


def cmd_3part(args) -> int:
    sol = three_partition_bruteforce(ThreePartitionInstance(tuple(args.A), args.B))
    Out(args).emit({"solvable": sol is not None,
                    "partition": [list(t) for t in sol] if sol else None})
    return YES if sol else NO


def _rigid_input(path):
    g, rs = _graph(path)
    if rs is None:
        raise InputError(f"{path}: a rotation system with outerFace is required")
    return g, rs


def cmd_rigid_check(args) -> int:
    ok = check_rigidity_precondition(*_rigid_input(args.graph))
    Out(args).emit({"precondition": ok})
    return YES if ok else NO


def cmd_rigid_reconstruct(args) -> int:
    g, rs = _rigid_input(args.graph)
    try:
        p, seq = reconstruct_rigid(g, rs, tol=_tol(args))
    except NotUnitRealizable as e:
        Out(args).emit({"realizable": False, "reason": str(e)})
        return NO
    _write(args.output, p.to_json())
    _svg(args, p)
    Out(args).emit({"realizable": True, "peel": seq.to_json()}, p)
    return YES


def cmd_reduce_build(args) -> int:
    a = ThreePartitionInstance(tuple(args.A), args.B)
    mode = hd.Mode(args.mode)
    a.validate()
    params = hd.ReductionParams(180 * a.B, a.n, args.m, mode)
    inst = hd.build_star_instance(a, params)
    data = inst.to_json()
    if args.output:
        _write(args.output, data)
        Out(args).emit({"vertices": inst.vertex_count(), "caveat": inst.caveat})
    else:
        print(json.dumps(data))
    return YES


def cmd_reduce_conditions(args) -> int:
    rep = hd.check_feasibility_conditions(args.B)
    Out(args).emit(rep.to_json())
    return YES if rep.all_hold else NO


def cmd_reduce_report(args) -> int:
    Out(args).emit(hd.report(args.B))
    return YES


def cmd_reduce_embed(args) -> int:
    inst = hd.StarReductionInstance.from_json(_load_json(args.instance))
    if args.partition:
        part = _load_json(args.partition)
    else:
        part = three_partition_bruteforce(inst.source)
        if part is None:
            Out(args).emit({"embedded": False, "reason": "instance has no 3-partition"})
            return NO
    try:
        p = hd.embed_solution(inst, part, tol=min(_tol(args), 1e-12))
    except hd.EmbeddingError as e:
        Out(args).emit({"embedded": False, "reason": str(e), "caveat": inst.caveat,
                        "residuals": [g.residual for g in e.residuals]})
        return NO
    rep = validate_dcr(p, inst.graph())
    _write(args.output, p.to_json())
    _svg(args, p)
    Out(args).emit({"embedded": True, "valid": rep.valid, "caveat": inst.caveat}, p)
    return YES if rep.valid else NO


def cmd_validate(args) -> int:
    try:
        p = Packing.from_json(_load_json(args.packing))
    except ValueError as e:
        raise InputError(f"{args.packing}: {e}")
    if getattr(args, "tol", None) is not None:
        p = Packing(p.disks, args.tol)
    g, _ = _graph(args.graph)
    rep = validate_dcr(p, g, g.weights)
    Out(args).emit(rep.to_json())
    return YES if rep.valid else NO


# ---------------------------------------------------------------- parser

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--tol", type=_positive, default=argparse.SUPPRESS,
                   help=f"contact tolerance (default {DEFAULT_TOL})")
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed")
    p.add_argument("--format", choices=["json", "text", "svg"], default=argparse.SUPPRESS)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    root = argparse.ArgumentParser(prog="diskpack", parents=[common],
                                   description="Disk contact representations of graphs.")
    groups = root.add_subparsers(dest="group", required=True)
    fmt = argparse.RawDescriptionHelpFormatter

    def leaf(sub, name, key, func, help_):
        p = sub.add_parser(name, parents=[common], help=help_, epilog=_epilog(key),
                           formatter_class=fmt)
        p.set_defaults(func=func)
        return p

    def out(p, svg=True):
        p.add_argument("-o", "--output", help="write result JSON here")
        if svg:
            p.add_argument("--svg", help="also write an SVG rendering here")

    g = groups.add_parser("gen", help="generate example graphs").add_subparsers(dest="cmd", required=True)
    p = leaf(g, "caterpillar", "gen caterpillar", cmd_gen, "caterpillar from inner degrees")
    p.add_argument("--degrees", type=_ints, required=True)
    p.set_defaults(kind="caterpillar")
    out(p, False)
    p = leaf(g, "star", "gen star", cmd_gen, "embedded star from leaf radii")
    p.add_argument("--radii", type=_floats, required=True)
    p.add_argument("--center-radius", type=_positive, default=1.0)
    p.set_defaults(kind="star")
    out(p, False)
    p = leaf(g, "strip", "gen strip", cmd_gen, "random internally triangulated outerplane graph")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(kind="strip")
    out(p, False)

    c = groups.add_parser("caterpillar", help="unit disk caterpillars").add_subparsers(dest="cmd", required=True)
    p = leaf(c, "decide", "caterpillar decide", cmd_cat_decide, "decide unit-disk realizability")
    p.add_argument("graph")
    p = leaf(c, "construct", "caterpillar construct", cmd_cat_construct, "construct a unit disk packing")
    p.add_argument("graph")
    out(p)

    s = groups.add_parser("star", help="weighted stars").add_subparsers(dest="cmd", required=True)
    for name, key, func, h in (
            ("decide-embedded", "star decide-embedded", cmd_star_decide, "decide an embedded star"),
            ("construct-embedded", "star construct-embedded",
             lambda a: cmd_star_decide(a, True), "construct an embedded star packing")):
        p = leaf(s, name, key, func, h)
        p.add_argument("graph")
        p.add_argument("--center-radius", type=_positive)
        if name.startswith("construct"):
            out(p)
    p = leaf(s, "bruteforce", "star bruteforce", cmd_star_brute, "search all circular orders")
    p.add_argument("graph")
    p.add_argument("--center-radius", type=_positive)
    p.add_argument("--max-leaves", type=int, default=10)
    out(p, False)

    t = groups.add_parser("3part", help="3-Partition").add_subparsers(dest="cmd", required=True)
    p = leaf(t, "solve", "3part solve", cmd_3part, "exact backtracking solver")
    p.add_argument("--A", type=_ints, required=True)
    p.add_argument("--B", type=int, required=True)

    r = groups.add_parser("rigid", help="rigid unit packings").add_subparsers(dest="cmd", required=True)
    p = leaf(r, "check", "rigid check", cmd_rigid_check, "check the rigidity precondition")
    p.add_argument("graph")
    p = leaf(r, "reconstruct", "rigid reconstruct", cmd_rigid_reconstruct, "reconstruct the unique packing")
    p.add_argument("graph")
    out(p)

    d = groups.add_parser("reduce", help="3-Partition to star reduction").add_subparsers(dest="cmd", required=True)
    p = leaf(d, "3part-to-star", "reduce 3part-to-star", cmd_reduce_build, "build the star instance")
    p.add_argument("--A", type=_ints, required=True)
    p.add_argument("--B", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--mode", choices=[m.value for m in hd.Mode], default="demo")
    out(p, False)
    p = leaf(d, "check-conditions", "reduce check-conditions", cmd_reduce_conditions,
             "verify the inequalities exactly")
    p.add_argument("--B", type=int, required=True)
    p = leaf(d, "report", "reduce report", cmd_reduce_report, "gap count and radii without materializing")
    p.add_argument("--B", type=int, required=True)
    p = leaf(d, "embed", "reduce embed", cmd_reduce_embed, "pack a solved instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--partition", help="JSON list of triples (solved by search if omitted)")
    out(p)

    p = groups.add_parser("validate", parents=[common], help="validate a packing against a graph",
                          epilog=_epilog("validate"), formatter_class=fmt)
    p.add_argument("packing")
    p.add_argument("graph")
    p.set_defaults(func=cmd_validate)
    return root


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except (InputError, GraphError, GeometryError, OracleError, StarInputError,
            RigidityError, hd.ReductionError, cat.NotRealizableError, ValueError) as e:
        print(f"diskpack: error: {e}", file=sys.stderr)
        return USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
