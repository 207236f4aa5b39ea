"""Command-line interface: ``troproots <subcommand> ...``.

Exit status is 0 on success, 2 on invalid input and 1 when an internal
consistency check fails (the counterexample is printed as JSON).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .abelian import CoefficientGroup, Z
from .cone_complex import build_root_complex
from .enumeration import build_graph_poset, hasse_dot
from .exceptions import ConsistencyError
from .flow_poset import build_flow_poset
from .flows import RamificationSequence
from .graphs import Graph
from .roots import RootInstance, enumerate_roots, verify_root_bijection
from .tropical import TropicalCurve
from .verification import SUITES, run_suites


class UsageError(Exception):
    pass


def parse_ramification(text: str | None, n: int, group: CoefficientGroup = Z) -> RamificationSequence:
    """``"a1,...,an,b"``; an omitted sequence means all zeros."""
    if text is None:
        return RamificationSequence.zero(n, group)
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"ramification must be comma-separated integers, got {text!r}") from None
    if len(values) != n + 1:
        raise UsageError(f"ramification needs {n + 1} entries (a_1..a_{n}, b), got {len(values)}")
    if not group.is_cyclic:
        raise UsageError(f"integer ramification entries need a cyclic group, got {group}")
    return RamificationSequence.from_ints(values, group)


def parse_group(text: str) -> CoefficientGroup:
    try:
        return CoefficientGroup.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def resolve_seed(seed: int) -> int:
    env = os.environ.get("TROPROOTS_SEED")
    if env is None:
        return seed
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"TROPROOTS_SEED must be an integer, got {env!r}") from None


def _emit(args, payload) -> None:
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=2, sort_keys=True)
    if not text.endswith("\n"):
        text += "\n"
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


# ---------------------------------------------------------------------------
# subcommands


def cmd_enumerate_graphs(args) -> int:
    P = build_graph_poset(args.genus, args.legs)
    _emit(args, P.to_dot() if args.format == "dot" else P.to_dict())
    return 0


def cmd_flow_poset(args) -> int:
    group = parse_group(args.group)
    R = parse_ramification(args.ramification, args.legs, group)
    P = build_flow_poset(args.genus, args.legs, group, R)
    _emit(args, P.to_dot() if args.format == "dot" else P.to_dict())
    return 0


def cmd_roots(args) -> int:
    curve = TropicalCurve.from_dict(_read_json(args.curve))
    R = parse_ramification(args.ramification, curve.graph.num_legs)
    inst = RootInstance.from_ramification(curve, R, args.r)
    roots = enumerate_roots(inst)
    out = {"r": args.r, "count": len(roots), "expected": inst.expected_count(),
           "base_divisor": inst.base_divisor.to_dict(), "roots": [rc.to_dict() for rc in roots]}
    status = 0
    if args.verify:
        report = verify_root_bijection(inst, seed=resolve_seed(args.seed))
        out["verification"] = report.to_dict()
        status = 0 if report.passed else 1
    _emit(args, out)
    return status


def cmd_complex(args) -> int:
    group = parse_group(args.group)
    R = parse_ramification(args.ramification, args.legs, group) if group.is_cyclic else None
    cc = build_root_complex(args.genus, args.legs, args.r, R, group)
    _emit(args, cc.to_dot() if args.format == "dot" else cc.to_dict())
    return 0


def cmd_verify(args) -> int:
    group = parse_group(args.group) if args.group else CoefficientGroup(0, (args.r,))
    R = parse_ramification(args.ramification, args.legs)
    suites = SUITES if args.suite == "all" else (args.suite,)
    report = run_suites(suites, args.genus, args.legs, args.r, group,
                        R if args.ramification is not None else None, resolve_seed(args.seed))
    _emit(args, report)
    return 0 if report["passed"] else 1


def json_to_dot(data) -> str:
    """DOT for a graph, graph poset, flow poset or cone complex JSON document."""
    if isinstance(data, dict) and data.get("kind") in ("roots", "moduli"):
        index = data["index"]
        labels = [f"C{c['cell']}: G{c['graph_index']}, dim {c['dimension']}" for c in data["cones"]]
        return hasse_dot(labels, [c["dimension"] for c in data["cones"]],
                         [(f["upper"], f["lower"]) for f in data["faces"]], name="ConeComplex")
    if isinstance(data, dict) and "covers" in data and "elements" in data:
        covers = [tuple(c) for c in data["covers"]]
        if "group" in data:
            labels = [f"G{el['graph_index']}: {[v.get('torsion', v.get('free')) for v in el['flow']['values']]}"
                      for el in data["elements"]]
            return hasse_dot(labels, data["ranks"], covers, name="FlowPoset")
        labels = [f"G{i}: |E|={len(el['edges'])}" for i, el in enumerate(data["elements"])]
        return hasse_dot(labels, data["ranks"], covers, name="GraphPoset")
    if isinstance(data, dict) and "vertices" in data:
        return Graph.from_dict(data).to_dot()
    raise UsageError("unrecognized JSON document")


def cmd_export(args) -> int:
    _emit(args, json_to_dot(_read_json(args.input)))
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="troproots",
                                     description="Stable graphs, flow posets and tropical r-th roots.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, genus=True, fmt=True):
        if genus:
            p.add_argument("--genus", "-g", type=int, required=True)
            p.add_argument("--legs", "-n", type=int, default=0)
        if fmt:
            p.add_argument("--format", choices=("json", "dot"), default="json")
        p.add_argument("--output", "-o", help="write to this file instead of stdout")

    p = sub.add_parser("enumerate-graphs", help="stable graphs of genus g with n legs")
    common(p)
    p.set_defaults(func=cmd_enumerate_graphs)

    p = sub.add_parser("flow-poset", help="the poset of flows over a finite group")
    common(p)
    p.add_argument("--group", default="Z/2", help="e.g. Z/2, Z/2 x Z/3")
    p.add_argument("--ramification", help="a1,...,an,b (default all zero)")
    p.set_defaults(func=cmd_flow_poset)

    p = sub.add_parser("roots", help="r-th roots of the ramification divisor on a curve")
    common(p, genus=False, fmt=False)
    p.add_argument("--curve", required=True, help="curve JSON file")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--ramification", help="a1,...,an,b (default all zero)")
    p.add_argument("--verify", action="store_true", help="also run the bijection checks")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("complex", help="the cone complex of tropical r-th roots")
    common(p)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--group", default="Z")
    p.add_argument("--ramification", help="a1,...,an,b (default all zero)")
    p.set_defaults(func=cmd_complex)

    p = sub.add_parser("verify", help="run self-check suites")
    common(p, fmt=False)
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--group", help="coefficient group for the poset suite (default Z/r)")
    p.add_argument("--ramification", help="a1,...,an,b (default all zero)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export", help="convert a JSON document to DOT")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.exit(2, f"troproots: error: {exc}\n")
    except ConsistencyError as exc:
        sys.stdout.write(json.dumps({"error": str(exc), "counterexample": exc.counterexample},
                                    indent=2, sort_keys=True, default=str) + "\n")
        return 1
    except ValueError as exc:
        parser.exit(2, f"troproots: error: {exc}\n")


if __name__ == "__main__":
    sys.exit(main())
