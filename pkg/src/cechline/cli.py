"""Command-line front end.

Every command builds a report ``{"command", "status", "payload"}``; status is
``ok``, ``no-solution`` (a mathematical answer, exit code 0) or ``error``
(exit code 1).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import List, Optional

from .atlas import BUILTINS, AtlasError, builtin_atlas, load_atlas
from .bundles import BundleError, atiyah_obstruction, check_cocycle, load_bundle, trivialization
from .cech import CochainError
from .connections import (ConnectionDataError, RegularityError, curvature, is_integrable,
                          load_connection, pic_group_report, regularity_gauges, solve_connection)
from .parse import ParseError
from .regression import run_suite, suite_passed
from .topology import TopologyError, chern_class, mv_cohomology, supports_topology


class CommandError(Exception):
    pass


def _report(command: str, status: str, payload: dict) -> dict:
    return {"command": command, "status": status, "payload": payload}


def _cochain_json(c) -> List[dict]:
    return [{"chart": k[0], "form": str(c[k])} for k in c.keys()]


def _units_json(u) -> List[dict]:
    return [{"index": list(k), "coeff": _frac(v.coeff), "exponent": list(v.exponent)}
            for k, v in u.values.items()]


def _frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


# handlers ------------------------------------------------------------------------

def cmd_atlas(args) -> dict:
    if args.action == "list":
        return _report("atlas list", "ok", {"atlases": sorted(BUILTINS)})
    atlas = load_atlas(args.target)
    payload = atlas.to_json()
    payload["charts_count"] = len(atlas.charts)
    payload["pairs"] = [list(p) for p in atlas.pairs]
    payload["triples"] = [list(t) for t in atlas.triples]
    if supports_topology(atlas):
        payload["cohomology"] = mv_cohomology(atlas).to_json()
    return _report("atlas show", "ok", payload)


def cmd_bundle(args) -> dict:
    L = load_bundle(args.file)
    name = f"bundle {args.action}"
    if args.action == "check":
        return _report(name, "ok", {"cocycle": check_cocycle(L)})
    if not check_cocycle(L):
        raise CommandError("transition data violate the cocycle rule")
    if args.action == "chern":
        return _report(name, "ok", chern_class(L).to_json())
    if args.action == "trivial":
        u = trivialization(L)
        if u is None:
            return _report(name, "no-solution", {"trivial": False})
        return _report(name, "ok", {"trivial": True, "witness": _units_json(u)})
    rep = atiyah_obstruction(L)
    if rep.vanishes:
        return _report(name, "ok", {"vanishes": True, "witness": _cochain_json(rep.witness)})
    return _report(name, "no-solution", {"vanishes": False, "certificate": rep.certificate.to_json()})


def cmd_conn(args) -> dict:
    if args.action == "solve":
        if not args.bundle:
            raise CommandError("conn solve needs --bundle")
        L = load_bundle(args.bundle)
        if not check_cocycle(L):
            raise CommandError("transition data violate the cocycle rule")
        res = solve_connection(L, args.kind)
        name = "conn solve"
        if not res.exists:
            return _report(name, "no-solution", {"kind": res.kind, "certificate": res.certificate})
        return _report(name, "ok", {"kind": res.kind, "forms": _cochain_json(res.connection.forms),
                                    "curvature": str(curvature(res.connection).form)})
    if not args.file:
        raise CommandError(f"conn {args.action} needs a connection file")
    c = load_connection(args.file)
    name = f"conn {args.action}"
    if args.action == "curvature":
        R = curvature(c)
        return _report(name, "ok", {"curvature": str(R.form), "is_zero": R.is_zero})
    if args.action == "check-integrable":
        return _report(name, "ok", {"integrable": is_integrable(c)})
    gauges = regularity_gauges(c)
    payload = {"regular": gauges is not None}
    if gauges is not None:
        payload["sections"] = [{"compactification_chart": v, "chart": i, "gauge_exponent": list(x)}
                               for v, (x, i) in sorted(gauges.items())]
    return _report(name, "ok", payload)


def cmd_picard(args) -> dict:
    atlas = builtin_atlas(args.atlas) if args.atlas in BUILTINS else load_atlas(args.atlas)
    return _report("picard report", "ok", pic_group_report(atlas, args.degree_bound))


def cmd_paper_examples(args) -> dict:
    rows = run_suite(mutate_curvature=args.mutate_curvature)
    passed = suite_passed(rows)
    return _report("paper-examples", "ok" if passed else "error",
                   {"passed": passed, "rows": rows,
                    "failures": [r["id"] for r in rows if not r["pass"]]})


# rendering -------------------------------------------------------------------------

def render_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2)


def render_human(report: dict) -> str:
    lines = [f"{report['command']}: {report['status']}"]
    payload = report["payload"]
    if "rows" in payload:
        width = max(len(r["id"]) for r in payload["rows"])
        for r in payload["rows"]:
            mark = "PASS" if r["pass"] else "FAIL"
            lines.append(f"  {mark}  {r['id']:<{width}}  {r['check']}")
        lines.append(f"  {sum(r['pass'] for r in payload['rows'])}/{len(payload['rows'])} rows pass")
        return "\n".join(lines)
    for key in sorted(payload):
        val = payload[key]
        if isinstance(val, (list, dict)):
            val = json.dumps(val, sort_keys=True)
        lines.append(f"  {key}: {val}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")

    parser = argparse.ArgumentParser(prog="cechline", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("atlas", parents=[common], help="list or show atlases")
    p.add_argument("action", choices=["list", "show"])
    p.add_argument("target", nargs="?", help="built-in name or atlas JSON file")
    p.set_defaults(func=cmd_atlas)

    p = sub.add_parser("bundle", parents=[common], help="line bundle queries")
    p.add_argument("action", choices=["check", "chern", "trivial", "obstruction"])
    p.add_argument("file", nargs="?")
    p.add_argument("--bundle", dest="bundle_opt")
    p.set_defaults(func=cmd_bundle)

    p = sub.add_parser("conn", parents=[common], help="connections")
    p.add_argument("action", choices=["solve", "curvature", "check-regular", "check-integrable"])
    p.add_argument("file", nargs="?")
    p.add_argument("--bundle")
    p.add_argument("--kind", default="any", choices=["any", "integrable", "regular-integrable"])
    p.set_defaults(func=cmd_conn)

    p = sub.add_parser("picard", parents=[common], help="Picard group reports")
    p.add_argument("action", choices=["report"])
    p.add_argument("--atlas", required=True)
    p.add_argument("--degree-bound", type=int, default=3)
    p.set_defaults(func=cmd_picard)

    p = sub.add_parser("paper-examples", parents=[common], help="run the regression suite")
    p.add_argument("--mutate-curvature", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_paper_examples)
    return parser


ERRORS = (AtlasError, BundleError, CochainError, ConnectionDataError, RegularityError, ParseError,
          TopologyError, CommandError, OSError, json.JSONDecodeError, KeyError)


def run(argv: Optional[List[str]] = None) -> tuple:
    """Execute a command; returns ``(report, exit_code, parsed_args)``."""
    args = build_parser().parse_args(argv)
    if args.verb == "bundle":
        args.file = args.file or args.bundle_opt
        if not args.file:
            rep = _report(f"bundle {args.action}", "error", {"message": "missing bundle file"})
            return rep, 1, args
    if args.verb == "atlas" and args.action == "show" and not args.target:
        return _report("atlas show", "error", {"message": "missing atlas name or file"}), 1, args
    try:
        rep = args.func(args)
    except ERRORS as exc:
        name = args.verb if not hasattr(args, "action") else f"{args.verb} {args.action}"
        rep = _report(name, "error", {"message": str(exc)})
    return rep, (1 if rep["status"] == "error" else 0), args


def main(argv: Optional[List[str]] = None) -> int:
    rep, code, args = run(argv)
    print(render_json(rep) if args.json else render_human(rep))
    return code


if __name__ == "__main__":
    sys.exit(main())
