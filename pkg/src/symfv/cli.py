"""Command-line front end: classification, synthesis, catalog export, table
verification and residue reports, with JSON output for scripting."""
from __future__ import annotations

import argparse
import json
import sys

from . import catalog
from .certify import all_errata, verify_group_tables
from .classify import in_FG, verify_residue_engine
from .errors import NotAMemberError, SymfvError
from .group import GroupSpec, standard_group
from .synth import synthesize


def _parse_f(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected f0,f2")
    return (int(parts[0]), int(parts[1]))


def _emit(data, pretty):
    if pretty:
        print(json.dumps(data, indent=2))
    else:
        print(json.dumps(data))


def cmd_classify(args):
    spec = GroupSpec.parse(args.group)
    decision = in_FG(spec, args.f)
    out = decision.serialize()
    out["group"] = str(spec)
    out["f"] = list(args.f)
    _emit(out, args.pretty)
    return 0 if decision.member else 1


def cmd_synth(args):
    spec = GroupSpec.parse(args.group)
    try:
        P, trace = synthesize(spec, args.f)
    except NotAMemberError as e:
        _emit({"member": False, "error": str(e)}, args.pretty)
        return 1
    if args.off:
        with open(args.off, "w") as fh:
            fh.write(P.to_off(digits=args.digits))
    if args.trace:
        with open(args.trace, "w") as fh:
            fh.write(trace.to_json())
    out = {"member": True, "f": list(P.f_vector), "vertices": len(P.vertices),
           "facets": len(P.facets), "edges": P.edge_count,
           "trace": trace.serialize()}
    _emit(out, args.pretty)
    return 0


def cmd_catalog(args):
    if args.list:
        _emit({"keys": catalog.list_keys()}, args.pretty)
        return 0
    if not args.build:
        print("catalog: need --list or --build", file=sys.stderr)
        return 2
    name, _, ptext = args.build.partition(":")
    params = tuple(int(p) for p in ptext.split(",")) if ptext else ()
    expect, gspec = catalog.registered_expectation(name, params)
    P = catalog.build(name, params, group=standard_group(gspec))
    if args.off:
        with open(args.off, "w") as fh:
            fh.write(P.to_off(digits=args.digits))
    _emit({"key": args.build, "f": list(P.f_vector), "group": str(gspec),
           "edges": P.edge_count}, args.pretty)
    return 0


def cmd_verify_tables(args):
    sweep = range(3, args.max_param + 1) if args.max_param else None
    reports = verify_group_tables(args.group, params=sweep, jobs=args.jobs)
    passed = all(r.passed for r in reports)
    errata = all_errata(reports)
    if args.report == "json" or not args.pretty:
        _emit({"passed": passed,
               "groups": [r.serialize() for r in reports],
               "errata": errata}, args.pretty)
    else:
        for r in reports:
            status = "ok" if r.passed else "FAILED"
            print(f"{r.spec_text}: {len(r.cells)} cells {status}")
            for c in r.cells:
                mark = "+" if c.passed else "-"
                print(f"  {mark} {c.cell_id()} {c.kind} root={c.root_stated}")
        if errata:
            print("errata:")
            for e in errata:
                print(f"  {e}")
    unresolved = [e for e in errata if e.get("status") == "unresolved"]
    return 0 if passed and not unresolved else 1


def cmd_residues(args):
    spec = GroupSpec.parse(args.group)
    rep = verify_residue_engine(spec)
    out = {"group": str(spec), "modulus": rep.modulus,
           "residues": sorted(list(r) for r in rep.from_orbits),
           "consistent_with_classifier": rep.consistent}
    _emit(out, args.pretty)
    return 0 if rep.consistent else 1


def build_parser():
    ap = argparse.ArgumentParser(prog="symfv",
                                 description="f-vectors of symmetric 3-polytopes: "
                                             "classify, synthesize, verify")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="decide membership of an f-vector in F(G)")
    p.add_argument("--group", required=True, help="C:n | D:d | T | O | I | G:d")
    p.add_argument("--f", required=True, type=_parse_f, help="f0,f2")
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("synth", help="construct a symmetric witness polytope")
    p.add_argument("--group", required=True)
    p.add_argument("--f", required=True, type=_parse_f)
    p.add_argument("--off", help="write the witness as an OFF file")
    p.add_argument("--trace", help="write the construction trace as JSON")
    p.add_argument("--digits", type=int, default=12)
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(fn=cmd_synth)

    p = sub.add_parser("catalog", help="build or list the named seed polytopes")
    p.add_argument("--list", action="store_true")
    p.add_argument("--build", help="NAME or NAME:p1,p2")
    p.add_argument("--off")
    p.add_argument("--digits", type=int, default=12)
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(fn=cmd_catalog)

    p = sub.add_parser("verify-tables", help="verify certificate tables")
    p.add_argument("--group", default="all", help="family or spec, or 'all'")
    p.add_argument("--max-param", type=int, default=0)
    p.add_argument("--report", choices=("json", "pretty"), default="json")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(fn=cmd_verify_tables)

    p = sub.add_parser("residues", help="ray-orbit residue classes of a group")
    p.add_argument("--group", required=True)
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(fn=cmd_residues)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return args.fn(args)
    except SymfvError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
