"""Command line front end.

Exit codes: 0 success, 1 validation or verification failure (error JSON on
stderr), 2 malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys

from .abgroup import AbGroup
from .blocktri import BlockProfile, restrict_grading
from .classify import (BudgetExceeded, UTminusParams, build, enumerate_classes, iso_decide,
                       iso_utminus, params_from_json, params_to_json, validate)
from .gradedmat import GradedAlgebra, verify_grading
from .oracle import graded_invariants, refute_or_confirm


class MalformedInput(Exception):
    pass


class Failure(Exception):
    pass


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=1, separators=(",", ": ")) + "\n"


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedInput(f"cannot read {path}: {exc}") from exc


def _parse(fn, *args):
    try:
        return fn(*args)
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise MalformedInput(f"{type(exc).__name__}: {exc}") from exc


def _write(obj, out):
    text = dumps(obj)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_params(path, group):
    data = _read_json(path)
    G = _parse(AbGroup.parse, group) if group else None
    return _parse(params_from_json, data, G)


def _profile(text):
    return _parse(BlockProfile.parse, text)


def cmd_build(args):
    params = _load_params(args.params, args.group)
    profile = _profile(args.blocks)
    case = "lie" if isinstance(params, UTminusParams) else args.case
    rep = validate(params, profile, case)
    if not rep.ok:
        raise Failure({"error": "validation", "details": rep.errors})
    A = build(params, profile, case)
    _write(A.to_json(), args.out)
    return 0


def cmd_verify(args):
    A = _parse(GradedAlgebra.from_json, _read_json(args.grading))
    rep = verify_grading(A)
    sys.stdout.write(dumps(rep.to_json()))
    return 0 if rep.ok else 1


def cmd_iso(args):
    profile = _profile(args.blocks)
    p1 = _load_params(args.left, args.group)
    p2 = _load_params(args.right, args.group)
    if isinstance(p1, UTminusParams) != isinstance(p2, UTminusParams):
        raise MalformedInput("both or neither parameter files must carry deg_identity")
    if isinstance(p1, UTminusParams):
        for p in (p1, p2):
            rep = validate(p, profile, "lie")
            if not rep.ok:
                raise Failure({"error": "validation", "details": rep.errors})
        _write({"isomorphic": iso_utminus(p1, p2, profile), "carrier": "ut_minus"}, None)
        return 0
    for p in (p1, p2):
        rep = validate(p, profile, args.case)
        if not rep.ok:
            raise Failure({"error": "validation", "details": rep.errors})
    verdict = iso_decide(p1, p2, profile, args.case)
    out = verdict.to_json()
    if not args.no_oracle:
        out["oracle"] = refute_or_confirm(p1, p2, profile, args.case).to_json()
    _write(out, None)
    return 0


def cmd_enumerate(args):
    G = _parse(AbGroup.parse, args.group)
    profile = _profile(args.blocks)
    if not G.is_finite:
        raise MalformedInput("enumeration needs a finite group")
    try:
        classes = enumerate_classes(G, profile, args.case, args.budget)
    except BudgetExceeded as exc:
        raise Failure({"error": "budget", "details": str(exc)}) from exc
    out = {"group": str(G), "blocks": list(profile.sizes), "case": args.case,
           "count": len(classes), "classes": [params_to_json(p) for p in classes]}
    if args.out:
        _write(out, args.out)
    print(len(classes))
    return 0


def cmd_invariants(args):
    A = _parse(GradedAlgebra.from_json, _read_json(args.grading))
    _write(graded_invariants(A).to_json(), None)
    return 0


def cmd_restrict(args):
    A = _parse(GradedAlgebra.from_json, _read_json(args.grading))
    profile = _profile(args.blocks) if args.blocks else BlockProfile(A.blocks or (A.n,))
    try:
        B = restrict_grading(A, args.carrier, profile, kind=args.kind or A.kind)
    except ValueError as exc:
        raise Failure({"error": "restriction", "details": str(exc)}) from exc
    _write(B.to_json(), args.out)
    return 0


def make_parser():
    ap = argparse.ArgumentParser(prog="gradedbloc", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    cases = ["assoc", "lie", "jordan"]

    b = sub.add_parser("build", help="build a grading from a parameter file")
    b.add_argument("--params", required=True)
    b.add_argument("--blocks", required=True)
    b.add_argument("--case", choices=cases, required=True)
    b.add_argument("--group", help="group string when the params file has none")
    b.add_argument("--out")
    b.set_defaults(fn=cmd_build)

    v = sub.add_parser("verify", help="check the grading axiom for a grading file")
    v.add_argument("grading")
    v.set_defaults(fn=cmd_verify)

    i = sub.add_parser("iso", help="decide isomorphism of two parameter sets")
    i.add_argument("--left", required=True)
    i.add_argument("--right", required=True)
    i.add_argument("--blocks", required=True)
    i.add_argument("--case", choices=cases, required=True)
    i.add_argument("--group")
    i.add_argument("--no-oracle", action="store_true", help="skip witness/invariant evidence")
    i.set_defaults(fn=cmd_iso)

    e = sub.add_parser("enumerate", help="list isomorphism classes for a finite group")
    e.add_argument("--group", required=True)
    e.add_argument("--blocks", required=True)
    e.add_argument("--case", choices=cases, required=True)
    e.add_argument("--budget", type=int)
    e.add_argument("--out")
    e.set_defaults(fn=cmd_enumerate)

    n = sub.add_parser("invariants", help="print graded invariants of a grading file")
    n.add_argument("grading")
    n.set_defaults(fn=cmd_invariants)

    r = sub.add_parser("restrict", help="restrict an admissible Z x G grading on M_n")
    r.add_argument("--grading", required=True)
    r.add_argument("--carrier", choices=["ut", "ut0", "mn", "sln"], required=True)
    r.add_argument("--blocks")
    r.add_argument("--kind", choices=cases)
    r.add_argument("--out")
    r.set_defaults(fn=cmd_restrict)
    return ap


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.fn(args)
    except MalformedInput as exc:
        sys.stderr.write(dumps({"error": "malformed_input", "details": str(exc)}))
        return 2
    except Failure as exc:
        sys.stderr.write(dumps(exc.args[0]))
        return 1


run = main


if __name__ == "__main__":
    sys.exit(main())
