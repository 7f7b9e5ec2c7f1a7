"""Command line interface: validate, verify, curvature, generate, enumerate.

Exit codes: 0 success, 1 property or validation failure, 2 enumeration
ceiling exceeded, 64 usage, 65 parse error.  All output is deterministic
for a given file and flags; ``--report`` switches the human-readable
report for a structured JSON document.
"""

from __future__ import annotations

import argparse
import json
import sys

from .connection import (
    configured_ceiling,
    curvature,
    enumerate_connections,
    find_flat,
)
from .errors import (
    BookkeepingError,
    CeilingExceededError,
    InvalidModelError,
    SchemaError,
)
from .formats import (
    ModelDocument,
    bundle_violations,
    document_kind,
    dump_form,
    dump_model,
    groupoid_violations,
    load_document,
    load_model,
    model_violations,
)
from .forms import gauge_form_to_base
from .groups import cyclic, symmetric
from .neighbourhood import (
    Neighbourhood,
    enumerate_simplices,
    flat_spread,
    full_spread,
    trivial_model,
    twisted_model,
)
from .verify import THEOREM_CHECKS

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CEILING = 2
EXIT_USAGE = 64
EXIT_PARSE = 65


class _Parser(argparse.ArgumentParser):
    """argparse with the scriptable usage exit code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(args, human: str, report: dict) -> None:
    if args.report:
        sys.stdout.write(json.dumps(report, indent=2) + "\n")
    else:
        sys.stdout.write(human)


def _parse_group_name(name: str):
    if len(name) >= 2 and name[0] in "zs" and name[1:].isdigit():
        n = int(name[1:])
        return cyclic(n) if name[0] == "z" else symmetric(n)
    raise SchemaError(f"unknown group {name!r}; use z<n> or s<n>")


def _parse_points(raw: str) -> list[str]:
    points = [p for p in raw.split(",") if p]
    if not points:
        raise SchemaError("at least one point is required")
    return points


def _parse_edges(raw: str | None, points: list[str]) -> Neighbourhood:
    if raw is None:
        return Neighbourhood.codiscrete(points)
    pairs = []
    for chunk in raw.split(","):
        if not chunk:
            continue
        ends = chunk.split("-")
        if len(ends) != 2:
            raise SchemaError(f"bad edge {chunk!r}; use a-b")
        pairs.append((ends[0], ends[1]))
    try:
        return Neighbourhood(points, pairs)
    except ValueError as exc:
        raise SchemaError(str(exc)) from None


def cmd_validate(args) -> int:
    doc = load_document(args.path)
    kind = document_kind(doc)
    checker = {
        "groupoid": groupoid_violations,
        "model": model_violations,
        "bundle": bundle_violations,
    }[kind]
    violations = checker(doc)
    ok = not violations
    lines = [f"{args.path}: {kind} {'valid' if ok else 'INVALID'}\n"]
    for v in violations:
        lines.append(f"  {v.rule}: {v.message} [{', '.join(v.witnesses)}]\n")
    _emit(args, "".join(lines), {
        "command": "validate",
        "path": args.path,
        "kind": kind,
        "ok": ok,
        "violations": [v.as_record() for v in violations],
    })
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(args) -> int:
    mdoc = load_model(args.path)
    checker = THEOREM_CHECKS[args.theorem]
    report = checker(mdoc.model)
    failures = report.failures()
    lines = [
        f"{args.path}: {args.theorem} ({report.check}): "
        f"{'ok' if report.ok else 'FAILED'} "
        f"({len(report.records)} instances, {len(failures)} failures)\n"
    ]
    for rec in report.records:
        if not rec.get("ok", True):
            lines.append(f"  failed: {json.dumps(rec, sort_keys=True)}\n")
        elif "witness" in rec:
            lines.append(f"  witness: {json.dumps(rec['witness'], sort_keys=True)}\n")
    _emit(args, "".join(lines), {
        "command": "verify",
        "path": args.path,
        "theorem": args.theorem,
        **report.as_dict(),
    })
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_curvature(args) -> int:
    mdoc = load_model(args.path)
    if args.connection not in mdoc.connections:
        known = ", ".join(sorted(mdoc.connections)) or "none"
        sys.stderr.write(
            f"{args.path}: no connection named {args.connection!r} (available: {known})\n")
        return EXIT_USAGE
    bn = mdoc.model
    holonomy = curvature(bn, mdoc.connections[args.connection])
    if args.format == "file":
        out = dump_form(holonomy)
        _write_output(args, out)
        return EXIT_OK
    commutative = bn.bundle.group.is_commutative
    collapsed = gauge_form_to_base(bn, holonomy) if commutative else None
    lines = []
    for row, (simplex, arrow) in enumerate(holonomy.items()):
        line = f"{' '.join(simplex)}  ->  [{arrow.num} / {arrow.den}]"
        if collapsed is not None:
            line += f"  =  {bn.bundle.group.elements[collapsed.values[row]]}"
        lines.append(line + "\n")
    human = "".join(lines)
    records = []
    for row, (simplex, arrow) in enumerate(holonomy.items()):
        rec = {"simplex": list(simplex), "arrow": [arrow.num, arrow.den]}
        if collapsed is not None:
            rec["value"] = bn.bundle.group.elements[collapsed.values[row]]
        records.append(rec)
    if args.report:
        _write_output(args, json.dumps({
            "command": "curvature",
            "path": args.path,
            "connection": args.connection,
            "rows": records,
        }, indent=2) + "\n")
    else:
        _write_output(args, human)
    return EXIT_OK


def _write_output(args, text: str) -> None:
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_generate(args) -> int:
    points = _parse_points(args.points)
    group = _parse_group_name(args.group)
    base = _parse_edges(args.edges, points)
    violations = []
    if args.model == "trivial":
        bn = trivial_model(base, group, max_lift=args.max_lift)
    else:
        if args.twist == "unit":
            spread = flat_spread(base, group)
        elif args.twist == "full":
            spread = full_spread(base, group)
        else:
            spread = _load_spread(args.twist, base, group)
        bn, violations = twisted_model(base, group, spread, max_lift=args.max_lift)
    text = dump_model(ModelDocument(bn))
    _write_output(args, text)
    for v in violations:
        sys.stderr.write(f"invalid model: {v.rule}: {v.message}\n")
    return EXIT_FAIL if violations else EXIT_OK


def _load_spread(path: str, base: Neighbourhood, group):
    """A twist document: per-edge shift sets, symmetrised, unit diagonal.

    Schema: {"pairs": [{"edge": [a, b], "set": [g, ...]}, ...]}; the
    reverse orientation and the diagonal are filled in automatically.
    """
    doc = load_document(path)
    if set(doc) != {"pairs"} or not isinstance(doc["pairs"], list):
        raise SchemaError(f"{path}: twist document needs exactly the field 'pairs'")
    spread = {(a, a): {group.unit} for a in base.carrier}
    for i, rec in enumerate(doc["pairs"]):
        if (not isinstance(rec, dict) or set(rec) != {"edge", "set"}
                or not isinstance(rec["edge"], list) or len(rec["edge"]) != 2):
            raise SchemaError(f"{path}: pairs[{i}] needs fields edge and set")
        a, b = rec["edge"]
        elems = rec["set"]
        if not isinstance(elems, list) or not elems:
            raise SchemaError(f"{path}: pairs[{i}].set must be a nonempty list")
        spread[(a, b)] = set(elems)
        spread[(b, a)] = {group.inv(g) for g in elems}
    return {k: tuple(sorted(v)) for k, v in spread.items()}


def cmd_enumerate(args) -> int:
    mdoc = load_model(args.path)
    bn = mdoc.model
    ceiling = args.ceiling if args.ceiling is not None else configured_ceiling()
    if args.what == "simplices":
        nbhd = bn.base_nbhd if args.space == "base" else bn.total_nbhd
        simplices = enumerate_simplices(nbhd, args.degree)
        human = "".join(" ".join(s) + "\n" for s in simplices)
        _emit(args, f"{len(simplices)} simplices\n" + human, {
            "command": "enumerate", "path": args.path, "what": "simplices",
            "space": args.space, "degree": args.degree,
            "count": len(simplices), "simplices": [list(s) for s in simplices],
        })
        return EXIT_OK
    conns = (enumerate_connections(bn, ceiling) if args.what == "connections"
             else find_flat(bn, ceiling))
    lines = [f"{len(conns)} connections\n"]
    records = []
    for conn in conns:
        parts = [f"{a}-{c}: {arrow.num}/{arrow.den}" for (a, c), arrow in conn.items()]
        lines.append("; ".join(parts) + "\n")
        records.append([
            {"edge": [a, c], "arrow": [arrow.num, arrow.den]}
            for (a, c), arrow in conn.items()
        ])
    _emit(args, "".join(lines), {
        "command": "enumerate", "path": args.path, "what": args.what,
        "count": len(conns), "connections": records,
    })
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="finitegauge",
                     description="Finite-model gauge calculus: validate models, "
                                 "verify the library's identities, and compute curvature.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="run every validator on a document")
    p.add_argument("path")
    p.add_argument("--report", action="store_true", help="emit a JSON report")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("verify", help="verify one of the library's identities on a model")
    p.add_argument("path")
    p.add_argument("--theorem", required=True, choices=sorted(THEOREM_CHECKS))
    p.add_argument("--report", action="store_true", help="emit a JSON report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("curvature", help="holonomy table of a named connection")
    p.add_argument("path")
    p.add_argument("--connection", required=True)
    p.add_argument("--format", choices=("table", "file"), default="table")
    p.add_argument("--report", action="store_true", help="emit a JSON report")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_curvature)

    p = sub.add_parser("generate", help="write a stock model document")
    p.add_argument("--model", required=True, choices=("trivial", "twisted"))
    p.add_argument("--points", required=True, help="comma-separated base points")
    p.add_argument("--group", required=True, help="z<n> or s<n>")
    p.add_argument("--edges", help="comma-separated base edges a-b (default: all)")
    p.add_argument("--twist", default="unit",
                   help="unit, full, or a twist document path (twisted only)")
    p.add_argument("--max-lift", type=int, default=2)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("enumerate", help="list simplices or connections of a model")
    p.add_argument("path")
    p.add_argument("--what", required=True, choices=("simplices", "connections", "flat"))
    p.add_argument("--degree", type=int, default=1)
    p.add_argument("--space", choices=("base", "total"), default="base")
    p.add_argument("--ceiling", type=int)
    p.add_argument("--report", action="store_true", help="emit a JSON report")
    p.set_defaults(func=cmd_enumerate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except InvalidModelError as exc:
        sys.stderr.write(f"invalid model: {exc}\n")
        for v in exc.violations:
            sys.stderr.write(f"  {v.rule}: {v.message}\n")
        return EXIT_FAIL
    except CeilingExceededError as exc:
        sys.stderr.write(f"refused: {exc}\n")
        return EXIT_CEILING
    except BookkeepingError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
