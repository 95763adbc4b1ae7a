"""Command line front end.

    cubicsym families [--family NAME]
    cubicsym surface --family Se10
    cubicsym lines --family Se3 --params c=1,e=2,f=9
    cubicsym eckardt --family Se6 --params c=1,e=2
    cubicsym stabilizer --family Se6 --params c=1,e=2 --format json
    cubicsym orbits --family Se4 --params c=2,e=7
    cubicsym e6-stats
    cubicsym verify [--criteria 1,2,5]

Failures print a JSON error object and exit with status 2.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from typing import Sequence

from . import families as fam
from . import lines27 as L27
from .errors import CubicSymError

EXIT_ERROR = 2
EXIT_FAILED = 1


def _surface(args):
    spec = fam.get_family(args.family)
    return fam.family_surface(spec.name, args.params or None)


def _need_family(args):
    if not args.family:
        raise CubicSymError("--family is required for this command", command=args.command)


def cmd_families(args) -> dict:
    if args.family:
        return fam.get_family(args.family).to_dict()
    return {"families": [fam.FAMILIES[n].to_dict() for n in fam.family_names()]}


def cmd_surface(args) -> dict:
    _need_family(args)
    S = _surface(args)
    spec = fam.get_family(args.family)
    ref = fam.reference_form(spec.name)
    return {
        "family": spec.name,
        "params": S.meta["params"],
        "field": None if spec.minpoly is None else spec.field.minpoly_str("w"),
        "values": {k: S.field.format(v) for k, v in S.meta["values"].items()},
        "form": str(S.form),
        "matches_family_equation": fam.matches_reference(spec.name),
        "family_equation": str(ref),
        "eckardt_ids": S.eckardt_ids(),
    }


def cmd_lines(args) -> dict:
    _need_family(args)
    S = _surface(args)
    fmt = S.field.format
    return {
        "family": S.meta["family"],
        "params": S.meta["params"],
        "lines": {L27.LABELS[k]: [fmt(c) for c in line.p] for k, line in S.lines.items()},
        "planes": {str(k): str(p) for k, p in S.tritangent_planes().items()},
    }


def cmd_eckardt(args) -> dict:
    _need_family(args)
    S = _surface(args)
    fmt = S.field.format
    rep = fam.collinearity_report(S)
    return {
        "family": S.meta["family"],
        "params": S.meta["params"],
        "eckardt": [
            {"plane": e.triple_id, "lines": list(L27.triple_labels(e.triple_id)), "point": [fmt(c) for c in e.point.coords]}
            for e in S.eckardt_points()
        ],
        "collinear": [list(g) for g in rep["collinear"]],
        "common_plane": None if rep["plane"] is None else str(rep["plane"]),
    }


def cmd_stabilizer(args) -> dict:
    from .stabilizer import family_stabilizer_report

    _need_family(args)
    return family_stabilizer_report(args.family, args.params or None, jobs=args.jobs)


def cmd_orbits(args) -> dict:
    from .stabilizer import family_stabilizer, line_orbits, orbit_image_order, plane_orbits

    _need_family(args)
    G = family_stabilizer(args.family, args.params or None, jobs=args.jobs)
    planes = plane_orbits(G)
    return {
        "family": fam.get_family(args.family).name,
        "order": G.order,
        "line_orbits": line_orbits(G),
        "plane_orbits": [{"planes": o, "image_order": orbit_image_order(G, o)} for o in planes],
    }


def cmd_e6_stats(args) -> dict:
    arr = L27.e6_array()
    return {
        "lsets": len(L27.enumerate_lsets()),
        "extended": len(L27.enumerate_extended()),
        "group_order": len({row.tobytes() for row in arr}),
        "closed": L27.e6_closure_check(seed=args.seed),
    }


def cmd_verify(args) -> dict:
    from .verify import run_all

    selected = [int(x) for x in args.criteria.split(",")] if args.criteria else None
    echo = None
    if args.format == "text" and not args.out:
        echo = lambda line: print(line, flush=True)  # noqa: E731
    results = run_all(selected, seed=args.seed, jobs=args.jobs, echo=echo)
    doc = {"criteria": [r.to_dict() for r in results], "passed": sum(r.ok for r in results), "total": len(results)}
    doc["_lines"] = [r.line() for r in results]
    return doc


COMMANDS = {
    "families": cmd_families,
    "surface": cmd_surface,
    "lines": cmd_lines,
    "eckardt": cmd_eckardt,
    "stabilizer": cmd_stabilizer,
    "orbits": cmd_orbits,
    "e6-stats": cmd_e6_stats,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cubicsym", description="Lines, Eckardt points and stabilizers of cubic surfaces.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--family", help="family name, e.g. Se6 (Se1p, Se1pp, Se9p for the primed ones)")
    p.add_argument("--params", default="", help="k=v,... over the family's field (generator w)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", help="write the report to this file (atomically)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for candidate filtering")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--criteria", help="verify: comma-separated criterion numbers")
    return p


def _text(doc, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(doc, dict):
        lines = []
        for k, v in doc.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
        return "\n".join(lines)
    if isinstance(doc, list):
        out = []
        for v in doc:
            if isinstance(v, dict) and v:
                body = _text(v, indent + 1)
                out.append(f"{pad}- " + body[len(pad) + 2:])
            elif isinstance(v, list) and not _flat(v):
                out.append(f"{pad}-")
                out.append(_text(v, indent + 1))
            else:
                out.append(f"{pad}- {_scalar(v)}")
        return "\n".join(out)
    return pad + _scalar(doc)


def _flat(v) -> bool:
    if isinstance(v, list):
        return all(not isinstance(x, (dict, list)) or (isinstance(x, list) and _flat(x)) for x in v)
    return False


def _scalar(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if v is None:
        return "-"
    return str(v)


def render(doc: dict, fmt: str) -> str:
    lines = doc.pop("_lines", None)
    if fmt == "json":
        return json.dumps(doc, indent=2, sort_keys=False, default=str) + "\n"
    if lines is not None:
        return "\n".join(lines) + f"\n{doc['passed']}/{doc['total']} criteria passed\n"
    return _text(doc) + "\n"


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".cubicsym-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run(argv: Sequence[str] | None = None) -> tuple[int, str]:
    """Execute one request; returns ``(status, output text)``."""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        doc = COMMANDS[args.command](args)
    except CubicSymError as exc:
        return EXIT_ERROR, json.dumps({"error": exc.to_dict()}, indent=2) + "\n"
    except (KeyError, ValueError, ZeroDivisionError) as exc:
        err = {"type": type(exc).__name__, "message": str(exc).strip("'\"")}
        return EXIT_ERROR, json.dumps({"error": err}, indent=2) + "\n"
    status = 0
    if args.command == "verify" and doc["passed"] != doc["total"]:
        status = EXIT_FAILED
    streamed = args.command == "verify" and args.format == "text" and not args.out
    text = render(doc, args.format)
    if streamed:
        text = text.splitlines(keepends=True)[-1]
    if args.out:
        write_atomic(args.out, text if not streamed else render(doc, args.format))
        return status, ""
    return status, text


def main(argv: Sequence[str] | None = None) -> int:
    status, text = run(argv)
    if text:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
