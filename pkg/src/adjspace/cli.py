"""Command line interface.

Exit codes: 0 on success (a verdict was computed), 1 when the input system
fails validation, 2 on usage errors or unreadable input.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .adjunction import AdjunctionError, GluedSpace
from .analysis import analyze, component_graph_dot, y_dot
from .catalog import BUILDERS, build_named, gluedset_from_json, system_from_json, system_to_json
from .hausdorff import boundary_eq_y_check, hajicek_check, uniqueness_experiment
from .manifold import IllFormedCandidate, PLFunction, pou_check
from .miner import LEMMAS, mine

EXIT_OK, EXIT_INVALID, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


def _load_system(path: str):
    try:
        return system_from_json(_load_json(path))
    except AdjunctionError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _write(path: str, text: str) -> None:
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def _space_or_exit(system, out):
    report = system.validate()
    if not report.ok:
        print("invalid adjunction system", file=out)
        for v in report.violations:
            print(f"  {v.show(system.labels)}", file=out)
        return None
    return GluedSpace(system)


def cmd_validate(args, out) -> int:
    system = _load_system(args.system)
    report = system.validate()
    if report.ok:
        print("valid", file=out)
        return EXIT_OK
    print("invalid", file=out)
    for v in report.violations:
        print(f"  {v.show(system.labels)}", file=out)
    return EXIT_INVALID


def _parse_grid(text: str | None):
    if text is None:
        return None
    try:
        return [Fraction(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"bad grid {text!r}") from None


def cmd_analyze(args, out) -> int:
    system = _load_system(args.system)
    grid = _parse_grid(args.grid) if args.grid else ([] if args.uniqueness else None)
    report = analyze(system, uniqueness_grid=grid)
    for line in report.lines():
        print(line, file=out)
    if args.json:
        _write(args.json, json.dumps(report.to_json(), indent=2) + "\n")
    if not report.valid:
        return EXIT_INVALID
    if args.dot_c:
        _write(args.dot_c, component_graph_dot(system))
    if args.dot_y:
        try:
            _write(args.dot_y, y_dot(system))
        except AdjunctionError as exc:
            print(f"no Y-graph: {exc}", file=out)
    return EXIT_OK


def cmd_hajicek(args, out) -> int:
    system = _load_system(args.system)
    space = _space_or_exit(system, out)
    if space is None:
        return EXIT_INVALID
    try:
        v = gluedset_from_json(space, _load_json(args.subset))
        rep = hajicek_check(space, v)
        data = rep.to_json()
        data["boundary_eq_y"] = boundary_eq_y_check(space, v)
    except AdjunctionError as exc:
        raise UsageError(str(exc)) from None
    print(json.dumps(data, indent=2), file=out)
    return EXIT_OK


def cmd_uniqueness(args, out) -> int:
    system = _load_system(args.system)
    space = _space_or_exit(system, out)
    if space is None:
        return EXIT_INVALID
    grid = _parse_grid(args.grid)
    if grid is not None and not grid:
        raise UsageError("empty grid")
    try:
        found = uniqueness_experiment(space, grid)
    except AdjunctionError as exc:
        raise UsageError(str(exc)) from None
    print(f"{len(found)} set(s) with boundary equal to Y-set", file=out)
    for v in found:
        print(f"  {v}", file=out)
    canon = [i for i in range(space.m) if space.canonical_image(i) in found]
    print("canonical images among them: " + (", ".join(system.labels[i] for i in canon) or "none"), file=out)
    return EXIT_OK


def cmd_pou(args, out) -> int:
    system = _load_system(args.system)
    space = _space_or_exit(system, out)
    if space is None:
        return EXIT_INVALID
    try:
        cover = [gluedset_from_json(space, c) for c in _load_json(args.cover)]
        cand = [PLFunction.from_json(f) for f in _load_json(args.candidate)]
        result = pou_check(space, cover, cand)
    except IllFormedCandidate as exc:
        print(f"ill-formed candidate: {exc}", file=out)
        return EXIT_USAGE
    except (AdjunctionError, ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from None
    if result.accepted:
        print("accept", file=out)
    else:
        member = "" if result.member is None else f" (function {result.member + 1})"
        print(f"reject: {result.axiom}{member} at {result.witness.show(system.labels)}: {result.detail}",
              file=out)
    return EXIT_OK


def cmd_mine(args, out) -> int:
    try:
        result = mine(args.lemma, args.max_points, args.drop_hypothesis)
    except AdjunctionError as exc:
        raise UsageError(str(exc)) from None
    lem = LEMMAS[args.lemma]
    print(f"lemma: {lem.name} ({lem.statement})", file=out)
    if args.drop_hypothesis:
        print(f"dropped hypothesis: {args.drop_hypothesis}", file=out)
    print(f"systems checked: {result.checked}, hypotheses met: {result.applicable}", file=out)
    print(f"counterexamples: {len(result.counterexamples)}", file=out)
    for s in result.counterexamples[:args.show]:
        print("  " + json.dumps(system_to_json(s)), file=out)
    if args.json:
        _write(args.json, json.dumps(result.to_json(), indent=2) + "\n")
    return EXIT_OK


def cmd_catalog(args, out) -> int:
    try:
        system = build_named(args.name, *args.params)
    except (AdjunctionError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    text = json.dumps(system_to_json(system), indent=2) + "\n"
    if args.emit:
        _write(args.emit, text)
        print(f"wrote {args.emit}", file=out)
    else:
        out.write(text)
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="adjspace", description="Adjunction spaces: build, validate, analyze.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check the adjunction-system axioms")
    s.add_argument("system")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("analyze", help="full report for a system")
    s.add_argument("system")
    s.add_argument("--json", help="write the report as JSON")
    s.add_argument("--dot-y", help="write the Y-graph as DOT")
    s.add_argument("--dot-c", help="write the component graph as DOT")
    s.add_argument("--uniqueness", action="store_true", help="run the uniqueness experiment")
    s.add_argument("--grid", help="grid for the uniqueness experiment, e.g. -1,0,1")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("hajicek", help="H-submanifold criterion for a glued set")
    s.add_argument("system")
    s.add_argument("--subset", required=True)
    s.set_defaults(func=cmd_hajicek)

    s = sub.add_parser("uniqueness", help="glued sets on a grid whose boundary equals their Y-set")
    s.add_argument("system")
    s.add_argument("--grid")
    s.set_defaults(func=cmd_uniqueness)

    s = sub.add_parser("pou-check", help="check a candidate partition of unity")
    s.add_argument("system")
    s.add_argument("--cover", required=True)
    s.add_argument("--candidate", required=True)
    s.set_defaults(func=cmd_pou)

    s = sub.add_parser("mine", help="search finite systems for counterexamples")
    s.add_argument("--lemma", required=True, choices=sorted(LEMMAS))
    s.add_argument("--max-points", type=int, default=5)
    s.add_argument("--drop-hypothesis")
    s.add_argument("--json")
    s.add_argument("--show", type=int, default=3, help="counterexamples to print")
    s.set_defaults(func=cmd_mine)

    s = sub.add_parser("catalog", help="emit a named example system")
    s.add_argument("name", choices=sorted(BUILDERS))
    s.add_argument("params", nargs="*")
    s.add_argument("--emit")
    s.set_defaults(func=cmd_catalog)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = make_parser()
    raw = list(sys.argv[1:] if argv is None else argv)
    # let "--grid -1,0,1" through: argparse would read the value as an option
    argv = []
    while raw:
        a = raw.pop(0)
        if a == "--grid" and raw and raw[0].startswith("-"):
            a = f"--grid={raw.pop(0)}"
        argv.append(a)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
