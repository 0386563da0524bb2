"""``zonocalc`` command line: compute, check, search, repro, list-checks.

Exit codes: 0 holds/equality (or success), 2 violated, 3 inconclusive,
64 bad usage or malformed input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import checks
from . import ellipsoid as ell
from . import numerics as nm
from . import polygon2d
from . import search
from . import serialize as ser
from .numerics import Mode
from .result import EQUALITY, HOLDS, INCONCLUSIVE, VIOLATED, CheckResult
from .zonotope import Parallelotope, Zonotope, mixed_volume, projection_volume, steiner3, surface_area, volume

EXIT_OK = 0
EXIT_VIOLATED = 2
EXIT_INCONCLUSIVE = 3
EXIT_USAGE = 64

COMPUTE_KINDS = ("volume", "projection", "mixed", "surface", "steiner3", "ellipsoid-volume")
CSV_FIELDS = ("trial", "check_id", "verdict", "lhs", "rhs", "margin", "mode", "tolerance", "reason", "seed")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


# --------------------------------------------------------------------------
# input


def _read_input(arg: Optional[str]):
    if arg is None:
        raise UsageError("--input is required")
    text = arg
    if arg == "-":
        text = sys.stdin.read()
    elif not arg.lstrip().startswith(("{", "[")):
        try:
            with open(arg, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {arg}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON: {exc}") from exc


def _mode(args) -> Optional[Mode]:
    if getattr(args, "exact", False):
        return Mode.EXACT
    if getattr(args, "float", False):
        return Mode.FLOAT
    return Mode(args.mode) if getattr(args, "mode", None) else None


def _resolve_mode(raw, forced: Optional[Mode]) -> Mode:
    return forced or ser.detect_mode(ser.raw_scalars(raw))


def _parse_body(obj, mode: Mode):
    kind = obj.get("type", "zonotope") if isinstance(obj, dict) else None
    parsers = {
        "zonotope": ser.parse_zonotope,
        "polygon": ser.parse_polygon,
        "ellipsoid": ser.parse_ellipsoid,
        "parallelotope": ser.parse_parallelotope,
    }
    if kind not in parsers:
        raise ser.InputError(f"unknown body type {kind!r}")
    return parsers[kind](obj, mode)


# --------------------------------------------------------------------------
# output


def _emit(payload, fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        out.write(ser.dumps(payload, indent=2) + "\n")
    elif fmt == "csv":
        rows = payload if isinstance(payload, list) else [payload]
        w = csv.writer(out, lineterminator="\n")
        for row in rows:
            w.writerow([_csv_cell(c) for c in row])
    else:
        out.write(str(payload) + "\n")


def _csv_cell(x) -> str:
    j = ser.to_jsonable(x)
    if isinstance(j, (dict, list)):
        return ser.dumps(j)
    if isinstance(j, float):
        return ser.dumps(j)
    return "" if j is None else str(j)


def _result_row(r: CheckResult, trial=None) -> list:
    d = r.to_dict()
    d["trial"] = trial
    return [d.get(k) for k in CSV_FIELDS]


def _human_result(r: CheckResult) -> str:
    spec = checks.REGISTRY.get(r.check_id)
    anchor = f"  [{spec.anchor}]" if spec else ""
    lines = [
        f"{r.check_id}: {r.verdict}{anchor}",
        f"  lhs    = {ser.dumps(r.lhs)}",
        f"  rhs    = {ser.dumps(r.rhs)}",
        f"  margin = {ser.dumps(r.margin)}  ({r.mode.value}, tolerance {ser.dumps(r.tolerance)})",
    ]
    if r.reason:
        lines.append(f"  reason: {r.reason}")
    return "\n".join(lines)


def _exit_for(verdict: str) -> int:
    return {HOLDS: EXIT_OK, EQUALITY: EXIT_OK, VIOLATED: EXIT_VIOLATED, INCONCLUSIVE: EXIT_INCONCLUSIVE}[verdict]


# --------------------------------------------------------------------------
# subcommands


def cmd_compute(args) -> int:
    raw = _read_input(args.input)
    mode = _resolve_mode(raw, _mode(args))
    kind = args.kind
    if kind == "mixed":
        slots = raw.get("slots") if isinstance(raw, dict) else raw
        if not isinstance(slots, list):
            raise ser.InputError("mixed needs a list of zonotopes (or {'slots': [...]})")
        value = mixed_volume([ser.parse_zonotope(z, mode) for z in slots])
    elif kind == "projection":
        if not isinstance(raw, dict) or "body" not in raw or "basis" not in raw:
            raise ser.InputError("projection needs {'body': ..., 'basis': [...]}")
        body = _parse_body(raw["body"], mode)
        basis = ser.parse_vectors(raw["basis"], mode)
        if isinstance(body, Zonotope):
            value = projection_volume(body, basis)
        elif isinstance(body, ell.EllipsoidL2):
            value = ell.projection_volume(body, basis)
        else:
            raise ser.InputError("projection supports zonotopes and ellipsoids")
    else:
        body = _parse_body(raw, mode)
        if kind == "volume":
            if isinstance(body, polygon2d.ConvexPolygon):
                value = polygon2d.area(body)
            elif isinstance(body, Parallelotope):
                value = volume(body.as_zonotope())
            elif isinstance(body, ell.EllipsoidL2):
                value = ell.volume(body)
            else:
                value = volume(body)
        elif kind == "ellipsoid-volume":
            if not isinstance(body, ell.EllipsoidL2):
                raise ser.InputError("ellipsoid-volume needs an ellipsoid")
            value = ell.volume(body)
        elif kind == "surface":
            if isinstance(body, polygon2d.ConvexPolygon):
                value = polygon2d.perimeter(body)
            elif isinstance(body, Zonotope):
                value = surface_area(body)
            else:
                raise ser.InputError("surface supports zonotopes and polygons")
        else:  # steiner3
            if not isinstance(body, Zonotope):
                raise ser.InputError("steiner3 needs a zonotope in R^3")
            value = list(steiner3(body).coeffs)
    if args.format == "human":
        _emit(ser.dumps(value), "human")
    elif args.format == "csv":
        _emit([value if isinstance(value, list) else [value]], "csv")
    else:
        _emit(value, "json")
    return EXIT_OK


def cmd_check(args) -> int:
    raw = _read_input(args.input)
    if not isinstance(raw, dict):
        raise ser.InputError("check input must be a JSON object")
    spec = checks.get_spec(args.check_id)
    if args.p is not None:
        if "p" not in {p.name for p in spec.params}:
            raise UsageError(f"{args.check_id} takes no exponent")
        raw = {**raw, "p": _number(args.p)}
    result = checks.check_json(args.check_id, raw, _mode(args), seed=args.seed)
    if args.format == "human":
        _emit(_human_result(result), "human")
    elif args.format == "csv":
        _emit([list(CSV_FIELDS), _result_row(result)], "csv")
    else:
        _emit(result.to_dict(), "json")
    return _exit_for(result.verdict)


def _number(text: str):
    try:
        f = Fraction(text)
    except ValueError as exc:
        raise UsageError(f"bad number {text!r}") from exc
    return int(f) if f.denominator == 1 else float(f)


def _gens(text: str) -> tuple[int, int]:
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            return int(a), int(b)
        return int(text), int(text)
    except ValueError as exc:
        raise UsageError(f"--gens expects A..B, got {text!r}") from exc


def cmd_search(args) -> int:
    camp = search.Campaign(
        check_id=args.check_id,
        dim=args.dim,
        gens=_gens(args.gens),
        trials=args.trials,
        seed=args.seed if args.seed is not None else 0,
        distribution=args.distribution,
        mode=_mode(args),
        lattice=args.lattice,
        codim=args.codim,
        epsilon=args.epsilon,
        p=_number(args.p) if args.p is not None else None,
    )
    buf = io.StringIO()
    summary = search.run_campaign(camp, buf, workers=args.workers, timestamps=args.timestamps)
    text = buf.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    if args.format == "csv":
        rows = [list(CSV_FIELDS)]
        for line in text.splitlines():
            rec = json.loads(line)
            if "summary" in rec:
                continue
            rows.append([rec.get(k) for k in CSV_FIELDS])
        _emit(rows, "csv")
    elif args.format == "human":
        s = summary
        lines = [
            f"{camp.check_id}: {s['trials']} trials, seed {camp.seed}",
            f"  holds {s['holds']}  equality {s['equality']}  violated {s['violated']}  inconclusive {s['inconclusive']}",
        ]
        if s["min_margin"] is not None:
            lines.append(f"  min margin {ser.dumps(s['min_margin']['margin'])} at trial {s['min_margin']['trial']}")
        _emit("\n".join(lines), "human")
    else:
        _emit(summary, "json")
    return EXIT_VIOLATED if summary["violated"] else EXIT_OK


def cmd_repro(args) -> int:
    rep = search.repro(args.case_id)
    if args.format == "human":
        lines = [f"{rep.case_id}: {'reproduced' if rep.reproduced else 'NOT reproduced'}", f"  {rep.description}"]
        if rep.result is not None:
            lines.append(_human_result(rep.result))
        for k, v in rep.details.items():
            lines.append(f"  {k}: {ser.dumps(v)}")
        _emit("\n".join(lines), "human")
    elif args.format == "csv":
        rows = [["case_id", "reproduced"] + list(CSV_FIELDS)]
        rows.append([rep.case_id, rep.reproduced] + (_result_row(rep.result) if rep.result else [""] * len(CSV_FIELDS)))
        _emit(rows, "csv")
    else:
        _emit(rep.to_dict(), "json")
    return EXIT_OK if rep.reproduced else EXIT_VIOLATED


def cmd_list_checks(args) -> int:
    specs = checks.list_checks()
    if args.format == "json":
        _emit(
            [
                {
                    "check_id": s.check_id,
                    "anchor": s.anchor,
                    "params": [{"name": p.name, "kind": p.kind, "required": p.required} for p in s.params],
                    "proven": "all dimensions"
                    if s.backed_dims is None
                    else (list(s.backed_dims) if s.backed_dims else "open probe"),
                }
                for s in specs
            ],
            "json",
        )
    elif args.format == "csv":
        _emit([["check_id", "anchor"]] + [[s.check_id, s.anchor] for s in specs], "csv")
    else:
        width = max(len(s.check_id) for s in specs)
        _emit("\n".join(f"{s.check_id:<{width}}  {s.anchor}" for s in specs), "human")
    return EXIT_OK


# --------------------------------------------------------------------------


def _add_common(p, mode=True) -> None:
    p.add_argument("--format", choices=("json", "csv", "human"), default="json")
    if mode:
        g = p.add_mutually_exclusive_group()
        g.add_argument("--mode", choices=("exact", "float"))
        g.add_argument("--exact", action="store_true", help="force exact rational arithmetic")
        g.add_argument("--float", action="store_true", help="force floating point")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="zonocalc", description="Volumes, mixed volumes and inequality checks for convex bodies.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("compute", help="evaluate a geometric quantity")
    p.add_argument("kind", choices=COMPUTE_KINDS)
    p.add_argument("--input", help="JSON file, inline JSON, or - for stdin")
    _add_common(p)
    p.set_defaults(fn=cmd_compute)

    p = sub.add_parser("check", help="run one named inequality check")
    p.add_argument("check_id")
    p.add_argument("--input")
    p.add_argument("--p", help="exponent for the L_p checks")
    p.add_argument("--seed", type=int)
    _add_common(p)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("search", help="seeded random falsification campaign")
    p.add_argument("check_id")
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--gens", default="3..6", help="generator count range A..B")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--distribution", choices=search.DISTRIBUTIONS, default="integer-lattice")
    p.add_argument("--lattice", type=int, default=search.DEFAULT_LATTICE, help="integer range K for lattice entries")
    p.add_argument("--codim", type=int, default=1, help="codimension for the flat distribution")
    p.add_argument("--epsilon", type=float, default=1e-3, help="noise for the near-parallel distribution")
    p.add_argument("--p", help="fixed exponent for the L_p checks")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="write JSONL records and the summary footer here")
    p.add_argument("--timestamps", action="store_true", help="add wall-clock timestamps (breaks byte-identity)")
    _add_common(p)
    p.set_defaults(fn=cmd_search)

    p = sub.add_parser("repro", help="reproduce a built-in counterexample or constant")
    p.add_argument("case_id", choices=sorted(search.REPRO_CASES))
    _add_common(p, mode=False)
    p.set_defaults(fn=cmd_repro)

    p = sub.add_parser("list-checks", help="list check ids")
    _add_common(p, mode=False)
    p.set_defaults(fn=cmd_list_checks)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (UsageError, ser.InputError, nm.ModeError, KeyError, ValueError, TypeError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        print(f"zonocalc: error: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
