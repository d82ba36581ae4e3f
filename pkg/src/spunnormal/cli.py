"""Command line front end.

Subcommands:

* ``vertices``: enumerate vertex surfaces (or fundamental surfaces with
  ``--fundamental``), over all quad types or one chosen with ``--quad-type``.
* ``criterion``: run the vertex certificate on one surface.
* ``relative``: run the relative certificate against a set of fillings;
  without ``--surface`` the generator of the relative kernel is used when
  that kernel is one dimensional and nonnegative.
* ``first-order``: build and print the leading-order system along a
  degeneration vector.

Exit codes: 0 success (criterion satisfied where one was checked),
1 usage error, 2 input data error, 3 criterion not met.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from .cones import (
    DEFAULT_CAP,
    EnumerationCapError,
    RelativeConstraint,
    SurfaceVector,
    enumerate_fundamental_surfaces,
    enumerate_vertex_surfaces,
    extreme_rays,
    fundamental_surfaces,
    relative_kernel,
)
from .criteria import (
    CriterionReport,
    boundary_class,
    essential_surface_check,
    filling_slope_check,
    format_slope,
)
from .firstorder import (
    build_first_order,
    emit_system,
    is_trivially_inconsistent,
    monomial_sign_solvable,
)
from .gluing import GluingDataError, GluingSystem, parse_gluing_json
from .linalg import IntMatrix


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _load_system(path: str) -> GluingSystem:
    return parse_gluing_json(Path(path).read_text(encoding="utf-8"))


def _parse_quad_type(text: str, n: int) -> tuple[int, ...]:
    if not re.fullmatch(r"[012]+", text):
        raise UsageError("quad type must be a string over {0,1,2}, got %r" % text)
    if len(text) != n:
        raise UsageError("quad type has %d digits, expected %d" % (len(text), n))
    return tuple(int(ch) for ch in text)


def _parse_int_list(text: str, what: str, n: int) -> tuple[int, ...]:
    try:
        values = tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise UsageError("%s must be comma separated integers, got %r" % (what, text)) from None
    if len(values) != n:
        raise UsageError("%s has %d entries, expected %d" % (what, len(values), n))
    return values


def _parse_fill(token: str) -> RelativeConstraint:
    try:
        cusp_text, slope_text = token.split("=", 1)
        p_text, q_text = slope_text.split("/", 1)
        return RelativeConstraint(int(cusp_text), (int(p_text), int(q_text)))
    except ValueError as exc:
        raise UsageError("bad --fill %r, expected CUSP=P/Q: %s" % (token, exc)) from None


def _emit(obj: dict, fmt: str) -> None:
    """Render one result object: raw JSON, or key/value lines plus any
    prepared table rows."""
    if fmt == "json":
        obj = {k: v for k, v in obj.items() if not k.startswith("_")}
        print(json.dumps(obj, indent=1, ensure_ascii=False))
        return
    for key, value in obj.items():
        if key == "_table":
            print(_render_table(*value))
        elif key == "evidence":
            for ek, ev in value.items():
                print("%s: %s" % (ek, _scalar(ev)))
        elif key not in ("surfaces",):
            print("%s: %s" % (key, _scalar(value)))


def _scalar(value) -> str:
    if value is None:
        return "∅"
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return "yes" if value else "no"
    return json.dumps(value, ensure_ascii=False)


def _render_table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [
        max(len(h), *(len(r[i]) for r in rows)) if rows else len(h)
        for i, h in enumerate(headers)
    ]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
    for row in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines)


def _surface_obj(gs: GluingSystem, s: SurfaceVector) -> dict:
    classes = boundary_class(gs, s)
    return {
        "quad_type": "".join(map(str, s.quad_type)),
        "weights": list(s.weights),
        "boundary_classes": [[c.m, c.l] for c, _ in classes],
        "slopes": [format_slope(sl) for _, sl in classes],
    }


def _report_obj(report: CriterionReport, extra: dict) -> dict:
    out = dict(extra)
    jsonable = report.to_jsonable()
    out["verdict"] = jsonable["verdict"]
    out["failures"] = jsonable["failures"]
    out["evidence"] = jsonable["evidence"]
    return out


def _print_report(report: CriterionReport, extra: dict, fmt: str) -> int:
    obj = _report_obj(report, extra)
    if fmt == "json":
        _emit(obj, fmt)
    else:
        for key, value in extra.items():
            print("%s: %s" % (key, _scalar(value)))
        print("verdict: %s" % report.verdict)
        for failure in report.failures:
            print("failure: %s" % failure)
        for ek, ev in obj["evidence"].items():
            print("%s: %s" % (ek, _scalar(ev)))
    return 0 if report.satisfied else 3


def cmd_vertices(args) -> int:
    gs = _load_system(args.input)
    if args.quad_type is not None:
        qt = _parse_quad_type(args.quad_type, gs.n)
        surfaces = fundamental_surfaces(gs, qt) if args.fundamental else extreme_rays(gs, qt)
    elif args.fundamental:
        surfaces = enumerate_fundamental_surfaces(gs, cap=args.cap)
    else:
        surfaces = enumerate_vertex_surfaces(gs, cap=args.cap)
    rows = [_surface_obj(gs, s) for s in surfaces]
    obj = {
        "name": gs.name,
        "tetrahedra": gs.n,
        "cusps": gs.num_cusps,
        "kind": "fundamental" if args.fundamental else "vertex",
        "count": len(rows),
        "surfaces": rows,
        "_table": (
            ["#", "quad type", "weights", "slopes"],
            [
                [
                    str(i),
                    r["quad_type"],
                    ",".join(map(str, r["weights"])),
                    " ".join(r["slopes"]) if r["slopes"] else "-",
                ]
                for i, r in enumerate(rows)
            ],
        ),
    }
    _emit(obj, args.format)
    return 0


def cmd_criterion(args) -> int:
    gs = _load_system(args.input)
    qt = _parse_quad_type(args.quad_type, gs.n)
    weights = _parse_int_list(args.surface, "--surface", gs.n)
    try:
        s = SurfaceVector(qt, weights)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = essential_surface_check(gs, s)
    extra = {
        "name": gs.name,
        "quad_type": "".join(map(str, qt)),
        "weights": list(weights),
    }
    return _print_report(report, extra, args.format)


def cmd_relative(args) -> int:
    gs = _load_system(args.input)
    qt = _parse_quad_type(args.quad_type, gs.n)
    fillings = [_parse_fill(tok) for tok in args.fill or []]
    covered = sorted(rc.cusp_index for rc in fillings)
    if covered != list(range(1, gs.num_cusps)):
        raise UsageError(
            "fillings must cover every cusp except cusp 0; got %s" % covered
        )
    extra = {
        "name": gs.name,
        "quad_type": "".join(map(str, qt)),
        "fillings": ["%d=%d/%d" % (rc.cusp_index, *rc.filling) for rc in fillings],
    }
    if args.surface is not None:
        weights = _parse_int_list(args.surface, "--surface", gs.n)
    else:
        basis, rank_total = relative_kernel(gs, qt, fillings)
        if len(basis) != 1:
            report = CriterionReport(
                False,
                ("relative kernel has dimension %d, expected 1; give --surface"
                 % len(basis),),
                {"relative_rank": rank_total,
                 "relative_kernel_dimension": len(basis)},
            )
            return _print_report(report, extra, args.format)
        generator = basis[0]
        if all(w <= 0 for w in generator):
            generator = tuple(-w for w in generator)
        if any(w < 0 for w in generator):
            report = CriterionReport(
                False,
                ("relative kernel generator has mixed signs; "
                 "no nonnegative surface on this quad type",),
                {"relative_rank": rank_total, "generator": list(generator)},
            )
            return _print_report(report, extra, args.format)
        weights = generator
    try:
        s = SurfaceVector(qt, weights)
        report = filling_slope_check(gs, s, fillings)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    extra["weights"] = list(weights)
    return _print_report(report, extra, args.format)


def cmd_first_order(args) -> int:
    gs = _load_system(args.input)
    d = _parse_int_list(args.degeneration, "--degeneration", gs.n)
    try:
        fos = build_first_order(gs.edge_rows, d)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    lines = emit_system(fos).splitlines()
    purely_monomial = all(not eq.one_minus for eq in fos.equations)
    solvable = None
    if purely_monomial and fos.equations and fos.variables:
        exponents = IntMatrix.from_rows(
            [[dict(eq.beta).get(i, 0) for i in fos.variables] for eq in fos.equations],
            cols=len(fos.variables),
        )
        solvable = monomial_sign_solvable(exponents, [eq.rhs_sign for eq in fos.equations])
    elif purely_monomial:
        solvable = not is_trivially_inconsistent(fos)
    obj = {
        "name": gs.name,
        "degeneration": list(d),
        "folded_index": fos.folded_index,
        "variables": ["b%d" % (i + 1) for i in fos.variables],
        "equations": lines,
        "trivially_inconsistent": is_trivially_inconsistent(fos),
        "purely_monomial": purely_monomial,
        "sign_solvable": solvable,
    }
    if args.format == "json":
        _emit(obj, "json")
    else:
        print("folded coordinate: b%d" % (fos.folded_index + 1))
        flags = fos.domain_flags()
        if fos.variables:
            print("variables: " + ", ".join(
                "b%d (%s)" % (i + 1, flags[i]) for i in fos.variables))
        print("equations:")
        for line in lines:
            print("  " + line)
        print("trivially inconsistent: %s" % _scalar(obj["trivially_inconsistent"]))
        if solvable is not None:
            print("sign solvable: %s" % _scalar(solvable))
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="spun",
        description="Spun-normal surface enumeration and boundary slope certificates.",
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    def common(p):
        p.add_argument("--input", required=True, metavar="FILE",
                       help="gluing system JSON file")
        p.add_argument("--format", choices=("table", "json"), default="table")

    p = sub.add_parser("vertices", help="enumerate vertex surfaces")
    common(p)
    p.add_argument("--quad-type", metavar="DIGITS",
                   help="restrict to one quad type, e.g. 0120")
    p.add_argument("--fundamental", action="store_true",
                   help="enumerate fundamental surfaces instead")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, metavar="N",
                   help="refuse more than N tetrahedra (default %d)" % DEFAULT_CAP)
    p.set_defaults(func=cmd_vertices)

    p = sub.add_parser("criterion", help="vertex certificate for one surface")
    common(p)
    p.add_argument("--quad-type", required=True, metavar="DIGITS")
    p.add_argument("--surface", required=True, metavar="W1,W2,...",
                   help="quad weights, one per tetrahedron")
    p.set_defaults(func=cmd_criterion)

    p = sub.add_parser("relative", help="filling certificate for a surface")
    common(p)
    p.add_argument("--quad-type", required=True, metavar="DIGITS")
    p.add_argument("--surface", metavar="W1,W2,...",
                   help="quad weights; defaults to the relative kernel generator")
    p.add_argument("--fill", action="append", metavar="CUSP=P/Q",
                   help="filling curve on one cusp, repeatable")
    p.set_defaults(func=cmd_relative)

    p = sub.add_parser("first-order", help="leading-order degeneration system")
    common(p)
    p.add_argument("--degeneration", required=True, metavar="D1,D2,...",
                   help="nonnegative degeneration exponents, one per tetrahedron")
    p.set_defaults(func=cmd_first_order)

    return parser


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except EnumerationCapError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except GluingDataError as exc:
        print("data error: %s" % exc, file=sys.stderr)
        return 2
    except OSError as exc:
        print("data error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
