"""Command-line front door.

Course syntax: NxD[@M/day][+jaJ][gapG], e.g. 10x3, 22x1.8@2/day, 30x2+ja4,
1x8gap30.  A bare gapN token attaches to the preceding course, so
"1x8 gap30 1x8" describes two single-fraction courses a month apart.
Exit codes: 0 success, 2 validation error, 3 solver failure.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from pathlib import Path

from . import __version__, reports
from .diagnostics import (
    CourseInvariantError,
    CourseRuleError,
    DvhFormatError,
    SolverError,
    TissueLibraryError,
)
from .schedule import TreatmentCourse
from .solver import SolverConfig
from .tissues import TissueLibrary

TISSUES_ENV = "EQDOSE_TISSUES"

_COURSE_RE = re.compile(
    r"^(?P<n>\d+)x(?P<d>\d+(?:\.\d+)?)"
    r"(?:@(?P<m>\d+)/day)?"
    r"(?:\+ja(?P<ja>\d+))?"
    r"(?:gap(?P<gap>\d+))?$"
)
_GAP_RE = re.compile(r"^gap(?P<gap>\d+)$")


def parse_courses(specs: list[str], interval_hours: float) -> list[TreatmentCourse]:
    """Parse course tokens; raises CourseInvariantError on bad syntax."""
    tokens: list[str] = []
    for spec in specs:
        tokens.extend(spec.split())
    courses: list[TreatmentCourse] = []
    for token in tokens:
        gap_match = _GAP_RE.match(token)
        if gap_match:
            if not courses:
                raise CourseInvariantError(f"gap token {token!r} must follow a course")
            prev = courses[-1]
            courses[-1] = TreatmentCourse(
                n=prev.n, d=prev.d, m_per_day=prev.m_per_day, delta_t=prev.delta_t,
                ja=prev.ja, gap_after=prev.gap_after + int(gap_match.group("gap")),
            )
            continue
        match = _COURSE_RE.match(token)
        if not match:
            raise CourseInvariantError(
                f"cannot parse course {token!r}; expected NxD[@M/day][+jaJ][gapG]"
            )
        m_per_day = int(match.group("m") or 1)
        courses.append(
            TreatmentCourse(
                n=int(match.group("n")),
                d=float(match.group("d")),
                m_per_day=m_per_day,
                delta_t=interval_hours if m_per_day > 1 else None,
                ja=int(match.group("ja") or 0),
                gap_after=int(match.group("gap") or 0),
            )
        )
    if not courses:
        raise CourseInvariantError("at least one course is required")
    return courses


def _solver_config(args) -> SolverConfig:
    return SolverConfig(
        d_ref=args.d_ref,
        tolerance=args.tolerance,
        max_bracket=args.max_bracket,
        reference_week=args.reference_week,
    )


def _load_library(args) -> TissueLibrary:
    path = args.tissues or os.environ.get(TISSUES_ENV)
    if path:
        return TissueLibrary.from_file(path)
    return TissueLibrary.default()


def _emit_json(payload: dict) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _emit_warnings(payload: dict) -> None:
    for w in payload.get("warnings", []):
        print(f"warning[{w['code']}]: {w['message']}")


def _print_bed(payload: dict) -> None:
    b = payload["bed"]
    flag = " (clamped at 0)" if b["clamped"] else ""
    print(f"tissue: {payload['tissue']}")
    print(
        f"BED: {b['total_bed']:.1f} Gy{flag}  "
        f"[geometric {b['geometric_bed']:.1f}, repair surcharge {b['repair_surcharge']:.1f}, "
        f"deficit {b['deficit']:.1f}]"
    )
    print(f"overall time: {payload['timeline']['overall_time']} days")
    _emit_warnings(payload)


def _print_equivalent(payload: dict) -> None:
    print(f"tissue: {payload['tissue']}")
    print(f"EQD at {payload['d_ref']:g} Gy/fraction: {payload['eqd']:.1f} Gy")
    print(f"reference fractions: {payload['n0']:.3f}")
    print(f"plan BED: {payload['bed_target_value']:.1f} Gy  (residual {payload['residual']:.2g} Gy)")
    print(f"overall time: {payload['timeline']['overall_time']} days")
    _emit_warnings(payload)


def _print_table(payload: dict) -> None:
    header = (
        f"{'treatment':28s} {'tissues':28s} {'classic':>8s} {'published':>9s} "
        f"{'delta':>6s}  time-aware (OAR / target)"
    )
    print(header)
    print("-" * len(header))
    for row in payload["rows"]:
        tissues = f"{row['oar']} / {row['target']}"
        if row["lql_engine_oar"] is not None:
            oar_cell = f"{row['lql_engine_oar']:.1f} (published {row['published_lql_oar']:.1f})"
        else:
            oar_cell = f"{row['lql_note_oar']} (published {row['published_lql_oar']:.1f})"
        target_cell = f"{row['lql_note_target']} (published {row['published_lql_target']:.1f})"
        print(
            f"{row['label']:28s} {tissues:28s} {row['classical_engine']:8.1f} "
            f"{row['classical_published']:9.1f} {row['classical_delta']:6.2f}  "
            f"{oar_cell} / {target_cell}"
        )


def _print_dvh(payload: dict) -> None:
    s = payload["summary"]
    print(f"structure: {payload['name']}  ({payload['n_fractions']} fractions)")
    print(f"mean: {s['mean']:.1f} Gy   ({s['per_fraction_mean']:.2f} Gy/fraction)")
    print(f"D5%:  {s['d5']:.1f} Gy   ({s['per_fraction_d5']:.2f} Gy/fraction)")
    print(f"Dmax: {s['dmax']:.1f} Gy   ({s['per_fraction_dmax']:.2f} Gy/fraction)")
    if "points" in payload:
        for p in payload["points"]:
            print(f"{p['dose']!r}\t{p['volume_fraction']!r}")
    _emit_warnings(payload)


def _add_course_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--course", action="append", default=[], metavar="SPEC",
        help="course spec NxD[@M/day][+jaJ][gapG]; repeatable, may contain several tokens",
    )
    parser.add_argument(
        "--interval-hours", type=float, default=6.0,
        help="inter-fraction interval for multi-fraction-per-day courses (default 6)",
    )


def _add_solver_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--d-ref", type=float, default=2.0, help="reference dose per fraction, Gy")
    parser.add_argument("--tolerance", type=float, default=1e-3, help="BED match tolerance, Gy")
    parser.add_argument("--max-bracket", type=float, default=1e4, help="fraction-count ceiling")
    parser.add_argument("--reference-week", type=int, default=5, help="reference fractions per week")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eqdose",
        description="BED and reference-fractionation equivalent dose calculator",
    )
    parser.add_argument("--tissues", metavar="PATH", default=None,
                        help=f"tissue parameter file (default: ${TISSUES_ENV} or the seed library)")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    # The same flags are accepted after the subcommand; SUPPRESS keeps the
    # subparser from clobbering a value given before it.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tissues", metavar="PATH", default=argparse.SUPPRESS)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS)

    sub = parser.add_subparsers(dest="command", required=True, parser_class=argparse.ArgumentParser)

    p_bed = sub.add_parser("bed", parents=[common], help="BED breakdown of a plan against one tissue")
    p_bed.add_argument("--tissue", required=True)
    _add_course_options(p_bed)

    p_equiv = sub.add_parser("equiv", parents=[common], help="equivalent dose at reference fractionation")
    p_equiv.add_argument("--tissue", required=True)
    _add_course_options(p_equiv)
    _add_solver_options(p_equiv)

    for name, help_text in (
        ("ntcp", "complication probability from the equivalent dose"),
        ("risk", "radiation-induced cancer incidence from the equivalent dose"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("--tissue", required=True)
        _add_course_options(p)
        _add_solver_options(p)
        p.add_argument("--eud-2gy", type=float, default=None,
                       help="equivalent dose to use directly instead of solving a plan")

    sub.add_parser("table2", parents=[common], help="recompute the published benchmark comparison table")

    p_dvh = sub.add_parser("dvh-summarize", parents=[common], help="summary doses from a cumulative DVH file")
    p_dvh.add_argument("--dvh", required=True, metavar="PATH")
    p_dvh.add_argument("--fractions", required=True, type=int)
    p_dvh.add_argument("--name", default=None, help="structure name (default: file stem)")
    p_dvh.add_argument("--echo-points", action="store_true",
                       help="echo the parsed points at full precision for audit")

    sub.add_parser("tissues", parents=[common], help="list the loaded tissue library")

    p_serve = sub.add_parser("serve", parents=[common], help="run the JSON HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8821)

    return parser


def _run(args) -> tuple[dict, str]:
    """Dispatch to a report builder; returns (payload, human printer key)."""
    library = _load_library(args)
    if args.command == "bed":
        courses = parse_courses(args.course, args.interval_hours)
        return reports.bed_report(library, args.tissue, courses), "bed"
    if args.command == "equiv":
        courses = parse_courses(args.course, args.interval_hours)
        return reports.equivalent_report(library, args.tissue, courses, _solver_config(args)), "equiv"
    if args.command in ("ntcp", "risk"):
        courses = None
        if args.course:
            courses = parse_courses(args.course, args.interval_hours)
        elif args.eud_2gy is None:
            raise CourseInvariantError("give either --course or --eud-2gy")
        builder = reports.ntcp_report if args.command == "ntcp" else reports.risk_report
        payload = builder(library, args.tissue, courses=courses, eud_2gy=args.eud_2gy,
                          config=_solver_config(args))
        return payload, args.command
    if args.command == "table2":
        return reports.table_report(library), "table2"
    if args.command == "dvh-summarize":
        path = Path(args.dvh)
        name = args.name or path.stem
        return reports.dvh_report(path.read_text(encoding="utf-8"), args.fractions,
                                  name=name, echo_points=args.echo_points), "dvh"
    if args.command == "tissues":
        return reports.tissues_report(library), "tissues"
    raise AssertionError(f"unhandled command {args.command}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "serve":
        import uvicorn

        from .service import create_app

        library = _load_library(args)
        uvicorn.run(create_app(library), host=args.host, port=args.port)
        return 0

    try:
        payload, kind = _run(args)
    except (CourseInvariantError, CourseRuleError, TissueLibraryError,
            DvhFormatError, KeyError, ValueError, FileNotFoundError) as exc:
        message = exc.args[0] if exc.args else str(exc)
        print(f"error: {message}", file=sys.stderr)
        return 2
    except SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3

    if args.json:
        _emit_json(payload)
        return 0

    if kind == "bed":
        _print_bed(payload)
    elif kind == "equiv":
        _print_equivalent(payload)
    elif kind == "ntcp":
        print(f"tissue: {payload['tissue']}")
        print(f"EUD at 2 Gy/fraction: {payload['eud_2gy']:.1f} Gy")
        print(f"NTCP: {payload['ntcp']:.4f}")
        _emit_warnings(payload)
    elif kind == "risk":
        print(f"tissue: {payload['tissue']}")
        print(f"EUD at 2 Gy/fraction: {payload['eud_2gy']:.1f} Gy")
        print(f"induced-cancer incidence: {payload['k_incidence']:.6f}")
        _emit_warnings(payload)
    elif kind == "table2":
        _print_table(payload)
    elif kind == "dvh":
        _print_dvh(payload)
    elif kind == "tissues":
        for t in payload["tissues"]:
            print(f"{t['name']}  [{t['kind']}]")
    return 0


if __name__ == "__main__":
    sys.exit(main())
