"""Report payloads shared by the CLI and the HTTP service.

Keeping both front doors on the same dict builders guarantees they emit
identical numbers for identical requests.
"""

from __future__ import annotations

from dataclasses import asdict

from .bed import bed
from .benchmark_table import compute_comparison
from .dvh import parse_dvh, summarize
from .outcomes import evaluate_outcomes
from .schedule import ScheduleTimeline, TreatmentCourse, resolve_timeline, validate_courses
from .solver import SolverConfig, equivalent_dose
from .tissues import TissueLibrary


def _timeline_payload(timeline: ScheduleTimeline) -> dict:
    return {
        "overall_time": timeline.overall_time,
        "courses": [
            {"first_day": span.first_day, "last_day": span.last_day} for span in timeline.spans
        ],
    }


def _warning_payloads(*groups) -> list[dict]:
    out = []
    for group in groups:
        for w in group:
            out.append({"code": w.code, "message": w.message})
    return out


def _schedule_warnings(courses: list[TreatmentCourse], tissue) -> list:
    return [f.to_warning() for f in validate_courses(courses, tissue) if f.level == "warning"]


def bed_report(library: TissueLibrary, tissue_name: str,
               courses: list[TreatmentCourse]) -> dict:
    tissue = library.get(tissue_name)
    breakdown = bed(courses, tissue)
    timeline = resolve_timeline(courses)
    return {
        "tissue": tissue.name,
        "bed": asdict(breakdown),
        "timeline": _timeline_payload(timeline),
        "warnings": _warning_payloads(_schedule_warnings(courses, tissue)),
    }


def equivalent_report(library: TissueLibrary, tissue_name: str,
                      courses: list[TreatmentCourse],
                      config: SolverConfig) -> dict:
    tissue = library.get(tissue_name)
    result = equivalent_dose(courses, tissue, config)
    timeline = resolve_timeline(courses)
    return {
        "tissue": tissue.name,
        "eqd": result.eqd,
        "n0": result.n0,
        "residual": result.residual,
        "bed_target_value": result.bed_target_value,
        "d_ref": config.d_ref,
        "timeline": _timeline_payload(timeline),
        "warnings": _warning_payloads(result.warnings, _schedule_warnings(courses, tissue)),
    }


def _outcome_report(library: TissueLibrary, tissue_name: str,
                    courses: list[TreatmentCourse] | None,
                    eud_2gy: float | None,
                    config: SolverConfig) -> tuple[dict, float, object]:
    tissue = library.get(tissue_name)
    solver_warnings: tuple = ()
    doses = None
    if courses:
        result = equivalent_dose(courses, tissue, config)
        eud_2gy = result.eqd
        solver_warnings = result.warnings
        doses = [c.d for c in courses]
    if eud_2gy is None:
        raise ValueError("either courses or an equivalent dose must be given")
    estimate = evaluate_outcomes(eud_2gy, tissue, doses)
    base = {
        "tissue": tissue.name,
        "eud_2gy": eud_2gy,
        "warnings": _warning_payloads(
            estimate.validity_warnings,
            solver_warnings,
            _schedule_warnings(courses, tissue) if courses else (),
        ),
    }
    return base, eud_2gy, estimate


def ntcp_report(library: TissueLibrary, tissue_name: str,
                courses: list[TreatmentCourse] | None = None,
                eud_2gy: float | None = None,
                config: SolverConfig = SolverConfig()) -> dict:
    base, _, estimate = _outcome_report(library, tissue_name, courses, eud_2gy, config)
    if estimate.ntcp is None:
        raise ValueError(f"tissue '{tissue_name}' has no td50/slope_m; cannot evaluate NTCP")
    base["ntcp"] = estimate.ntcp
    return base


def risk_report(library: TissueLibrary, tissue_name: str,
                courses: list[TreatmentCourse] | None = None,
                eud_2gy: float | None = None,
                config: SolverConfig = SolverConfig()) -> dict:
    base, _, estimate = _outcome_report(library, tissue_name, courses, eud_2gy, config)
    if estimate.k_incidence is None:
        raise ValueError(
            f"tissue '{tissue_name}' has no p_unsc/alpha_unsc; cannot evaluate cancer incidence"
        )
    base["k_incidence"] = estimate.k_incidence
    return base


def dvh_report(text: str, n_fractions: int, name: str = "structure",
               echo_points: bool = False) -> dict:
    curve = parse_dvh(text, name=name)
    summary = summarize(curve, n_fractions)
    payload = {
        "name": curve.name,
        "n_fractions": n_fractions,
        "summary": asdict(summary),
        "warnings": _warning_payloads(curve.warnings),
    }
    if echo_points:
        payload["points"] = [
            {"dose": d, "volume_fraction": v}
            for d, v in zip(curve.doses, curve.volume_fractions)
        ]
    return payload


def table_report(library: TissueLibrary) -> dict:
    return {"rows": compute_comparison(library)}


def tissues_report(library: TissueLibrary) -> dict:
    return {
        "tissues": [
            {
                "name": t.name,
                "kind": t.kind.value,
                "has_ntcp": t.has_ntcp_fields,
                "has_cancer": t.has_cancer_fields,
            }
            for t in library.tissues
        ]
    }
