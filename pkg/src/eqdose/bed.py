"""Dose-response arithmetic: BED formulas, repair surcharge, time deficits.

A course contributes a geometric BED term chosen by its dose per fraction:
at or below the tissue's linear threshold d_t the quadratic survival model
applies (with the multi-fraction repair surcharge H_m), above it the
survival curve is linear and only one fraction per day is allowed.  The
time-dependent deficit (tumor repopulation or organ recovery) is charged
once over the whole timeline, never per course.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .diagnostics import CourseRuleError
from .schedule import TreatmentCourse, resolve_timeline, validate_courses
from .tissues import TissueKind, TissueParams, default_gamma_over_alpha


def classic_eqd(n: float, d: float, alpha_beta: float, d_ref: float = 2.0) -> float:
    """Closed-form equivalent total dose at d_ref Gy per fraction.

    Valid only when both schedules sit in the quadratic regime with no
    time effects: n*d*(d + alpha/beta) / (d_ref + alpha/beta).
    """
    if not (n > 0 and d > 0 and alpha_beta > 0 and d_ref > 0):
        raise ValueError("classic_eqd requires positive n, d, alpha_beta and d_ref")
    return n * d * (d + alpha_beta) / (d_ref + alpha_beta)


def nsd_tolerance(nsd_const: float, n_fractions: float, t_days: float,
                  exp_n: float, exp_t: float) -> float:
    """Legacy power-law tolerance dose: nsd_const * N**exp_n * T**exp_t."""
    if not (nsd_const > 0 and n_fractions > 0 and t_days > 0):
        raise ValueError("nsd_tolerance requires positive constant, fraction count and time")
    return nsd_const * n_fractions**exp_n * t_days**exp_t


def incomplete_repair_factor(m_per_day: int, mu: float, delta_t: float | None = None) -> float:
    """Unrepaired-damage surcharge H_m for m_per_day fractions delta_t hours apart.

    H_m = (2/m) * (phi/(1-phi)) * (m - (1-phi^m)/(1-phi)) with phi = exp(-mu*delta_t),
    evaluated as the equivalent cancellation-free sum
    (2/m) * phi * sum_{k=1}^{m-1} (1 + phi + ... + phi^(k-1)).
    """
    if m_per_day < 1:
        raise ValueError("m_per_day must be >= 1")
    if m_per_day == 1:
        return 0.0
    if not mu > 0 or delta_t is None or not delta_t > 0:
        raise ValueError("incomplete_repair_factor requires mu > 0 and delta_t > 0")
    phi = math.exp(-mu * delta_t)
    if phi >= 1.0:
        raise ValueError("no repair between fractions")
    geometric = 0.0
    acc = 0.0
    for _ in range(m_per_day - 1):
        geometric = 1.0 + phi * geometric
        acc += geometric
    return (2.0 / m_per_day) * phi * acc


def repopulation_deficit(t_days: float, tissue: TissueParams) -> float:
    """Tumor repopulation loss ln(2)/(alpha*T_pot) Gy/day past the kick-off time.

    Zero at or before kick-off: a treatment ending exactly at t_k loses nothing.
    """
    if tissue.kind is not TissueKind.TARGET:
        raise ValueError(f"repopulation applies to targets, not '{tissue.name}'")
    if tissue.t_pot is None or tissue.t_k is None:
        raise ValueError(f"tissue '{tissue.name}' is missing t_pot or t_k")
    if t_days <= tissue.t_k:
        return 0.0
    rate = math.log(2.0) / (tissue.alpha * tissue.t_pot)
    return rate * (t_days - tissue.t_k)


def recovery_deficit(t_days: float, tissue: TissueParams) -> float:
    """Organ-at-risk recovered dose d_rec * T over the whole treatment time."""
    if tissue.kind is not TissueKind.OAR:
        raise ValueError(f"recovery applies to organs at risk, not '{tissue.name}'")
    if tissue.d_rec is None:
        raise ValueError(f"tissue '{tissue.name}' is missing d_rec")
    return tissue.d_rec * t_days


def gap_penalty(t_stop: float, d_prol: float) -> float:
    """Dose recovered over t_stop days off treatment at d_prol Gy/day."""
    if t_stop < 0 or d_prol < 0:
        raise ValueError("gap_penalty requires t_stop >= 0 and d_prol >= 0")
    return t_stop * d_prol


@dataclass(frozen=True)
class BedBreakdown:
    """BED with its additive pieces itemized.

    repair_surcharge is already included in geometric_bed; total_bed is
    geometric_bed - deficit clamped at zero, with clamped set when the
    clamp was active.
    """

    geometric_bed: float
    repair_surcharge: float
    deficit: float
    total_bed: float
    clamped: bool


def course_geometric_terms(course: TreatmentCourse, tissue: TissueParams) -> tuple[float, float]:
    """(geometric BED, repair surcharge inside it) for one course.

    Ties at d == d_t go to the quadratic branch; under the tangent default
    slope both branches agree there.
    """
    ab = tissue.alpha_beta
    if course.d > tissue.d_t:
        if course.m_per_day != 1:
            raise CourseRuleError(
                validate_courses([course], tissue)
            )
        ga = tissue.gamma_over_alpha
        if ga is None:
            ga = default_gamma_over_alpha(tissue)
        shoulder = tissue.d_t * (1.0 + tissue.d_t / ab)
        return course.n * (shoulder + ga * (course.d - tissue.d_t)), 0.0
    h = incomplete_repair_factor(course.m_per_day, tissue.mu, course.delta_t)
    geometric = course.n * course.d * (1.0 + (1.0 + h) * course.d / ab)
    surcharge = course.n * course.d * h * course.d / ab
    return geometric, surcharge


def bed(courses: list[TreatmentCourse], tissue: TissueParams) -> BedBreakdown:
    """BED of a course sequence against one tissue, deficits charged once."""
    findings = validate_courses(courses, tissue)
    errors = [f for f in findings if f.level == "error"]
    if errors:
        raise CourseRuleError(errors)

    timeline = resolve_timeline(courses)
    geometric = 0.0
    surcharge = 0.0
    for course in courses:
        g, s = course_geometric_terms(course, tissue)
        geometric += g
        surcharge += s

    if tissue.kind is TissueKind.TARGET:
        deficit = repopulation_deficit(timeline.overall_time, tissue)
    else:
        deficit = recovery_deficit(timeline.overall_time, tissue)

    raw = geometric - deficit
    clamped = raw < 0.0
    return BedBreakdown(
        geometric_bed=geometric,
        repair_surcharge=surcharge,
        deficit=deficit,
        total_bed=0.0 if clamped else raw,
        clamped=clamped,
    )
