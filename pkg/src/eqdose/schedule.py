"""Treatment-course calendars: weekday timeline arithmetic and rule checks.

Day 1 is always a Monday and treatment happens on weekdays only.  Overall
time is the day index of the final fraction, so a single-fraction course
has an overall time of 1 day.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .diagnostics import CourseInvariantError, Finding
from .tissues import TissueParams

# Planning rules: a second daily fraction needs at least this repair interval
# (the boundary itself is accepted), and interruptions beyond the cap leave
# the model's validity range.
MIN_INTERVAL_HOURS = 6.0
MAX_INTERRUPTION_DAYS = 20
LONG_GAP_DAYS = 60


@dataclass(frozen=True)
class TreatmentCourse:
    """One fractionation prescription.

    n fractions of d Gy, m_per_day fractions per treatment day separated by
    delta_t hours, ja skipped weekdays inside the course, and gap_after
    calendar days before the next course starts.
    """

    n: int
    d: float
    m_per_day: int = 1
    delta_t: float | None = None
    ja: int = 0
    gap_after: int = 0

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise CourseInvariantError("fraction count must be an integer >= 1")
        if not self.d > 0:
            raise CourseInvariantError("dose per fraction must be > 0")
        if self.m_per_day not in (1, 2, 3):
            raise CourseInvariantError("fractions per day must be 1, 2 or 3")
        if self.m_per_day > 1:
            if self.delta_t is None:
                raise CourseInvariantError(
                    "inter-fraction interval is required when giving more than one fraction per day"
                )
            if not self.delta_t > 0:
                raise CourseInvariantError("inter-fraction interval must be > 0 hours")
        if not isinstance(self.ja, int) or self.ja < 0:
            raise CourseInvariantError("interruption days must be an integer >= 0")
        if not isinstance(self.gap_after, int) or self.gap_after < 0:
            raise CourseInvariantError("gap after course must be an integer >= 0")

    @property
    def treatment_days(self) -> int:
        return math.ceil(self.n / self.m_per_day)


@dataclass(frozen=True)
class CourseSpan:
    first_day: int
    last_day: int


@dataclass(frozen=True)
class ScheduleTimeline:
    spans: tuple[CourseSpan, ...]
    overall_time: int


def _is_weekday(day: int) -> bool:
    # Day 1 is a Monday, so indices 1..5 mod 7 are Mon..Fri.
    return day % 7 in (1, 2, 3, 4, 5)


def _next_weekday(day: int) -> int:
    while not _is_weekday(day):
        day += 1
    return day


def treatment_day_indices(courses: list[TreatmentCourse]) -> list[list[int]]:
    """Day index of every treatment day, per course, on the Mon-start calendar.

    Interruption days are inserted consecutively after the course's midpoint
    treatment day; they skip weekdays only.  Gaps between courses count
    calendar days, weekends included.
    """
    if not courses:
        raise CourseInvariantError("course list must not be empty")

    all_days: list[list[int]] = []
    day = 1
    for course in courses:
        days: list[int] = []
        pause_after = math.ceil(course.treatment_days / 2)
        for t in range(1, course.treatment_days + 1):
            day = _next_weekday(day)
            days.append(day)
            if t == course.treatment_days:
                break
            if t == pause_after and course.ja > 0:
                skipped = 0
                while skipped < course.ja:
                    day += 1
                    if _is_weekday(day):
                        skipped += 1
            day += 1
        all_days.append(days)
        day = days[-1] + course.gap_after + 1
    return all_days


def resolve_timeline(courses: list[TreatmentCourse]) -> ScheduleTimeline:
    """Resolve courses to calendar spans; overall time is the last fraction's day."""
    per_course = treatment_day_indices(courses)
    spans = tuple(CourseSpan(first_day=days[0], last_day=days[-1]) for days in per_course)
    return ScheduleTimeline(spans=spans, overall_time=spans[-1].last_day)


def validate_courses(courses: list[TreatmentCourse], tissue: TissueParams) -> list[Finding]:
    """Collect every planning-rule violation; errors block BED evaluation."""
    findings: list[Finding] = []
    for i, course in enumerate(courses, start=1):
        if course.m_per_day > 1 and course.delta_t < MIN_INTERVAL_HOURS:
            findings.append(
                Finding(
                    level="error",
                    code="interval_below_minimum",
                    message=(
                        f"course {i}: inter-fraction interval {course.delta_t:g} h is below "
                        f"the {MIN_INTERVAL_HOURS:g} h repair minimum"
                    ),
                    course=i,
                )
            )
        if course.ja > MAX_INTERRUPTION_DAYS:
            findings.append(
                Finding(
                    level="error",
                    code="interruption_cap_exceeded",
                    message=(
                        f"course {i}: {course.ja} interruption days exceed the "
                        f"{MAX_INTERRUPTION_DAYS}-day-off cap"
                    ),
                    course=i,
                )
            )
        if course.d > tissue.d_t and course.m_per_day > 1:
            findings.append(
                Finding(
                    level="error",
                    code="high_dose_multifraction",
                    message=(
                        f"course {i}: dose per fraction {course.d:g} Gy is above the linear "
                        f"threshold {tissue.d_t:g} Gy of '{tissue.name}'; only one fraction "
                        f"per day is permitted there"
                    ),
                    course=i,
                )
            )
        if i < len(courses) and course.gap_after > LONG_GAP_DAYS:
            findings.append(
                Finding(
                    level="warning",
                    code="long_gap",
                    message=f"course {i}: long-gap regime, review D_rec",
                    course=i,
                )
            )
    return findings
