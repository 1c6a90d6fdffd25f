"""Biologically effective dose and equivalent-dose engine for radiotherapy schedules."""

from .bed import (
    BedBreakdown,
    bed,
    classic_eqd,
    gap_penalty,
    incomplete_repair_factor,
    nsd_tolerance,
    recovery_deficit,
    repopulation_deficit,
)
from .diagnostics import (
    CourseInvariantError,
    CourseRuleError,
    DvhFormatError,
    EngineWarning,
    Finding,
    SolverError,
    TissueLibraryError,
)
from .dvh import DvhCurve, DvhSummary, parse_dvh, summarize
from .outcomes import (
    OutcomeEstimate,
    evaluate_outcomes,
    gaussian_cdf,
    induced_cancer_incidence,
    ntcp,
)
from .schedule import ScheduleTimeline, TreatmentCourse, resolve_timeline, validate_courses
from .solver import (
    EquivalenceResult,
    SolverConfig,
    bed_equivalence_roundtrip,
    cost,
    equivalent_dose,
)
from .tissues import (
    TissueKind,
    TissueLibrary,
    TissueParams,
    default_gamma_over_alpha,
    load_library,
    save_library,
)

__version__ = "0.1.0"

__all__ = [
    "BedBreakdown",
    "CourseInvariantError",
    "CourseRuleError",
    "DvhCurve",
    "DvhFormatError",
    "DvhSummary",
    "EngineWarning",
    "EquivalenceResult",
    "Finding",
    "OutcomeEstimate",
    "ScheduleTimeline",
    "SolverConfig",
    "SolverError",
    "TissueKind",
    "TissueLibrary",
    "TissueLibraryError",
    "TissueParams",
    "TreatmentCourse",
    "bed",
    "bed_equivalence_roundtrip",
    "classic_eqd",
    "cost",
    "default_gamma_over_alpha",
    "equivalent_dose",
    "evaluate_outcomes",
    "gap_penalty",
    "gaussian_cdf",
    "incomplete_repair_factor",
    "induced_cancer_incidence",
    "load_library",
    "nsd_tolerance",
    "ntcp",
    "parse_dvh",
    "recovery_deficit",
    "repopulation_deficit",
    "resolve_timeline",
    "save_library",
    "summarize",
    "validate_courses",
]
