"""Inverts BED to an equivalent dose at reference fractionation.

The search minimizes |BED_ref(n_ref) - BED(plan)| over a real-valued
reference fraction count.  The reference course runs uninterrupted at
reference_week fractions per week, so its overall time is relaxed to the
continuous surrogate 1 + (n_ref - 1) * 7/reference_week days; a step-shaped
calendar would make the minimum ill-posed.  The reference arm carries the
same deficit model as the plan (repopulation past kick-off for targets,
daily recovery for organs at risk).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .bed import bed
from .diagnostics import EngineWarning, SolverError
from .schedule import TreatmentCourse
from .tissues import TissueKind, TissueParams, default_gamma_over_alpha

# Continuous/discrete reference-time disagreement worth flagging, in Gy.
DISCRETE_RESIDUAL_WARN_GY = 0.1

_GRID_POINTS = 64
_GRID_FLOOR = 1e-3


@dataclass(frozen=True)
class SolverConfig:
    d_ref: float = 2.0
    tolerance: float = 1e-3
    max_bracket: float = 1e4
    reference_week: int = 5

    def __post_init__(self):
        if not self.d_ref > 0:
            raise ValueError("d_ref must be > 0")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be > 0")
        if self.max_bracket < 1:
            raise ValueError("max_bracket must be >= 1")
        if not 1 <= self.reference_week <= 7:
            raise ValueError("reference_week must be between 1 and 7")


DEFAULT_CONFIG = SolverConfig()


@dataclass(frozen=True)
class EquivalenceResult:
    n0: float
    eqd: float
    residual: float
    bed_target_value: float
    warnings: tuple[EngineWarning, ...] = ()


def _reference_arm(tissue: TissueParams, config: SolverConfig) -> tuple[float, float, float, float]:
    """(per-fraction BED, days per fraction, deficit rate, deficit onset)."""
    ab = tissue.alpha_beta
    d_ref = config.d_ref
    if d_ref > tissue.d_t:
        ga = tissue.gamma_over_alpha
        if ga is None:
            ga = default_gamma_over_alpha(tissue)
        per_fraction = tissue.d_t * (1.0 + tissue.d_t / ab) + ga * (d_ref - tissue.d_t)
    else:
        per_fraction = d_ref * (1.0 + d_ref / ab)

    if tissue.kind is TissueKind.TARGET:
        rate = math.log(2.0) / (tissue.alpha * tissue.t_pot)
        onset = tissue.t_k
    else:
        rate = tissue.d_rec
        onset = 0.0
    return per_fraction, 7.0 / config.reference_week, rate, onset


def reference_bed_value(n_ref: float, tissue: TissueParams,
                        config: SolverConfig = DEFAULT_CONFIG) -> float:
    """BED of the reference course at a real fraction count (clamped at 0)."""
    per_fraction, slope, rate, onset = _reference_arm(tissue, config)
    return kernels.reference_bed(float(n_ref), per_fraction, slope, rate, onset)


def cost(n_ref: float, courses: list[TreatmentCourse], tissue: TissueParams,
         config: SolverConfig = DEFAULT_CONFIG) -> float:
    """|BED_ref(n_ref) - BED(courses)|, the quantity the search minimizes."""
    if not n_ref > 0:
        raise ValueError("n_ref must be > 0")
    target = bed(courses, tissue).total_bed
    return abs(reference_bed_value(n_ref, tissue, config) - target)


def _discrete_reference_time(n_whole: int, reference_week: int) -> int:
    # Mon-start weekday calendar: each full block of reference_week fractions
    # adds the remaining days of that week.
    return n_whole + (7 - reference_week) * ((n_whole - 1) // reference_week)


def equivalent_dose(courses: list[TreatmentCourse], tissue: TissueParams,
                    config: SolverConfig = DEFAULT_CONFIG) -> EquivalenceResult:
    """Equivalent total dose at reference fractionation with equal BED.

    Raises SolverError (carrying the reachable BED supremum) when the plan's
    BED exceeds anything the reference course can deliver within max_bracket
    fractions.
    """
    breakdown = bed(courses, tissue)
    target = breakdown.total_bed
    warnings: list[EngineWarning] = []
    if breakdown.clamped:
        warnings.append(
            EngineWarning(
                code="clamped_bed",
                message="plan BED was negative and clamped to 0 Gy; the equivalent dose is 0",
            )
        )

    per_fraction, slope, rate, onset = _reference_arm(tissue, config)

    if target <= 0.0:
        return EquivalenceResult(
            n0=0.0, eqd=0.0, residual=0.0, bed_target_value=target, warnings=tuple(warnings)
        )

    grid = np.logspace(math.log10(_GRID_FLOOR), math.log10(config.max_bracket), _GRID_POINTS)
    values = kernels.reference_bed_grid(grid, per_fraction, slope, rate, onset)
    # Equal neighbours only happen on the clamped-at-zero plateau, which is
    # harmless for bracketing; anything decreasing is genuinely non-monotone.
    monotone = bool(np.all(np.diff(values) >= -1e-12))

    if monotone:
        lo, hi = 0.0, 1.0
        while kernels.reference_bed(hi, per_fraction, slope, rate, onset) < target:
            lo = hi
            hi *= 2.0
            if hi > config.max_bracket:
                hi = config.max_bracket
                supremum = kernels.reference_bed(hi, per_fraction, slope, rate, onset)
                if supremum < target:
                    raise SolverError(
                        f"plan BED {target:.6g} Gy is unreachable: the reference course "
                        f"tops out at {supremum:.6g} Gy within {config.max_bracket:g} fractions",
                        bed_supremum=supremum,
                    )
                break
        n0 = kernels.bisect_fraction_count(lo, hi, target, per_fraction, slope, rate, onset)
    else:
        warnings.append(
            EngineWarning(
                code="non_monotone_reference",
                message="non-monotone reference BED; reporting the best grid-refined match",
            )
        )
        idx = int(np.argmin(np.abs(values - target)))
        lo = grid[idx - 1] if idx > 0 else 0.0
        hi = grid[idx + 1] if idx + 1 < len(grid) else grid[idx]
        n0 = kernels.golden_min_fraction_count(lo, hi, target, per_fraction, slope, rate, onset)

    residual = abs(kernels.reference_bed(n0, per_fraction, slope, rate, onset) - target)
    if residual > config.tolerance:
        warnings.append(
            EngineWarning(
                code="residual_above_tolerance",
                message=(
                    f"no reference fraction count matches the plan BED within "
                    f"{config.tolerance:g} Gy (residual {residual:.3g} Gy)"
                ),
            )
        )

    if n0 > 0:
        n_whole = max(1, math.ceil(n0 - 1e-12))
        t_disc = _discrete_reference_time(n_whole, config.reference_week)
        raw_disc = n0 * per_fraction - rate * max(0.0, t_disc - onset)
        disc_gap = abs(kernels.reference_bed(n0, per_fraction, slope, rate, onset) - max(0.0, raw_disc))
        if disc_gap > DISCRETE_RESIDUAL_WARN_GY:
            warnings.append(
                EngineWarning(
                    code="discrete_calendar_residual",
                    message=(
                        f"continuous reference time differs from the weekday calendar by "
                        f"{disc_gap:.3g} Gy of BED; review the reference schedule"
                    ),
                )
            )

    return EquivalenceResult(
        n0=n0,
        eqd=config.d_ref * n0,
        residual=residual,
        bed_target_value=target,
        warnings=tuple(warnings),
    )


def bed_equivalence_roundtrip(courses: list[TreatmentCourse], tissue: TissueParams,
                              config: SolverConfig = DEFAULT_CONFIG) -> float:
    """|BED difference| between the plan and the reconstructed reference plan."""
    result = equivalent_dose(courses, tissue, config)
    reference = reference_bed_value(result.n0, tissue, config)
    return abs(reference - bed(courses, tissue).total_bed)
