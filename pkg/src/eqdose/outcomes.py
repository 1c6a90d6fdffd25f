"""Complication probability and radiation-induced cancer incidence.

Both models run on the equivalent dose at 2 Gy per fraction; the Gaussian
dose-response formalism is only trusted near that fractionation, so a
validity warning fires when the evaluated plan strays outside 2 +/- 0.2 Gy
per fraction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .diagnostics import EngineWarning
from .tissues import TissueParams

_SQRT2 = math.sqrt(2.0)

VALID_FRACTION_RANGE = (1.8, 2.2)


def gaussian_cdf(u: float) -> float:
    """Standard normal CDF via the error function."""
    return 0.5 * (1.0 + math.erf(u / _SQRT2))


def ntcp(eud_2gy: float, tissue: TissueParams) -> float:
    """Complication probability: Gaussian CDF of (dose - TD50)/(m * TD50)."""
    if not tissue.has_ntcp_fields:
        raise ValueError(f"tissue '{tissue.name}' has no td50/slope_m; cannot evaluate NTCP")
    if eud_2gy < 0:
        raise ValueError("equivalent dose must be >= 0")
    u = (eud_2gy - tissue.td50) / (tissue.slope_m * tissue.td50)
    return gaussian_cdf(u)


def _cancer_raw(d_2gy: float, tissue: TissueParams) -> float:
    return tissue.p_unsc * d_2gy * math.exp(-tissue.alpha_unsc * d_2gy)


def induced_cancer_incidence(d_2gy: float, tissue: TissueParams) -> float:
    """Induced-cancer probability p * D * exp(-a * D), clamped into [0, 1].

    The curve rises to a single maximum p/(a*e) at D = 1/a and decays after.
    """
    if not tissue.has_cancer_fields:
        raise ValueError(
            f"tissue '{tissue.name}' has no p_unsc/alpha_unsc; cannot evaluate cancer incidence"
        )
    if d_2gy < 0:
        raise ValueError("equivalent dose must be >= 0")
    return min(1.0, max(0.0, _cancer_raw(d_2gy, tissue)))


@dataclass(frozen=True)
class OutcomeEstimate:
    ntcp: float | None
    k_incidence: float | None
    validity_warnings: tuple[EngineWarning, ...] = ()


def evaluate_outcomes(eud_2gy: float, tissue: TissueParams,
                      doses_per_fraction: Iterable[float] | None = None) -> OutcomeEstimate:
    """Evaluate whichever outcome models the tissue parameterizes.

    doses_per_fraction are the plan's physical fraction doses, used only for
    the validity check; pass None when unknown (e.g. dose supplied directly).
    """
    warnings: list[EngineWarning] = []
    if doses_per_fraction is not None:
        lo, hi = VALID_FRACTION_RANGE
        off = sorted({d for d in doses_per_fraction if not lo <= d <= hi})
        if off:
            listed = ", ".join(f"{d:g}" for d in off)
            warnings.append(
                EngineWarning(
                    code="ntcp_validity_range",
                    message=(
                        f"dose per fraction {listed} Gy outside the {lo:g}-{hi:g} Gy "
                        f"validity range of the outcome models"
                    ),
                )
            )

    probability = ntcp(eud_2gy, tissue) if tissue.has_ntcp_fields else None

    incidence = None
    if tissue.has_cancer_fields:
        incidence = induced_cancer_incidence(eud_2gy, tissue)
        if _cancer_raw(eud_2gy, tissue) > 1.0:
            warnings.append(
                EngineWarning(
                    code="k_incidence_clamped",
                    message="induced-cancer probability exceeded 1 and was clamped",
                )
            )

    return OutcomeEstimate(
        ntcp=probability,
        k_incidence=incidence,
        validity_warnings=tuple(warnings),
    )
