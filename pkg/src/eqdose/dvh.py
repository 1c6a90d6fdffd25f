"""Cumulative dose-volume histogram parsing and summary doses.

Input is a two-column delimited text table (dose, volume fraction or
percent); commas, semicolons, tabs and spaces all work as separators.
Summaries are the mean dose, the dose to the hottest 5% of the volume
read off the cumulative curve by linear interpolation, and the top dose.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagnostics import DvhFormatError, EngineWarning

_RENORM_TOL = 1e-6


@dataclass(frozen=True)
class DvhCurve:
    name: str
    doses: tuple[float, ...]
    volume_fractions: tuple[float, ...]
    warnings: tuple[EngineWarning, ...] = ()


def parse_dvh(text: str, name: str = "structure") -> DvhCurve:
    """Parse a cumulative DVH table; volumes in percent are scaled to fractions."""
    doses: list[float] = []
    volumes: list[float] = []
    header_allowed = True
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.replace(",", " ").replace(";", " ").split()
        try:
            values = [float(tok) for tok in tokens]
        except ValueError:
            if header_allowed:
                header_allowed = False
                continue
            raise DvhFormatError(f"malformed row {raw!r}", line=lineno) from None
        header_allowed = False
        if len(values) != 2:
            raise DvhFormatError(
                f"expected two columns (dose, volume), got {len(values)}", line=lineno
            )
        if doses and values[0] <= doses[-1]:
            raise DvhFormatError("non-monotone dose column", line=lineno)
        doses.append(values[0])
        volumes.append(values[1])

    if len(doses) < 2:
        raise DvhFormatError("a DVH needs at least 2 points")

    if max(volumes) > 1.0 + 1e-9:
        volumes = [v / 100.0 for v in volumes]

    for i in range(1, len(volumes)):
        if volumes[i] > volumes[i - 1] + 1e-9:
            raise DvhFormatError("volume fraction increases along the dose axis")
    if volumes[-1] < 0:
        raise DvhFormatError("negative volume fraction")

    warnings: tuple[EngineWarning, ...] = ()
    first = volumes[0]
    if abs(first - 1.0) > _RENORM_TOL:
        if first <= 0:
            raise DvhFormatError("first volume fraction must be positive")
        volumes = [v / first for v in volumes]
        warnings = (
            EngineWarning(
                code="dvh_renormalized",
                message=f"curve started at volume fraction {first:g}, renormalized to 1",
            ),
        )

    return DvhCurve(
        name=name,
        doses=tuple(doses),
        volume_fractions=tuple(volumes),
        warnings=warnings,
    )


@dataclass(frozen=True)
class DvhSummary:
    mean: float
    d5: float
    dmax: float
    per_fraction_mean: float
    per_fraction_d5: float
    per_fraction_dmax: float


def _mean_dose(doses, volumes) -> float:
    # Differential form: volume shed between two samples sits at their
    # midpoint dose; whatever remains past the last sample sits at dmax.
    total = 0.0
    for i in range(len(doses) - 1):
        shed = volumes[i] - volumes[i + 1]
        total += shed * 0.5 * (doses[i] + doses[i + 1])
    total += volumes[-1] * doses[-1]
    return total


def _dose_at_volume(doses, volumes, level: float) -> float:
    for i, v in enumerate(volumes):
        if v <= level:
            if i == 0:
                return doses[0]
            span = volumes[i - 1] - v
            frac = (volumes[i - 1] - level) / span
            return doses[i - 1] + frac * (doses[i] - doses[i - 1])
    return doses[-1]


def summarize(curve: DvhCurve, n_fractions: int) -> DvhSummary:
    """Mean, hottest-5% dose and top dose, plus their per-fraction values."""
    if not curve.doses:
        raise DvhFormatError("empty curve")
    if n_fractions < 1:
        raise ValueError("n_fractions must be >= 1")
    mean = _mean_dose(curve.doses, curve.volume_fractions)
    d5 = _dose_at_volume(curve.doses, curve.volume_fractions, 0.05)
    dmax = curve.doses[-1]
    return DvhSummary(
        mean=mean,
        d5=d5,
        dmax=dmax,
        per_fraction_mean=mean / n_fractions,
        per_fraction_d5=d5 / n_fractions,
        per_fraction_dmax=dmax / n_fractions,
    )
