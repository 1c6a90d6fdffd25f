"""Warning and error types shared across the engine."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class EngineWarning:
    """A non-fatal condition the caller must surface, never swallow."""

    code: str
    message: str


@dataclass(frozen=True)
class Finding:
    """One schedule-rule violation; level is 'error' or 'warning'."""

    level: str
    code: str
    message: str
    course: int | None = None

    def to_warning(self) -> EngineWarning:
        return EngineWarning(code=self.code, message=self.message)


class TissueLibraryError(ValueError):
    """Malformed tissue parameter file or record."""


class CourseInvariantError(ValueError):
    """A treatment course field violates a structural invariant."""


class CourseRuleError(ValueError):
    """A schedule breaks one or more planning rules; carries the findings."""

    def __init__(self, findings):
        self.findings = tuple(findings)
        super().__init__("; ".join(f.message for f in self.findings))


class SolverError(RuntimeError):
    """Equivalence search failed; bed_supremum is the largest reachable BED."""

    def __init__(self, message: str, bed_supremum: float | None = None):
        super().__init__(message)
        self.bed_supremum = bed_supremum


class DvhFormatError(ValueError):
    """Unparseable or inconsistent DVH table; line is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"{message} (line {line})"
        super().__init__(message)
        self.line = line
