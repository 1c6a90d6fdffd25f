"""Stateless JSON-over-HTTP facade over the engine.

Every response is wrapped in an envelope carrying exactly one of result or
error, plus the engine version and the checksum of the loaded tissue file.
Validation problems return 400 with the offending field path, solver
failures 422; nothing internal ever leaks through a 500.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

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


class CourseIn(BaseModel, extra="forbid"):
    n: int = Field(ge=1)
    d: float = Field(gt=0)
    m_per_day: int = Field(default=1, ge=1, le=3)
    delta_t: float | None = None
    ja: int = Field(default=0, ge=0)
    gap_after: int = Field(default=0, ge=0)

    def to_course(self) -> TreatmentCourse:
        return TreatmentCourse(
            n=self.n, d=self.d, m_per_day=self.m_per_day,
            delta_t=self.delta_t, ja=self.ja, gap_after=self.gap_after,
        )


class SolverConfigIn(BaseModel, extra="forbid"):
    d_ref: float = Field(default=2.0, gt=0)
    tolerance: float = Field(default=1e-3, gt=0)
    max_bracket: float = Field(default=1e4, ge=1)
    reference_week: int = Field(default=5, ge=1, le=7)

    def to_config(self) -> SolverConfig:
        return SolverConfig(
            d_ref=self.d_ref, tolerance=self.tolerance,
            max_bracket=self.max_bracket, reference_week=self.reference_week,
        )


class PlanRequest(BaseModel, extra="forbid"):
    tissue: str
    courses: list[CourseIn] = Field(min_length=1)
    config: SolverConfigIn = SolverConfigIn()


class OutcomeRequest(BaseModel, extra="forbid"):
    tissue: str
    courses: list[CourseIn] | None = None
    eud_2gy: float | None = Field(default=None, ge=0)
    config: SolverConfigIn = SolverConfigIn()


class DvhRequest(BaseModel, extra="forbid"):
    content: str
    n_fractions: int = Field(ge=1)
    name: str = "structure"
    echo_points: bool = False


def create_app(library: TissueLibrary | None = None,
               cors_origins: list[str] | None = None) -> FastAPI:
    """Build the service around one immutable tissue library."""
    if library is None:
        library = TissueLibrary.default()

    app = FastAPI(title="eqdose", version=__version__)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=cors_origins or ["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def envelope(result=None, error=None) -> dict:
        body = {"engine_version": __version__, "library_checksum": library.checksum}
        if error is not None:
            body["error"] = error
        else:
            body["result"] = result
        return body

    def error_response(status: int, code: str, message: str, field_path: str | None = None):
        error = {"code": code, "message": message}
        if field_path is not None:
            error["field_path"] = field_path
        return JSONResponse(status_code=status, content=envelope(error=error))

    @app.exception_handler(RequestValidationError)
    async def on_request_validation(request: Request, exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        path = ".".join(str(part) for part in first.get("loc", ()) if part != "body")
        return error_response(400, "validation", first.get("msg", "invalid request"), path or None)

    @app.exception_handler(CourseInvariantError)
    @app.exception_handler(CourseRuleError)
    @app.exception_handler(TissueLibraryError)
    @app.exception_handler(DvhFormatError)
    async def on_engine_validation(request: Request, exc: Exception):
        return error_response(400, "validation", str(exc))

    @app.exception_handler(KeyError)
    @app.exception_handler(ValueError)
    async def on_value_error(request: Request, exc: Exception):
        message = exc.args[0] if exc.args else str(exc)
        return error_response(400, "validation", str(message))

    @app.exception_handler(SolverError)
    async def on_solver_error(request: Request, exc: SolverError):
        return error_response(422, "solver_failure", str(exc))

    @app.exception_handler(Exception)
    async def on_unexpected(request: Request, exc: Exception):
        return error_response(500, "internal", "internal error")

    @app.get("/tissues")
    async def list_tissues():
        return envelope(reports.tissues_report(library))

    @app.post("/bed")
    async def post_bed(req: PlanRequest):
        courses = [c.to_course() for c in req.courses]
        return envelope(reports.bed_report(library, req.tissue, courses))

    @app.post("/equivalent")
    async def post_equivalent(req: PlanRequest):
        courses = [c.to_course() for c in req.courses]
        return envelope(
            reports.equivalent_report(library, req.tissue, courses, req.config.to_config())
        )

    @app.post("/ntcp")
    async def post_ntcp(req: OutcomeRequest):
        courses = [c.to_course() for c in req.courses] if req.courses else None
        return envelope(
            reports.ntcp_report(library, req.tissue, courses=courses,
                                eud_2gy=req.eud_2gy, config=req.config.to_config())
        )

    @app.post("/risk")
    async def post_risk(req: OutcomeRequest):
        courses = [c.to_course() for c in req.courses] if req.courses else None
        return envelope(
            reports.risk_report(library, req.tissue, courses=courses,
                                eud_2gy=req.eud_2gy, config=req.config.to_config())
        )

    @app.post("/dvh/summarize")
    async def post_dvh(req: DvhRequest):
        return envelope(
            reports.dvh_report(req.content, req.n_fractions,
                               name=req.name, echo_points=req.echo_points)
        )

    return app
