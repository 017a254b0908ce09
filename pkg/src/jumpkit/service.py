"""JSON service exposing the path operations and experiment runners.

Every endpoint renders its report server-side and returns the artifact text
along with the config hash, so the bytes a client receives are fixed by the
request payload alone. The CLI drives this app in-process through an ASGI
transport; a deployed instance behaves identically.

Error mapping: InvalidArgumentError -> 422, NumericFailureError -> 500,
matching the CLI exit codes 2 and 3.
"""

from __future__ import annotations

import math
from typing import Literal, Optional, Union

from fastapi import FastAPI, Query
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import __version__
from .dyadic import parse_dyadic
from .errors import InvalidArgumentError, NumericFailureError
from .experiments import config_hash, parse_config, render_report, run_experiment
from .experiments.tables import ResultRow, ResultTable
from .variation import (
    FieldOfPaths,
    SampledPath,
    jump_count,
    jump_seminorm,
    lewko_bound,
    variation,
)

Times = tuple[Union[str, int, float], ...]
Values = tuple[Union[float, tuple[float, float]], ...]
Format = Literal["csv", "json"]


def _make_path(times: Optional[Times], values: Values) -> SampledPath:
    if times is None:
        times = tuple(range(len(values)))
    ts = tuple(parse_dyadic(t) for t in times)
    vs = tuple(
        complex(v[0], v[1]) if isinstance(v, (tuple, list)) else complex(v)
        for v in values
    )
    return SampledPath(ts, vs)


def _exponent(r: Union[float, str]) -> float:
    if r == "inf":
        return math.inf
    return float(r)


class PathRequest(BaseModel):
    """One sampled path; times may be dyadic strings, omitted means 0,1,2,..."""

    model_config = {"extra": "forbid"}

    times: Optional[Times] = None
    values: Values = Field(min_length=1)
    seed: int = Field(default=0, ge=0, lt=2**64)
    out: Optional[str] = None


class JumpCountRequest(PathRequest):
    thresholds: tuple[float, ...] = Field(min_length=1)


class VariationRequest(PathRequest):
    exponents: tuple[Union[float, Literal["inf"]], ...] = Field(min_length=1)


class LewkoRequest(PathRequest):
    exponents: tuple[float, ...] = Field(min_length=1)


class AtomModel(BaseModel):
    model_config = {"extra": "forbid"}

    times: Optional[Times] = None
    values: Values = Field(min_length=1)
    weight: float = 1.0


class JumpSeminormRequest(BaseModel):
    model_config = {"extra": "forbid"}

    atoms: tuple[AtomModel, ...] = Field(min_length=1)
    exponents: tuple[float, ...] = Field(min_length=1)
    seed: int = Field(default=0, ge=0, lt=2**64)
    out: Optional[str] = None


class ExperimentRequest(BaseModel):
    """Raw experiment config plus an optional seed override."""

    model_config = {"extra": "forbid"}

    config: dict
    seed: Optional[int] = Field(default=None, ge=0, lt=2**64)


class ReportResponse(BaseModel):
    kind: str
    config_hash: str
    format: Format
    artifact: str


class HealthResponse(BaseModel):
    status: str
    version: str


def _respond(kind: str, cfg: BaseModel, rows, fmt: Format) -> ReportResponse:
    digest = config_hash(cfg)
    table = ResultTable(
        kind=kind,
        config_hash=digest,
        seed=cfg.seed,
        version=__version__,
        rows=tuple(rows),
    )
    return ReportResponse(
        kind=kind, config_hash=digest, format=fmt, artifact=render_report(table, fmt)
    )


def create_app() -> FastAPI:
    app = FastAPI(title="jumpkit", version=__version__)

    @app.exception_handler(InvalidArgumentError)
    async def _invalid(request, exc):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.exception_handler(NumericFailureError)
    async def _numeric(request, exc):
        return JSONResponse(status_code=500, content={"detail": str(exc)})

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/ops/jump-count", response_model=ReportResponse)
    def op_jump_count(
        req: JumpCountRequest, format: Format = Query(default="json")
    ) -> ReportResponse:
        path = _make_path(req.times, req.values)
        rows = [
            ResultRow(
                experiment="jump-count",
                params=(float(lam),),
                measured=float(jump_count(path, lam)),
                reference=0.0,
                ratio=0.0,
            )
            for lam in req.thresholds
        ]
        return _respond("jump-count", req, rows, format)

    @app.post("/ops/variation", response_model=ReportResponse)
    def op_variation(
        req: VariationRequest, format: Format = Query(default="json")
    ) -> ReportResponse:
        path = _make_path(req.times, req.values)
        rows = []
        for r in req.exponents:
            rr = _exponent(r)
            if rr < 1.0:
                raise InvalidArgumentError("variation exponents must satisfy r >= 1")
            rows.append(
                ResultRow(
                    experiment="variation",
                    params=("inf" if rr == math.inf else float(rr),),
                    measured=variation(path, rr),
                    reference=0.0,
                    ratio=0.0,
                )
            )
        return _respond("variation", req, rows, format)

    @app.post("/ops/jump-seminorm", response_model=ReportResponse)
    def op_jump_seminorm(
        req: JumpSeminormRequest, format: Format = Query(default="json")
    ) -> ReportResponse:
        field = FieldOfPaths(
            tuple((a.weight, _make_path(a.times, a.values)) for a in req.atoms)
        )
        rows = [
            ResultRow(
                experiment="jump-seminorm",
                params=(float(p),),
                measured=jump_seminorm(field, p),
                reference=0.0,
                ratio=0.0,
            )
            for p in req.exponents
        ]
        return _respond("jump-seminorm", req, rows, format)

    @app.post("/ops/lewko", response_model=ReportResponse)
    def op_lewko(
        req: LewkoRequest, format: Format = Query(default="json")
    ) -> ReportResponse:
        path = _make_path(req.times, req.values)
        rows = []
        for r in req.exponents:
            lhs, rhs = lewko_bound(path, float(r))
            rows.append(
                ResultRow(
                    experiment="lewko",
                    params=(float(r),),
                    measured=lhs,
                    reference=rhs,
                    ratio=lhs / rhs if rhs > 0 else 0.0,
                )
            )
        return _respond("lewko", req, rows, format)

    @app.post("/experiments/run", response_model=ReportResponse)
    def experiments_run(
        req: ExperimentRequest, format: Format = Query(default="json")
    ) -> ReportResponse:
        data = dict(req.config)
        if req.seed is not None:
            data["seed"] = req.seed
        cfg = parse_config(data)
        table = run_experiment(cfg)
        return ReportResponse(
            kind=cfg.kind,
            config_hash=table.config_hash,
            format=format,
            artifact=render_report(table, format),
        )

    return app


app = create_app()
