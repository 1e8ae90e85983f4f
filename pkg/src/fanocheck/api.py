"""HTTP service exposing the verification toolkit.

Thin transport over :mod:`fanocheck.service`: every endpoint parses a typed
request, delegates to the shared handler, and returns its payload unchanged.
Unusable input surfaces as HTTP 422 with a human-readable detail string;
"undecided" outcomes are ordinary 200 payloads, mirroring exit code 3 of the
command-line client.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import __version__, service
from .service import InputError

Point = str | list[str | int]


class ClassifyRequest(BaseModel):
    polynomial: dict
    point: Point
    min_rank: int | None = None


class ClassifyScanRequest(BaseModel):
    polynomial: dict
    min_rank: int = 5
    samples: int = 25
    seed: int = 0
    points: list[Point] | None = None


class RegularityRequest(BaseModel):
    polynomial: dict
    point: Point
    primes: list[int] | None = None
    budget_pairs: int | None = None


class BlowupNormalizeRequest(BaseModel):
    polynomial: dict
    center_codim: int
    jet_order: int | None = None


class BlowupVerifyRequest(BaseModel):
    germ: dict
    rank_threshold: int | None = None
    samples: int = 4
    seed: int = 0


class NFBoundRequest(BaseModel):
    graph: dict
    oracle: bool = False


class Classification(BaseModel):
    kind: str
    rank: int | None
    multiplicity: int | None
    label: str


class PointRow(BaseModel):
    point: list[str]
    classification: Classification


class ClassifyResponse(BaseModel):
    command: str
    point: list[str]
    classification: Classification
    min_rank: int | None
    meets_min_rank: bool | None


class ClassifyScanResponse(BaseModel):
    command: str
    prime: int
    min_rank: int
    samples: int
    seed: int
    verdict: bool | str
    rows: list[PointRow] | None = None
    violations: list[PointRow] | None = None
    note: str | None = None
    error: str | None = None


class StepDimensions(BaseModel):
    prime: int
    dims: list[int | None]


class RegularityResponse(BaseModel):
    command: str
    point: list[str]
    point_class: str
    condition: int
    primes: list[int]
    expected_dimensions: list[int]
    dimensions: list[StepDimensions]
    verdict: str
    undecided: bool
    classification: Classification
    meets_rank_threshold: bool | None


class GermRecord(BaseModel):
    ambient_dim: int
    rank: int
    center_codim: int
    diagonal: list[str]
    tail: dict
    jet_order: int


class BlowupNormalizeResponse(BaseModel):
    command: str
    germ: GermRecord


class ChartRecord(BaseModel):
    chart_index: int
    inside_rank_block: bool
    candidates_empty: bool
    fiber_quadric_rank: int | None
    points: list[PointRow]


class ViolationRecord(BaseModel):
    chart_index: int
    point: list[str]
    classification: Classification


class BlowupVerifyResponse(BaseModel):
    command: str
    rank_threshold: int
    precondition_ok: bool
    jet_order: int
    charts: list[ChartRecord]
    violations: list[ViolationRecord]
    verdict: bool


class RankRow(BaseModel):
    r: int
    dim: int
    codim: int
    point_locus_codim: int
    locus_lower_bound: int
    meets_ambient: bool


class CodimTableRecord(BaseModel):
    M: int
    rows: list[RankRow]
    fb_values: list[int]
    fb_min: int
    fb_argmin: int
    line_value: int
    overall_min: int
    smooth_candidates: list[list[str | int]]
    singular_candidates: list[list[str | int]]
    regularity_bound: int
    theorem_bound: int
    rank_component: int
    gap: int


class CodimTableResponse(BaseModel):
    command: str
    m_min: int
    m_max: int
    tables: list[CodimTableRecord]


class CensusResponse(BaseModel):
    command: str
    M: int
    r: int
    q: int
    count: int
    total: int
    method: str
    seed: int | None = None
    sample_size: int | None = None
    note: str | None = None


class CensusFitResponse(BaseModel):
    command: str
    M: int
    r: int
    expected_degree: int
    degree: int
    matches: bool
    primes: list[int]
    counts: list[int]
    coefficients: list[str]


class GraphValidityRecord(BaseModel):
    level: str
    reasons: list[str]


class OracleRecord(BaseModel):
    value: str
    optimum: list[str]
    active_constraints: list[int]
    matches_closed_form: bool


class NFBoundResponse(BaseModel):
    command: str
    validity: GraphValidityRecord
    applicable: bool
    path_counts: list[int]
    discrepancies: list[int]
    sum_mult2: int
    sum_rest: int
    sum_lower: int
    sum_lower_rest: int
    sum_upper: int
    base_multiplicity: str
    quadratic_minimum: str
    bound_coefficient: str
    bound_floor: str
    inequality_slack: int
    optimum: list[str]
    ordering_all_active: bool
    positivity_active: bool
    below_context: list[int]
    direct_bound: str
    direct_route_applies: bool
    exceeds_4: bool
    slack_equivalence_ok: bool
    verdict: bool
    oracle: OracleRecord | None = None


class HealthResponse(BaseModel):
    status: str
    version: str


app = FastAPI(
    title="fanocheck",
    version=__version__,
    description="Exact verification service for quadratic-point loci of "
                "Fano hypersurfaces.",
)


@app.exception_handler(InputError)
async def _input_error(request: Request, exc: InputError) -> JSONResponse:
    return JSONResponse(status_code=422, content={"detail": str(exc)})


@app.get("/health", response_model=HealthResponse)
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/classify", response_model=ClassifyResponse)
def classify(req: ClassifyRequest) -> dict:
    return service.classify_payload(req.polynomial, req.point, req.min_rank)


@app.post("/classify/scan", response_model=ClassifyScanResponse)
def classify_scan(req: ClassifyScanRequest) -> dict:
    return service.classify_scan_payload(
        req.polynomial, min_rank=req.min_rank,
        samples=req.samples, seed=req.seed, points=req.points,
    )


@app.post("/regularity", response_model=RegularityResponse)
def regularity(req: RegularityRequest) -> dict:
    return service.regularity_payload(
        req.polynomial, req.point,
        primes=req.primes, budget_pairs=req.budget_pairs,
    )


@app.post("/blowup/normalize", response_model=BlowupNormalizeResponse)
def blowup_normalize(req: BlowupNormalizeRequest) -> dict:
    return service.blowup_normalize_payload(
        req.polynomial, req.center_codim, jet_order=req.jet_order
    )


@app.post("/blowup/verify", response_model=BlowupVerifyResponse)
def blowup_verify(req: BlowupVerifyRequest) -> dict:
    return service.blowup_verify_payload(
        req.germ, rank_threshold=req.rank_threshold,
        samples=req.samples, seed=req.seed,
    )


@app.get("/codim/table", response_model=CodimTableResponse)
def codim_table(mmin: int, mmax: int) -> dict:
    return service.codim_table_payload(mmin, mmax)


@app.get("/census/sym-rank", response_model=CensusResponse)
def census_sym_rank(m: int, r: int, q: int, mode: str = "auto",
                    seed: int = 0, sample_size: int = 20000) -> dict:
    return service.census_payload(
        m, r, q, mode=mode, seed=seed, sample_size=sample_size
    )


@app.get("/census/fit", response_model=CensusFitResponse)
def census_fit(m: int, r: int) -> dict:
    return service.census_fit_payload(m, r)


@app.post("/nf/bound", response_model=NFBoundResponse)
def nf_bound(req: NFBoundRequest) -> dict:
    return service.nf_bound_payload(req.graph, oracle=req.oracle)
