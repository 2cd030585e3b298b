"""FastAPI service wrapping the exact-arithmetic core.

All rational numbers cross the wire as ``p/q`` strings so exactness
survives JSON. The handler functions are plain functions over the pydantic
models; the CLI calls them in-process and the HTTP routes are thin wrappers
that map domain errors to status codes (400 for malformed input, 422 for a
mathematical precondition failure).
"""

from __future__ import annotations

from typing import Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import blowup, complement, discrepancy, graphs, oracle
from .linalg import SingularSystemError
from .rationals import (
    RationalFormatError,
    format_rational,
    parse_rational,
)

USAGE_ERRORS = (
    RationalFormatError,
    graphs.GraphFormatError,
    blowup.TowerScriptError,
    oracle.UnknownPropertyError,
)
PRECONDITION_ERRORS = (
    graphs.GraphStructureError,
    discrepancy.NotContractibleError,
    complement.ComplementError,
    blowup.ModelError,
    blowup.AdmissibilityError,
    SingularSystemError,
    ValueError,
)


def error_category(exc: Exception) -> str:
    if isinstance(exc, USAGE_ERRORS):
        return "usage"
    if isinstance(exc, PRECONDITION_ERRORS):
        return "precondition"
    raise exc


# -- models -------------------------------------------------------------------

class GraphRequest(BaseModel):
    graph: str = Field(description="graph in the line-oriented curve/boundary/edge format")


class ProfileResponse(BaseModel):
    ids: list[str]
    a: list[str]
    mld: str
    index: int
    unimodal_valley: Optional[int] = None


class ClassifyResponse(BaseModel):
    tag: str
    r: Optional[int] = None
    family: Optional[int] = None
    p: Optional[int] = None
    rendered: str


class ScalarResponse(BaseModel):
    key: str
    value: str


class ComplementRequest(BaseModel):
    coefficients: list[str] = Field(default_factory=list)
    delta: str


class ComplementResponse(BaseModel):
    n: int
    k: int
    m: int
    tried: list[int]
    plus: list[str]
    padding: list[str]
    eps: str
    total: str


class DtauRequest(BaseModel):
    coefficients: list[str]
    tau: str
    mode: str = "smallest-k"  # or "biggest-a"
    targets: Optional[list[str]] = None


class DtauResponse(BaseModel):
    result: list[str]


class SubboundaryRequest(BaseModel):
    graph: str
    delta: str


class SubboundaryResponse(BaseModel):
    chain: list[str]
    u: list[str]
    path: str
    denominator_bound: int


class TowerRequest(BaseModel):
    graph: str
    script: str


class TowerResponse(BaseModel):
    trace_csv: str


class AtlasRequest(BaseModel):
    p_max: int = 8


class AtlasResponse(BaseModel):
    csv: str


class VerifyRequest(BaseModel):
    suite: Optional[str] = "default"
    properties: Optional[list[str]] = None
    seed: int = 1
    max_r: Optional[int] = None
    max_weight: Optional[int] = None
    max_p: Optional[int] = None
    max_denominator: Optional[int] = None
    max_points: Optional[int] = None
    depth: Optional[int] = None
    tower_count: Optional[int] = None
    deltas: Optional[list[str]] = None


class ReportModel(BaseModel):
    property: str
    instances: int
    failures: int


class FailureModel(BaseModel):
    property: str
    instance: str
    witness: str


class VerifyResponse(BaseModel):
    ok: bool
    reports: list[ReportModel]
    failure_details: list[FailureModel]
    csv: str


# -- handlers -----------------------------------------------------------------

def _profile_of(text: str) -> tuple[graphs.DualGraph, discrepancy.DiscrepancyProfile]:
    graph = graphs.parse_graph(text)
    return graph, discrepancy.solve_log_discrepancies(graph)


def do_solve(req: GraphRequest) -> ProfileResponse:
    _, profile = _profile_of(req.graph)
    return ProfileResponse(
        ids=list(profile.ids),
        a=[format_rational(x) for x in profile.a],
        mld=format_rational(profile.mld),
        index=profile.index,
        unimodal_valley=profile.unimodal_valley,
    )


def do_classify(req: GraphRequest) -> ClassifyResponse:
    cls = graphs.classify(graphs.parse_graph(req.graph))
    return ClassifyResponse(
        tag=cls.tag, r=cls.r, family=cls.family, p=cls.p, rendered=str(cls)
    )


def do_mld(req: GraphRequest) -> ScalarResponse:
    _, profile = _profile_of(req.graph)
    return ScalarResponse(key="mld", value=format_rational(profile.mld))


def do_index(req: GraphRequest) -> ScalarResponse:
    _, profile = _profile_of(req.graph)
    return ScalarResponse(key="index", value=str(profile.index))


def do_complement(req: ComplementRequest) -> ComplementResponse:
    boundary = complement.BoundaryP1.of([parse_rational(c) for c in req.coefficients])
    search = complement.find_curve_complement(boundary, parse_rational(req.delta))
    result = search.result
    return ComplementResponse(
        n=result.n,
        k=search.k,
        m=search.m,
        tried=list(search.tried),
        plus=[format_rational(c) for c in result.plus_coeffs],
        padding=[format_rational(c) for c in result.padding_coeffs],
        eps=format_rational(result.eps_achieved),
        total=format_rational(result.total),
    )


def do_dtau(req: DtauRequest) -> DtauResponse:
    coeffs = [parse_rational(c) for c in req.coefficients]
    tau = parse_rational(req.tau)
    if req.mode == "smallest-k":
        out = complement.round_up_to_standard(coeffs, tau)
    elif req.mode == "biggest-a":
        if not req.targets:
            raise complement.ComplementError("mode biggest-a needs a target set")
        targets = [parse_rational(t) for t in req.targets]
        out = complement.round_up_to_set(coeffs, tau, targets)
    else:
        raise complement.ComplementError(f"unknown mode {req.mode!r}")
    return DtauResponse(result=[format_rational(x) for x in out])


def do_subboundary(req: SubboundaryRequest) -> SubboundaryResponse:
    graph = graphs.parse_graph(req.graph)
    result = complement.chain_subboundary(graph, parse_rational(req.delta))
    return SubboundaryResponse(
        chain=list(result.chain_ids),
        u=[format_rational(x) for x in result.u],
        path=result.path,
        denominator_bound=result.denominator_bound,
    )


def do_tower(req: TowerRequest) -> TowerResponse:
    graph, profile = _profile_of(req.graph)
    model = blowup.model_from_solved_graph(graph, profile)
    moves = blowup.parse_tower_script(req.script)
    states = blowup.replay(model, moves)
    return TowerResponse(trace_csv=blowup.trace_csv(states, moves))


def do_atlas(req: AtlasRequest) -> AtlasResponse:
    return AtlasResponse(csv=oracle.atlas_to_csv(oracle.e_type_atlas(req.p_max)))


def do_verify(req: VerifyRequest) -> VerifyResponse:
    if req.properties:
        names = tuple(req.properties)
    else:
        suite = req.suite or "default"
        if suite not in oracle.SUITES:
            raise oracle.UnknownPropertyError(f"unknown suite {suite!r}")
        names = oracle.SUITES[suite]
    base = oracle.QUICK_SPEC if req.suite == "quick" else oracle.EnumerationSpec()
    overrides = {"seed": req.seed}
    for field_name in (
        "max_r",
        "max_weight",
        "max_p",
        "max_denominator",
        "max_points",
        "depth",
        "tower_count",
    ):
        value = getattr(req, field_name)
        if value is not None:
            overrides[field_name] = value
    if req.deltas:
        overrides["deltas"] = tuple(parse_rational(d) for d in req.deltas)
    spec = oracle.replace(base, **overrides)
    reports = oracle.enumerate_and_verify(spec, names)
    return VerifyResponse(
        ok=all(r.ok for r in reports),
        reports=[
            ReportModel(
                property=r.property_id, instances=r.instances, failures=len(r.failures)
            )
            for r in reports
        ],
        failure_details=[
            FailureModel(property=r.property_id, instance=inst, witness=wit)
            for r in reports
            for inst, wit in r.failures
        ],
        csv=oracle.reports_to_csv(reports),
    )


# -- HTTP layer ---------------------------------------------------------------

app = FastAPI(
    title="logdisc",
    description="Exact log discrepancies, complements and blow-up towers "
    "on resolution dual graphs",
)


def _wrap(handler, request):
    try:
        return handler(request)
    except Exception as exc:  # noqa: BLE001 - mapped to transport errors
        category = error_category(exc)
        status = 400 if category == "usage" else 422
        raise HTTPException(
            status_code=status, detail={"category": category, "message": str(exc)}
        )


@app.get("/healthz")
def healthz() -> dict:
    return {"status": "ok"}


@app.post("/solve", response_model=ProfileResponse)
def solve_endpoint(request: GraphRequest) -> ProfileResponse:
    return _wrap(do_solve, request)


@app.post("/classify", response_model=ClassifyResponse)
def classify_endpoint(request: GraphRequest) -> ClassifyResponse:
    return _wrap(do_classify, request)


@app.post("/mld", response_model=ScalarResponse)
def mld_endpoint(request: GraphRequest) -> ScalarResponse:
    return _wrap(do_mld, request)


@app.post("/index", response_model=ScalarResponse)
def index_endpoint(request: GraphRequest) -> ScalarResponse:
    return _wrap(do_index, request)


@app.post("/complement", response_model=ComplementResponse)
def complement_endpoint(request: ComplementRequest) -> ComplementResponse:
    return _wrap(do_complement, request)


@app.post("/dtau", response_model=DtauResponse)
def dtau_endpoint(request: DtauRequest) -> DtauResponse:
    return _wrap(do_dtau, request)


@app.post("/subboundary", response_model=SubboundaryResponse)
def subboundary_endpoint(request: SubboundaryRequest) -> SubboundaryResponse:
    return _wrap(do_subboundary, request)


@app.post("/tower", response_model=TowerResponse)
def tower_endpoint(request: TowerRequest) -> TowerResponse:
    return _wrap(do_tower, request)


@app.post("/atlas", response_model=AtlasResponse)
def atlas_endpoint(request: AtlasRequest) -> AtlasResponse:
    return _wrap(do_atlas, request)


@app.post("/verify", response_model=VerifyResponse)
def verify_endpoint(request: VerifyRequest) -> VerifyResponse:
    return _wrap(do_verify, request)
