from fastapi import APIRouter, Query
from starlette.concurrency import run_in_threadpool

from app.config import logger
from app.schemas import (
    AsympRecord,
    AsympRequest,
    ClassifyRequest,
    DirichletRecord,
    EvalRecord,
    EvalRequest,
    PhaseRecord,
)
from app.services import asymptotics, export, phases, series
from app.services.weights import fourier_coeffs, parse_family

# Create router for the analysis endpoints
router = APIRouter()


@router.post("/eval", response_model=EvalRecord)
async def evaluate(request: EvalRequest):
    """Q_n(z) from the exact recurrence."""
    seq = parse_family(request.family)
    value = await run_in_threadpool(series.eval_exact, seq, request.z.to_complex(), request.n)
    return export.eval_record(request.n, value)


@router.post("/asymp", response_model=AsympRecord)
async def asymp(request: AsympRequest):
    seq = parse_family(request.family)
    est = await run_in_threadpool(
        asymptotics.estimate,
        seq,
        request.z.to_complex(),
        request.n,
        request.k_max,
        request.tie_tol,
        request.osc_tol,
    )
    logger.info("Estimate served", {"family": request.family, "n": request.n})
    return export.asymp_record(seq, est)


@router.post("/classify", response_model=PhaseRecord)
async def classify(request: ClassifyRequest):
    seq = parse_family(request.family)
    phase = await run_in_threadpool(
        phases.classify, seq, request.z.to_complex(), request.k_max, request.tie_tol
    )
    return export.phase_record(seq, phase)


@router.get("/dirichlet", response_model=DirichletRecord)
async def dirichlet(family: str, k: int = Query(ge=1, le=64)):
    seq = parse_family(family)
    data = await run_in_threadpool(fourier_coeffs, seq, k)
    return export.dirichlet_record(seq, data)
