import logging
from datetime import datetime
from typing import List, Literal

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from config import (
    DEFAULT_BRUTE_CAP,
    DEFAULT_CUTNORM_CAP,
    DEFAULT_OUTPUT_INDEX,
    DEFAULT_ROUNDS,
    DEFAULT_SAMPLES,
    DEFAULT_SCALE,
    DEFAULT_SEED,
    METHODS,
    NORMS,
    SDP_METHODS,
    SOLVER_DEFAULTS,
)
from engine.reports import CutNormReport, Report, VerifyReport
from engine.runner import EstimationRunner
from errors import GeolipError, InternalSolverError, MethodDepthError
from network.generator import random_network
from network.io import NetworkDocument, document_to_network, fingerprint, network_to_document
from reductions.cutnorm import CutNormInstance
from sdp.program import SolverSettings

logger = logging.getLogger(__name__)

app = FastAPI(title="GeoLIP FGL Certification API", version="1.0.0")

# CORS middleware
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


# Pydantic models
class SolverOptions(BaseModel):
    tol: float = Field(default=SOLVER_DEFAULTS["eps_abs"], gt=0)
    max_iters: int = Field(default=SOLVER_DEFAULTS["max_iters"], gt=0)


class EstimateRequest(SolverOptions):
    network: NetworkDocument
    norm: Literal["linf", "l2"]
    method: Literal["ngeolip", "dgeolip", "lipsdp", "mp", "brute", "sample", "round"]
    output_index: int = Field(default=DEFAULT_OUTPUT_INDEX, ge=0)
    samples: int = Field(default=DEFAULT_SAMPLES, ge=1)
    rounds: int = Field(default=DEFAULT_ROUNDS, ge=1)
    seed: int = Field(default=DEFAULT_SEED, ge=0)
    brute_cap: int = Field(default=DEFAULT_BRUTE_CAP, ge=0)


class VerifyRequest(SolverOptions):
    network: NetworkDocument
    norms: List[Literal["linf", "l2"]] = list(NORMS)
    output_index: int = Field(default=DEFAULT_OUTPUT_INDEX, ge=0)
    samples: int = Field(default=DEFAULT_SAMPLES, ge=1)
    rounds: int = Field(default=DEFAULT_ROUNDS, ge=1)
    seed: int = Field(default=DEFAULT_SEED, ge=0)
    brute_cap: int = Field(default=DEFAULT_BRUTE_CAP, ge=0)


class CutNormRequest(SolverOptions):
    matrix: List[List[float]]
    brute_cap: int = Field(default=DEFAULT_CUTNORM_CAP, ge=0)


class GenerateRequest(BaseModel):
    dims: List[int]
    seed: int = Field(default=DEFAULT_SEED, ge=0)
    scale: float = DEFAULT_SCALE


def _runner(request: SolverOptions, **knobs) -> EstimationRunner:
    settings = SolverSettings.with_tolerance(request.tol, max_iters=request.max_iters)
    return EstimationRunner(settings=settings, **knobs)


def _http_error(error: GeolipError) -> HTTPException:
    if isinstance(error, MethodDepthError):
        return HTTPException(status_code=409, detail=str(error))
    if isinstance(error, InternalSolverError):
        return HTTPException(status_code=500, detail=str(error))
    return HTTPException(status_code=400, detail=str(error))


@app.get("/")
async def root():
    return {"message": "GeoLIP FGL Certification API", "version": "1.0.0"}


@app.get("/health")
async def health_check():
    return {"status": "healthy", "timestamp": datetime.now()}


@app.get("/methods")
async def get_methods():
    """Methods, the norms they bound and the bound direction"""
    return {
        "norms": list(NORMS),
        "methods": list(METHODS),
        "sdp_methods": list(SDP_METHODS),
        "routing": {
            "ngeolip": {"norms": ["linf", "l2"], "depth": "one hidden layer", "direction": "upper"},
            "dgeolip": {"norms": ["linf"], "depth": "any", "direction": "upper"},
            "lipsdp": {"norms": ["l2"], "depth": "any", "direction": "upper"},
            "mp": {"norms": ["linf", "l2"], "depth": "any", "direction": "upper"},
            "brute": {"norms": ["linf", "l2"], "depth": "any", "direction": "exact"},
            "sample": {"norms": ["linf", "l2"], "depth": "any", "direction": "lower"},
            "round": {"norms": ["linf", "l2"], "depth": "one hidden layer", "direction": "lower"},
        },
    }


# Estimation endpoints
@app.post("/estimate", response_model=Report)
def estimate(request: EstimateRequest):
    """Bound the FGL constant of the posted network with one method"""
    try:
        net = document_to_network(request.network)
        runner = _runner(request, brute_cap=request.brute_cap, samples=request.samples,
                         rounds=request.rounds, seed=request.seed)
        return runner.report(net, request.method, request.norm, request.output_index)
    except GeolipError as e:
        raise _http_error(e)
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))


@app.post("/verify", response_model=VerifyReport)
def verify(request: VerifyRequest):
    """Run every applicable method and check the bound ordering"""
    try:
        net = document_to_network(request.network)
        runner = _runner(request, brute_cap=request.brute_cap, samples=request.samples,
                         rounds=request.rounds, seed=request.seed)
        return runner.verify(net, request.norms, request.output_index)
    except GeolipError as e:
        raise _http_error(e)


@app.post("/cutnorm", response_model=CutNormReport)
def cutnorm(request: CutNormRequest):
    """Cut norm of the posted matrix next to the FGL of its reduction network"""
    try:
        instance = CutNormInstance(request.matrix)
        return _runner(request).cutnorm(instance, cap=request.brute_cap)
    except GeolipError as e:
        raise _http_error(e)


@app.post("/generate")
async def generate(request: GenerateRequest):
    """Seeded random network as a geolip-net-v1 document"""
    try:
        net = random_network(request.dims, seed=request.seed, scale=request.scale)
    except GeolipError as e:
        raise _http_error(e)
    return {"network": network_to_document(net), "fingerprint": fingerprint(net)}


if __name__ == "__main__":
    import uvicorn

    uvicorn.run(app, host="0.0.0.0", port=8000)
