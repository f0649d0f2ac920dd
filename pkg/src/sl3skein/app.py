"""HTTP front end: ``uvicorn sl3skein.app:app``."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from . import __version__, service
from .service import (
    EnumerateRequest,
    ExpandRequest,
    InputError,
    MutateRequest,
    QuiverRequest,
    RunReport,
    VerifyRequest,
)
from .suites import SUITES

app = FastAPI(title="sl3skein", version=__version__)


def _run(handler, req) -> RunReport:
    try:
        return handler(req)
    except InputError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from None


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": service.SCHEMA}


@app.get("/suites")
def suites() -> list[str]:
    return list(SUITES)


@app.post("/quiver", response_model=RunReport)
def quiver(req: QuiverRequest) -> RunReport:
    return _run(service.quiver, req)


@app.post("/mutate", response_model=RunReport)
def mutate(req: MutateRequest) -> RunReport:
    return _run(service.mutate, req)


@app.post("/enumerate", response_model=RunReport)
def enumerate_(req: EnumerateRequest) -> RunReport:
    return _run(service.enumerate_, req)


@app.post("/verify", response_model=RunReport)
def verify(req: VerifyRequest) -> RunReport:
    return _run(service.verify, req)


@app.post("/expand", response_model=RunReport)
def expand(req: ExpandRequest) -> RunReport:
    return _run(service.expand_, req)
