# src/api/main.py
import asyncio
import os

from dotenv import load_dotenv
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field, ValidationError

from analysis import sweeps
from models.schemas import (
    AsymptoticSpec,
    BoundsRow,
    FieldConfig,
    FieldMatrix,
    Figure2Row,
    GapRow,
    SchemeParams,
    SchemeRow,
    SpecialCaseParams,
    SweepSpec,
)
from tools import bounds, scheme
from tools.cache import InMemoryDecodableStore
from tools.decoding import enumerate_decodable

load_dotenv()


app = FastAPI(title="index-coding-privacy")

store = InMemoryDecodableStore(max_entries=int(os.getenv("INDEX_CODING_CACHE_SIZE", "256")))


class BoundsRequest(BaseModel):
    m: int = Field(..., ge=1)
    T: int = Field(..., ge=1)
    s: int = Field(..., ge=0)
    k: int | None = Field(default=None, ge=1, description="Segments of the base matrix")
    ell: int | None = Field(default=None, ge=1, description="Segment width")


class SchemeRequest(BaseModel):
    m: int
    T: int
    ell: int
    s: int
    verify: bool = False


class DecodableRequest(BaseModel):
    rows: list[list[int]] = Field(..., description="Encoding matrix, one list per transmission")
    modulus: int | None = Field(default=None, description="Field size; INDEX_CODING_FIELD_MODULUS if omitted")
    s: int = Field(..., ge=0)
    list_pairs: bool = False


class DecodableResponse(BaseModel):
    size_joint: int
    size_q: int
    size_s: int
    pairs: list[str] | None = None


def _unprocessable(exc: Exception) -> HTTPException:
    if isinstance(exc, ValidationError):
        return HTTPException(status_code=422, detail=[error["msg"] for error in exc.errors()])
    return HTTPException(status_code=422, detail=str(exc))


@app.post("/bounds", response_model=BoundsRow)
async def bounds_endpoint(req: BoundsRequest) -> BoundsRow:
    try:
        ub_joint, ub_q, ub_s = bounds.ub_lemma2(req.m, req.T, req.s)
        thm1_joint = thm1_q = None
        if req.k is not None and req.ell is not None:
            params = SchemeParams(m=req.m, T=req.T, k=req.k, ell=req.ell, s_min=req.s)
            thm1_joint = bounds.thm1_joint_count(params, req.s)
            thm1_q = bounds.thm1_request_count(params)
    except ValueError as exc:
        raise _unprocessable(exc) from exc
    return BoundsRow(
        m=req.m, T=req.T, k=req.k, ell=req.ell, s=req.s,
        ub_joint=ub_joint, ub_q=ub_q, ub_s=ub_s,
        thm1_joint=thm1_joint, thm1_q=thm1_q,
    )


@app.post("/scheme", response_model=SchemeRow)
async def scheme_endpoint(req: SchemeRequest) -> SchemeRow:
    try:
        p = SpecialCaseParams(m=req.m, T=req.T, ell=req.ell, s=req.s)
        return await asyncio.to_thread(scheme.scheme_row, p, req.verify, store)
    except (ValueError, RuntimeError) as exc:
        raise _unprocessable(exc) from exc


@app.post("/decodable", response_model=DecodableResponse)
async def decodable_endpoint(req: DecodableRequest) -> DecodableResponse:
    try:
        field = FieldConfig(modulus=req.modulus) if req.modulus else FieldConfig()
        A = FieldMatrix.from_rows(req.rows, field)
        sets = await asyncio.to_thread(enumerate_decodable, A, req.s, None, store)
    except (ValueError, RuntimeError) as exc:
        raise _unprocessable(exc) from exc
    return DecodableResponse(
        size_joint=sets.size_joint,
        size_q=sets.size_q,
        size_s=sets.size_s,
        pairs=[pair.label() for pair in sets.pairs] if req.list_pairs else None,
    )


@app.post("/figure2", response_model=list[Figure2Row])
async def figure2_endpoint(spec: SweepSpec) -> list[Figure2Row]:
    return await asyncio.to_thread(sweeps.sweep_figure2, spec)


@app.post("/asymptotics", response_model=list[GapRow])
async def asymptotics_endpoint(spec: AsymptoticSpec) -> list[GapRow]:
    return await asyncio.to_thread(sweeps.asymptotic_gaps, spec)
