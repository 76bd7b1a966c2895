"""FastAPI service exposing the exact-volume engine.

Rationals travel as strings ("p/q" or "n") so nothing is ever rounded.
Run with: uvicorn hypvol.service:app
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .cli import ALL_IDENTITIES, parse_rational, run_identity
from .graphs import enumerate_rational_graphs
from .intersections import default_table
from .mirzakhani import mirzakhani_poly
from .tautclasses import s_class
from .volumes import DomainError, fig1_table, v_eval, v_profile, vol_eval

app = FastAPI(title="hypvol",
              description="Exact volumes of moduli spaces of hyperbolic "
                          "cone surfaces with angles up to 4 pi.")


def _rationals(values):
    try:
        return [parse_rational(v) for v in values]
    except (ValueError, ZeroDivisionError) as exc:
        raise HTTPException(status_code=422, detail=f"bad rational: {exc}")


class PsiRequest(BaseModel):
    g: int = Field(ge=0)
    d: list[int]


class KappaRequest(BaseModel):
    g: int = Field(ge=0)
    m: int = Field(ge=0)
    d: list[int]


class ValueResponse(BaseModel):
    value: str


class MPolyRequest(BaseModel):
    g: int
    n: int
    ell: int = 0


class MPolyResponse(BaseModel):
    text: str
    variables: list[str]


class VolumeEvalRequest(BaseModel):
    g: int
    a: list[str]


class ProfileRequest(BaseModel):
    g: int
    n: int
    head: list[str] = []
    ell: int = 0


class ProfileResponse(BaseModel):
    t_max: str
    breakpoints: list[str]
    pieces: list[str]


class VolResponse(BaseModel):
    coeff: str
    pi_power: int
    sin_angles: list[str]
    value: float


class GraphsRequest(BaseModel):
    g: int
    n: int


class SClassRequest(BaseModel):
    g: int
    n: int
    a: list[str]


class VerifyRequest(BaseModel):
    identity: str
    max_dim: int = 4
    seed: int = 0
    samples: int = 20


class Fig1Request(BaseModel):
    n: int = Field(ge=3, le=5)
    samples: int = Field(default=16, ge=1, le=512)


@app.get("/health")
def health():
    return {"status": "ok", "cache": default_table().stats()}


@app.post("/psi", response_model=ValueResponse)
def psi(req: PsiRequest):
    try:
        return ValueResponse(value=str(default_table().psi(req.g, req.d)))
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc))


@app.post("/kappa", response_model=ValueResponse)
def kappa(req: KappaRequest):
    try:
        return ValueResponse(value=str(default_table().kappa_psi(req.g, req.d, req.m)))
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc))


@app.post("/mpoly", response_model=MPolyResponse)
def mpoly(req: MPolyRequest):
    try:
        poly = mirzakhani_poly(req.g, req.n, req.ell)
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    return MPolyResponse(text=poly.poly.to_text(), variables=list(poly.poly.vars))


@app.post("/volume/eval", response_model=ValueResponse)
def volume_eval(req: VolumeEvalRequest):
    try:
        return ValueResponse(value=str(v_eval(req.g, _rationals(req.a))))
    except DomainError as exc:
        raise HTTPException(status_code=422, detail=str(exc))


@app.post("/volume/profile", response_model=ProfileResponse)
def volume_profile(req: ProfileRequest):
    try:
        vp = v_profile(req.g, req.n, _rationals(req.head), req.ell)
    except (DomainError, ValueError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    prof = vp.profile
    return ProfileResponse(t_max=str(prof.hi),
                           breakpoints=[str(b) for b in prof.breakpoints],
                           pieces=[p.to_text() for p in prof.pieces])


@app.post("/vol", response_model=VolResponse)
def vol(req: VolumeEvalRequest):
    try:
        value = vol_eval(req.g, _rationals(req.a))
    except DomainError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    return VolResponse(coeff=str(value.coeff), pi_power=value.pi_power,
                       sin_angles=[str(x) for x in value.sin_angles],
                       value=value.as_float())


@app.post("/graphs")
def graphs(req: GraphsRequest):
    try:
        lines = [g.to_line() for g in enumerate_rational_graphs(req.g, req.n)]
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    return {"count": len(lines), "graphs": lines}


@app.post("/sclass")
def sclass(req: SClassRequest):
    try:
        cls = s_class(req.g, req.n, _rationals(req.a))
    except (DomainError, ValueError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    return {"terms": cls.to_text().splitlines()}


@app.post("/verify")
def run_verify(req: VerifyRequest):
    if req.identity not in ALL_IDENTITIES + ["all"]:
        raise HTTPException(status_code=422, detail=f"unknown identity {req.identity}")
    names = ALL_IDENTITIES if req.identity == "all" else [req.identity]
    reports = []
    for name in names:
        reports.extend(run_identity(name, req.max_dim, req.seed, req.samples))
    return {"reports": [r.to_json() for r in reports],
            "failed": sum(r.verdict == "fails" for r in reports)}


@app.post("/fig1")
def fig1(req: Fig1Request):
    import math

    def safe(x):
        return x if math.isfinite(x) else None
    rows = fig1_table(req.n, req.samples)
    return {"columns": ["x", "V_exact", "V_float", "Vol_float"],
            "rows": [[str(x), str(exact), safe(vf), safe(vol)]
                     for x, exact, vf, vol in rows]}
