# app/api/v1/verify.py
from fastapi import APIRouter, Query

from app.api.v1.errors import to_http
from app.config import SolverLimits
from app.services.verify_service import verify_family

router = APIRouter()


@router.get("/verify")
def run_verify(
    family: str = Query(...),
    count: int = Query(default=20, ge=1),
    seed: int = Query(default=0),
):
    try:
        return verify_family(family, count, seed, limits=SolverLimits.from_env())
    except Exception as e:
        raise to_http(e)
