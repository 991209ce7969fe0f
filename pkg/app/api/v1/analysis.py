# app/api/v1/analysis.py
from typing import Optional

from fastapi import APIRouter, Query

from app.api.v1.errors import to_http
from app.config import SolverLimits
from app.ops.instance_io import InstanceFile
from app.services import solve_service

router = APIRouter()


@router.post("/bounds")
def run_bounds(body: InstanceFile):
    try:
        return solve_service.bounds(body.to_instance(), SolverLimits.from_env())
    except Exception as e:
        raise to_http(e)


@router.post("/conjecture")
def run_conjecture(body: InstanceFile, max_support: Optional[int] = Query(default=None, ge=1)):
    try:
        return solve_service.conjecture(body.to_instance(), max_support, SolverLimits.from_env())
    except Exception as e:
        raise to_http(e)


@router.post("/simulate")
def run_simulate(
    body: InstanceFile,
    trials: int = Query(default=100_000, ge=1),
    seed: int = Query(default=0, ge=0),
):
    try:
        return solve_service.simulate_optimal(body.to_instance(), trials, seed, limits=SolverLimits.from_env())
    except Exception as e:
        raise to_http(e)
