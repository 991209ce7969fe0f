# app/api/v1/solve.py
from fastapi import APIRouter

from app.api.v1.errors import to_http
from app.config import SolverLimits
from app.ops.instance_io import SolveRequest
from app.services import solve_service

router = APIRouter()


@router.post("/solve")
def run_solve(body: SolveRequest):
    try:
        return solve_service.solve(body.to_instance(), body.method, SolverLimits.from_env())
    except Exception as e:
        raise to_http(e)
