# app/api/v1/errors.py
from fastapi import HTTPException
import traceback

from app.core.errors import BoobyTrapError, CapacityError, RegimeError
from app.ops.instance_io import InstanceParseError


def to_http(e: Exception) -> HTTPException:
    if isinstance(e, InstanceParseError):
        return HTTPException(status_code=422, detail={"field": e.field, "message": e.message})
    if isinstance(e, (RegimeError, CapacityError)):
        return HTTPException(status_code=409, detail=str(e))
    if isinstance(e, BoobyTrapError):
        return HTTPException(status_code=422, detail=str(e))
    traceback.print_exc()
    return HTTPException(status_code=500, detail=str(e))
