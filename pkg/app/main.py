from dotenv import load_dotenv
load_dotenv()

import logging

from fastapi import FastAPI
from app.api.v1.solve import router as solve_router
from app.api.v1.analysis import router as analysis_router
from app.api.v1.verify import router as verify_router

logging.basicConfig(level=logging.INFO, format="%(asctime)s %(levelname)s %(name)s: %(message)s")

app = FastAPI(title="Booby-Trap Search Game Solver", version="1.0.0")
app.include_router(solve_router, prefix="/api/v1", tags=["solve"])
app.include_router(analysis_router, prefix="/api/v1", tags=["analysis"])
app.include_router(verify_router, prefix="/api/v1", tags=["verify"])
