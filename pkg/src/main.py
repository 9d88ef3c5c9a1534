"""FastAPI application entry point for the price of anarchy toolkit."""

import logging

from dotenv import load_dotenv
from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

load_dotenv()

from src.api import analysis, health, runs
from src.config import get_settings

settings = get_settings()
logging.basicConfig(level=getattr(logging, settings.log_level, logging.INFO))

app = FastAPI(
    title="PoA Toolkit API",
    description="Price of anarchy analysis for games with altruistic and friendly players",
    version="1.0.0",
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=list(settings.cors_origins),
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(analysis.router, prefix="/api/v1", tags=["analysis"])
app.include_router(runs.router, prefix="/api/v1/runs", tags=["runs"])

# Health check endpoints
app.include_router(health.router, tags=["health"])


@app.get("/")
async def read_root():
    """Root endpoint."""
    return {"message": "Welcome to the PoA Toolkit API!", "version": "1.0.0"}
