from .app import ApiError, Engine, Snapshot, create_app
from .schemas import (
    ErrorEnvelope,
    FactCheckPublic,
    HealthResponse,
    IngestSummary,
    VerifyRequest,
    VerifyResponse,
)

__all__ = [
    "ApiError",
    "Engine",
    "ErrorEnvelope",
    "FactCheckPublic",
    "HealthResponse",
    "IngestSummary",
    "Snapshot",
    "VerifyRequest",
    "VerifyResponse",
    "create_app",
]
