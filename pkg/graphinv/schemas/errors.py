"""Pydantic schemas for error reports."""

from typing import Any

from pydantic import BaseModel, Field


class ErrorDetail(BaseModel):
    """Detailed error information with actionable guidance."""

    code: str = Field(..., description="Machine-readable error code")
    message: str = Field(..., description="Human-readable error message")
    hint: str | None = Field(None, description="Actionable guidance to fix the error")
    detail: dict[str, Any] = Field(default_factory=dict, description="Structured context")

    model_config = {
        "json_schema_extra": {
            "example": {
                "code": "unknown_vertex",
                "message": "Edge 'e' uses undeclared vertex 'x'",
                "hint": "Declare every vertex with a 'vertex <id>' line before using it.",
                "detail": {"vertex": "x", "line": 3},
            }
        }
    }


class ErrorResponse(BaseModel):
    """Standard error report wrapper."""

    error: ErrorDetail
