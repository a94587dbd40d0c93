"""Pydantic schemas package."""

from graphinv.schemas.errors import ErrorDetail, ErrorResponse
from graphinv.schemas.reports import (
    CorpusBucket,
    CorpusEntry,
    CorpusReport,
    ExtReport,
    FDReport,
    GraphInfo,
    GroupInfo,
    KDataReport,
    LatticeReport,
    MonoidReport,
    Report,
    TailReport,
    VerdictReport,
)

__all__ = [
    "CorpusBucket",
    "CorpusEntry",
    "CorpusReport",
    "ErrorDetail",
    "ErrorResponse",
    "ExtReport",
    "FDReport",
    "GraphInfo",
    "GroupInfo",
    "KDataReport",
    "LatticeReport",
    "MonoidReport",
    "Report",
    "TailReport",
    "VerdictReport",
]
