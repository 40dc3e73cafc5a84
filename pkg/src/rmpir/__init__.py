"""Robust private information retrieval over binary Reed-Muller codes."""

from .errors import (
    DecodingFailure,
    Infeasible,
    PlanNotFound,
    RMPIRError,
)
from .params import SchemeParams, derive_params
from .planning import QueryPlan, plan_queries, validate_plan
from .poly import MultilinearPoly
from .protocol import FileSystem, encode_storage, retrieve
from .rm import RMCode, rm_code

__all__ = [
    "DecodingFailure",
    "FileSystem",
    "Infeasible",
    "MultilinearPoly",
    "PlanNotFound",
    "QueryPlan",
    "RMCode",
    "RMPIRError",
    "SchemeParams",
    "derive_params",
    "encode_storage",
    "plan_queries",
    "retrieve",
    "rm_code",
    "validate_plan",
]
