"""Exact network simplex for minimum cost circulations with a budget on usage fees."""

from .instance import Edge, Flow, Instance, parse_instance, serialize_instance
from .oracle import OracleResult, enumerate_optimum, fuzz_equivalence
from .solver import SolveOptions, SolveReport, certify, check_report, solve

__all__ = [
    "Edge",
    "Flow",
    "Instance",
    "OracleResult",
    "SolveOptions",
    "SolveReport",
    "certify",
    "check_report",
    "enumerate_optimum",
    "fuzz_equivalence",
    "parse_instance",
    "serialize_instance",
    "solve",
]
