"""Positive NAE-3SAT to surface triangulation reduction with exact spin counting."""

from .formula import PnaeFormula, connectify, count_nae_witnesses, parse, replication_plan
from .reduction import build, stats, verify
from .spins import count_satisfying, energy, enumerate_satisfying, is_satisfying, serious_edges
from .surface import RotationSystem, dual_graph, from_faces, topology, trace_faces, validate

__all__ = [
    "PnaeFormula",
    "RotationSystem",
    "build",
    "connectify",
    "count_nae_witnesses",
    "count_satisfying",
    "dual_graph",
    "energy",
    "enumerate_satisfying",
    "from_faces",
    "is_satisfying",
    "parse",
    "replication_plan",
    "serious_edges",
    "stats",
    "topology",
    "trace_faces",
    "validate",
    "verify",
]
