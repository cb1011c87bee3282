"""Subtrajectory clustering under the continuous Fréchet distance."""

from .curves import BreakpointSet, PolygonalCurve, build_curve, point_at, subcurve
from .frechet import (compute_frechet, decide_frechet, free_space, max_reachable_breakpoints,
                      segment_pair_test)
from .simplify import (agarwal_simplify, build_sigma_family, ell_simplification, extract_sigma_minus,
                       extract_sigma_plus)
from .explicit import ExactOracle, IncidenceMatrix, SubcurveDistanceOracle, build_r0, build_r1, query
from .oracles import build_general_oracle, build_segment_oracle, general_query, segment_query
from .cover import InfeasibleError, bg_cover_search, bg_hitting_set, greedy_cover
from .clustering import ClusteringConfig, ClusteringResult, cluster, phi, verify_cover

__all__ = [
    "BreakpointSet", "PolygonalCurve", "build_curve", "point_at", "subcurve",
    "compute_frechet", "decide_frechet", "free_space", "max_reachable_breakpoints", "segment_pair_test",
    "agarwal_simplify", "build_sigma_family", "ell_simplification", "extract_sigma_minus", "extract_sigma_plus",
    "ExactOracle", "IncidenceMatrix", "SubcurveDistanceOracle", "build_r0", "build_r1", "query",
    "build_general_oracle", "build_segment_oracle", "general_query", "segment_query",
    "InfeasibleError", "bg_cover_search", "bg_hitting_set", "greedy_cover",
    "ClusteringConfig", "ClusteringResult", "cluster", "phi", "verify_cover",
]
