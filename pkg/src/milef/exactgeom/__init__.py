"""Exact rational polyhedral kernel."""

from .hv import in_convex_hull, prune_to_vertices, extreme_points, facet_incidence, hull, irredundant, vertices, vertices_by_bases, vpolytope_of_points
from .lp import INFEASIBLE, OPTIMAL, UNBOUNDED, LpResult, dual_certificate, check_dual_certificate, is_feasible, lp_solve
from .ops import closest_point, fourier_motzkin_image, intersect, min_sq_distance, min_sq_distance_to_points, project
from .polyhedron import AffineMap, HPolyhedron, VPolytope
from .rational import QMatrix, QVector, Rational, format_rational, parse_rational, q, qmat, qvec
from .serialize import dumps, from_json, loads, to_json

__all__ = [
    "AffineMap", "HPolyhedron", "VPolytope", "LpResult", "Rational", "QVector", "QMatrix",
    "OPTIMAL", "INFEASIBLE", "UNBOUNDED",
    "lp_solve", "dual_certificate", "check_dual_certificate", "is_feasible",
    "vertices", "vertices_by_bases", "prune_to_vertices", "in_convex_hull", "hull", "irredundant", "extreme_points", "facet_incidence", "vpolytope_of_points",
    "project", "fourier_motzkin_image", "intersect", "min_sq_distance", "min_sq_distance_to_points", "closest_point",
    "q", "qvec", "qmat", "parse_rational", "format_rational",
    "to_json", "from_json", "dumps", "loads",
]
