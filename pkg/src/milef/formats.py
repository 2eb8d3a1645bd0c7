"""JSON layer for MILEFs, bundles, certificates and reports.

Rationals are "p/q" strings, +infinity is the string "inf", and every object
carries a "type" tag.
"""

from __future__ import annotations

from typing import Any, Dict, Optional

from .errors import ContractError
from .exactgeom import AffineMap, HPolyhedron, VPolytope, format_rational
from .exactgeom.serialize import _get, _pmat, _pvec, from_json, to_json
from .lattice import WidthCertificate
from .metrics import GapResult, RdistResult, is_inf
from .milefcore import LefReport, Milef, SliceCertificate
from .zoo import FormulationBundle, Graph, VerifyReport


def ext(x) -> Optional[str]:
    """Rational, INF or None to its JSON form."""
    if x is None:
        return None
    if is_inf(x):
        return "inf"
    return format_rational(x)


def _vec(v):
    return None if v is None else [format_rational(x) for x in v]


def milef_to_json(M: Milef) -> Dict[str, Any]:
    return {"type": "Milef", "Q": to_json(M.Q), "sigma": to_json(M.sigma), "pi": to_json(M.pi), "m": M.m, "k": M.k}


def _typed(d, key, cls, where):
    obj = from_json(_get(d, key, where))
    if not isinstance(obj, cls):
        raise ContractError(f"{where}.{key}: expected {cls.__name__}")
    return obj


def milef_from_json(d: Dict[str, Any]) -> Milef:
    Q = _typed(d, "Q", HPolyhedron, "Milef")
    sigma = _typed(d, "sigma", AffineMap, "Milef")
    pi = _typed(d, "pi", AffineMap, "Milef")
    m = d.get("m")
    if m is not None and (not isinstance(m, int) or isinstance(m, bool)):
        raise ContractError("Milef.m: expected an integer")
    return Milef(Q, sigma, pi, m)


def bundle_to_json(b: FormulationBundle, family: Optional[str] = None) -> Dict[str, Any]:
    out = {
        "type": "FormulationBundle",
        "family": family,
        "target": b.target_name,
        "n": b.n,
        "milef": milef_to_json(b.milef),
        "expected_vertices": to_json(b.expected_vertices) if b.expected_vertices is not None else None,
        "graph": b.graph.to_json() if b.graph else None,
        "notes": list(b.notes),
        "verify_rows": None,
    }
    if b.verify_rows:
        A, rhs = b.verify_rows
        out["verify_rows"] = {"lhs": [_vec(r) for r in A], "rhs": _vec(rhs)}
    return out


def bundle_from_json(d: Dict[str, Any]) -> FormulationBundle:
    M = milef_from_json(_get(d, "milef", "FormulationBundle"))
    ev = d.get("expected_vertices")
    V = from_json(ev) if ev is not None else None
    if V is not None and not isinstance(V, VPolytope):
        raise ContractError("FormulationBundle.expected_vertices: expected VPolytope")
    g = d.get("graph")
    G = Graph(g["n"], tuple(tuple(e) for e in g["edges"])) if g else None
    vr = d.get("verify_rows")
    rows = None
    if vr:
        rows = (tuple(tuple(r) for r in _pmat(vr["lhs"], "verify_rows.lhs")), tuple(_pvec(vr["rhs"], "verify_rows.rhs")))
    n = _get(d, "n", "FormulationBundle")
    return FormulationBundle(M, _get(d, "target", "FormulationBundle"), n, V, G, tuple(d.get("notes", [])), rows)


def load_milef_like(d: Dict[str, Any]) -> Milef:
    """Accept either a Milef or a FormulationBundle document."""
    kind = _get(d, "type", "document")
    if kind == "Milef":
        return milef_from_json(d)
    if kind == "FormulationBundle":
        return bundle_from_json(d).milef
    raise ContractError(f"expected a Milef or FormulationBundle document, got type {kind!r}")


def slice_certificate_to_json(c: SliceCertificate) -> Dict[str, Any]:
    return {
        "type": "SliceCertificate",
        "delta": format_rational(c.delta),
        "family": [
            {
                "eq_lhs": [_vec(r) for r in S.rows],
                "eq_rhs": _vec(S.rhs),
                "sigma_lhs": [_vec(r) for r in S.z_rows],
                "sigma_rhs": _vec(S.z_rhs),
            }
            for S in c.family.subspaces
        ],
        "ambient_dim": c.family.ambient_dim,
        "family_size": len(c.family),
        "fiber_cover_checked": c.fiber_cover_checked,
        "sandwich_checked": c.sandwich_checked,
        "rdist_achieved": ext(c.rdist_achieved),
        "theoretical_size_bound": format_rational(c.theoretical_size_bound),
        "steps": [
            {
                "depth": s["depth"],
                "direction": list(s["direction"]),
                "levels": list(s["levels"]),
                "rdist_before": ext(s["rdist_before"]),
                "count_bound": ext(s["count_bound"]),
                "bound_certified": s["bound_certified"],
                "width": ext(s["width"]),
                "width_exact": s["width_exact"],
                "width_bound": ext(s["width_bound"]),
            }
            for s in c.steps
        ],
    }


def lef_report_to_json(r: LefReport) -> Dict[str, Any]:
    return {
        "rdist_achieved": ext(r.rdist_achieved),
        "epsilon_bound": format_rational(r.epsilon_bound),
        "inequality_count": r.inequality_count,
        "irredundant_count": r.irredundant_count,
        "slice_count_bound": r.slice_count_bound,
        "theoretical_bound": format_rational(r.theoretical_bound),
        "slices": r.slices,
        "hull_vertices": r.hull_vertices,
        "contains_target": r.contains_target,
        "balas_verified": r.balas_verified,
    }


def width_to_json(w: WidthCertificate) -> Dict[str, Any]:
    return {
        "type": "WidthCertificate",
        "direction": list(w.direction),
        "width": format_rational(w.width),
        "max_point": _vec(w.max_point),
        "min_point": _vec(w.min_point),
        "exact": w.exact,
        "label": "exact" if w.exact else "upper bound",
        "search_radius": w.search_radius,
    }


def rdist_to_json(r: RdistResult) -> Dict[str, Any]:
    return {
        "type": "rdist",
        "value": ext(r.value),
        "vertex": _vec(r.vertex),
        "direction": _vec(r.direction),
    }


def gap_to_json(g: GapResult, kind: str) -> Dict[str, Any]:
    pts = g.witness_points
    return {
        "type": f"lp_gap_{kind}",
        "value": ext(g.value),
        "witness_direction": _vec(g.witness_direction),
        "witness_points": [_vec(p) for p in pts] if pts else None,
    }


def verify_report_to_json(r: VerifyReport) -> Dict[str, Any]:
    out = r.to_json()
    out["type"] = "VerifyReport"
    return out
