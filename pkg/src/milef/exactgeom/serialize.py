"""JSON encoding of polyhedral values; rationals travel as "p/q" strings."""

from __future__ import annotations

import json
from typing import Any, Dict

from ..errors import ContractError
from .polyhedron import AffineMap, HPolyhedron, VPolytope
from .rational import format_rational, parse_rational


def _vec(v):
    return [format_rational(x) for x in v]


def _mat(M):
    return [_vec(r) for r in M]


def to_json(obj) -> Dict[str, Any]:
    if isinstance(obj, HPolyhedron):
        return {
            "type": "HPolyhedron",
            "ambient_dim": obj.ambient_dim,
            "ineq_lhs": _mat(obj.ineq_lhs),
            "ineq_rhs": _vec(obj.ineq_rhs),
            "eq_lhs": _mat(obj.eq_lhs),
            "eq_rhs": _vec(obj.eq_rhs),
        }
    if isinstance(obj, VPolytope):
        return {
            "type": "VPolytope",
            "ambient_dim": obj.ambient_dim,
            "vertices": _mat(obj.vertices),
            "rays": _mat(obj.rays),
        }
    if isinstance(obj, AffineMap):
        return {
            "type": "AffineMap",
            "source_dim": obj.source_dim,
            "matrix": _mat(obj.matrix),
            "offset": _vec(obj.offset),
        }
    raise ContractError(f"cannot serialise {type(obj).__name__}")


def _get(d, key, where):
    if not isinstance(d, dict) or key not in d:
        raise ContractError(f"{where}: missing field '{key}'")
    return d[key]


def _pvec(v, where):
    if not isinstance(v, list):
        raise ContractError(f"{where}: expected an array")
    return [parse_rational(x, f"{where}[{i}]") for i, x in enumerate(v)]


def _pmat(M, where):
    if not isinstance(M, list):
        raise ContractError(f"{where}: expected an array of rows")
    return [_pvec(r, f"{where}[{i}]") for i, r in enumerate(M)]


def _dim(d, key, where):
    v = _get(d, key, where)
    if not isinstance(v, int) or isinstance(v, bool):
        raise ContractError(f"{where}.{key}: expected an integer")
    return v


def from_json(d: Dict[str, Any]):
    kind = _get(d, "type", "object")
    if kind == "HPolyhedron":
        return HPolyhedron(
            _pmat(_get(d, "ineq_lhs", kind), "ineq_lhs"),
            _pvec(_get(d, "ineq_rhs", kind), "ineq_rhs"),
            _pmat(d.get("eq_lhs", []), "eq_lhs"),
            _pvec(d.get("eq_rhs", []), "eq_rhs"),
            _dim(d, "ambient_dim", kind),
        )
    if kind == "VPolytope":
        return VPolytope(
            _pmat(_get(d, "vertices", kind), "vertices"),
            _pmat(d.get("rays", []), "rays"),
            _dim(d, "ambient_dim", kind),
        )
    if kind == "AffineMap":
        return AffineMap(_pmat(_get(d, "matrix", kind), "matrix"), _pvec(_get(d, "offset", kind), "offset"),
                         _dim(d, "source_dim", kind))
    raise ContractError(f"unknown object type {kind!r}")


def dumps(obj) -> str:
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    data = to_json(obj) if not isinstance(obj, (dict, list)) else obj
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def loads(text: str):
    return from_json(json.loads(text))
