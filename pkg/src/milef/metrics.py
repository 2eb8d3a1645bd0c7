"""Exact approximation metrics between nested polytopes.

Relative distance, maximisation and minimisation LP gaps, and the squared
Hausdorff distance. Infinite values are the explicit tag ``INF``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

from gmpy2 import mpq

from .errors import ContractError, EmptySetError, UnboundedError
from .exactgeom import HPolyhedron, VPolytope, lp_solve
from .exactgeom.hv import in_convex_hull
from .exactgeom.linalg import dot
from .exactgeom.lp import INFEASIBLE, OPTIMAL, UNBOUNDED
from .exactgeom.ops import min_sq_distance_to_points
from .exactgeom.rational import Rational


class Infinity:
    """Positive infinity as a tagged value; compares above every rational."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("milef-infinity")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __mul__(self, other):
        if other is self or other > 0:
            return self
        if other == 0:
            return mpq(0)
        raise ContractError("negative multiple of infinity")

    __rmul__ = __mul__


INF = Infinity()
Extended = Union[Rational, Infinity]


def is_inf(x) -> bool:
    return x is INF


def _check_pair(A: VPolytope, B: VPolytope):
    if A.ambient_dim != B.ambient_dim:
        raise ContractError(f"dimension mismatch: {A.ambient_dim} vs {B.ambient_dim}")
    if A.rays or B.rays:
        raise UnboundedError("metrics need bounded polytopes")


def check_nested(A: VPolytope, B: VPolytope) -> None:
    """Raise ContractError naming a vertex of A outside conv(B)."""
    bset = B.vertex_set()
    for a in A.vertices:
        if a not in bset and not in_convex_hull(a, B.vertices):
            raise ContractError(f"A is not contained in B: vertex {tuple(str(x) for x in a)} lies outside")


def _check_orthant(B: VPolytope):
    for w in B.vertices:
        if any(x < 0 for x in w):
            raise ContractError("LP gaps need B inside the non-negative orthant")


# ---------------------------------------------------------------------------
# relative distance


@dataclass(frozen=True)
class RdistResult:
    value: Extended
    vertex: Optional[tuple] = None  # vertex of B that needs the largest lambda
    inner: Optional[tuple] = None  # p in A with vertex = (1+lambda) p - lambda q
    outer: Optional[tuple] = None  # q in A
    direction: Optional[tuple] = None  # c whose projection ratio equals value


def _vertex_lambda(b, verts) -> Tuple[Extended, Optional[tuple], Optional[tuple]]:
    """min lambda with b in (1+lambda)A - lambda A, together with p, q."""
    t = len(verts)
    d = len(b)
    # variables alpha_1..alpha_t, beta_1..beta_t >= 0
    eq = [[verts[i][j] for i in range(t)] + [-verts[i][j] for i in range(t)] for j in range(d)]
    eq.append([1] * t + [-1] * t)
    neg = [[-1 if i == j else 0 for j in range(2 * t)] for i in range(2 * t)]
    P = HPolyhedron(neg, [0] * (2 * t), eq, list(b) + [1], 2 * t)
    r = lp_solve([0] * t + [1] * t, "min", P)
    if r.status == INFEASIBLE:
        return INF, None, None
    lam = r.value
    alpha, beta = r.witness[:t], r.witness[t:]
    p = tuple(sum((alpha[i] * verts[i][j] for i in range(t)), mpq(0)) / (1 + lam) for j in range(d))
    if lam:
        qv = tuple(sum((beta[i] * verts[i][j] for i in range(t)), mpq(0)) / lam for j in range(d))
    else:
        qv = p
    return lam, p, qv


def _separating_direction(b, verts) -> Optional[tuple]:
    """Dual of the vertex LP: max y.b + s with -1 <= y.a + s <= 0 on A; returns y."""
    d = len(b)
    A, rhs = [], []
    for a in verts:
        A.append(list(a) + [1])
        rhs.append(0)
        A.append([-x for x in a] + [-1])
        rhs.append(1)
    r = lp_solve(list(b) + [1], "max", HPolyhedron(A, rhs, (), (), d + 1))
    if r.status != OPTIMAL:
        return None
    return r.witness[:d]


def rdist_certificate(A: VPolytope, B: VPolytope, check: bool = True, direction: bool = True) -> RdistResult:
    """rdist with the vertex of B that needs the largest lambda; ``direction`` also
    solves the dual LP for a projection direction attaining the value."""
    _check_pair(A, B)
    if A.is_empty:
        return RdistResult(mpq(0) if B.is_empty else INF)
    if B.is_empty:
        raise ContractError("A is not contained in B: B is empty")
    if check:
        check_nested(A, B)
    aset = A.vertex_set()
    best = RdistResult(mpq(0))
    for b in B.vertices:
        if b in aset:
            continue
        lam, p, qv = _vertex_lambda(b, A.vertices)
        if lam is INF:
            return RdistResult(INF, b)
        if lam > best.value:
            best = RdistResult(lam, b, p, qv)
    if direction and best.value > 0:
        c = _separating_direction(best.vertex, A.vertices)
        best = RdistResult(best.value, best.vertex, best.inner, best.outer, c)
    return best


def rdist(A: VPolytope, B: VPolytope, check: bool = True) -> Extended:
    """Relative distance of nested polytopes A inside B (exact, or INF)."""
    return rdist_certificate(A, B, check, direction=False).value


def projection_ratio(A: VPolytope, B: VPolytope, c: Sequence) -> Extended:
    """Hausdorff distance of the projections onto c over the width of c(A).

    This is the quantity whose supremum over directions defines rdist.
    """
    va = [dot(c, a) for a in A.vertices]
    vb = [dot(c, b) for b in B.vertices]
    gap = max(min(va) - min(vb), max(vb) - max(va), mpq(0))
    diam = max(va) - min(va)
    if diam == 0:
        return mpq(0) if gap == 0 else INF
    return gap / diam


# ---------------------------------------------------------------------------
# LP gaps


@dataclass(frozen=True)
class GapResult:
    value: Extended
    witness_direction: Optional[tuple] = None
    witness_points: Optional[Tuple[tuple, tuple]] = None  # (point of A, point of B)

    def ratio_from_witness(self, kind: str) -> Optional[Extended]:
        """Recompute the gap from the witness alone (None when no witness)."""
        if self.witness_direction is None or self.witness_points is None:
            return None
        c = self.witness_direction
        a, b = self.witness_points
        ca, cb = dot(c, a), dot(c, b)
        num, den = (cb, ca) if kind == "max" else (ca, cb)
        if den == 0:
            return mpq(0) if num == 0 else INF
        return max(num / den - 1, mpq(0))


def _argbest(c, pts, best):
    vals = [dot(c, p) for p in pts]
    target = best(vals)
    return next(p for p, v in zip(pts, vals) if v == target)


def lp_gap_max(A: VPolytope, B: VPolytope, check: bool = True) -> GapResult:
    """sup over c >= 0 of max_B c.x / max_A c.x, minus 1 (0/0 read as 0)."""
    _check_pair(A, B)
    if A.is_empty or B.is_empty:
        raise EmptySetError("LP gaps need non-empty polytopes")
    _check_orthant(B)
    if check:
        check_nested(A, B)
    d = A.ambient_dim
    rows = [list(v) for v in A.vertices] + [[-1 if i == j else 0 for j in range(d)] for i in range(d)]
    rhs = [1] * len(A.vertices) + [0] * d
    P = HPolyhedron(rows, rhs, (), (), d)
    best = GapResult(mpq(0))
    best_val = None
    for w in B.vertices:
        r = lp_solve(w, "max", P)
        if r.status == UNBOUNDED:
            c = r.witness
            return GapResult(INF, c, (_argbest(c, A.vertices, max), w))
        if best_val is None or r.value > best_val:
            best_val = r.value
            c = r.witness
            if r.value > 1:
                best = GapResult(r.value - 1, c, (_argbest(c, A.vertices, max), w))
    return best


def lp_gap_min(A: VPolytope, B: VPolytope, check: bool = True) -> GapResult:
    """sup over c >= 0 of min_A c.x / min_B c.x, minus 1 (0/0 read as 0, t/0 as INF)."""
    _check_pair(A, B)
    if A.is_empty or B.is_empty:
        raise EmptySetError("LP gaps need non-empty polytopes")
    _check_orthant(B)
    if check:
        check_nested(A, B)
    d = A.ambient_dim
    nA = len(A.vertices)
    # variables (c_1..c_d, rho)
    base_rows = [[-x for x in v] + [1] for v in A.vertices]  # rho - c.v <= 0
    base_rows += [[-1 if i == j else 0 for j in range(d)] + [0] for i in range(d)]  # c >= 0
    base_rhs = [0] * (nA + d)
    obj = [0] * d + [1]
    # infinite case: c >= 0 vanishing at some vertex of B but positive on all of A
    for w in B.vertices:
        P = HPolyhedron(base_rows + [[1] * d + [0]], base_rhs + [1], [list(w) + [0]], [0], d + 1)
        r = lp_solve(obj, "max", P)
        if r.status == OPTIMAL and r.value > 0:
            c = r.witness[:d]
            return GapResult(INF, c, (_argbest(c, A.vertices, min), w))
    best = GapResult(mpq(0))
    best_val = None
    for w in B.vertices:
        rows = base_rows + [[-x for x in u] + [0] for u in B.vertices]  # c.u >= 1
        rhs = base_rhs + [-1] * len(B.vertices)
        P = HPolyhedron(rows, rhs, [list(w) + [0]], [1], d + 1)
        r = lp_solve(obj, "max", P)
        if r.status == INFEASIBLE:
            continue
        if r.status == UNBOUNDED:
            c = r.witness[:d]
            return GapResult(INF, c, (_argbest(c, A.vertices, min), w))
        if best_val is None or r.value > best_val:
            best_val = r.value
            c = r.witness[:d]
            if r.value > 1:
                best = GapResult(r.value - 1, c, (_argbest(c, A.vertices, min), w))
    return best


# ---------------------------------------------------------------------------
# Hausdorff distance


def hausdorff_sq(A: VPolytope, B: VPolytope, check: bool = True) -> Rational:
    """Squared Hausdorff distance for A inside B: max over vertices of B of dist^2 to A."""
    _check_pair(A, B)
    if A.is_empty or B.is_empty:
        raise EmptySetError("Hausdorff distance of an empty set")
    if check:
        check_nested(A, B)
    aset = A.vertex_set()
    best = mpq(0)
    for b in B.vertices:
        if b in aset:
            continue
        d2 = min_sq_distance_to_points(b, A.vertices)
        if d2 > best:
            best = d2
    return best
