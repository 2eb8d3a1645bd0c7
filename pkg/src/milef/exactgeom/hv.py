"""Conversions between H- and V-descriptions, redundancy removal, pruning."""

from __future__ import annotations

from itertools import combinations
from math import gcd
from typing import List, Optional, Sequence, Tuple

from gmpy2 import mpq

from ..config import Caps, check_cap
from ..errors import ContractError, EmptyHullError, UnboundedError
from .dd import cone_generators
from .linalg import dot, nullspace, rank, solve
from .lp import INFEASIBLE, OPTIMAL, lp_solve
from .polyhedron import HPolyhedron, VPolytope
from .rational import QVector, q, qvec


def _int_row(coeffs: Sequence) -> List[int]:
    """Scale a rational row by the lcm of its denominators."""
    den = 1
    for x in coeffs:
        dd = int(q(x).denominator)
        den = den // gcd(den, dd) * dd
    return [int(q(x) * den) for x in coeffs]


def effective_dim_bound(P: HPolyhedron) -> int:
    """Ambient dimension minus the rank of the explicit equalities."""
    return P.ambient_dim - (rank(P.eq_lhs, P.ambient_dim) if P.eq_lhs else 0)


def vertices(P: HPolyhedron, caps: Optional[Caps] = None) -> VPolytope:
    """Vertices and extreme rays of a pointed polyhedron.

    Explicit equalities are solved first and the double-description method runs
    in the remaining coordinates, so the resource cap applies to that reduced
    dimension. Raises UnboundedError when P is non-empty but contains a line.
    """
    d = P.ambient_dim
    if P.trivially_infeasible:
        return VPolytope((), (), d)
    if P.eq_lhs:
        x0 = solve(P.eq_lhs, P.eq_rhs)
        if x0 is None:
            return VPolytope((), (), d)
        N = nullspace(P.eq_lhs, d)
        check_cap("max_dim", len(N), caps)
        if not N:
            return VPolytope([x0] if P.contains(x0) else [], (), d)
        A = [[dot(a, col) for col in N] for a in P.ineq_lhs]
        b = [bi - dot(a, x0) for a, bi in zip(P.ineq_lhs, P.ineq_rhs)]
        if not A:
            raise UnboundedError("polyhedron contains a line, so it has no vertices")
        inner = _vertices_free(A, b, len(N))
        lift = lambda t, off: tuple(
            (off[j] if off is not None else 0) + sum((tk * N[k][j] for k, tk in enumerate(t) if tk), mpq(0))
            for j in range(d)
        )
        return VPolytope([lift(v, x0) for v in inner.vertices], [lift(r, None) for r in inner.rays], d)
    check_cap("max_dim", d, caps)
    return _vertices_free(P.ineq_lhs, P.ineq_rhs, d)


def _vertices_free(A, b, d) -> VPolytope:
    # homogenise: (x0, x) with x0 >= 0 and b x0 - A x >= 0
    ineqs = [[1] + [0] * d]
    for a, bi in zip(A, b):
        ineqs.append(_int_row([bi] + [-x for x in a]))
    rays, lines = cone_generators(ineqs, [], d + 1)
    verts, dirs = [], []
    for r, _ in rays:
        if r[0] > 0:
            verts.append(tuple(mpq(x, r[0]) for x in r[1:]))
        elif any(r[1:]):
            dirs.append(tuple(mpq(x) for x in r[1:]))
    if not verts:
        return VPolytope((), (), d)
    if lines:
        raise UnboundedError("polyhedron contains a line, so it has no vertices")
    return VPolytope(verts, dirs, d)


def prune_to_vertices(points: Sequence[Sequence]) -> Tuple[QVector, ...]:
    """Vertices of conv(points) without building a hull.

    0/1 points are always extreme. Low dimensions go through the facet
    description; above that each point gets one membership LP.
    """
    pts = sorted({qvec(p) for p in points})
    if len(pts) <= 2 or all(x == 0 or x == 1 for p in pts for x in p):
        return tuple(pts)
    d = len(pts[0])
    if d <= 6:
        return extreme_points(pts)
    out = []
    for i, p in enumerate(pts):
        others = pts[:i] + pts[i + 1:]
        if not in_convex_hull(p, others):
            out.append(p)
    return tuple(out)


def in_convex_hull(p: Sequence, points: Sequence[Sequence]) -> bool:
    """Exact membership LP: is p a convex combination of points?"""
    pts = list(points)
    if not pts:
        return False
    t = len(pts)
    d = len(p)
    eq = [[pts[i][j] for i in range(t)] for j in range(d)] + [[1] * t]
    rhs = list(p) + [1]
    neg = [[-1 if i == j else 0 for j in range(t)] for i in range(t)]
    r = lp_solve((0,) * t, "max", HPolyhedron(neg, [0] * t, eq, rhs, t))
    return r.status != INFEASIBLE


def hull(points: Sequence[Sequence], rays: Sequence[Sequence] = ()) -> HPolyhedron:
    """Irredundant H-description of conv(points) + cone(rays).

    The affine hull is returned as equality rows; each inequality row is a facet.
    """
    pts = [qvec(p) for p in points]
    if not pts:
        raise EmptyHullError("convex hull of an empty point set")
    d = len(pts[0])
    if any(len(p) != d for p in pts) or any(len(r) != d for r in rays):
        raise ContractError("hull: points of different dimensions")
    ineqs = [_int_row([1] + list(p)) for p in sorted(set(pts))]
    ineqs += [_int_row([0] + list(qvec(r))) for r in rays]
    gens, lines = cone_generators(ineqs, [], d + 1)
    A, b = [], []
    for r, _ in gens:
        if any(r[1:]):
            A.append([-x for x in r[1:]])
            b.append(r[0])
    E = [[-x for x in l[1:]] for l in lines]
    f = [l[0] for l in lines]
    order = sorted(range(len(A)), key=lambda i: (A[i], b[i]))
    return HPolyhedron([A[i] for i in order], [b[i] for i in order], E, f, d)


def extreme_points(points: Sequence[Sequence]) -> Tuple[QVector, ...]:
    """The vertices of conv(points), sorted."""
    pts = sorted({qvec(p) for p in points})
    if len(pts) <= 2:
        return tuple(pts)
    H = hull(pts)
    d = H.ambient_dim
    out = []
    for p in pts:
        tight = [a for a, bi in zip(H.ineq_lhs, H.ineq_rhs) if dot(a, p) == bi]
        if rank(list(tight) + list(H.eq_lhs), d) == d:
            out.append(p)
    return tuple(out)


def vpolytope_of_points(points: Sequence[Sequence], ambient_dim: Optional[int] = None) -> VPolytope:
    pts = list(points)
    if not pts:
        if ambient_dim is None:
            raise ContractError("need ambient_dim for an empty point set")
        return VPolytope((), (), ambient_dim)
    return VPolytope(extreme_points(pts), (), ambient_dim or len(pts[0]))


def facet_incidence(P: HPolyhedron, verts: Sequence[QVector]) -> List[frozenset]:
    """For each inequality row, the indices of the vertices it is tight on."""
    return [frozenset(i for i, v in enumerate(verts) if dot(a, v) == bi) for a, bi in zip(P.ineq_lhs, P.ineq_rhs)]


def irredundant(P: HPolyhedron) -> HPolyhedron:
    """Remove redundant inequalities by per-row LP tests; implicit equalities become eq rows.

    A row a.x <= b is an implicit equality when min a.x over P equals b, and it is
    redundant when max a.x over P without that row stays <= b. An empty P is
    returned as the single row 0 <= -1.
    """
    d = P.ambient_dim
    if lp_solve((0,) * d, "max", P).status == INFEASIBLE:
        return HPolyhedron([[0] * d], [-1], (), (), d)
    A = list(P.ineq_lhs)
    b = list(P.ineq_rhs)
    eqA, eqb = list(P.eq_lhs), list(P.eq_rhs)
    ineq_idx = []
    for i, (a, bi) in enumerate(zip(A, b)):
        if not any(a):
            continue
        r = lp_solve(a, "min", P)
        if r.status == OPTIMAL and r.value == bi:
            eqA.append(a)
            eqb.append(bi)
        else:
            ineq_idx.append(i)
    # keep an independent subset of the equalities
    keepE, keepf = [], []
    for e, fi in zip(eqA, eqb):
        if rank(keepE + [e], d) > len(keepE):
            keepE.append(e)
            keepf.append(fi)
    cur = list(ineq_idx)
    pos = 0
    while pos < len(cur):
        i = cur[pos]
        others = [j for j in cur if j != i]
        Q = HPolyhedron([A[j] for j in others], [b[j] for j in others], keepE, keepf, d)
        r = lp_solve(A[i], "max", Q)
        if r.status == OPTIMAL and r.value <= b[i]:
            cur.pop(pos)
        else:
            pos += 1
    return HPolyhedron([A[j] for j in cur], [b[j] for j in cur], keepE, keepf, d)


def vertices_by_bases(P: HPolyhedron) -> VPolytope:
    """Brute-force vertex enumeration: solve every square tight subsystem of full rank.

    Exponential; used as an independent cross-check on small bounded inputs.
    """
    d = P.ambient_dim
    E = list(P.eq_lhs)
    f = list(P.eq_rhs)
    r = rank(E, d) if E else 0
    need = d - r
    A, b = list(P.ineq_lhs), list(P.ineq_rhs)
    found = set()
    for S in combinations(range(len(A)), need):
        rows = E + [A[i] for i in S]
        if rank(rows, d) != d:
            continue
        x = solve(rows, f + [b[i] for i in S])
        if x is not None and P.contains(x):
            found.add(x)
    return VPolytope(found, (), d)
