"""Projection, intersection and exact squared distances."""

from __future__ import annotations

from math import gcd
from typing import List, Optional, Sequence, Tuple

from gmpy2 import mpq

from ..config import Caps, current_caps
from ..errors import ContractError, EmptySetError, ResourceCapError, UnboundedError
from .hv import effective_dim_bound, facet_incidence, hull, irredundant, vertices
from .linalg import project_to_affine_hull, sq_norm, sub
from .lp import OPTIMAL, is_feasible, lp_solve
from .polyhedron import AffineMap, HPolyhedron, VPolytope
from .rational import Rational, qvec


def intersect(P: HPolyhedron, S: HPolyhedron) -> HPolyhedron:
    """Concatenated constraint system of P and S."""
    if P.ambient_dim != S.ambient_dim:
        raise ContractError(f"intersect: dimensions {P.ambient_dim} and {S.ambient_dim} differ")
    return HPolyhedron(
        P.ineq_lhs + S.ineq_lhs, P.ineq_rhs + S.ineq_rhs, P.eq_lhs + S.eq_lhs, P.eq_rhs + S.eq_rhs, P.ambient_dim
    )


def map_vpolytope(V: VPolytope, f: AffineMap) -> Tuple[list, list]:
    """Images of vertices (affine) and rays (linear part)."""
    if f.source_dim != V.ambient_dim:
        raise ContractError(f"map expects R^{f.source_dim}, got R^{V.ambient_dim}")
    pts = sorted({f(v) for v in V.vertices})
    dirs = sorted({r2 for r2 in (f.linear_part(r) for r in V.rays) if any(r2)})
    return pts, dirs


def project(P: HPolyhedron, f: AffineMap, caps: Optional[Caps] = None) -> HPolyhedron:
    """Exact image f(P).

    Pointed polyhedra within the dimension cap go through their vertices and rays;
    everything else is handled by Fourier-Motzkin elimination.
    """
    if f.source_dim != P.ambient_dim:
        raise ContractError(f"project: map source R^{f.source_dim} vs polyhedron in R^{P.ambient_dim}")
    if f.target_dim < 1:
        raise ContractError("project: target dimension must be at least 1")
    caps = caps or current_caps()
    if effective_dim_bound(P) <= caps.max_dim:
        try:
            V = vertices(P, caps)
        except UnboundedError:
            V = None
        if V is not None:
            if V.is_empty:
                return HPolyhedron([[0] * f.target_dim], [-1], (), (), f.target_dim)
            pts, dirs = map_vpolytope(V, f)
            return hull(pts, dirs)
    return fourier_motzkin_image(P, f)


def _norm_row(coeffs: List[Rational], rhs: Rational) -> Tuple[tuple, Rational]:
    den = 1
    for x in list(coeffs) + [rhs]:
        dd = int(x.denominator)
        den = den // gcd(den, dd) * dd
    ints = [int(x * den) for x in coeffs] + [int(rhs * den)]
    g = 0
    for v in ints:
        g = gcd(g, v)
    g = g or 1
    return tuple(mpq(v // g) for v in ints[:-1]), mpq(ints[-1] // g)


def fourier_motzkin_image(P: HPolyhedron, f: AffineMap) -> HPolyhedron:
    """f(P) by eliminating x from {(x, y) : x in P, y = f(x)}."""
    n, k = P.ambient_dim, f.target_dim
    if not is_feasible(P):
        return HPolyhedron([[0] * k], [-1], (), (), k)
    ineq = [list(a) + [mpq(0)] * k for a in P.ineq_lhs]
    ib = list(P.ineq_rhs)
    eq = [list(e) + [mpq(0)] * k for e in P.eq_lhs]
    eb = list(P.eq_rhs)
    for i, (row, t) in enumerate(zip(f.matrix, f.offset)):
        r = [-x for x in row] + [mpq(0)] * k
        r[n + i] = mpq(1)
        eq.append(r)
        eb.append(t)
    # substitute every equality that still involves some x
    kept_eq = []
    while eq:
        row, rhs = eq.pop(), eb.pop()
        j = next((j for j in range(n) if row[j]), None)
        if j is None:
            kept_eq.append((row, rhs))
            continue
        piv = row[j]

        def elim(r2, b2, row=row, rhs=rhs, j=j, piv=piv):
            c = r2[j]
            if not c:
                return r2, b2
            fct = c / piv
            return [a - fct * b for a, b in zip(r2, row)], b2 - fct * rhs

        ineq, ib = map(list, zip(*[elim(r, b) for r, b in zip(ineq, ib)])) if ineq else ([], [])
        if eq:
            eq, eb = map(list, zip(*[elim(r, b) for r, b in zip(eq, eb)]))
    E = [r for r, _ in kept_eq]
    F = [b for _, b in kept_eq]
    for j in range(n):
        pos = [(r, b) for r, b in zip(ineq, ib) if r[j] > 0]
        neg = [(r, b) for r, b in zip(ineq, ib) if r[j] < 0]
        new = [(r, b) for r, b in zip(ineq, ib) if r[j] == 0]
        for rp, bp in pos:
            for rn, bn in neg:
                cp, cn = rp[j], -rn[j]
                new.append(([cn * a + cp * b for a, b in zip(rp, rn)], cn * bp + cp * bn))
        rows = list(dict.fromkeys(_norm_row(r, b) for r, b in new if any(r) or b < 0))
        rows = _drop_redundant(rows, E, F, n + k)
        ineq = [list(r) for r, _ in rows]
        ib = [b for _, b in rows]
    out = HPolyhedron([r[n:] for r in ineq], ib, [r[n:] for r in E], F, k)
    return irredundant(out)


def _drop_redundant(rows, E, F, d):
    cur = list(rows)
    pos = 0
    while pos < len(cur):
        a, b = cur[pos]
        others = cur[:pos] + cur[pos + 1:]
        Q = HPolyhedron([r for r, _ in others], [x for _, x in others], E, F, d)
        r = lp_solve(a, "max", Q)
        if r.status == OPTIMAL and r.value <= b:
            cur.pop(pos)
        else:
            pos += 1
    return cur


def min_sq_distance(p: Sequence, P: HPolyhedron, caps: Optional[Caps] = None) -> Rational:
    """Exact squared Euclidean distance from p to a non-empty polytope P.

    Every face is visited; p is projected onto the face's affine hull and the
    projection is kept when it lies in P.
    """
    p = qvec(p)
    if len(p) != P.ambient_dim:
        raise ContractError(f"point of length {len(p)} vs polytope in R^{P.ambient_dim}")
    V = vertices(P, caps)
    if V.is_empty:
        raise EmptySetError("distance to an empty polytope")
    if V.rays:
        raise UnboundedError("distance is only supported for bounded polytopes")
    return min_sq_distance_to_points(p, V.vertices, caps)


def min_sq_distance_to_points(p: Sequence, verts: Sequence, caps: Optional[Caps] = None) -> Rational:
    """Squared distance from p to conv(verts) by face enumeration."""
    return closest_point(p, verts, caps)[0]


def closest_point(p: Sequence, verts: Sequence, caps: Optional[Caps] = None) -> Tuple[Rational, tuple]:
    """(squared distance, nearest point) from p to conv(verts)."""
    verts = sorted({qvec(v) for v in verts})
    if not verts:
        raise EmptySetError("distance to an empty polytope")
    p = qvec(p)
    if len(verts) == 1:
        return sq_norm(sub(p, verts[0])), verts[0]
    H = hull(verts)
    if H.contains(p):
        return mpq(0), p
    facets = facet_incidence(H, verts)
    caps = caps or current_caps()
    faces = {frozenset(range(len(verts)))}
    frontier = list({fc for fc in facets if fc})
    faces.update(frontier)
    while frontier:
        nxt = []
        for F in frontier:
            for G in facets:
                I = F & G
                if I and I not in faces:
                    faces.add(I)
                    nxt.append(I)
        if len(faces) > caps.max_faces:
            raise ResourceCapError(f"max_faces cap exceeded ({len(faces)} > {caps.max_faces})")
        frontier = nxt
    best = None
    for F in sorted(faces, key=lambda s: sorted(s)):
        x = project_to_affine_hull(p, [verts[i] for i in sorted(F)])
        if H.contains(x):
            dist = sq_norm(sub(p, x))
            if best is None or dist < best[0]:
                best = (dist, x)
    return best
