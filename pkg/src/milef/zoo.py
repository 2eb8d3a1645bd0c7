"""Concrete MILEFs for combinatorial polytopes, exhaustive oracles for the
polytopes themselves, and an exact bimodularity sweep."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .config import Caps, check_cap, current_caps
from .errors import ContractError
from .exactgeom import AffineMap, HPolyhedron, VPolytope, hull, vertices
from .exactgeom.linalg import int_det, rank
from .exactgeom.rational import format_rational
from .milefcore import Milef, eliminate_private, fiber_vertices

Edge = Tuple[int, int]


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on 0..n-1; every edge (v, w) has v < w and is oriented v -> w."""

    n: int
    edges: Tuple[Edge, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ContractError("graph needs at least one vertex")
        es = tuple(sorted({(min(e), max(e)) for e in self.edges}))
        for v, w in es:
            if v == w or not (0 <= v < self.n and 0 <= w < self.n):
                raise ContractError(f"bad edge {(v, w)} for n={self.n}")
        object.__setattr__(self, "edges", es)

    @property
    def m(self) -> int:
        return len(self.edges)

    def delta(self, v: int) -> List[int]:
        return [i for i, e in enumerate(self.edges) if v in e]

    def delta_out(self, v: int) -> List[int]:
        return [i for i, (a, _) in enumerate(self.edges) if a == v]

    def delta_in(self, v: int) -> List[int]:
        return [i for i, (_, b) in enumerate(self.edges) if b == v]

    def without(self, edge: Edge) -> "Graph":
        e = (min(edge), max(edge))
        if e not in self.edges:
            raise ContractError(f"edge {edge} not in graph")
        return Graph(self.n, tuple(x for x in self.edges if x != e))

    def to_json(self):
        return {"n": self.n, "edges": [list(e) for e in self.edges]}


def CompleteGraph(n: int) -> Graph:
    return Graph(n, tuple(itertools.combinations(range(n), 2)))


def _graph_cap(n: int, caps: Optional[Caps], what="max_graph_n"):
    check_cap(what, n, caps)


# ---------------------------------------------------------------------------
# oracles

KINDS = ("matching", "perfect_matching", "vjoin", "cut", "odd_cut", "tour")


def _indicator(G: Graph, chosen) -> tuple:
    s = set(chosen)
    return tuple(1 if i in s else 0 for i in range(G.m))


def _degrees(G: Graph, subset) -> List[int]:
    deg = [0] * G.n
    for i in subset:
        v, w = G.edges[i]
        deg[v] += 1
        deg[w] += 1
    return deg


def _cut(G: Graph, S) -> tuple:
    S = set(S)
    return tuple(1 if (v in S) != (w in S) else 0 for v, w in G.edges)


def oracle_points(kind: str, G: Graph, caps: Optional[Caps] = None) -> List[tuple]:
    """Characteristic vectors of the combinatorial objects, by exhaustive enumeration."""
    _graph_cap(G.n, caps)
    if kind in ("matching", "perfect_matching", "vjoin"):
        out = []
        for mask in range(1 << G.m):
            sub = [i for i in range(G.m) if mask >> i & 1]
            deg = _degrees(G, sub)
            if kind == "matching":
                ok = all(d <= 1 for d in deg)
            elif kind == "perfect_matching":
                ok = all(d == 1 for d in deg)
            else:
                ok = all(d % 2 == 1 for d in deg)
            if ok:
                out.append(_indicator(G, sub))
        return sorted(out)
    if kind in ("cut", "odd_cut"):
        pts = set()
        for mask in range(1 << G.n):
            S = [v for v in range(G.n) if mask >> v & 1]
            if kind == "odd_cut" and len(S) % 2 == 0:
                continue
            pts.add(_cut(G, S))
        return sorted(pts)
    if kind == "tour":
        if G.m != G.n * (G.n - 1) // 2:
            raise ContractError("tours are enumerated on complete graphs only")
        index = {e: i for i, e in enumerate(G.edges)}
        pts = set()
        for perm in itertools.permutations(range(1, G.n)):
            cyc = (0,) + perm
            used = [index[(min(a, b), max(a, b))] for a, b in zip(cyc, cyc[1:] + cyc[:1])]
            pts.add(_indicator(G, used))
        return sorted(pts)
    raise ContractError(f"unknown oracle kind {kind!r}; expected one of {KINDS}")


def oracle_vertices(kind: str, n_or_graph, caps: Optional[Caps] = None) -> VPolytope:
    """Every listed 0/1 vector is a vertex of its hull, so the list is the vertex set."""
    G = n_or_graph if isinstance(n_or_graph, Graph) else CompleteGraph(n_or_graph)
    return VPolytope(oracle_points(kind, G, caps), (), G.m)


def odd_cut_dominant_box_vertices(n: int, caps: Optional[Caps] = None) -> VPolytope:
    """Vertices of (conv(odd cuts) + nonnegative orthant) intersected with [0,1]^E."""
    G = CompleteGraph(n)
    cuts = oracle_points("odd_cut", G, caps)
    rays = [tuple(int(i == j) for j in range(G.m)) for i in range(G.m)]
    H = hull(cuts, rays)
    boxed = H.add_constraints(rays, [1] * G.m)
    return vertices(boxed, caps)


# ---------------------------------------------------------------------------
# generators


@dataclass(frozen=True)
class FormulationBundle:
    milef: Milef
    target_name: str
    n: int
    expected_vertices: Optional[VPolytope] = None
    graph: Optional[Graph] = None
    notes: Tuple[str, ...] = ()
    # extra rows (in the MILEF's ambient space) applied only during verification
    verify_rows: Optional[Tuple[tuple, tuple]] = None


def _row(width: int, entries: Dict[int, int]) -> List[int]:
    r = [0] * width
    for j, c in entries.items():
        r[j] += c
    return r


def matching_milef(G, caps: Optional[Caps] = None) -> FormulationBundle:
    """x >= 0, x(delta(v)) <= 1, with x(delta_out(v)) integral; pi = identity."""
    if isinstance(G, int):
        G = CompleteGraph(G)
    _graph_cap(G.n, caps)
    m = G.m
    A, b = [], []
    for i in range(m):
        A.append(_row(m, {i: -1}))
        b.append(0)
    for v in range(G.n):
        A.append(_row(m, {i: 1 for i in G.delta(v)}))
        b.append(1)
    sigma = AffineMap([_row(m, {i: 1 for i in G.delta_out(v)}) for v in range(G.n)], [0] * G.n, m)
    M = Milef(HPolyhedron(A, b, ambient_dim=m), sigma, AffineMap.identity(m))
    return FormulationBundle(M, "matching", G.n, oracle_vertices("matching", G, caps), G)


def vjoin_milef(n: int, caps: Optional[Caps] = None) -> FormulationBundle:
    """Variables (x, z): 0 <= x <= 1, x(delta_out(v)) - x(delta_in(v)) = 2 z_v + 1, z integral."""
    if n < 2 or n % 2:
        raise ContractError("vjoin_milef needs an even n >= 2")
    G = CompleteGraph(n)
    _graph_cap(n, caps)
    m = G.m
    width = m + n
    A, b = [], []
    for i in range(m):
        A.append(_row(width, {i: -1}))
        b.append(0)
        A.append(_row(width, {i: 1}))
        b.append(1)
    E, f = [], []
    for v in range(n):
        coeffs = {i: 1 for i in G.delta_out(v)}
        coeffs.update({i: -1 for i in G.delta_in(v)})
        coeffs[m + v] = -2
        E.append(_row(width, coeffs))
        f.append(1)
    sigma = AffineMap.select(width, range(m, width))
    pi = AffineMap.select(width, range(m))
    M = Milef(HPolyhedron(A, b, E, f, width), sigma, pi)
    return FormulationBundle(M, "vjoin", n, oracle_vertices("vjoin", G, caps), G)


def _cut_rows(G: Graph, width: int, yoff: int):
    A, b = [], []
    for i, (v, w) in enumerate(G.edges):
        yv, yw = yoff + v, yoff + w
        A.append(_row(width, {i: -1, yv: 1, yw: -1}))  # x >= y_v - y_w
        b.append(0)
        A.append(_row(width, {i: -1, yv: -1, yw: 1}))  # x >= y_w - y_v
        b.append(0)
        A.append(_row(width, {i: 1, yv: -1, yw: -1}))  # x <= y_v + y_w
        b.append(0)
        A.append(_row(width, {i: 1, yv: 1, yw: 1}))  # x <= 2 - y_v - y_w
        b.append(2)
    for v in range(G.n):
        A.append(_row(width, {yoff + v: -1}))
        b.append(0)
        A.append(_row(width, {yoff + v: 1}))
        b.append(1)
    return A, b


def cut_milef(n: int, caps: Optional[Caps] = None) -> FormulationBundle:
    """Variables (x, y) with y in [0,1]^V integral and x_vw = |y_v - y_w| forced by four rows per edge."""
    if n < 2:
        raise ContractError("cut_milef needs n >= 2")
    G = CompleteGraph(n)
    _graph_cap(n, caps)
    m = G.m
    width = m + n
    A, b = _cut_rows(G, width, m)
    M = Milef(
        HPolyhedron(A, b, ambient_dim=width), AffineMap.select(width, range(m, width)), AffineMap.select(width, range(m))
    )
    return FormulationBundle(M, "cut", n, oracle_vertices("cut", G, caps), G)


def odd_cut_milef(n: int, caps: Optional[Caps] = None) -> FormulationBundle:
    """cut_milef plus an integral z with sum(y) = 2z + 1, so |S| is odd."""
    if n < 2 or n % 2:
        raise ContractError("odd_cut_milef needs an even n >= 2")
    G = CompleteGraph(n)
    _graph_cap(n, caps)
    m = G.m
    width = m + n + 1
    A, b = _cut_rows(G, width, m)
    E = [_row(width, {**{m + v: 1 for v in range(n)}, width - 1: -2})]
    M = Milef(
        HPolyhedron(A, b, E, [1], width),
        AffineMap.select(width, range(m, width)),
        AffineMap.select(width, range(m)),
    )
    return FormulationBundle(
        M, "odd_cut", n, oracle_vertices("odd_cut", G, caps), G, ("parity is imposed on sum(y), the size of S",)
    )


def _arcs(n: int) -> List[Edge]:
    return [(v, w) for v in range(n) for w in range(n) if v != w]


def bimodular_system(n: int, anchor: bool = True) -> Tuple[List[List[int]], List[str]]:
    """Coefficient matrix of the conic odd-cut system over (xbar, y, z).

    Rows: xbar_a >= 0 for every arc, y_w - y_v - xbar_(v,w) <= 0 for every arc,
    and sum(y) - 2z (the parity row). Without an anchor the columns are
    dependent: (0, 1, n/2) is in the kernel. ``anchor`` appends the unit row
    y_0 >= 0, which restores full column rank; shifting y by an integer
    multiple of the all-ones vector (and z by n/2 times it) shows the projected
    integer hull does not change. Column labels come second.
    """
    arcs = _arcs(n)
    na = len(arcs)
    width = na + n + 1
    rows = [_row(width, {i: 1}) for i in range(na)]
    for i, (v, w) in enumerate(arcs):
        rows.append(_row(width, {na + w: 1, na + v: -1, i: -1}))
    rows.append(_row(width, {**{na + v: 1 for v in range(n)}, width - 1: -2}))
    if anchor:
        rows.append(_row(width, {na: 1}))
    labels = [f"xbar[{v},{w}]" for v, w in arcs] + [f"y[{v}]" for v in range(n)] + ["z"]
    return rows, labels


def mutate_parity_coefficient(rows: Sequence[Sequence[int]], new: int = -3) -> List[List[int]]:
    """Copy of the system with the z coefficient of the parity row replaced."""
    out = [list(r) for r in rows]
    for r in out:
        if r[-1] == -2:
            r[-1] = new
            return out
    raise ContractError("no parity row with z coefficient -2")


def odd_cut_dominant_bimodular(n: int, caps: Optional[Caps] = None) -> FormulationBundle:
    """MILEF of the odd-cut dominant over (x, xbar, y, z); (y, z) integral.

    The set is unbounded, so the bundle carries verification rows: x <= 1 and
    -1 <= y <= 2.
    """
    if n < 2 or n % 2:
        raise ContractError("odd_cut_dominant_bimodular needs an even n >= 2")
    G = CompleteGraph(n)
    _graph_cap(n, caps)
    m = G.m
    arcs = _arcs(n)
    na = len(arcs)
    width = m + na + n + 1
    xb, yo, zi = m, m + na, m + na + n
    A, b = [], []
    for i, (v, w) in enumerate(arcs):
        A.append(_row(width, {xb + i: -1}))
        b.append(0)
        A.append(_row(width, {yo + w: 1, yo + v: -1, xb + i: -1}))
        b.append(0)
    E, f = [], []
    arc_index = {a: i for i, a in enumerate(arcs)}
    for i, (v, w) in enumerate(G.edges):
        E.append(_row(width, {i: 1, xb + arc_index[(v, w)]: -1, xb + arc_index[(w, v)]: -1}))
        f.append(0)
    E.append(_row(width, {**{yo + v: 1 for v in range(n)}, zi: -2}))
    f.append(1)
    M = Milef(
        HPolyhedron(A, b, E, f, width), AffineMap.select(width, range(yo, width)), AffineMap.select(width, range(m))
    )
    VA, Vb = [], []
    for i in range(m):
        VA.append(tuple(_row(width, {i: 1})))
        Vb.append(1)
    for v in range(n):
        VA.append(tuple(_row(width, {yo + v: 1})))
        Vb.append(2)
        VA.append(tuple(_row(width, {yo + v: -1})))
        Vb.append(1)
    return FormulationBundle(
        M,
        "odd_cut_dominant",
        n,
        odd_cut_dominant_box_vertices(n, caps),
        G,
        ("dominant: verified inside x <= 1 with y in {-1,...,2}",),
        (tuple(VA), tuple(Vb)),
    )


def tsp_codes(n: int) -> List[Tuple[int, ...]]:
    """The first n binary strings of length ceil(log2 n), most significant bit first."""
    L = max(1, math.ceil(math.log2(n)))
    return [tuple((i >> (L - 1 - j)) & 1 for j in range(L)) for i in range(n)]


def tsp_aux_points(n: int) -> List[tuple]:
    """Points (s1, s2, z) over ordered pairs of distinct codes; z = 1 iff the
    decoded pair is an edge of the reference cycle 0-1-...-(n-1)-0."""
    S = tsp_codes(n)
    pts = []
    for a, b in itertools.permutations(range(n), 2):
        z = 1 if (b - a) % n in (1, n - 1) else 0
        pts.append(S[a] + S[b] + (z,))
    return pts


def tsp_milef(n: int, caps: Optional[Caps] = None) -> FormulationBundle:
    """Tour MILEF: codes y_v integral; each (y_v, y_w, x_vw) is written as a convex
    combination of the auxiliary points, with its own multiplier block."""
    caps = caps or current_caps()
    if n < 4:
        raise ContractError("tsp_milef needs n >= 4")
    check_cap("max_tsp_n", n, caps)
    G = CompleteGraph(n)
    L = len(tsp_codes(n)[0])
    X = tsp_aux_points(n)
    t = len(X)
    m = G.m
    yo = m
    lo = m + n * L
    width = lo + m * t
    A, b, E, f = [], [], [], []
    for e, (v, w) in enumerate(G.edges):
        lam = lo + e * t
        for j in range(t):
            A.append(_row(width, {lam + j: -1}))
            b.append(0)
        E.append(_row(width, {lam + j: 1 for j in range(t)}))
        f.append(1)
        targets = [yo + v * L + r for r in range(L)] + [yo + w * L + r for r in range(L)] + [e]
        for c, col in enumerate(targets):
            coeffs = {col: 1}
            for j in range(t):
                if X[j][c]:
                    coeffs[lam + j] = coeffs.get(lam + j, 0) - X[j][c]
            E.append(_row(width, coeffs))
            f.append(0)
    M = Milef(
        HPolyhedron(A, b, E, f, width), AffineMap.select(width, range(yo, lo)), AffineMap.select(width, range(m))
    )
    return FormulationBundle(
        M,
        "tour",
        n,
        oracle_vertices("tour", G, caps),
        G,
        (f"auxiliary polytope has {t} vertices", "reference cycle 0-1-...-(n-1)-0"),
    )


GENERATORS = {
    "matching": matching_milef,
    "vjoin": vjoin_milef,
    "cut": cut_milef,
    "oddcut": odd_cut_milef,
    "oddcut-dominant": odd_cut_dominant_bimodular,
    "tsp": tsp_milef,
}


def generate(family: str, n: int, caps: Optional[Caps] = None) -> FormulationBundle:
    try:
        gen = GENERATORS[family]
    except KeyError:
        raise ContractError(f"unknown family {family!r}; expected one of {sorted(GENERATORS)}") from None
    return gen(n, caps)


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class VerifyReport:
    target: str
    n: int
    passed: bool
    expected_count: int
    found_count: int
    missing: Tuple[tuple, ...]
    extra: Tuple[tuple, ...]
    fibers: int
    fiber_vertices_integral: bool

    def to_json(self):
        fmt = lambda pts: [[format_rational(x) for x in p] for p in pts]
        return {
            "target": self.target,
            "n": self.n,
            "status": "PASS" if self.passed else "FAIL",
            "expected_count": self.expected_count,
            "found_count": self.found_count,
            "missing": fmt(self.missing),
            "extra": fmt(self.extra),
            "fibers": self.fibers,
            "fiber_vertices_integral": self.fiber_vertices_integral,
        }


def bounded_for_verification(b: FormulationBundle) -> Milef:
    M = b.milef
    if b.verify_rows:
        A, rhs = b.verify_rows
        M = Milef(M.Q.add_constraints(A, rhs), M.sigma, M.pi, M.m)
    return M


def verify_bundle(b: FormulationBundle, caps: Optional[Caps] = None) -> VerifyReport:
    """Projected mixed-integer hull compared with the oracle vertex set."""
    if b.expected_vertices is None:
        raise ContractError("bundle has no oracle vertex set")
    M0 = bounded_for_verification(b)
    M, _ = eliminate_private(M0, caps)
    fv = fiber_vertices(M, caps, index_source=M0)
    pts = {M.pi(v) for vs in fv.values() for v in vs}
    found = set(projected_hull_from_points(pts, M.d))
    expected = set(b.expected_vertices.vertices)
    integral = all(x.denominator == 1 for vs in fv.values() for v in vs for x in v)
    return VerifyReport(
        b.target_name,
        b.n,
        found == expected,
        len(expected),
        len(found),
        tuple(sorted(expected - found)),
        tuple(sorted(found - expected)),
        len(fv),
        integral,
    )


def projected_hull_from_points(pts, d) -> Tuple[tuple, ...]:
    from .exactgeom.hv import prune_to_vertices

    return VPolytope(prune_to_vertices(pts), (), d).vertices


def drop_inequality(b: FormulationBundle, row: int) -> FormulationBundle:
    """Mutation helper: the same bundle with one inequality row of Q removed."""
    Q = b.milef.Q
    if not 0 <= row < len(Q.ineq_lhs):
        raise ContractError(f"row {row} out of range")
    keep = [i for i in range(len(Q.ineq_lhs)) if i != row]
    Q2 = HPolyhedron(
        [Q.ineq_lhs[i] for i in keep], [Q.ineq_rhs[i] for i in keep], Q.eq_lhs, Q.eq_rhs, Q.ambient_dim
    )
    M = Milef(Q2, b.milef.sigma, b.milef.pi)
    return replace(b, milef=M, notes=b.notes + (f"mutated: dropped inequality row {row}",))


# ---------------------------------------------------------------------------
# bimodularity


@dataclass(frozen=True)
class BimodularityReport:
    max_abs_subdet: int
    is_bimodular: bool
    witness: Tuple[int, ...]
    subsets_checked: int


_SMALL_PRIME = 32_749  # largest prime below 2^15
_BIG_PRIME = 2_147_483_629  # largest prime below 2^31; products still fit in int64


def _powmod(base: np.ndarray, e: int, p: int) -> np.ndarray:
    out = np.ones_like(base)
    b = base % p
    while e:
        if e & 1:
            out = out * b % p
        b = b * b % p
        e >>= 1
    return out


def _batch_det_mod(mats: np.ndarray, p: int, inv_table: Optional[np.ndarray] = None) -> np.ndarray:
    """Determinants modulo p of a batch of square matrices with entries in [0, p).

    Only the pivot row and pivot column are reduced each step; the rest of the
    block grows by less than p^2 per step, which stays inside int64 for the
    small prime (the big-prime path reduces everything).
    """
    a = mats.copy()
    B, n, _ = a.shape
    lazy = inv_table is not None
    det = np.ones(B, dtype=np.int64)
    for c in range(n):
        if lazy:
            a[:, c:, c] %= p
        nz = a[:, c:, c] != 0
        has = nz.any(axis=1)
        piv = c + np.argmax(nz, axis=1)
        det[~has] = 0
        swap = np.nonzero((piv != c) & has)[0]
        if swap.size:
            pr = piv[swap]
            tmp = a[swap, c, :].copy()
            a[swap, c, :] = a[swap, pr, :]
            a[swap, pr, :] = tmp
            det[swap] = (p - det[swap]) % p
        if lazy:
            a[:, c, c:] %= p
        pv = np.where(has, a[:, c, c], 1)
        det = det * pv % p
        inv = inv_table[pv] if lazy else _powmod(pv, p - 2, p)
        if c + 1 < n:
            fct = a[:, c + 1:, c] * inv[:, None] % p
            upd = fct[:, :, None] * a[:, None, c, c + 1:]
            if lazy:
                a[:, c + 1:, c + 1:] -= upd
            else:
                a[:, c + 1:, c + 1:] = (a[:, c + 1:, c + 1:] - upd) % p
            a[:, c + 1:, c] = 0
    return det


def _hadamard_bound(M: List[List[int]]) -> int:
    """Upper bound on every maximal minor: sqrt of the product of the largest squared row norms."""
    sq = sorted((sum(x * x for x in r) for r in M), reverse=True)
    prod = 1
    for x in sq[: len(M[0])]:
        prod *= x
    return math.isqrt(prod) + 1


def _bareiss_sweep(rows, ncol, total) -> BimodularityReport:
    best, witness = -1, ()
    for S in itertools.combinations(range(len(rows)), ncol):
        d = abs(int_det([rows[i] for i in S]))
        if d > best:
            best, witness = d, S
    return BimodularityReport(best, best <= 2, witness, total)


def bimodularity_check(M: Sequence[Sequence[int]], caps: Optional[Caps] = None, chunk: int = 20000) -> BimodularityReport:
    """Exhaustive sweep of all maximal (ncols x ncols) minors.

    Determinants are computed modulo a large prime in vectorised batches; the
    Hadamard bound guarantees the symmetric residue is the exact value.
    """
    if any(x != int(x) for r in M for x in r):
        raise ContractError("bimodularity_check needs an integer matrix")
    rows = [[int(x) for x in r] for r in M]
    if not rows:
        raise ContractError("empty matrix")
    ncol = len(rows[0])
    if any(len(r) != ncol for r in rows):
        raise ContractError("ragged matrix")
    if rank(rows, ncol) < ncol:
        raise ContractError("matrix must have full column rank")
    total = math.comb(len(rows), ncol)
    check_cap("max_minors", total, caps)
    bound = _hadamard_bound(rows)
    if 2 * bound < _SMALL_PRIME:
        p = _SMALL_PRIME
        table = np.array([0] + [pow(x, p - 2, p) for x in range(1, p)], dtype=np.int64)
    elif 2 * bound < _BIG_PRIME:
        p, table = _BIG_PRIME, None
    else:
        return _bareiss_sweep(rows, ncol, total)
    arr = np.array(rows, dtype=np.int64) % p
    support = arr != 0
    best, witness = -1, ()
    it = itertools.combinations(range(len(rows)), ncol)
    while True:
        block = list(itertools.islice(it, chunk))
        if not block:
            break
        sel = np.array(block, dtype=np.int64)
        # a selection leaving some column all-zero has determinant 0
        live = np.nonzero(support[sel].any(axis=1).all(axis=1))[0]
        if best < 0:
            best, witness = 0, tuple(block[0])
        if not live.size:
            continue
        dets = _batch_det_mod(arr[sel[live]], p, table)
        dets = np.where(dets > p // 2, dets - p, dets)
        absd = np.abs(dets)
        i = int(np.argmax(absd))
        if absd[i] > best:
            best, witness = int(absd[i]), tuple(int(x) for x in block[live[i]])
    return BimodularityReport(best, best <= 2, witness, total)
