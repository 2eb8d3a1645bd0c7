import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from milef.errors import ContractError, EmptyHullError, EmptySetError, ResourceCapError
from milef.config import Caps
from milef.exactgeom import (
    AffineMap,
    HPolyhedron,
    VPolytope,
    check_dual_certificate,
    dual_certificate,
    dumps,
    format_rational,
    hull,
    intersect,
    irredundant,
    loads,
    lp_solve,
    min_sq_distance,
    parse_rational,
    project,
    q,
    vertices,
    vertices_by_bases,
)
from milef.exactgeom.hv import in_convex_hull, prune_to_vertices
from milef.exactgeom.linalg import dot, sq_norm, sub
from milef.exactgeom.rational import lowest_terms_ok

from helpers import random_points, rat, vpoly

SQUARE = HPolyhedron([[1, 0], [-1, 0], [0, 1], [0, -1]], [1, 0, 1, 0])
SEG = HPolyhedron([[1], [-1]], ["5/2", 0])


def vset(V):
    return set(V.vertices)


# ---------------------------------------------------------------- rationals


def test_parse_and_format():
    assert parse_rational("6/4") == q(F(3, 2))
    assert format_rational(q("6/4")) == "3/2"
    assert format_rational(q(-4)) == "-4"
    with pytest.raises(ContractError, match="rhs"):
        parse_rational("1/0", "rhs")
    with pytest.raises(ContractError):
        parse_rational("0.5")
    with pytest.raises(ContractError):
        q(0.5)


@given(st.integers(-10**6, 10**6), st.integers(1, 10**6))
def test_rationals_lowest_terms(a, b):
    x = q(F(a, b))
    assert lowest_terms_ok(x)
    assert parse_rational(format_rational(x)) == x


# ---------------------------------------------------------------- LP


def test_lp_examples():
    r = lp_solve([1], "max", SEG)
    assert r.status == "optimal" and r.value == F(5, 2)
    assert lp_solve([1, 1], "max", HPolyhedron([[-1, 0], [0, -1]], [0, 0])).status == "unbounded"
    assert lp_solve([0], "min", HPolyhedron([[1], [-1]], [-1, 0])).status == "infeasible"


def test_lp_dimension_mismatch():
    with pytest.raises(ContractError):
        lp_solve([1, 2], "max", SEG)


def _random_poly(rng, d, m):
    A = [[rng.randint(-3, 3) for _ in range(d)] for _ in range(m)]
    b = [rng.randint(-2, 6) for _ in range(m)]
    return HPolyhedron(A, b, ambient_dim=d)


def test_lp_duality_random():
    rng = random.Random(11)
    optimal = 0
    for _ in range(150):
        d = rng.randint(1, 4)
        P = _random_poly(rng, d, rng.randint(1, 7))
        if rng.random() < 0.3:
            P = P.add_constraints((), (), [[rng.randint(-2, 2) for _ in range(d)]], [rng.randint(-2, 2)])
        c = [rng.randint(-3, 3) for _ in range(d)]
        sense = rng.choice(["max", "min"])
        r = lp_solve(c, sense, P)
        if r.status == "optimal":
            optimal += 1
            assert P.contains(r.witness) and dot(c, r.witness) == r.value
            cert = dual_certificate(c, sense, P)
            assert cert is not None and cert.value == r.value
            assert check_dual_certificate(c, sense, P, cert)
        elif r.status == "unbounded":
            ray = r.witness
            assert all(dot(a, ray) <= 0 for a in P.ineq_lhs)
            assert all(dot(e, ray) == 0 for e in P.eq_lhs)
            assert (dot(c, ray) > 0) if sense == "max" else (dot(c, ray) < 0)
    assert optimal > 30


# ---------------------------------------------------------------- vertices / hull


def test_vertices_examples():
    assert vset(vertices(SQUARE)) == {(0, 0), (1, 0), (0, 1), (1, 1)}
    assert vset(vertices(SEG)) == {(0,), (F(5, 2),)}
    k3 = HPolyhedron(
        [[-1, 0, 0], [0, -1, 0], [0, 0, -1], [1, 1, 0], [1, 0, 1], [0, 1, 1]], [0, 0, 0, 1, 1, 1]
    )
    # fractional matching polytope of a triangle: 4 matchings plus the half point
    assert vset(vertices(k3)) == {(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (F(1, 2),) * 3}


def test_vertices_cap():
    P = HPolyhedron.box([0] * 5, [1] * 5)
    with pytest.raises(ResourceCapError):
        vertices(P, Caps(max_dim=4))


def test_hull_examples():
    T = hull([(0, 0), (1, 0), (0, 1)])
    assert len(T.ineq_lhs) == 3 and not T.eq_lhs
    I = hull([(0,), (2,)])
    assert vset(vertices(I)) == {(0,), (2,)} and len(I.ineq_lhs) == 2
    with pytest.raises(EmptyHullError):
        hull([])


def test_hull_roundtrip_k4_matchings():
    from milef.zoo import oracle_points, CompleteGraph

    pts = oracle_points("matching", CompleteGraph(4))
    assert len(pts) == 10
    assert vset(vertices(hull(pts))) == set(pts)


def test_dd_matches_basis_enumeration():
    rng = random.Random(7)
    for _ in range(60):
        d = rng.randint(1, 4)
        P = intersect(_random_poly(rng, d, rng.randint(1, 4)), HPolyhedron.box([-4] * d, [4] * d))
        brute = vertices_by_bases(P)
        V = vertices(P)
        assert vset(V) == vset(brute)
        for v in V.vertices:
            assert P.contains(v)


def test_roundtrip_random_bounded():
    rng = random.Random(3)
    for _ in range(40):
        d = rng.randint(1, 5)
        V = vpoly(random_points(rng, d, rng.randint(1, d + 3)), d)
        H = hull(V.vertices)
        W = vertices(H)
        assert vset(W) == vset(V)
        assert vset(vertices(hull(W.vertices))) == vset(W)


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=8))
def test_hull_contains_inputs_and_vertices_are_inputs(points):
    H = hull(points)
    assert all(H.contains(p) for p in points)
    assert vset(vertices(H)) <= {tuple(q(x) for x in p) for p in points}


def test_irredundant_detects_equalities():
    P = HPolyhedron([[1, 0], [-1, 0], [0, 1], [0, -1], [1, 1]], [1, 0, 0, 0, 5])
    R = irredundant(P)
    assert len(R.eq_lhs) == 1
    assert vset(vertices(R)) == vset(vertices(P))


def test_prune_to_vertices_against_lp():
    rng = random.Random(5)
    for _ in range(20):
        d = rng.randint(2, 7)
        pts = random_points(rng, d, rng.randint(2, 12))
        fast = set(prune_to_vertices(pts))
        uniq = sorted(set(tuple(q(x) for x in p) for p in pts))
        slow = {p for i, p in enumerate(uniq) if not in_convex_hull(p, uniq[:i] + uniq[i + 1:])}
        assert fast == slow


# ---------------------------------------------------------------- project / intersect


def test_project_examples():
    assert vset(vertices(project(SQUARE, AffineMap.select(2, [0])))) == {(0,), (1,)}
    P = HPolyhedron([[1, 0], [-1, 0]], [1, 0], [[-2, 1]], [0])
    assert vset(vertices(project(P, AffineMap([[0, 1]], [0], 2)))) == {(0,), (2,)}


def test_project_balas_union():
    from milef.milefcore import balas_union

    ext, proj = balas_union([HPolyhedron.box([0], [1]), HPolyhedron.box([2], [3])])
    assert vset(vertices(project(ext, proj))) == {(0,), (3,)}


def test_project_commutes_with_hull():
    rng = random.Random(9)
    for _ in range(40):
        d = rng.randint(1, 4)
        pts = random_points(rng, d, rng.randint(1, 6))
        m = rng.randint(1, 3)
        f = AffineMap([[rng.randint(-2, 2) for _ in range(d)] for _ in range(m)], [rat(rng) for _ in range(m)], d)
        lhs = vertices(project(hull(pts), f))
        rhs = vertices(hull([f(p) for p in pts]))
        assert vset(lhs) == vset(rhs)


def test_fourier_motzkin_route_agrees():
    from milef.exactgeom import fourier_motzkin_image

    rng = random.Random(13)
    for _ in range(30):
        d = rng.randint(2, 4)
        pts = random_points(rng, d, rng.randint(1, 6))
        f = AffineMap.select(d, range(rng.randint(1, d - 1)))
        a = vertices(fourier_motzkin_image(hull(pts), f))
        b = vertices(hull([f(p) for p in pts]))
        assert vset(a) == vset(b)


def test_intersect_examples():
    seg = intersect(SQUARE, HPolyhedron((), (), [[1, 0]], ["1/2"], 2))
    assert vset(vertices(seg)) == {(F(1, 2), 0), (F(1, 2), 1)}
    empty = intersect(HPolyhedron.box([0], [1]), HPolyhedron.box([2], [3]))
    assert lp_solve([0], "max", empty).status == "infeasible"
    tri = hull([(0, 0), (3, 0), (0, 3)])
    cut = intersect(tri, HPolyhedron((), (), [[1, 1]], [2], 2))
    assert vset(vertices(cut)) == {(2, 0), (0, 2)}


# ---------------------------------------------------------------- distances


def test_min_sq_distance_examples():
    assert min_sq_distance((0, 0), SQUARE) == 0
    assert min_sq_distance((2, 0), SQUARE) == 1
    assert min_sq_distance((1, 1), hull([(0, 0), (1, 0)])) == 1
    with pytest.raises(EmptySetError):
        min_sq_distance((0,), HPolyhedron([[1], [-1]], [-1, 0]))


def _seg_dist2(p, a, b):
    ab, ap = sub(b, a), sub(p, a)
    t = min(max(dot(ap, ab) / dot(ab, ab), 0), 1) if dot(ab, ab) else 0
    return sq_norm(sub(p, tuple(x + t * y for x, y in zip(a, ab))))


def test_min_sq_distance_polygons_against_edges():
    rng = random.Random(17)
    for _ in range(40):
        pts = random_points(rng, 2, rng.randint(3, 6))
        H = hull(pts)
        V = vertices(H).vertices
        p = tuple(rat(rng, -6, 6) for _ in range(2))
        if H.contains(p):
            expect = 0
        elif len(V) == 1:
            expect = sq_norm(sub(p, V[0]))
        else:
            expect = min(_seg_dist2(p, a, b) for a in V for b in V if a != b)
            # only true edges matter, but any chord is at least as far as the boundary when p is outside
        assert min_sq_distance(p, H) == expect


# ---------------------------------------------------------------- serialisation


def test_json_roundtrip_bit_exact():
    objs = [
        HPolyhedron([[1, "1/3"]], ["-2/7"], [[0, 1]], [5]),
        VPolytope([("1/2", 0), (3, "-4/9")]),
        AffineMap([["2/3", 1]], ["-1/5"], 2),
    ]
    for o in objs:
        text = dumps(o)
        assert loads(text) == o
        assert dumps(loads(text)) == text


def test_json_errors_name_field():
    with pytest.raises(ContractError, match="ineq_rhs"):
        loads('{"type":"HPolyhedron","ambient_dim":1,"ineq_lhs":[["1"]],"ineq_rhs":["1/0"]}')
    with pytest.raises(ContractError, match="missing field"):
        loads('{"type":"AffineMap","matrix":[]}')
