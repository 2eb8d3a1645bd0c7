import random
from fractions import Fraction as F

import pytest

from milef.errors import ContractError, EmptySetError, UnboundedError
from milef.exactgeom import AffineMap, HPolyhedron, VPolytope, hull, lp_solve, project, vertices
from milef.lattice import integer_points
from milef.metrics import rdist
from milef.milefcore import (
    Milef,
    balas_union,
    check_bounded,
    fiber,
    lef_size_bound,
    milef_to_lef,
    mixed_integer_hull,
    projected_hull,
    restrict_to_face,
    slice_family,
    slice_once,
)
from milef.zoo import matching_milef, oracle_vertices

from helpers import random_points, slice_instance

SEG = HPolyhedron([[1], [-1]], ["5/2", 0])
ID1 = AffineMap.identity(1)
TRI3 = hull([(0, 0), (3, 0), (0, 3)])


def vset(V):
    return set(V.vertices)


def feasible(P):
    return lp_solve((0,) * P.ambient_dim, "max", P).status == "optimal"


# ---------------------------------------------------------------- Milef basics


def test_milef_validation():
    with pytest.raises(ContractError):
        Milef(SEG, AffineMap.identity(2), ID1)
    with pytest.raises(ContractError):
        Milef(SEG, ID1, AffineMap.identity(2))
    M = Milef(SEG, ID1, ID1)
    assert (M.ell, M.k, M.d) == (1, 1, 1)


def test_fiber_examples():
    M = Milef(SEG, ID1, ID1)
    assert vset(vertices(fiber(M, (1,)))) == {(1,)}
    assert not feasible(fiber(M, (3,)))


def test_fiber_of_a_perfect_matching():
    b = matching_milef(4)
    G = b.graph
    pm = [(0, 1), (2, 3)]
    x = tuple(F(int(e in pm)) for e in G.edges)
    # find a point of Q projecting to x and read its sigma value
    ell = b.milef.ell
    P = b.milef.Q.add_constraints((), (), b.milef.pi.matrix, [xi - o for xi, o in zip(x, b.milef.pi.offset)])
    r = lp_solve((0,) * ell, "max", P)
    assert r.status == "optimal"
    z = b.milef.sigma(r.witness)
    assert all(zi.denominator == 1 for zi in z)
    F_ = fiber(b.milef, z)
    Fx = F_.add_constraints((), (), b.milef.pi.matrix, [xi - o for xi, o in zip(x, b.milef.pi.offset)])
    assert feasible(Fx)


def test_mixed_integer_hull_examples():
    assert vset(mixed_integer_hull(Milef(SEG, ID1, ID1))) == {(0,), (2,)}
    tri = hull([(0, 0), (2, 0), (0, 2)])
    I2 = AffineMap.identity(2)
    assert vset(mixed_integer_hull(Milef(tri, I2, I2))) == {(0, 0), (2, 0), (0, 2)}
    assert vset(projected_hull(matching_milef(4).milef)) == vset(oracle_vertices("matching", 4))


def test_mixed_integer_hull_against_integer_points():
    # sigma = identity: the mixed-integer hull is the integer hull
    rng = random.Random(41)
    for _ in range(25):
        d = rng.randint(1, 3)
        P = hull(random_points(rng, d, rng.randint(1, 5)))
        Id = AffineMap.identity(d)
        pts = integer_points(P)
        got = mixed_integer_hull(Milef(P, Id, Id))
        if not pts:
            assert got.is_empty
        else:
            assert vset(got) == vset(vertices(hull(pts)))


def test_boundedness_check():
    assert check_bounded(SEG)
    assert not check_bounded(HPolyhedron([[-1, 0]], [0]))
    assert check_bounded(HPolyhedron([[1], [-1]], [-1, 0]))  # empty counts as bounded
    with pytest.raises(UnboundedError):
        mixed_integer_hull(Milef(HPolyhedron([[-1]], [0]), ID1, ID1))


# ---------------------------------------------------------------- Balas


def test_balas_examples():
    ext, proj = balas_union([SEG])
    assert vset(vertices(project(ext, proj))) == {(0,), (F(5, 2),)}
    ext, proj = balas_union([HPolyhedron.box([0], [1]), HPolyhedron.box([2], [3])])
    assert vset(vertices(project(ext, proj))) == {(0,), (3,)}
    t1 = hull([(0, 0), (1, 0), (0, 1)])
    t2 = hull([(2, 2), (3, 2), (2, 3)])
    ext, proj = balas_union([t1, t2])
    expect = vset(vertices(hull([(0, 0), (1, 0), (0, 1), (2, 2), (3, 2), (2, 3)])))
    assert vset(vertices(project(ext, proj))) == expect == {(0, 0), (1, 0), (0, 1), (3, 2), (2, 3)}
    assert ext.raw_size <= (t1.raw_size + 1) + (t2.raw_size + 1)


def test_balas_errors():
    with pytest.raises(ContractError):
        balas_union([])
    with pytest.raises(ContractError):
        balas_union([HPolyhedron([[1], [-1]], [-1, 0])])
    with pytest.raises(UnboundedError, match="closure"):
        balas_union([HPolyhedron([[-1]], [0])])


def test_balas_random_against_vertex_union():
    rng = random.Random(43)
    for _ in range(15):
        d = rng.randint(1, 3)
        parts = [hull(random_points(rng, d, rng.randint(1, 4))) for _ in range(rng.randint(1, 3))]
        ext, proj = balas_union(parts)
        union = [v for P in parts for v in vertices(P).vertices]
        assert vset(vertices(project(ext, proj))) == vset(vertices(hull(union)))


# ---------------------------------------------------------------- slicing


def test_slice_once_segment():
    st = slice_once(SEG, ID1, F(1, 8))
    assert st.levels == (0, 1, 2) and len(st.family) == 3 and st.direction == (1,)


def test_slice_once_empty():
    D = HPolyhedron.box([F(1, 4)] * 2, [F(3, 4)] * 2)
    st = slice_once(D, AffineMap.identity(2), F(1, 8))
    assert st.empty and len(st.family) == 0


def test_slice_once_triangle_tie_break():
    st = slice_once(TRI3, AffineMap.identity(2), F(1, 100))
    assert st.direction == (1, 0) and st.levels == (0, 1, 2, 3)


def test_slice_family_examples():
    D2 = HPolyhedron.box([0, 0], [1, 1])
    c = slice_family(D2, AffineMap((), (), 2), F(1, 2))
    assert len(c.family) == 1 and not c.family.subspaces[0].rows
    c = slice_family(SEG, ID1, F(1, 2))
    assert len(c.family) == 1 and c.rdist_achieved == F(1, 4)
    c = slice_family(SEG, ID1, F(1, 8))
    assert len(c.family) == 3 and c.rdist_achieved == 0
    assert c.fiber_cover_checked and c.sandwich_checked


def test_slice_family_random():
    rng = random.Random(47)
    done = 0
    for _ in range(12):
        D, s = slice_instance(rng)
        for delta in (F(1), F(1, 8)):
            try:
                c = slice_family(D, s, delta)
            except EmptySetError:
                continue
            done += 1
            assert c.fiber_cover_checked and c.sandwich_checked
            assert c.rdist_achieved <= delta
            assert all(st["depth"] < s.target_dim for st in c.steps)
    assert done >= 10


def test_slice_family_rejects_bad_delta():
    with pytest.raises(ContractError):
        slice_family(SEG, ID1, 0)


# ---------------------------------------------------------------- MILEF -> LEF


def test_lef_k0():
    M = Milef(SEG, AffineMap((), (), 1), ID1)
    ext, proj, rep = milef_to_lef(M, F(1, 2))
    assert rep.rdist_achieved == 0 and rep.slices == 1
    assert vset(vertices(project(ext, proj))) == {(0,), (F(5, 2),)}


def test_lef_segment():
    ext, proj, rep = milef_to_lef(Milef(SEG, ID1, ID1), F(1, 8), verify_balas=True)
    assert vset(vertices(project(ext, proj))) == {(0,), (2,)}
    assert rep.rdist_achieved == 0 and rep.balas_verified


def test_lef_k4_matching():
    b = matching_milef(4)
    ext, proj, rep = milef_to_lef(b.milef, F(1, 10), count_irredundant=True)
    assert rep.contains_target and rep.rdist_achieved <= F(1, 10)
    assert rep.irredundant_count <= rep.slice_count_bound
    img = VPolytope(tuple(vertices(project(ext, proj)).vertices), (), 6)
    assert rdist(oracle_vertices("matching", 4), img) <= F(1, 10)


def test_lef_size_bound_examples():
    assert lef_size_bound(5, 0, 1) == 6
    assert lef_size_bound(1, 1, 1) == 6
    assert lef_size_bound(1, 2, 1) == F(162, 5)
    with pytest.raises(ContractError):
        lef_size_bound(1, 1, 0)


# ---------------------------------------------------------------- faces


def test_restrict_zero_phi():
    M = Milef(SEG, ID1, ID1)
    R = restrict_to_face(M, AffineMap([[0]], [0], 1), ID1)
    assert vset(projected_hull(R)) == vset(projected_hull(M))


def test_restrict_matching_edge():
    b = matching_milef(4)
    G = b.graph
    e = 0
    phi = AffineMap([[int(i == e) for i in range(len(G.edges))]], [0], len(G.edges))
    keep = [i for i in range(len(G.edges)) if i != e]
    R = restrict_to_face(b.milef, phi, AffineMap.select(len(G.edges), keep))
    assert vset(projected_hull(R)) == vset(oracle_vertices("matching", G.without(G.edges[e])))


def test_restrict_rejects_negative_phi():
    M = Milef(SEG, ID1, ID1)
    with pytest.raises(ContractError, match="violated"):
        restrict_to_face(M, AffineMap([[-1]], [1], 1), ID1)
