
import pytest

from milef.errors import ContractError, ResourceCapError
from milef.config import Caps
from milef.milefcore import fiber_vertices, projected_hull, restrict_to_face
from milef.exactgeom import AffineMap
from milef.zoo import (
    CompleteGraph,
    bimodular_system,
    bimodularity_check,
    cut_milef,
    drop_inequality,
    generate,
    matching_milef,
    mutate_parity_coefficient,
    odd_cut_milef,
    oracle_points,
    oracle_vertices,
    tsp_aux_points,
    tsp_milef,
    verify_bundle,
    vjoin_milef,
)


def test_oracle_counts():
    K4 = CompleteGraph(4)
    assert len(oracle_points("matching", K4)) == 10
    assert len(oracle_points("vjoin", K4)) == 8
    assert len(oracle_vertices("odd_cut", 4).vertices) == 4
    assert len(oracle_vertices("tour", 4).vertices) == 3
    assert len(oracle_vertices("cut", 3).vertices) == 4
    assert len(oracle_vertices("cut", 4).vertices) == 8
    assert len(oracle_vertices("perfect_matching", 4).vertices) == 3


def test_graph_orientation_and_without():
    G = CompleteGraph(3)
    assert G.edges == ((0, 1), (0, 2), (1, 2))
    assert [G.edges[i] for i in G.delta_out(0)] == [(0, 1), (0, 2)]
    H = G.without((0, 1))
    assert H.edges == ((0, 2), (1, 2)) and H.n == 3


@pytest.mark.parametrize("n,count", [(2, 2), (3, 4), (4, 10)])
def test_matching_bundle(n, count):
    r = verify_bundle(matching_milef(n))
    assert r.passed and r.found_count == count and r.fiber_vertices_integral


def test_matching_fibers_are_integral():
    fv = fiber_vertices(matching_milef(4).milef)
    assert all(x in (0, 1) for vs in fv.values() for v in vs for x in v)


def test_vjoin_small():
    r = verify_bundle(vjoin_milef(2))
    assert r.passed and r.found_count == 1
    assert verify_bundle(vjoin_milef(4)).found_count == 8
    with pytest.raises(ContractError):
        vjoin_milef(3)


def test_cut_and_odd_cut():
    assert verify_bundle(cut_milef(3)).passed
    r = verify_bundle(odd_cut_milef(4))
    assert r.passed and r.found_count == 4


def test_tsp_auxiliary_polytope():
    pts = tsp_aux_points(4)
    assert len(pts) == 12  # |S|(|S|-1) ordered pairs of distinct codes
    r = verify_bundle(tsp_milef(4))
    assert r.passed and r.found_count == 3


def test_mutation_is_detected():
    b = matching_milef(4)
    bad = drop_inequality(b, 6)  # vertex 0 degree row
    r = verify_bundle(bad)
    assert not r.passed and r.extra
    assert any(sum(v[i] for i in b.graph.delta(0)) > 1 for v in r.extra)
    assert r.to_json()["status"] == "FAIL"


def test_generate_unknown_family():
    with pytest.raises(ContractError, match="unknown family"):
        generate("spanning-tree", 4)


def test_graph_cap():
    with pytest.raises(ResourceCapError):
        matching_milef(5, Caps(max_graph_n=4))


def test_face_vjoin_to_perfect_matching():
    b = vjoin_milef(4)
    m = b.graph.m
    phi = AffineMap([[1] * m], [-2], m)  # 1.x - n/2 >= 0 on V-joins
    R = restrict_to_face(b.milef, phi, AffineMap.identity(m))
    assert set(projected_hull(R).vertices) == set(oracle_vertices("perfect_matching", 4).vertices)


def test_face_wrong_sign_rejected():
    b = vjoin_milef(4)
    m = b.graph.m
    with pytest.raises(ContractError, match="violated"):
        restrict_to_face(b.milef, AffineMap([[-1] * m], [2], m), AffineMap.identity(m))


# ---------------------------------------------------------------- bimodularity


def test_bimod_small_examples():
    cyc = [[1, -1, 0], [0, 1, -1], [-1, 0, 1], [1, 0, 0], [0, 1, 0], [0, 0, 1]]
    r = bimodularity_check(cyc)
    assert r.max_abs_subdet == 1 and r.is_bimodular
    assert bimodularity_check([[2]]).max_abs_subdet == 2
    r = bimodularity_check([[3]])
    assert r.max_abs_subdet == 3 and not r.is_bimodular and r.witness == (0,)


def test_bimod_matches_bareiss_on_random():
    import itertools
    import random

    from milef.exactgeom.linalg import int_det

    rng = random.Random(3)
    for _ in range(15):
        n = rng.randint(1, 4)
        rows = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(rng.randint(n, n + 3))]
        best = max(abs(int_det([rows[i] for i in S])) for S in itertools.combinations(range(len(rows)), n))
        if best == 0:
            continue
        assert bimodularity_check(rows).max_abs_subdet == best


def test_bimodular_system_shape():
    rows, labels = bimodular_system(4)
    assert len(rows) == 26 and len(rows[0]) == 17 and len(labels) == 17
    mutated = mutate_parity_coefficient(rows)
    assert sum(a != b for r, s in zip(rows, mutated) for a, b in zip(r, s)) == 1


def test_bimodularity_requires_full_rank():
    with pytest.raises(ContractError, match="full column rank"):
        bimodularity_check([[1, 1], [2, 2]])


def test_bimod_unanchored_rank_deficient():
    rows, _ = bimodular_system(4, anchor=False)
    with pytest.raises(ContractError):
        bimodularity_check(rows)
