"""Seeded random instance generators shared by the test modules."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction as F

from milef.exactgeom import AffineMap, VPolytope, hull
from milef.exactgeom.hv import prune_to_vertices
from milef.exactgeom.linalg import det


def rat(rng: random.Random, lo=-4, hi=4, den=3) -> F:
    return F(rng.randint(lo * den, hi * den), rng.randint(1, den))


def vpoly(points, d=None) -> VPolytope:
    pts = [tuple(p) for p in points]
    d = d if d is not None else len(pts[0])
    return VPolytope(prune_to_vertices(pts), (), d)


def random_points(rng, d, count, lo=-4, hi=4, den=3):
    return [tuple(rat(rng, lo, hi, den) for _ in range(d)) for _ in range(count)]


def nested_pair(rng, d, extra=3, flat=False):
    """A = conv(random points); B = conv(A plus more points). ``flat`` puts A in x_0 = 0."""
    pa = random_points(rng, d, rng.randint(1, d + 2) if flat else rng.randint(d + 1, d + 3))
    if flat:
        pa = [(F(0),) + p[1:] for p in pa]
    pb = pa + random_points(rng, d, rng.randint(1, extra))
    return vpoly(pa, d), vpoly(pb, d)


def nested_triple(rng, d):
    A, B = nested_pair(rng, d)
    C = vpoly(list(B.vertices) + random_points(rng, d, rng.randint(0, 3)), d)
    return A, B, C


def random_affine(rng, d, m, invertible=False) -> AffineMap:
    while True:
        M = [[rng.randint(-2, 2) for _ in range(d)] for _ in range(m)]
        if not invertible or det(M) != 0:
            break
    return AffineMap(M, [rat(rng) for _ in range(m)], d)


def image(V: VPolytope, f: AffineMap) -> VPolytope:
    return vpoly([f(v) for v in V.vertices], f.target_dim)


def antichain(rng, d, size, avoid=(), p1=0.5):
    """Random antichain of 0/1 vectors; retries a few times to get at least two members."""
    for _ in range(20):
        pool = [tuple(int(rng.random() < p1) for _ in range(d)) for _ in range(size)]
        pool = [p for p in set(pool) if p not in avoid] or [tuple(int(i == 0) for i in range(d))]
        out = sorted(p for p in pool if not any(q != p and all(a <= b for a, b in zip(q, p)) for q in pool))
        if len(out) >= 2 or d < 2:
            return out
    return out


def cube_points(d):
    return list(itertools.product((0, 1), repeat=d))


def down_closure(gens, d):
    return [p for p in cube_points(d) if any(all(a <= b for a, b in zip(p, g)) for g in gens)]


def up_closure(gens, d):
    return [p for p in cube_points(d) if any(all(a >= b for a, b in zip(p, g)) for g in gens)]


def down_closed_pair(rng, d):
    """Down-closed 0/1 polytope A and a nested B inside the nonnegative orthant."""
    gens = antichain(rng, d, rng.randint(2, 5), avoid=[(1,) * d] if d > 1 else (), p1=0.6)
    A = down_closure(gens, d)
    if rng.random() < 0.5:
        # the scaled-and-boxed relaxation: vertices of (3/2)A cut by the unit cube
        Bh = hull([tuple(F(3, 2) * x for x in a) for a in A]).add_constraints(
            [[int(i == j) for j in range(d)] for i in range(d)], [1] * d
        )
        from milef.exactgeom import vertices

        B = vertices(Bh)
        return vpoly(A, d), B
    support = [i for i in range(d) if any(p[i] for p in A)]
    keep = rng.random() < 0.8  # mostly stay in the span of A so rdist is finite
    extra = [
        tuple(F(rng.randint(0, 6), rng.randint(1, 4)) if (i in support or not keep) else F(0) for i in range(d))
        for _ in range(rng.randint(1, 3))
    ]
    return vpoly(A, d), vpoly(A + extra, d)


def up_closed_pair(rng, d):
    """Up-closed 0/1 polytope A and a nested B in [0,1]^d with the same affine hull."""
    gens = antichain(rng, d, rng.randint(1, 4), avoid=[(0,) * d], p1=0.35)
    A = up_closure(gens, d)
    fixed = [i for i in range(d) if all(p[i] == 1 for p in A)]
    extra = []
    for _ in range(rng.randint(1, 3)):
        extra.append(tuple(F(1) if i in fixed else F(rng.randint(0, 3), 4) for i in range(d)))
    return vpoly(A, d), vpoly(A + extra, d), d - len(fixed)


def shrink_pair(rng, d):
    """A in [0,1]^d and B = conv(A plus points (1+t)a - t a') with t <= 1, kept inside the cube."""
    pa = [tuple(F(rng.randint(0, 4), 4) for _ in range(d)) for _ in range(rng.randint(2, d + 2))]
    A = vpoly(pa, d)
    extra = []
    for _ in range(12):
        if len(extra) >= 3:
            break
        a, b = rng.choice(A.vertices), rng.choice(A.vertices)
        t = F(rng.randint(1, 4), 4)
        p = tuple((1 + t) * x - t * y for x, y in zip(a, b))
        if all(0 <= x <= 1 for x in p):
            extra.append(p)
    return A, vpoly(list(A.vertices) + extra, d)


def slice_instance(rng):
    """Random bounded (D, sigma) with ell <= 4 and k <= 2."""
    from milef.exactgeom import AffineMap as _AM

    ell = rng.randint(1, 4)
    k = rng.randint(1, min(2, ell))
    pts = [tuple(F(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(ell)) for _ in range(ell + 2)]
    sigma = _AM(
        [[rng.randint(-1, 2) for _ in range(ell)] for _ in range(k)],
        [F(rng.randint(0, 3), rng.randint(1, 2)) for _ in range(k)],
        ell,
    )
    return hull(pts), sigma
