"""Integer-lattice tools: primitive vectors, Hermite normal form, unimodular
completion, lattice points of polyhedra and their images, lattice width."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import ceil, floor, gcd, isqrt
from typing import Dict, List, Optional, Sequence, Tuple

from gmpy2 import mpq

from .config import Caps, check_cap, current_caps
from .errors import ContractError, EmptySetError, UnboundedError
from .exactgeom import AffineMap, HPolyhedron, lp_solve, vertices
from .exactgeom.linalg import affine_hull, affine_rank, dot, int_det, inverse
from .exactgeom.lp import INFEASIBLE, OPTIMAL, UNBOUNDED
from .exactgeom.rational import Rational, primitive_integer, q, qvec

IntVec = Tuple[int, ...]


def _as_int_vector(v: Sequence, what: str = "vector") -> IntVec:
    out = []
    for x in v:
        x = q(x)
        if x.denominator != 1:
            raise ContractError(f"{what} must be integral, got {x}")
        out.append(int(x))
    return tuple(out)


def primitive(v: Sequence) -> IntVec:
    """v / gcd(v), signed so that the first non-zero entry is positive."""
    iv = _as_int_vector(v)
    g = 0
    for x in iv:
        g = gcd(g, x)
    if g == 0:
        raise ContractError("primitive() of the zero vector")
    first = next(x for x in iv if x)
    if first < 0:
        g = -g
    return tuple(x // g for x in iv)


@dataclass(frozen=True)
class UnimodularMatrix:
    entries: Tuple[IntVec, ...]

    def __post_init__(self):
        rows = tuple(_as_int_vector(r, "unimodular entry") for r in self.entries)
        k = len(rows)
        if any(len(r) != k for r in rows):
            raise ContractError("unimodular matrix must be square")
        if int_det(rows) not in (1, -1):
            raise ContractError("matrix is not unimodular (determinant is not +-1)")
        object.__setattr__(self, "entries", rows)

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def det(self) -> int:
        return int_det(self.entries)

    def apply(self, z: Sequence) -> tuple:
        return tuple(dot(r, z) for r in self.entries)

    def inverse(self) -> "UnimodularMatrix":
        inv = inverse(self.entries)
        return UnimodularMatrix(tuple(tuple(int(x) for x in r) for r in inv))


def _ext_gcd(a: int, b: int) -> Tuple[int, int, int]:
    """(g, x, y) with a x + b y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        t = a // b
        a, b = b, a - t * b
        x0, x1 = x1, x0 - t * x1
        y0, y1 = y1, y0 - t * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def hnf(M: Sequence[Sequence]) -> Tuple[Tuple[IntVec, ...], UnimodularMatrix]:
    """Column-style Hermite normal form: returns (H, U) with H = M U.

    H is lower-triangular in staircase form; each pivot is positive and the
    entries to its left in the same row lie in [0, pivot).
    """
    H = [list(_as_int_vector(r, "hnf input")) for r in M]
    if not H:
        raise ContractError("hnf of an empty matrix")
    k, n = len(H), len(H[0])
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def colop(c1, c2, a, b, c, d):
        # (col c1, col c2) <- (a*c1 + b*c2, c*c1 + d*c2)
        for mat in (H, U):
            for row in mat:
                x, y = row[c1], row[c2]
                row[c1], row[c2] = a * x + b * y, c * x + d * y

    col = 0
    for i in range(k):
        if col >= n:
            break
        for j in range(col + 1, n):
            b = H[i][j]
            if b == 0:
                continue
            a = H[i][col]
            g, x, y = _ext_gcd(a, b)
            colop(col, j, x, y, -b // g, a // g)
        if H[i][col] == 0:
            continue
        if H[i][col] < 0:
            for mat in (H, U):
                for row in mat:
                    row[col] = -row[col]
        p = H[i][col]
        for j in range(col):
            t = H[i][j] // p
            if t:
                for mat in (H, U):
                    for row in mat:
                        row[j] -= t * row[col]
        col += 1
    return tuple(tuple(r) for r in H), UnimodularMatrix(tuple(tuple(r) for r in U))


def unimodular_completion(v: Sequence) -> UnimodularMatrix:
    """A unimodular matrix whose first row is v (requires gcd(v) = 1)."""
    iv = _as_int_vector(v)
    g = 0
    for x in iv:
        g = gcd(g, x)
    if g != 1:
        raise ContractError(f"unimodular_completion needs gcd(v) = 1, got {g}; call primitive() first")
    _, A = hnf([iv])  # v A = e_1, so v is the first row of A^{-1}
    U = A.inverse()
    assert U.entries[0] == iv
    return U


# ---------------------------------------------------------------------------
# lattice points


def image_lattice_points(Q: HPolyhedron, sigma: AffineMap, caps: Optional[Caps] = None) -> List[IntVec]:
    """All z in Z^k with Q meeting sigma^{-1}(z), in lexicographic order.

    Coordinates are fixed one at a time; the admissible range of the next
    coordinate comes from two exact LPs over the current fiber, so every leaf
    of the sweep is a non-empty fiber.
    """
    if sigma.source_dim != Q.ambient_dim:
        raise ContractError(f"map source R^{sigma.source_dim} vs polyhedron in R^{Q.ambient_dim}")
    caps = caps or current_caps()
    k = sigma.target_dim
    if lp_solve((0,) * Q.ambient_dim, "max", Q).status == INFEASIBLE:
        return []
    if k == 0:
        return [()]
    out: List[IntVec] = []

    def rng(P: HPolyhedron, i: int):
        row = sigma.matrix[i]
        hi = lp_solve(row, "max", P)
        lo = lp_solve(row, "min", P)
        if hi.status == UNBOUNDED or lo.status == UNBOUNDED:
            raise UnboundedError(f"coordinate {i} of the image is unbounded")
        if hi.status != OPTIMAL:
            return None
        t = sigma.offset[i]
        return ceil(lo.value + t), floor(hi.value + t)

    # bounding box first, so the cap can be reported with the box size
    box = []
    for i in range(k):
        r = rng(Q, i)
        if r is None:
            return []
        box.append(r)
    volume = 1
    for a, b in box:
        volume *= max(0, b - a + 1)
    check_cap("max_lattice_points", volume, caps)

    def sweep(P: HPolyhedron, i: int, prefix: Tuple[int, ...]):
        r = box[0] if i == 0 else rng(P, i)
        if r is None:
            return
        for z in range(r[0], r[1] + 1):
            fixed = P.add_constraints((), (), [sigma.matrix[i]], [z - sigma.offset[i]])
            if i + 1 == k:
                if lp_solve((0,) * P.ambient_dim, "max", fixed).status == OPTIMAL:
                    out.append(prefix + (z,))
            else:
                sweep(fixed, i + 1, prefix + (z,))

    sweep(Q, 0, ())
    return out


def integer_points(P: HPolyhedron, caps: Optional[Caps] = None) -> List[IntVec]:
    """Lattice points of a bounded polyhedron, lexicographically sorted."""
    return image_lattice_points(P, AffineMap.identity(P.ambient_dim), caps)


def integer_points_bruteforce(P: HPolyhedron) -> List[IntVec]:
    """Reference sweep over the whole bounding box with a membership test per point."""
    d = P.ambient_dim
    box = []
    for i in range(d):
        e = [0] * d
        e[i] = 1
        hi, lo = lp_solve(e, "max", P), lp_solve(e, "min", P)
        if hi.status == INFEASIBLE:
            return []
        if hi.status == UNBOUNDED or lo.status == UNBOUNDED:
            raise UnboundedError("unbounded polyhedron")
        box.append(range(ceil(lo.value), floor(hi.value) + 1))
    return [z for z in product(*box) if P.contains(z)]


# ---------------------------------------------------------------------------
# lattice width


@dataclass(frozen=True)
class WidthCertificate:
    direction: IntVec
    width: Rational
    max_point: tuple
    min_point: tuple
    exact: bool = False
    search_radius: int = 0

    def check(self) -> bool:
        v = self.direction
        return (
            any(v)
            and primitive(v) == tuple(v)
            and dot(v, self.max_point) - dot(v, self.min_point) == self.width
        )


def _direction_key(v: IntVec):
    return (sum(abs(x) for x in v), tuple(-x for x in v))


def _directions(k: int, radius: int):
    """Primitive integer vectors with first non-zero entry positive and sup-norm <= radius."""
    for v in product(range(-radius, radius + 1), repeat=k):
        first = next((x for x in v if x), 0)
        if first <= 0:
            continue
        g = 0
        for x in v:
            g = gcd(g, x)
        if g == 1:
            yield v


def _width_along(v, pts):
    vals = [dot(v, p) for p in pts]
    hi = max(range(len(pts)), key=lambda i: (vals[i], pts[i]))
    lo = min(range(len(pts)), key=lambda i: (vals[i], pts[i]))
    return vals[hi] - vals[lo], pts[hi], pts[lo]


def _transference_factor(pts) -> Optional[Rational]:
    """||M^{-1}||_inf for a simplex of affinely independent points (edge matrix M).

    Any direction v satisfies width_v >= ||v||_inf / factor.
    """
    k = len(pts[0])
    base = pts[0]
    chosen = []
    for p in pts[1:]:
        cand = chosen + [tuple(a - b for a, b in zip(p, base))]
        if affine_rank([base] + [tuple(a + b for a, b in zip(c, base)) for c in cand]) == len(cand):
            chosen = cand
        if len(chosen) == k:
            break
    if len(chosen) < k:
        return None
    Minv = inverse(chosen)  # rows of M are edges, so (M v)_i = edge_i . v
    return max(sum(abs(x) for x in row) for row in Minv)


def lattice_width(B: HPolyhedron, v_max: int = 5, caps: Optional[Caps] = None) -> WidthCertificate:
    """Minimum lattice width of a non-empty bounded polyhedron with a certificate.

    Directions with sup-norm up to ``v_max`` are searched. The search radius is
    then extended, within the direction cap, until a simplex inside B proves that
    no longer direction can do better; ``exact`` records whether that proof
    succeeded. Ties: smaller 1-norm first, then lexicographically larger.
    """
    if v_max < 1:
        raise ContractError("v_max must be a positive integer")
    caps = caps or current_caps()
    V = vertices(B, caps)
    if V.is_empty:
        raise EmptySetError("lattice width of an empty set")
    if V.rays:
        raise UnboundedError("lattice width needs a bounded set")
    return lattice_width_of_points(V.vertices, v_max, caps)


def lattice_width_of_points(pts, v_max: int = 5, caps: Optional[Caps] = None) -> WidthCertificate:
    caps = caps or current_caps()
    pts = sorted({qvec(p) for p in pts})
    k = len(pts[0])
    if affine_rank(pts) < k:
        # flat body: an integral normal of its affine hull has width 0
        cands = [primitive(primitive_integer(e)) for e in affine_hull(pts)[0]]
        cands += [v for v in _directions(k, v_max) if len({dot(v, p) for p in pts}) == 1]
        v = min(cands, key=_direction_key)
        return WidthCertificate(v, mpq(0), pts[0], pts[0], True, v_max)

    def search(radius, inner):
        best = None
        count = 0
        for v in _directions(k, radius):
            if inner and max(abs(x) for x in v) <= inner:
                continue
            count += 1
            w, hi, lo = _width_along(v, pts)
            key = (w,) + _direction_key(v)
            if best is None or key < best[0]:
                best = (key, v, w, hi, lo)
        return best

    check_cap("max_directions", (2 * v_max + 1) ** k // 2, caps)
    best = search(v_max, 0)
    radius = v_max
    factor = _transference_factor(pts)
    need = floor(best[2] * factor)
    exact = need <= radius
    if not exact and (2 * need + 1) ** k // 2 <= caps.max_directions:
        more = search(need, radius)
        if more is not None and more[0] < best[0]:
            best = more
        radius = need
        exact = True
    _, v, w, hi, lo = best
    return WidthCertificate(v, w, hi, lo, exact, radius)


def width_along(B_points, v) -> Rational:
    return _width_along(tuple(v), [qvec(p) for p in B_points])[0]


def flt_bound(k: int, table: Optional[Dict[int, Rational]] = None) -> Rational:
    """Upper bound on the flatness constant used only for reporting size bounds."""
    if not isinstance(k, int) or k < 1:
        raise ContractError("flt_bound needs k >= 1")
    if table and k in table:
        return q(table[k])
    if k == 1:
        return mpq(1)
    if k == 2:
        return mpq(11, 5)
    n = k ** 5
    r = isqrt(n)
    return mpq(r if r * r == n else r + 1)
