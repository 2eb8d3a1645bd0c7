"""Mixed-integer extended formulations: fibers, mixed-integer hulls, the
recursive slicing family, Balas unions and the conversion to a linear
extended formulation."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple

from gmpy2 import mpq

from .config import Caps, current_caps
from .errors import ContractError, EmptySetError, UnboundedError, VerificationError
from .exactgeom import AffineMap, HPolyhedron, VPolytope, hull, irredundant, lp_solve, project, vertices
from .exactgeom.hv import in_convex_hull, prune_to_vertices
from .exactgeom.linalg import dot, rank
from .exactgeom.lp import INFEASIBLE, OPTIMAL
from .exactgeom.rational import Rational, q, qvec
from .lattice import (
    WidthCertificate,
    _direction_key,
    _directions,
    flt_bound,
    image_lattice_points,
    lattice_width_of_points,
    unimodular_completion,
)
from .metrics import INF, rdist


@dataclass(frozen=True)
class Milef:
    """(Q, sigma, pi): the set conv(pi(Q cap sigma^{-1}(Z^k)))."""

    Q: HPolyhedron
    sigma: AffineMap
    pi: AffineMap
    m: Optional[int] = None  # declared facet count; defaults to the row count of Q

    def __post_init__(self):
        if self.sigma.source_dim != self.Q.ambient_dim:
            raise ContractError(f"sigma reads R^{self.sigma.source_dim} but Q lives in R^{self.Q.ambient_dim}")
        if self.pi.source_dim != self.Q.ambient_dim:
            raise ContractError(f"pi reads R^{self.pi.source_dim} but Q lives in R^{self.Q.ambient_dim}")
        if self.m is None:
            object.__setattr__(self, "m", self.Q.raw_size)
        elif self.m < 0:
            raise ContractError("declared facet count must be non-negative")

    @property
    def ell(self) -> int:
        return self.Q.ambient_dim

    @property
    def k(self) -> int:
        return self.sigma.target_dim

    @property
    def d(self) -> int:
        return self.pi.target_dim

    @property
    def complexity(self) -> Tuple[int, int]:
        return (self.m, self.k)

    def check_declared_size(self) -> bool:
        """Declared m is at least the irredundant facet count of Q."""
        return self.m >= irredundant(self.Q).raw_size


def fiber(M: Milef, z: Sequence) -> HPolyhedron:
    """Q intersected with sigma^{-1}(z)."""
    z = qvec(z)
    if len(z) != M.k:
        raise ContractError(f"fiber index has length {len(z)}, expected {M.k}")
    rhs = [zi - t for zi, t in zip(z, M.sigma.offset)]
    return M.Q.add_constraints((), (), M.sigma.matrix, rhs)


def check_bounded(Q: HPolyhedron) -> bool:
    """False when Q is non-empty and unbounded.

    The recession cone {x : Ax <= 0, Ex = 0} is trivial exactly when the rows
    span R^d and some strictly positive combination of the A-rows plus a
    combination of the E-rows vanishes; that is one LP with d equality rows.
    """
    d = Q.ambient_dim
    A, E = list(Q.ineq_lhs), list(Q.eq_lhs)
    if rank(A + E, d) == d:
        m, me = len(A), len(E)
        cols = [[A[i][j] for i in range(m)] + [E[i][j] for i in range(me)] for j in range(d)]
        lower = [[-1 if i == j else 0 for j in range(m + me)] for i in range(m)]
        combo = HPolyhedron(lower, [-1] * m, cols, [0] * d, m + me)
        if lp_solve((0,) * (m + me), "max", combo).status == OPTIMAL:
            return True
    return lp_solve((0,) * d, "max", Q).status == INFEASIBLE


def fiber_indices(M: Milef, caps: Optional[Caps] = None) -> List[tuple]:
    """I = {z in Z^k : Q meets sigma^{-1}(z)}."""
    return image_lattice_points(M.Q, M.sigma, caps)


def fiber_vertices(
    M: Milef, caps: Optional[Caps] = None, index_source: Optional[Milef] = None
) -> Dict[tuple, Tuple[tuple, ...]]:
    """Vertices of every non-empty fiber, keyed by the fiber index.

    ``index_source`` is an equivalent MILEF with the same sigma-image (e.g. the
    formulation before auxiliary variables were projected out) that is cheaper
    for the LP sweep; boundedness is checked on it as well.
    """
    src = index_source or M
    if not check_bounded(src.Q):
        raise UnboundedError("mixed-integer hulls are only computed for bounded Q")
    out = {}
    for z in fiber_indices(src, caps):
        V = vertices(fiber(M, z), caps)
        if V.vertices:
            out[z] = V.vertices
    return out


def mixed_integer_hull(M: Milef, caps: Optional[Caps] = None) -> VPolytope:
    """Vertices of conv(Q cap sigma^{-1}(Z^k)) in R^ell."""
    pts = {v for vs in fiber_vertices(M, caps).values() for v in vs}
    return VPolytope(prune_to_vertices(pts), (), M.ell)


def projected_hull(M: Milef, caps: Optional[Caps] = None) -> VPolytope:
    """Vertices of the set the MILEF describes, conv(pi(Q_sigma)), in R^d."""
    pts = {M.pi(v) for vs in fiber_vertices(M, caps).values() for v in vs}
    return VPolytope(prune_to_vertices(pts), (), M.d)


# ---------------------------------------------------------------------------
# Balas union


def balas_union(parts: Sequence[HPolyhedron]) -> Tuple[HPolyhedron, AffineMap]:
    """Lifted description of conv(union of bounded non-empty parts).

    Variables are (x^1, ..., x^t, lambda_1, ..., lambda_t) with
    A_i x^i <= lambda_i b_i, E_i x^i = lambda_i f_i, lambda >= 0, sum lambda = 1;
    the projection sums the blocks.
    """
    parts = list(parts)
    if not parts:
        raise ContractError("balas_union needs at least one part")
    ell = parts[0].ambient_dim
    if any(P.ambient_dim != ell for P in parts):
        raise ContractError("all parts must share the ambient dimension")
    for i, P in enumerate(parts):
        if lp_solve((0,) * ell, "max", P).status == INFEASIBLE:
            raise ContractError(f"part {i} is empty; filter empty parts before the union")
        if not check_bounded(P):
            raise UnboundedError(
                f"part {i} is unbounded; the lifted union only describes the closure of the hull in that case"
            )
    t = len(parts)
    n = t * ell + t
    A, b, E, f = [], [], [], []
    for i, P in enumerate(parts):
        off = i * ell
        lam = t * ell + i
        for a, bi in zip(P.ineq_lhs, P.ineq_rhs):
            row = [0] * n
            row[off:off + ell] = a
            row[lam] = -bi
            A.append(row)
            b.append(0)
        for e, fi in zip(P.eq_lhs, P.eq_rhs):
            row = [0] * n
            row[off:off + ell] = e
            row[lam] = -fi
            E.append(row)
            f.append(0)
    for i in range(t):
        row = [0] * n
        row[t * ell + i] = -1
        A.append(row)
        b.append(0)
    E.append([0] * (t * ell) + [1] * t)
    f.append(1)
    proj = AffineMap([[1 if j % ell == r and j < t * ell else 0 for j in range(n)] for r in range(ell)], [0] * ell, n)
    return HPolyhedron(A, b, E, f, n), proj


def verify_projection_equals_hull(ext: HPolyhedron, proj: AffineMap, points: Sequence[Sequence]) -> bool:
    """proj(ext) == conv(points), checked with LPs over ext.

    Every point must be the image of a point of ext, and every facet and
    equation of conv(points) must hold on all of proj(ext).
    """
    H = hull(points)
    for p in points:
        fixed = ext.add_constraints((), (), proj.matrix, [pi - t for pi, t in zip(qvec(p), proj.offset)])
        if lp_solve((0,) * ext.ambient_dim, "max", fixed).status != OPTIMAL:
            return False
    for a, bi in zip(H.ineq_lhs, H.ineq_rhs):
        c = [dot(a, col) for col in zip(*proj.matrix)]
        r = lp_solve(c, "max", ext)
        if r.status != OPTIMAL or r.value + dot(a, proj.offset) > bi:
            return False
    for e, fi in zip(H.eq_lhs, H.eq_rhs):
        c = [dot(e, col) for col in zip(*proj.matrix)]
        for sense in ("max", "min"):
            r = lp_solve(c, sense, ext)
            if r.status != OPTIMAL or r.value + dot(e, proj.offset) != fi:
                return False
    return True


# ---------------------------------------------------------------------------
# slicing


@dataclass(frozen=True)
class Subspace:
    """{x : rows x = rhs}, stored together with the same system on sigma-values.

    ``z_rows``/``z_rhs`` describe the subspace as {x : z_rows . sigma(x) = z_rhs},
    which is how the fiber-cover property is checked exactly.
    """

    rows: Tuple[tuple, ...]
    rhs: Tuple[Rational, ...]
    z_rows: Tuple[tuple, ...]
    z_rhs: Tuple[Rational, ...]

    def as_polyhedron(self, ell: int) -> HPolyhedron:
        return HPolyhedron((), (), self.rows, self.rhs, ell)

    def contains_index(self, z: Sequence) -> bool:
        return all(dot(u, z) == r for u, r in zip(self.z_rows, self.z_rhs))


@dataclass(frozen=True)
class SubspaceFamily:
    subspaces: Tuple[Subspace, ...]
    ambient_dim: int

    def __len__(self):
        return len(self.subspaces)

    def polyhedra(self) -> List[HPolyhedron]:
        return [s.as_polyhedron(self.ambient_dim) for s in self.subspaces]


@dataclass(frozen=True)
class SliceStep:
    family: SubspaceFamily
    tau: Optional[AffineMap]
    direction: Optional[tuple]
    levels: Tuple[int, ...]
    empty: bool = False
    count_bound: Optional[Rational] = None
    bound_certified: Optional[bool] = None
    # lattice width of sigma(D_sigma) against (1 + d')/d' * flt_bound(k), d' = measured rdist
    width: Optional[WidthCertificate] = None
    width_bound: Optional[Rational] = None


def _restrict(D: HPolyhedron, S: Subspace) -> HPolyhedron:
    return D.add_constraints((), (), S.rows, S.rhs)


def slice_once(
    D: HPolyhedron,
    sigma: AffineMap,
    delta,
    v_max: int = 5,
    measured=None,
    caps: Optional[Caps] = None,
) -> SliceStep:
    """One elimination step: cut D by level sets of v . sigma(x) for the best direction v.

    The direction minimises the number of occupied levels among primitive
    vectors of sup-norm at most v_max. ``measured`` is rdist(D_sigma, D) when the
    caller knows it; it is only used to report the theoretical count bound.
    """
    delta = q(delta)
    if delta <= 0:
        raise ContractError("delta must be positive")
    k = sigma.target_dim
    if k < 1:
        raise ContractError("slice_once needs at least one integrality constraint")
    pts = image_lattice_points(D, sigma, caps)
    ell = D.ambient_dim
    if not pts:
        return SliceStep(SubspaceFamily((), ell), None, None, (), empty=True)
    best = None
    for v in _directions(k, v_max):
        levels = sorted({dot(v, z) for z in pts})
        key = (len(levels),) + _direction_key(v)
        if best is None or key < best[0]:
            best = (key, v, levels)
    _, v, levels = best
    U = unimodular_completion(v)
    phi = AffineMap([list(r) for r in U.entries[1:]], [0] * (k - 1), k) if k > 1 else AffineMap.zero(k)
    tau = phi.compose(sigma) if k > 1 else AffineMap.zero(ell)
    row = tuple(sum((v[i] * sigma.matrix[i][j] for i in range(k)), mpq(0)) for j in range(ell))
    shift = dot(v, sigma.offset)
    fam = tuple(
        Subspace((row,), (mpq(lv) - shift,), (tuple(mpq(x) for x in v),), (mpq(lv),)) for lv in levels
    )
    bound = certified = wcert = wbound = None
    if measured is not None and measured is not INF and measured > 0:
        wcert = lattice_width_of_points(pts, v_max, caps)
        wbound = (1 + measured) / measured * flt_bound(k)
        bound = 1 + wbound
        certified = len(levels) <= bound
        if not certified:
            warnings.warn(
                f"slab count {len(levels)} exceeds the theoretical bound {bound}; no better direction within v_max={v_max}"
            )
    return SliceStep(
        SubspaceFamily(fam, ell), tau, v, tuple(int(x) for x in levels), False, bound, certified, wcert, wbound
    )


@dataclass(frozen=True)
class SliceCertificate:
    family: SubspaceFamily
    delta: Rational
    fiber_cover_checked: bool
    rdist_achieved: object  # Rational or INF
    theoretical_size_bound: Rational
    steps: Tuple[dict, ...] = ()
    sandwich_checked: bool = False


def size_product(k: int, delta) -> Rational:
    delta = q(delta)
    out = mpq(1)
    for i in range(1, k + 1):
        out *= 1 + (1 + delta) / delta * flt_bound(i)
    return out


def _vertices_of(P: HPolyhedron, caps) -> Tuple[tuple, ...]:
    V = vertices(P, caps)
    if V.rays:
        raise UnboundedError("slicing needs a bounded polyhedron")
    return V.vertices


def slice_family(
    D: HPolyhedron,
    sigma: AffineMap,
    delta,
    v_max: int = 5,
    validate: bool = True,
    caps: Optional[Caps] = None,
) -> SliceCertificate:
    """Recursive slicing: a family H of affine subspaces with D_sigma inside D_H and
    rdist(D_sigma, D_H) <= delta, where D_H = conv(union of D cap H)."""
    delta = q(delta)
    if delta <= 0:
        raise ContractError("delta must be positive")
    if sigma.source_dim != D.ambient_dim:
        raise ContractError("sigma must read the ambient space of D")
    caps = caps or current_caps()
    ell = D.ambient_dim
    k = sigma.target_dim
    if not check_bounded(D):
        raise UnboundedError("slicing needs a bounded polyhedron")
    steps: List[dict] = []

    def mi_hull(P, s):
        pts = set()
        for z in image_lattice_points(P, s, caps):
            pts.update(_vertices_of(P.add_constraints((), (), s.matrix, [zi - t for zi, t in zip(z, s.offset)]), caps))
        return prune_to_vertices(sorted(pts)) if pts else []

    def rec(P: HPolyhedron, s: AffineMap, Phi, prefix: Subspace, depth: int) -> List[Subspace]:
        # invariant: s = Phi o sigma with Phi an integer matrix (no offset)
        if s.target_dim == 0:
            return [prefix]
        Ds = mi_hull(P, s)
        if not Ds:
            return []
        DV = _vertices_of(P, caps)
        measured = rdist(VPolytope(Ds, (), ell), VPolytope(DV, (), ell), check=False)
        if measured <= delta:
            return [prefix]
        step = slice_once(P, s, delta, v_max, measured, caps)
        steps.append(
            {
                "depth": depth,
                "direction": step.direction,
                "levels": step.levels,
                "rdist_before": measured,
                "count_bound": step.count_bound,
                "bound_certified": step.bound_certified,
                "width": step.width.width if step.width else None,
                "width_exact": step.width.exact if step.width else None,
                "width_bound": step.width_bound,
            }
        )
        v = step.direction
        zrow = tuple(sum((v[i] * Phi[i][j] for i in range(len(v))), mpq(0)) for j in range(k))
        phi = _phi_rows(v) if len(v) > 1 else []
        Phi2 = [[sum((r[i] * Phi[i][j] for i in range(len(v))), 0) for j in range(k)] for r in phi] if phi else []
        out = []
        for H in step.family.subspaces:
            sub = Subspace(prefix.rows + H.rows, prefix.rhs + H.rhs, prefix.z_rows + (zrow,), prefix.z_rhs + H.z_rhs)
            out.extend(rec(_restrict(P, H), step.tau, Phi2, sub, depth + 1))
        return out

    top = Subspace((), (), (), ())
    ident = [[int(i == j) for j in range(k)] for i in range(k)]
    fam = SubspaceFamily(tuple(rec(D, sigma, ident, top, 0)), ell)
    theo = size_product(k, delta)
    cover = sandwich = False
    achieved = None
    if validate:
        cover = check_fiber_cover(D, sigma, fam, caps)
        Dsig = mi_hull(D, sigma)
        DH = sorted({v for H in fam.subspaces for v in _vertices_of(_restrict(D, H), caps)})
        sandwich = all(in_convex_hull(p, DH) for p in Dsig) if Dsig else True
        if Dsig:
            achieved = rdist(VPolytope(prune_to_vertices(Dsig), (), ell), VPolytope(prune_to_vertices(DH), (), ell),
                             check=False)
        else:
            achieved = mpq(0) if not DH else INF
        if not cover or not sandwich:
            raise VerificationError("slice family failed its fiber-cover or sandwich check")
    return SliceCertificate(fam, delta, cover, achieved, theo, tuple(steps), sandwich)


def _phi_rows(v):
    """Rows 2..k of the unimodular completion of v."""
    return [list(r) for r in unimodular_completion(v).entries[1:]]


def check_fiber_cover(D: HPolyhedron, sigma: AffineMap, fam: SubspaceFamily, caps=None) -> bool:
    """Every z in sigma(D) cap Z^k lies in the sigma-image description of some member."""
    for z in image_lattice_points(D, sigma, caps):
        if not any(S.contains_index(z) for S in fam.subspaces):
            return False
    return True


# ---------------------------------------------------------------------------
# MILEF -> LEF


@dataclass(frozen=True)
class LefReport:
    rdist_achieved: object
    epsilon_bound: Rational
    inequality_count: int
    slice_count_bound: int  # sum over slices of (facets + 1)
    theoretical_bound: Rational
    slices: int
    hull_vertices: int
    contains_target: bool
    balas_verified: Optional[bool] = None
    irredundant_count: Optional[int] = None


def milef_to_lef(
    M: Milef,
    delta,
    epsilon=0,
    v_max: int = 5,
    verify_balas: bool = False,
    count_irredundant: bool = False,
    caps: Optional[Caps] = None,
) -> Tuple[HPolyhedron, AffineMap, LefReport]:
    """Approximate the MILEF by a linear extended formulation.

    Slices Q by the recursive family, drops empty slices, and joins the
    irredundant slices with a Balas union; the returned map is pi composed with
    the union's projection.
    """
    delta = q(delta)
    epsilon = q(epsilon)
    caps = caps or current_caps()
    cert = slice_family(M.Q, M.sigma, delta, v_max, validate=True, caps=caps)
    parts = []
    for H in cert.family.subspaces:
        P = _restrict(M.Q, H)
        if lp_solve((0,) * M.ell, "max", P).status == INFEASIBLE:
            continue
        parts.append(irredundant(P))
    if not parts:
        raise EmptySetError("every slice is empty, so the described set is empty")
    ext, sumproj = balas_union(parts)
    proj = M.pi.compose(sumproj)
    C = projected_hull(M, caps)
    slice_pts = sorted({M.pi(v) for P in parts for v in _vertices_of(P, caps)})
    image = VPolytope(prune_to_vertices(slice_pts), (), M.d)
    contains = all(in_convex_hull(c, image.vertices) for c in C.vertices)
    achieved = rdist(C, image, check=False) if contains else None
    balas_ok = None
    if verify_balas:
        all_pts = sorted({v for P in parts for v in _vertices_of(P, caps)})
        balas_ok = verify_projection_equals_hull(ext, sumproj, all_pts)
    irr = irredundant(ext).raw_size if count_irredundant else None
    report = LefReport(
        rdist_achieved=achieved,
        epsilon_bound=epsilon + delta + 2 * epsilon * delta,
        inequality_count=ext.raw_size,
        slice_count_bound=sum(P.raw_size + 1 for P in parts),
        theoretical_bound=lef_size_bound(M.m, M.k, delta),
        slices=len(parts),
        hull_vertices=len(image.vertices),
        contains_target=contains,
        balas_verified=balas_ok,
        irredundant_count=irr,
    )
    return ext, proj, report


def lef_size_bound(m: int, k: int, delta) -> Rational:
    """(m + 1) * prod_{i=1..k} (1 + (1 + delta)/delta * flt_bound(i))."""
    delta = q(delta)
    if delta <= 0:
        raise ContractError("delta must be positive")
    if k < 0 or m < 0:
        raise ContractError("m and k must be non-negative")
    return (m + 1) * size_product(k, delta)


# ---------------------------------------------------------------------------
# faces


def restrict_to_face(M: Milef, phi: AffineMap, tau2: AffineMap, check: bool = True, caps=None) -> Milef:
    """The MILEF (Q cap H, sigma, tau2 o pi) with H = {x : phi(pi(x)) = 0}.

    With ``check`` the precondition phi(pi(x)) >= 0 is verified on every fiber vertex.
    """
    if phi.source_dim != M.d or phi.target_dim != 1:
        raise ContractError("phi must map the target space to R^1")
    if tau2.source_dim != M.d:
        raise ContractError("tau2 must read the target space")
    g = phi.compose(M.pi)
    if check:
        for z, vs in fiber_vertices(M, caps).items():
            for v in vs:
                if g(v)[0] < 0:
                    raise ContractError(
                        f"face inequality violated at fiber {z}: phi(pi(x)) = {g(v)[0]} < 0"
                    )
    Q2 = M.Q.add_constraints((), (), [g.matrix[0]], [-g.offset[0]])
    return Milef(Q2, M.sigma, tau2.compose(M.pi), M.m)


# ---------------------------------------------------------------------------
# auxiliary-variable elimination


def eliminate_private(M: Milef, caps: Optional[Caps] = None) -> Tuple[Milef, Tuple[int, ...]]:
    """An equivalent MILEF on the coordinates that sigma or pi actually read.

    Coordinates unused by sigma and pi are grouped into blocks that share
    constraint rows; each block is projected out exactly (vertex route when the
    block is bounded, Fourier-Motzkin otherwise). Because sigma and pi ignore these
    coordinates the described set is unchanged. Returns the new MILEF and the
    kept coordinate indices.
    """
    ell = M.ell
    used = {j for row in list(M.sigma.matrix) + list(M.pi.matrix) for j in range(ell) if row[j]}
    private = [j for j in range(ell) if j not in used]
    if not private:
        return M, tuple(range(ell))
    rows = [(a, b, False) for a, b in zip(M.Q.ineq_lhs, M.Q.ineq_rhs)]
    rows += [(e, f, True) for e, f in zip(M.Q.eq_lhs, M.Q.eq_rhs)]
    # union-find over private coordinates sharing a row
    parent = {j: j for j in private}

    def find(j):
        while parent[j] != j:
            parent[j] = parent[parent[j]]
            j = parent[j]
        return j

    for a, _, _ in rows:
        ps = [j for j in private if a[j]]
        for j in ps[1:]:
            parent[find(j)] = find(ps[0])
    blocks: Dict[int, List[int]] = {}
    for j in private:
        blocks.setdefault(find(j), []).append(j)
    kept = sorted(used)
    pos = {j: i for i, j in enumerate(kept)}
    newA, newb, newE, newf = [], [], [], []
    owned = set()
    for members in blocks.values():
        mset = set(members)
        idx = [i for i, (a, _, _) in enumerate(rows) if any(a[j] for j in mset)]
        owned.update(idx)
        pub = sorted({j for i in idx for j in range(ell) if rows[i][0][j] and j not in mset})
        cols = members + pub
        A = [[rows[i][0][j] for j in cols] for i in idx if not rows[i][2]]
        b = [rows[i][1] for i in idx if not rows[i][2]]
        E = [[rows[i][0][j] for j in cols] for i in idx if rows[i][2]]
        f = [rows[i][1] for i in idx if rows[i][2]]
        block = HPolyhedron(A, b, E, f, len(cols))
        if not pub:
            if lp_solve((0,) * len(cols), "max", block).status == INFEASIBLE:
                newA.append([0] * len(kept))
                newb.append(-1)
            continue
        sel = AffineMap.select(len(cols), range(len(members), len(cols)))
        big = replace(caps or current_caps(), max_dim=max((caps or current_caps()).max_dim, len(cols)))
        img = project(block, sel, big)
        for a, bi in zip(img.ineq_lhs, img.ineq_rhs):
            row = [0] * len(kept)
            for t, j in enumerate(pub):
                row[pos[j]] = a[t]
            newA.append(row)
            newb.append(bi)
        for e, fi in zip(img.eq_lhs, img.eq_rhs):
            row = [0] * len(kept)
            for t, j in enumerate(pub):
                row[pos[j]] = e[t]
            newE.append(row)
            newf.append(fi)
    for i, (a, b, is_eq) in enumerate(rows):
        if i in owned:
            continue
        row = [a[j] for j in kept]
        (newE if is_eq else newA).append(row)
        (newf if is_eq else newb).append(b)
    Q2 = HPolyhedron(newA, newb, newE, newf, len(kept))
    sig = AffineMap([[r[j] for j in kept] for r in M.sigma.matrix], M.sigma.offset, len(kept))
    pi = AffineMap([[r[j] for j in kept] for r in M.pi.matrix], M.pi.offset, len(kept))
    return Milef(Q2, sig, pi), tuple(kept)
