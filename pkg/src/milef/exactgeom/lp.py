"""Exact two-phase simplex with Bland's rule.

Free variables are pivoted into the basis up front (Gaussian elimination) and
never leave it, so equality rows cost nothing extra. Single-variable rows are
turned into bounds and the variable is shifted to be non-negative.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from gmpy2 import mpq

from ..errors import ContractError, VerificationError
from .linalg import dot
from .polyhedron import HPolyhedron
from .rational import QVector, Rational, qvec

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LpResult:
    status: str
    value: Optional[Rational] = None
    witness: Optional[QVector] = None  # optimal point, or an improving ray when unbounded

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


def lp_solve(objective: Sequence, sense: str, P: HPolyhedron) -> LpResult:
    """Optimise ``objective . x`` over P exactly. ``sense`` is "max" or "min"."""
    c = qvec(objective)
    if len(c) != P.ambient_dim:
        raise ContractError(f"objective has length {len(c)} but polyhedron lives in R^{P.ambient_dim}")
    if sense not in ("max", "min"):
        raise ContractError(f"sense must be 'max' or 'min', got {sense!r}")
    cmax = c if sense == "max" else tuple(-x for x in c)
    status, value, w = _maximize(cmax, P.ineq_lhs, P.ineq_rhs, P.eq_lhs, P.eq_rhs, P.ambient_dim)
    if status == OPTIMAL:
        if not P.contains(w) or dot(c, w) != (value if sense == "max" else -value):
            raise VerificationError("simplex produced an inconsistent optimum")
        return LpResult(OPTIMAL, value if sense == "max" else -value, w)
    if status == UNBOUNDED:
        _check_ray(P, cmax, w)
    return LpResult(status, None, w)


def is_feasible(P: HPolyhedron) -> bool:
    return lp_solve((0,) * P.ambient_dim, "max", P).status != INFEASIBLE


def feasible_point(P: HPolyhedron) -> Optional[QVector]:
    r = lp_solve((0,) * P.ambient_dim, "max", P)
    return r.witness if r.status == OPTIMAL else None


def _check_ray(P: HPolyhedron, c, ray) -> None:
    ok = (
        all(dot(a, ray) <= 0 for a in P.ineq_lhs)
        and all(dot(e, ray) == 0 for e in P.eq_lhs)
        and dot(c, ray) > 0
    )
    if not ok:
        raise VerificationError("simplex produced an invalid unbounded ray")


@dataclass(frozen=True)
class DualCertificate:
    """Multipliers y >= 0 (inequalities) and mu (equalities) proving optimality."""

    ineq_multipliers: QVector
    eq_multipliers: QVector
    value: Rational


def dual_certificate(objective: Sequence, sense: str, P: HPolyhedron) -> Optional[DualCertificate]:
    """Solve the dual LP and return its optimum (None when the dual has no optimum).

    For max c.x s.t. Ax <= b, Ex = f the dual is min b.y + f.mu with
    A^T y + E^T mu = c, y >= 0; for min the signs are flipped.
    """
    c = qvec(objective)
    if sense == "min":
        c = tuple(-x for x in c)
    m, p, n = len(P.ineq_lhs), len(P.eq_lhs), P.ambient_dim
    nv = m + p
    if nv == 0:
        if any(c):
            return None
        return DualCertificate((), (), mpq(0))
    eq = [[P.ineq_lhs[i][j] for i in range(m)] + [P.eq_lhs[i][j] for i in range(p)] for j in range(n)]
    ineq = [[-1 if k == i else 0 for k in range(nv)] for i in range(m)]
    D = HPolyhedron(ineq, [0] * m, eq, c, nv)
    r = lp_solve(tuple(P.ineq_rhs) + tuple(P.eq_rhs), "min", D)
    if r.status != OPTIMAL:
        return None
    y, mu = r.witness[:m], r.witness[m:]
    val = r.value if sense == "max" else -r.value
    return DualCertificate(y, mu, val)


def check_dual_certificate(objective: Sequence, sense: str, P: HPolyhedron, cert: DualCertificate) -> bool:
    c = qvec(objective)
    if sense == "min":
        c = tuple(-x for x in c)
    y, mu = cert.ineq_multipliers, cert.eq_multipliers
    if any(v < 0 for v in y):
        return False
    for j in range(P.ambient_dim):
        s = sum((P.ineq_lhs[i][j] * y[i] for i in range(len(y))), mpq(0))
        s += sum((P.eq_lhs[i][j] * mu[i] for i in range(len(mu))), mpq(0))
        if s != c[j]:
            return False
    val = dot(P.ineq_rhs, y) + dot(P.eq_rhs, mu)
    return val == (cert.value if sense == "max" else -cert.value)


# ---------------------------------------------------------------------------
# simplex internals

_NEG_INF = None  # marker for "no bound"


def _maximize(c, A, b, E, f, n) -> Tuple[str, Optional[Rational], Optional[QVector]]:
    lo: List[Optional[Rational]] = [None] * n
    hi: List[Optional[Rational]] = [None] * n
    rows_le: List[Tuple[list, Rational]] = []
    rows_eq: List[Tuple[list, Rational]] = []

    for a, bi in zip(A, b):
        nz = [j for j in range(n) if a[j]]
        if not nz:
            if bi < 0:
                return INFEASIBLE, None, None
            continue
        if len(nz) == 1:
            j = nz[0]
            v = bi / a[j]
            if a[j] > 0:
                if hi[j] is None or v < hi[j]:
                    hi[j] = v
            elif lo[j] is None or v > lo[j]:
                lo[j] = v
            continue
        rows_le.append((list(a), bi))
    for e, fi in zip(E, f):
        nz = [j for j in range(n) if e[j]]
        if not nz:
            if fi != 0:
                return INFEASIBLE, None, None
            continue
        if len(nz) == 1:
            j = nz[0]
            v = fi / e[j]
            if hi[j] is None or v < hi[j]:
                hi[j] = v
            if lo[j] is None or v > lo[j]:
                lo[j] = v
            continue
        rows_eq.append((list(e), fi))
    for j in range(n):
        if lo[j] is not None and hi[j] is not None and lo[j] > hi[j]:
            return INFEASIBLE, None, None

    # variable transform: x_j = shift_j + sign_j * y_j with y_j >= 0, or y_j free
    shift = [mpq(0)] * n
    sign = [1] * n
    free = [False] * n
    fixed = [False] * n
    extra_upper: List[Tuple[int, Rational]] = []
    for j in range(n):
        if lo[j] is not None and hi[j] is not None and lo[j] == hi[j]:
            fixed[j] = True
            shift[j] = lo[j]
        elif lo[j] is not None:
            shift[j] = lo[j]
            if hi[j] is not None:
                extra_upper.append((j, hi[j] - lo[j]))
        elif hi[j] is not None:
            shift[j] = hi[j]
            sign[j] = -1
        else:
            free[j] = True
    cols = [j for j in range(n) if not fixed[j]]
    colpos = {j: k for k, j in enumerate(cols)}
    ns = len(cols)

    def transform(a, rhs):
        r = rhs - sum((a[j] * shift[j] for j in range(n) if a[j] and shift[j]), mpq(0))
        return [a[j] * sign[j] for j in cols], r

    le = [transform(a, r) for a, r in rows_le]
    for j, u in extra_upper:
        row = [mpq(0)] * ns
        row[colpos[j]] = mpq(1)
        le.append((row, u))
    eq = [transform(a, r) for a, r in rows_eq]
    cc = [c[j] * sign[j] for j in cols]
    c0 = sum((c[j] * shift[j] for j in range(n) if c[j] and shift[j]), mpq(0))
    isfree = [free[j] for j in cols]

    status, y, val = _simplex(cc, le, eq, isfree)
    if status == INFEASIBLE:
        return INFEASIBLE, None, None
    x = [mpq(0)] * n
    if status == UNBOUNDED:
        for k, j in enumerate(cols):
            x[j] = sign[j] * y[k]
        return UNBOUNDED, None, tuple(x)
    for j in range(n):
        x[j] = shift[j]
    for k, j in enumerate(cols):
        if y[k]:
            x[j] += sign[j] * y[k]
    return OPTIMAL, val + c0, tuple(x)


def _pivot(T, rhs, d, r, e, active_rows):
    """Pivot on (r, e); d is [reduced costs..., z0] updated in place."""
    row = T[r]
    p = row[e]
    if p != 1:
        inv = 1 / p
        for j in range(len(row)):
            if row[j]:
                row[j] *= inv
        rhs[r] *= inv
    nz = [j for j in range(len(row)) if row[j]]
    rr = rhs[r]
    for i in active_rows:
        if i == r:
            continue
        Ti = T[i]
        fct = Ti[e]
        if fct:
            for j in nz:
                Ti[j] -= fct * row[j]
            rhs[i] -= fct * rr
    fct = d[e]
    if fct:
        for j in nz:
            d[j] -= fct * row[j]
        d[-1] += fct * rr


def _simplex(c, le, eq, isfree):
    """max c.y s.t. le rows (a.y <= b), eq rows (a.y = b); y_j >= 0 unless isfree[j].

    Returns (status, y or ray, value).
    """
    ns = len(c)
    m1, m2 = len(le), len(eq)
    nslack = m1
    ncol = ns + nslack
    T: List[List[Rational]] = []
    rhs: List[Rational] = []
    basis: List[Optional[int]] = []
    for i, (a, bi) in enumerate(le):
        row = list(a) + [mpq(0)] * nslack
        row[ns + i] = mpq(1)
        T.append(row)
        rhs.append(bi)
        basis.append(ns + i)
    for a, bi in eq:
        T.append(list(a) + [mpq(0)] * nslack)
        rhs.append(bi)
        basis.append(None)
    nrows = m1 + m2
    locked = [False] * nrows
    d = [mpq(0)] * (ncol + 1)  # dummy objective during elimination

    # phase 0: eliminate free variables, preferring equality rows
    free_nonbasic = []
    for j in range(ns):
        if not isfree[j]:
            continue
        r = None
        for i in list(range(m1, nrows)) + list(range(m1)):
            if not locked[i] and T[i][j]:
                r = i
                break
        if r is None:
            free_nonbasic.append(j)
            continue
        _pivot(T, rhs, d, r, j, range(nrows))
        basis[r] = j
        locked[r] = True

    # drop consistent zero rows, detect inconsistent ones
    keep = []
    for i in range(nrows):
        if basis[i] is None and not any(T[i]):
            if rhs[i] != 0:
                return INFEASIBLE, None, None
            continue
        keep.append(i)
    T = [T[i] for i in keep]
    rhs = [rhs[i] for i in keep]
    basis = [basis[i] for i in keep]
    locked = [locked[i] for i in keep]
    nrows = len(T)

    # artificials for rows that are not primal feasible yet
    art_rows = []
    for i in range(nrows):
        if locked[i]:
            continue
        if basis[i] is None or rhs[i] < 0:
            if rhs[i] < 0:
                T[i] = [-x for x in T[i]]
                rhs[i] = -rhs[i]
            art_rows.append(i)
    nart = len(art_rows)
    if nart:
        for i in range(nrows):
            T[i].extend([mpq(0)] * nart)
        for k, i in enumerate(art_rows):
            T[i][ncol + k] = mpq(1)
            basis[i] = ncol + k
    total = ncol + nart
    unlocked = [i for i in range(nrows) if not locked[i]]
    allrows = range(nrows)

    if nart:
        d = [mpq(0)] * (total + 1)
        for i in art_rows:
            Ti = T[i]
            for j in range(ncol):
                if Ti[j]:
                    d[j] += Ti[j]
            d[-1] -= rhs[i]
        st = _run(T, rhs, d, basis, unlocked, allrows, ncol)
        assert st == OPTIMAL
        if d[-1] < 0:
            return INFEASIBLE, None, None
        # drive remaining artificials out of the basis
        drop = []
        for i in unlocked:
            if basis[i] >= ncol:
                e = next((j for j in range(ncol) if T[i][j] and not _is_basic(j, basis)), None)
                if e is None:
                    drop.append(i)
                else:
                    _pivot(T, rhs, d, i, e, allrows)
                    basis[i] = e
        if drop:
            ds = set(drop)
            sel = [i for i in range(nrows) if i not in ds]
            T = [T[i] for i in sel]
            rhs = [rhs[i] for i in sel]
            basis = [basis[i] for i in sel]
            locked = [locked[i] for i in sel]
            nrows = len(T)
        for i in range(nrows):
            del T[i][ncol:]
        unlocked = [i for i in range(nrows) if not locked[i]]
        allrows = range(nrows)

    # phase 2 objective in terms of the current basis
    d = [mpq(0)] * (ncol + 1)
    for j in range(ns):
        d[j] = c[j]
    for i in range(nrows):
        bj = basis[i]
        cb = d[bj] if bj < ns else 0
        if cb:
            Ti = T[i]
            for j in range(ncol):
                if Ti[j]:
                    d[j] -= cb * Ti[j]
            d[-1] += cb * rhs[i]
    for j in free_nonbasic:
        if d[j]:
            s = 1 if d[j] > 0 else -1
            ray = [mpq(0)] * ns
            ray[j] = mpq(s)
            for i in range(nrows):
                if basis[i] < ns and T[i][j]:
                    ray[basis[i]] = -s * T[i][j]
            return UNBOUNDED, ray, None
    st = _run(T, rhs, d, basis, unlocked, allrows, ncol)
    if st != OPTIMAL:
        e = st[1]
        ray = [mpq(0)] * ns
        if e < ns:
            ray[e] = mpq(1)
        for i in range(nrows):
            if basis[i] < ns and T[i][e]:
                ray[basis[i]] = -T[i][e]
        return UNBOUNDED, ray, None
    y = [mpq(0)] * ns
    for i in range(nrows):
        if basis[i] < ns:
            y[basis[i]] = rhs[i]
    return OPTIMAL, y, d[-1]


def _is_basic(j, basis):
    return j in basis


def _run(T, rhs, d, basis, unlocked, allrows, ncand):
    """Bland-rule iterations; entering candidates are columns < ncand."""
    inbasis = set(basis)
    locked_cols = {basis[i] for i in allrows} - {basis[i] for i in unlocked}
    while True:
        e = -1
        for j in range(ncand):
            if d[j] > 0 and j not in inbasis and j not in locked_cols:
                e = j
                break
        if e < 0:
            return OPTIMAL
        r = -1
        best = None
        for i in unlocked:
            a = T[i][e]
            if a > 0:
                ratio = rhs[i] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[r]):
                    best, r = ratio, i
        if r < 0:
            return (UNBOUNDED, e)
        _pivot(T, rhs, d, r, e, allrows)
        inbasis.discard(basis[r])
        inbasis.add(e)
        basis[r] = e
