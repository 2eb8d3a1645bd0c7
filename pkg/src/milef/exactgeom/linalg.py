"""Exact linear algebra over the rationals (Gaussian elimination, null spaces)."""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

from gmpy2 import mpq

from ..errors import ContractError
from .rational import QVector, Rational, primitive_integer, q


def dot(u: Sequence, v: Sequence) -> Rational:
    if len(u) != len(v):
        raise ContractError(f"dot: length mismatch {len(u)} vs {len(v)}")
    s = mpq(0)
    for a, b in zip(u, v):
        if a and b:
            s += a * b
    return s


def mat_vec(M: Sequence[Sequence], x: Sequence) -> QVector:
    return tuple(dot(row, x) for row in M)


def sub(u: Sequence, v: Sequence) -> QVector:
    return tuple(a - b for a, b in zip(u, v))


def add(u: Sequence, v: Sequence) -> QVector:
    return tuple(a + b for a, b in zip(u, v))


def scale(c, v: Sequence) -> QVector:
    return tuple(c * a for a in v)


def transpose(M: Sequence[Sequence], ncols: Optional[int] = None) -> List[List]:
    if not M:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*M)]


def rref(rows: Sequence[Sequence], ncols: Optional[int] = None) -> Tuple[List[List[Rational]], List[int]]:
    """Reduced row echelon form; returns the non-zero rows and their pivot columns."""
    A = [[q(x) for x in r] for r in rows]
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    pivots: List[int] = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        pr = A[r]
        nz = [j for j in range(c, n) if pr[j] != 0]
        for i in range(len(A)):
            if i != r:
                f = A[i][c]
                if f != 0:
                    row = A[i]
                    for j in nz:
                        row[j] -= f * pr[j]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def rank(rows: Sequence[Sequence], ncols: Optional[int] = None) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> List[QVector]:
    """Basis of {x : rows @ x = 0}; one vector per free column, with a 1 in that column."""
    R, piv = rref(rows, ncols) if rows else ([], [])
    pivset = set(piv)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [mpq(0)] * ncols
        v[f] = mpq(1)
        for row, pc in zip(R, piv):
            v[pc] = -row[f]
        basis.append(tuple(v))
    return basis


def integer_nullspace(rows: Sequence[Sequence], ncols: int) -> List[Tuple[int, ...]]:
    return [primitive_integer(v) for v in nullspace(rows, ncols)]


def solve(A: Sequence[Sequence], b: Sequence) -> Optional[QVector]:
    """Some solution of A x = b, or None when inconsistent (free variables set to 0)."""
    n = len(A[0]) if A else 0
    aug = [list(r) + [q(bi)] for r, bi in zip(A, b)]
    R, piv = rref(aug, n + 1)
    if piv and piv[-1] == n:
        return None
    x = [mpq(0)] * n
    for row, pc in zip(R, piv):
        x[pc] = row[n]
    return tuple(x)


def inverse(A: Sequence[Sequence]) -> List[List[Rational]]:
    n = len(A)
    aug = [list(map(q, r)) + [mpq(1) if i == j else mpq(0) for j in range(n)] for i, r in enumerate(A)]
    R, piv = rref(aug, 2 * n)
    if piv[:n] != list(range(n)):
        raise ContractError("matrix is singular")
    return [row[n:] for row in R[:n]]


def det(A: Sequence[Sequence]) -> Rational:
    """Determinant by elimination (exact)."""
    M = [list(map(q, r)) for r in A]
    n = len(M)
    d = mpq(1)
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c] != 0), None)
        if p is None:
            return mpq(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            d = -d
        piv = M[c][c]
        d *= piv
        for i in range(c + 1, n):
            f = M[i][c] / piv
            if f:
                Mi, Mc = M[i], M[c]
                for j in range(c, n):
                    Mi[j] -= f * Mc[j]
    return d


def int_det(A: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant for integer matrices."""
    M = [list(map(int, r)) for r in A]
    n = len(M)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            p = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if p is None:
                return 0
            M[k], M[p] = M[p], M[k]
            sign = -sign
        mkk = M[k][k]
        for i in range(k + 1, n):
            Mi, Mk = M[i], M[k]
            mik = Mi[k]
            for j in range(k + 1, n):
                Mi[j] = (mkk * Mi[j] - mik * Mk[j]) // prev
        prev = mkk
    return sign * M[n - 1][n - 1]


def affine_hull(points: Sequence[Sequence]) -> Tuple[List[QVector], List[Rational]]:
    """Equations (E, f) with aff(points) = {x : E x = f}; E has full row rank."""
    if not points:
        raise ContractError("affine hull of no points")
    d = len(points[0])
    p0 = [q(x) for x in points[0]]
    diffs = [[q(x) - y for x, y in zip(p, p0)] for p in points[1:]]
    E = nullspace(diffs, d) if diffs else [tuple(mpq(1) if i == j else mpq(0) for j in range(d)) for i in range(d)]
    E = [tuple(map(mpq, primitive_integer(e))) for e in E]
    f = [dot(e, p0) for e in E]
    return E, f


def affine_rank(points: Sequence[Sequence]) -> int:
    """Dimension of the affine hull (-1 for no points)."""
    if not points:
        return -1
    p0 = points[0]
    return rank([[q(x) - y for x, y in zip(p, p0)] for p in points[1:]], len(p0))


def project_to_affine_hull(p: Sequence, points: Sequence[Sequence]) -> QVector:
    """Orthogonal projection of p onto aff(points), exact."""
    s0 = [q(x) for x in points[0]]
    diffs = [[q(x) - y for x, y in zip(s, s0)] for s in points[1:]]
    basis, _ = rref(diffs, len(s0)) if diffs else ([], [])
    if not basis:
        return tuple(s0)
    # Gram system on the row-space basis
    G = [[dot(u, v) for v in basis] for u in basis]
    rhs = [dot(u, [a - b for a, b in zip(p, s0)]) for u in basis]
    t = solve(G, rhs)
    out = list(s0)
    for coef, u in zip(t, basis):
        if coef:
            for j, uj in enumerate(u):
                if uj:
                    out[j] += coef * uj
    return tuple(out)


def sq_norm(v: Sequence) -> Rational:
    return sum((x * x for x in v), mpq(0))
