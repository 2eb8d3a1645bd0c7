"""Immutable polyhedral value types: H-descriptions, V-descriptions, affine maps."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple


from ..errors import ContractError
from .linalg import dot
from .rational import QMatrix, QVector, q, qmat, qvec


def _canon_points(points: Iterable[Sequence], d: int, what: str) -> Tuple[QVector, ...]:
    seen = set()
    for p in points:
        v = qvec(p)
        if len(v) != d:
            raise ContractError(f"{what}: point of length {len(v)} in ambient dimension {d}")
        seen.add(v)
    return tuple(sorted(seen))


@dataclass(frozen=True)
class HPolyhedron:
    """{x in R^d : ineq_lhs x <= ineq_rhs, eq_lhs x = eq_rhs}."""

    ineq_lhs: QMatrix
    ineq_rhs: QVector
    eq_lhs: QMatrix = ()
    eq_rhs: QVector = ()
    ambient_dim: Optional[int] = None

    def __post_init__(self):
        d = self.ambient_dim
        if d is None:
            rows = list(self.ineq_lhs) + list(self.eq_lhs)
            if not rows:
                raise ContractError("HPolyhedron without rows needs an explicit ambient_dim")
            d = len(rows[0])
        if not isinstance(d, int) or d < 1:
            raise ContractError(f"ambient_dim must be a positive integer, got {d!r}")
        A = qmat(self.ineq_lhs, d)
        b = qvec(self.ineq_rhs)
        E = qmat(self.eq_lhs, d)
        f = qvec(self.eq_rhs)
        if len(A) != len(b):
            raise ContractError(f"{len(A)} inequality rows but {len(b)} right-hand sides")
        if len(E) != len(f):
            raise ContractError(f"{len(E)} equality rows but {len(f)} right-hand sides")
        object.__setattr__(self, "ineq_lhs", A)
        object.__setattr__(self, "ineq_rhs", b)
        object.__setattr__(self, "eq_lhs", E)
        object.__setattr__(self, "eq_rhs", f)
        object.__setattr__(self, "ambient_dim", d)

    @classmethod
    def universe(cls, d: int) -> "HPolyhedron":
        return cls((), (), (), (), d)

    @classmethod
    def box(cls, lower: Sequence, upper: Sequence) -> "HPolyhedron":
        d = len(lower)
        A, b = [], []
        for i in range(d):
            e = [0] * d
            e[i] = 1
            A.append(e)
            b.append(upper[i])
            A.append([-x for x in e])
            b.append(-q(lower[i]))
        return cls(A, b, (), (), d)

    @property
    def raw_size(self) -> int:
        """Number of inequality rows (an upper bound on the facet count)."""
        return len(self.ineq_lhs)

    @property
    def trivially_infeasible(self) -> bool:
        """A zero row demands 0 <= negative or 0 = non-zero."""
        for a, bi in zip(self.ineq_lhs, self.ineq_rhs):
            if bi < 0 and not any(a):
                return True
        for e, fi in zip(self.eq_lhs, self.eq_rhs):
            if fi != 0 and not any(e):
                return True
        return False

    def contains(self, x: Sequence) -> bool:
        x = qvec(x)
        if len(x) != self.ambient_dim:
            raise ContractError(f"point of length {len(x)} tested against dimension {self.ambient_dim}")
        return all(dot(a, x) <= bi for a, bi in zip(self.ineq_lhs, self.ineq_rhs)) and all(
            dot(e, x) == fi for e, fi in zip(self.eq_lhs, self.eq_rhs)
        )

    def slack(self, x: Sequence) -> QVector:
        return tuple(bi - dot(a, x) for a, bi in zip(self.ineq_lhs, self.ineq_rhs))

    def add_constraints(self, ineq_lhs=(), ineq_rhs=(), eq_lhs=(), eq_rhs=()) -> "HPolyhedron":
        return HPolyhedron(
            self.ineq_lhs + qmat(ineq_lhs, self.ambient_dim),
            self.ineq_rhs + qvec(ineq_rhs),
            self.eq_lhs + qmat(eq_lhs, self.ambient_dim),
            self.eq_rhs + qvec(eq_rhs),
            self.ambient_dim,
        )


@dataclass(frozen=True)
class VPolytope:
    """conv(vertices) + cone(rays); vertices are stored sorted and duplicate-free."""

    vertices: Tuple[QVector, ...]
    rays: Tuple[QVector, ...] = ()
    ambient_dim: Optional[int] = None

    def __post_init__(self):
        d = self.ambient_dim
        if d is None:
            pts = list(self.vertices) + list(self.rays)
            if not pts:
                raise ContractError("VPolytope without points needs an explicit ambient_dim")
            d = len(pts[0])
        if not isinstance(d, int) or d < 1:
            raise ContractError(f"ambient_dim must be a positive integer, got {d!r}")
        object.__setattr__(self, "vertices", _canon_points(self.vertices, d, "vertex"))
        object.__setattr__(self, "rays", _canon_points(self.rays, d, "ray"))
        object.__setattr__(self, "ambient_dim", d)
        if not self.vertices and self.rays:
            raise ContractError("rays without any vertex do not describe a polyhedron")

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    @property
    def is_bounded(self) -> bool:
        return not self.rays

    def vertex_set(self) -> frozenset:
        return frozenset(self.vertices)


@dataclass(frozen=True)
class AffineMap:
    """x -> matrix @ x + offset, from R^source_dim to R^len(offset)."""

    matrix: QMatrix
    offset: QVector
    source_dim: Optional[int] = None

    def __post_init__(self):
        n = self.source_dim
        if n is None:
            if not self.matrix:
                raise ContractError("AffineMap with no rows needs an explicit source_dim")
            n = len(self.matrix[0])
        M = qmat(self.matrix, n)
        t = qvec(self.offset)
        if len(M) != len(t):
            raise ContractError(f"matrix has {len(M)} rows but offset has length {len(t)}")
        object.__setattr__(self, "matrix", M)
        object.__setattr__(self, "offset", t)
        object.__setattr__(self, "source_dim", n)

    @property
    def target_dim(self) -> int:
        return len(self.offset)

    def __call__(self, x: Sequence) -> QVector:
        if len(x) != self.source_dim:
            raise ContractError(f"map expects length {self.source_dim}, got {len(x)}")
        return tuple(dot(row, x) + t for row, t in zip(self.matrix, self.offset))

    def linear_part(self, x: Sequence) -> QVector:
        return tuple(dot(row, x) for row in self.matrix)

    def compose(self, inner: "AffineMap") -> "AffineMap":
        """self o inner."""
        if inner.target_dim != self.source_dim:
            raise ContractError(f"cannot compose: inner target {inner.target_dim} vs outer source {self.source_dim}")
        cols = list(zip(*inner.matrix)) if inner.matrix else [()] * inner.source_dim
        M = [[dot(row, col) for col in cols] for row in self.matrix]
        t = [dot(row, inner.offset) + s for row, s in zip(self.matrix, self.offset)]
        return AffineMap(M, t, inner.source_dim)

    @classmethod
    def identity(cls, d: int) -> "AffineMap":
        return cls([[1 if i == j else 0 for j in range(d)] for i in range(d)], [0] * d, d)

    @classmethod
    def select(cls, d: int, coords: Sequence[int]) -> "AffineMap":
        """Coordinate projection x -> (x[i] for i in coords)."""
        return cls([[1 if j == i else 0 for j in range(d)] for i in coords], [0] * len(coords), d)

    @classmethod
    def zero(cls, d: int) -> "AffineMap":
        """The map to R^0 (used for k = 0)."""
        return cls((), (), d)
