"""Exact rational scalars and the vector/matrix aliases built on them.

``gmpy2.mpq`` is the scalar type: it is always normalised (lowest terms,
positive denominator) and roughly ten times faster than ``fractions.Fraction``.
It compares and hashes equal to ``Fraction`` and ``int`` values.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence, Tuple

from gmpy2 import mpq, mpz

from ..errors import ContractError

Rational = type(mpq(0))
QVector = Tuple[Rational, ...]
QMatrix = Tuple[QVector, ...]

ZERO = mpq(0)
ONE = mpq(1)

_RATIONAL_RE = re.compile(r"^\s*(-?\d+)(?:/(\d+))?\s*$")


def q(x) -> Rational:
    """Coerce an exact number (int, Fraction, mpq, mpz or "p/q" string) to mpq."""
    if isinstance(x, Rational):
        return x
    if isinstance(x, bool):
        raise ContractError("booleans are not rationals")
    if isinstance(x, (int, Fraction)) or type(x) is type(mpz(0)):
        return mpq(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise ContractError(f"expected an exact rational, got {type(x).__name__}: {x!r}")


def parse_rational(text: str, field: str = "value") -> Rational:
    """Parse ``"p"`` or ``"p/q"`` with ``q > 0``; errors name the offending field."""
    if not isinstance(text, str):
        if isinstance(text, int) and not isinstance(text, bool):
            return mpq(text)
        raise ContractError(f"{field}: expected a rational string 'p/q', got {text!r}")
    m = _RATIONAL_RE.match(text)
    if not m:
        raise ContractError(f"{field}: malformed rational {text!r} (expected 'p' or 'p/q' with q > 0)")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ContractError(f"{field}: zero denominator in {text!r}")
    return mpq(num, den)


def format_rational(x) -> str:
    x = q(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def qvec(values: Iterable) -> QVector:
    return tuple(v if type(v) is Rational else q(v) for v in values)


def qmat(rows: Iterable[Iterable], ncols: int | None = None) -> QMatrix:
    out = tuple(qvec(r) for r in rows)
    if ncols is not None:
        for i, r in enumerate(out):
            if len(r) != ncols:
                raise ContractError(f"row {i} has length {len(r)}, expected {ncols}")
    elif out:
        n0 = len(out[0])
        if any(len(r) != n0 for r in out):
            raise ContractError("ragged matrix")
    return out


def is_integral(x) -> bool:
    return q(x).denominator == 1


def lowest_terms_ok(x) -> bool:
    """True when ``x`` is stored with gcd(num, den) = 1 and den > 0."""
    x = q(x)
    return x.denominator > 0 and gcd(int(x.numerator), int(x.denominator)) == 1


def primitive_integer(v: Sequence) -> Tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector with the same direction."""
    v = [q(x) for x in v]
    den = 1
    for x in v:
        d = int(x.denominator)
        den = den // gcd(den, d) * d
    ints = [int(x * den) for x in v]
    g = 0
    for a in ints:
        g = gcd(g, a)
    if g == 0:
        return tuple(ints)
    return tuple(a // g for a in ints)
