"""Double-description method over the integers.

Computes a minimal generating system (extreme rays modulo lineality, plus a
lineality basis) of the cone {x : a.x >= 0 for a in ineqs, e.x = 0 for e in eqs}.
All vectors are kept as primitive integer tuples, so no rationals appear in the
inner loop.
"""

from __future__ import annotations

from math import gcd
from typing import List, Sequence, Tuple

from .linalg import integer_nullspace, rank

IntVec = Tuple[int, ...]


def _normalize(v: List[int]) -> IntVec:
    g = 0
    for x in v:
        if x:
            g = gcd(g, x)
            if g == 1:
                break
    if g > 1:
        return tuple(x // g for x in v)
    return tuple(v)


def _dot(a: Sequence[int], x: Sequence[int]) -> int:
    return sum(p * q for p, q in zip(a, x) if p and q)


def cone_generators(ineqs: Sequence[Sequence[int]], eqs: Sequence[Sequence[int]], n: int):
    """Return (rays, lines) generating the cone; rays come with their zero sets.

    The result is a list of (ray, zero_mask) pairs, where bit i of the mask is set
    when ineqs[i] is tight on the ray, and a list of lineality vectors.
    """
    ineqs = [tuple(int(x) for x in a) for a in ineqs]
    lines: List[IntVec] = [tuple(v) for v in integer_nullspace([list(e) for e in eqs], n)] if eqs else [
        tuple(1 if i == j else 0 for j in range(n)) for i in range(n)
    ]
    base_dim = len(lines)
    rays: List[Tuple[IntVec, int]] = []
    processed = 0  # mask of processed inequality indices

    for k, a in enumerate(ineqs):
        bit = 1 << k
        lv = [_dot(a, l) for l in lines]
        piv = next((i for i, v in enumerate(lv) if v), None)
        if piv is not None:
            l0 = lines[piv]
            al = lv[piv]
            if al < 0:
                l0 = tuple(-x for x in l0)
                al = -al
            new_lines = []
            for i, l in enumerate(lines):
                if i == piv:
                    continue
                v = lv[i]
                if v:
                    l = _normalize([al * x - v * y for x, y in zip(l, l0)])
                new_lines.append(l)
            new_rays = []
            for r, mask in rays:
                v = _dot(a, r)
                if v:
                    r = _normalize([al * x - v * y for x, y in zip(r, l0)])
                new_rays.append((r, mask | bit))
            new_rays.append((l0, processed))
            lines = new_lines
            rays = new_rays
            processed |= bit
            continue

        vals = [_dot(a, r) for r, _ in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        if not neg:
            rays = [(r, mask | bit) if vals[i] == 0 else (r, mask) for i, (r, mask) in enumerate(rays)]
            processed |= bit
            continue
        # pointed dimension of the current cone bounds the size of common zero sets
        need = base_dim - len(lines) - 2
        masks = [m for _, m in rays]
        created = []
        for i in pos:
            ri, mi = rays[i]
            vi = vals[i]
            for j in neg:
                common = mi & masks[j]
                if need > 0 and common.bit_count() < need:
                    continue
                adjacent = True
                for t, mt in enumerate(masks):
                    if t != i and t != j and (common & mt) == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                rj = rays[j][0]
                vj = vals[j]
                w = _normalize([vi * y - vj * x for x, y in zip(ri, rj)])
                created.append((w, common | bit))
        kept = []
        for i, (r, mask) in enumerate(rays):
            if vals[i] > 0:
                kept.append((r, mask))
            elif vals[i] == 0:
                kept.append((r, mask | bit))
        rays = kept + created
        processed |= bit
    return rays, lines


def cone_dimension(rays: Sequence[Sequence[int]], lines: Sequence[Sequence[int]], n: int) -> int:
    return rank([list(v) for v in list(rays) + list(lines)], n)
