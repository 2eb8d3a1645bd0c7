"""Resource caps for exhaustive enumerations.

Defaults can be overridden through the ``MILEF_CAPS`` environment variable,
e.g. ``MILEF_CAPS="max_dim=20,max_lattice_points=500000"``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

from .errors import ContractError, ResourceCapError

ENV_VAR = "MILEF_CAPS"


@dataclass(frozen=True)
class Caps:
    max_dim: int = 16  # effective dimension for vertex enumeration
    max_lattice_points: int = 200_000  # integer points of sigma(Q) per enumeration
    max_directions: int = 200_000  # candidate directions in lattice-width search
    max_faces: int = 200_000  # faces visited by min_sq_distance
    max_graph_n: int = 6  # zoo generators
    max_tsp_n: int = 5
    max_minors: int = 5_000_000  # square submatrices inspected by bimodularity_check


def parse_caps(text: str, base: Caps | None = None) -> Caps:
    base = base or Caps()
    names = {f.name for f in fields(Caps)}
    updates = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        key, sep, value = part.partition("=")
        key = key.strip()
        if not sep or key not in names:
            raise ContractError(f"{ENV_VAR}: unknown cap entry {part!r}")
        try:
            updates[key] = int(value)
        except ValueError:
            raise ContractError(f"{ENV_VAR}: cap {key} needs an integer, got {value!r}") from None
        if updates[key] < 0:
            raise ContractError(f"{ENV_VAR}: cap {key} must be non-negative")
    return replace(base, **updates)


def current_caps() -> Caps:
    """Caps in force right now (environment read on every call)."""
    return parse_caps(os.environ.get(ENV_VAR, ""))


def check_cap(name: str, amount: int, caps: Caps | None = None) -> None:
    limit = getattr(caps or current_caps(), name)
    if amount > limit:
        raise ResourceCapError(f"{name} cap exceeded: need {amount}, limit {limit} (override via {ENV_VAR})")
