"""Size guards. Exponential blowups must fail loudly, never silently."""

from __future__ import annotations

import os
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Guards:
    nodes: int = 200_000        # certificate DAG nodes
    family: int = 50_000        # disjunctions per closure round
    enumeration: int = 1 << 16  # parity solutions / lattice level combinations
    zero_one_dim: int = 20      # exhaustive 0-1 enumeration
    subset_vertices: int = 40   # certificate subset search: |V(x)|
    max_t: int = 20

    @classmethod
    def from_env(cls, base: "Guards | None" = None) -> "Guards":
        g = base or cls()
        if "CUTRANK_GUARD_NODES" in os.environ:
            g = replace(g, nodes=int(os.environ["CUTRANK_GUARD_NODES"]))
        if "CUTRANK_GUARD_FAMILY" in os.environ:
            g = replace(g, family=int(os.environ["CUTRANK_GUARD_FAMILY"]))
        return g


def default_guards() -> Guards:
    return Guards.from_env()
