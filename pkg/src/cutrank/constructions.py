"""Graphs, the Tseitin and cropped-cube polytopes, and half-integral points."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import FormatError, GenerationError, GuardError, PreconditionError
from .exactgeom import GE, LE, HPolytope, LinearRow, rat

HALF = Fraction(1, 2)
ZERO = Fraction(0)
ONE = Fraction(1)

EXPANSION_MAX_VERTICES = 22
CROPPED_MAX_DIM = 20


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on ``0..n-1``.

    The edge order is the coordinate order of every derived polytope or
    point, so it is never re-sorted after construction.
    """

    n: int
    edges: tuple

    def __post_init__(self):
        if self.n < 1:
            raise PreconditionError("a graph needs at least one vertex")
        norm, seen = [], set()
        for e in self.edges:
            if len(e) != 2:
                raise FormatError(f"edge {e!r} is not a pair")
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise FormatError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise FormatError(f"edge ({u}, {v}) outside 0..{self.n - 1}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise FormatError(f"parallel edge {key}")
            seen.add(key)
            norm.append(key)
        object.__setattr__(self, "edges", tuple(norm))

    @property
    def m(self) -> int:
        return len(self.edges)

    def incident(self, u: int) -> list[int]:
        """Indices of edges touching ``u``, in edge order."""
        return [i for i, e in enumerate(self.edges) if u in e]

    def degree(self, u: int) -> int:
        return sum(1 for e in self.edges if u in e)

    def neighbors(self, u: int) -> list[int]:
        return [v if w == u else w for w, v in self.edges if u in (w, v)]

    def adjacency_masks(self) -> list[int]:
        adj = [0] * self.n
        for u, v in self.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return adj


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple(combinations(range(n), 2)))


def cycle_graph(n: int) -> Graph:
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> Graph:
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)))


# ---------------------------------------------------------------------------
# graph files

def graph_to_json(G: Graph) -> dict:
    return {"n": G.n, "edges": [list(e) for e in G.edges]}


def graph_from_json(data: dict) -> Graph:
    try:
        return Graph(int(data["n"]), tuple(tuple(e) for e in data["edges"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed graph JSON: {exc}") from exc


def parse_dimacs(text: str) -> Graph:
    """DIMACS-like edge list: ``p edge n m`` then ``e u v`` lines, 1-indexed."""
    n = None
    edges = []
    for lineno, line in enumerate(text.splitlines(), 1):
        parts = line.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "p":
            if len(parts) < 4:
                raise FormatError(f"line {lineno}: bad problem line")
            n = int(parts[2])
        elif parts[0] == "e":
            if len(parts) < 3:
                raise FormatError(f"line {lineno}: bad edge line")
            edges.append((int(parts[1]) - 1, int(parts[2]) - 1))
        else:
            raise FormatError(f"line {lineno}: unexpected token {parts[0]!r}")
    if n is None:
        raise FormatError("missing 'p edge n m' header")
    return Graph(n, tuple(edges))


# ---------------------------------------------------------------------------
# half-integral points

def half_integral(values: Iterable) -> tuple:
    """Validate and convert to a tuple over {0, 1/2, 1}."""
    out = tuple(rat(v) for v in values)
    for v in out:
        if v not in (ZERO, HALF, ONE):
            raise FormatError(f"entry {v} is not 0, 1/2 or 1")
    return out


def frac_support(x: Sequence) -> tuple:
    """E(x): indices where ``x`` equals 1/2."""
    return tuple(i for i, v in enumerate(x) if v == HALF)


def half_edges(G: Graph, x: Sequence) -> tuple:
    """Edges of H(x) as index list (same as E(x) for edge-indexed points)."""
    return frac_support(x)


def active_vertices(G: Graph, x: Sequence) -> tuple:
    """V(x): vertices with at least one incident 1/2-edge."""
    vs = set()
    for i in frac_support(x):
        vs.update(G.edges[i])
    return tuple(sorted(vs))


def point_to_json(x: Sequence) -> list:
    return [str(v) if v.denominator == 1 else f"{v.numerator}/{v.denominator}" for v in x]


def round_point(x: Sequence, J: Iterable[int], a: int) -> tuple:
    """``x`` with the coordinates in ``J`` (all fractional) set to ``a``."""
    if a not in (0, 1):
        raise PreconditionError("rounding target must be 0 or 1")
    J = tuple(J)
    x = tuple(x)
    for j in J:
        if not 0 <= j < len(x) or x[j] != HALF:
            raise PreconditionError(f"index {j} is not in the fractional support")
    out = list(x)
    for j in J:
        out[j] = Fraction(a)
    return tuple(out)


# ---------------------------------------------------------------------------
# polytopes

def _gray_even_subsets(k: int) -> list[int]:
    masks = []
    for i in range(1 << k):
        g = i ^ (i >> 1)
        if g.bit_count() % 2 == 0:
            masks.append(g)
    return masks


def tseitin_polytope(G: Graph) -> HPolytope:
    """Parity rows for every vertex and even neighbour subset, then bounds."""
    rows = []
    m = G.m
    for u in range(G.n):
        inc = G.incident(u)
        if not inc:
            raise PreconditionError(f"vertex {u} is isolated")
        block = []
        for mask in _gray_even_subsets(len(inc)):
            F = tuple(e for k, e in enumerate(inc) if mask >> k & 1)
            coeffs = [ZERO] * m
            for e in inc:
                coeffs[e] = -ONE if e in F else ONE
            block.append((len(F), F, LinearRow(tuple(coeffs), GE, ONE - len(F))))
        block.sort(key=lambda item: (item[0], item[1]))
        rows.extend(r for _, _, r in block)
    for e in range(m):
        unit = tuple(ONE if i == e else ZERO for i in range(m))
        rows.append(LinearRow(unit, GE, ZERO))
        rows.append(LinearRow(unit, LE, ONE))
    return HPolytope(m, tuple(rows))


def tseitin_membership(G: Graph, x: Sequence) -> bool:
    """Combinatorial membership test for half-integral points.

    Vertices touching a 1/2-edge need at least two of them; the others need
    an odd number of incident 1-edges.
    """
    x = half_integral(x)
    if len(x) != G.m:
        raise PreconditionError("point is not indexed by the edges of G")
    halves = [0] * G.n
    ones = [0] * G.n
    for (u, v), val in zip(G.edges, x):
        if val == HALF:
            halves[u] += 1
            halves[v] += 1
        elif val == ONE:
            ones[u] += 1
            ones[v] += 1
    for u in range(G.n):
        if halves[u]:
            if halves[u] < 2:
                return False
        elif ones[u] % 2 == 0:
            return False
    return True


def odd_parity_system(G: Graph):
    """The mod-2 system 'every vertex has odd degree' on the edge variables."""
    from .parity import ParitySystem

    rows = [tuple(int(u in e) for e in G.edges) for u in range(G.n)]
    return ParitySystem(tuple(rows), tuple([1] * G.n), G.m)


def cropped_cube(n: int) -> HPolytope:
    """One half-slab row per corner of the cube plus the bounds."""
    if n < 1:
        raise PreconditionError("n must be positive")
    if n > CROPPED_MAX_DIM:
        raise GuardError(f"cropped cube with 2^{n} rows exceeds the guard n <= {CROPPED_MAX_DIM}",
                         bottleneck="cropped cube rows", count=1 << n)
    rows = []
    for mask in range(1 << n):
        coeffs = tuple(ONE if mask >> i & 1 else -ONE for i in range(n))
        outside = n - mask.bit_count()
        rows.append(LinearRow(coeffs, GE, HALF - outside))
    for i in range(n):
        unit = tuple(ONE if j == i else ZERO for j in range(n))
        rows.append(LinearRow(unit, GE, ZERO))
        rows.append(LinearRow(unit, LE, ONE))
    return HPolytope(n, tuple(rows))


# ---------------------------------------------------------------------------
# expansion

@dataclass(frozen=True)
class ExpansionReport:
    expansion: Fraction
    witness: tuple
    examined: int


def cut_size(G: Graph, S: Iterable[int]) -> int:
    S = set(S)
    return sum(1 for u, v in G.edges if (u in S) != (v in S))


def edge_expansion(G: Graph) -> ExpansionReport:
    """Exact minimum of e(S, V-S)/|S| over nonempty S with |S| <= n/2."""
    if G.n > EXPANSION_MAX_VERTICES:
        raise GuardError(
            f"exhaustive expansion limited to n <= {EXPANSION_MAX_VERTICES}; "
            "use the bounded-size subset search of the certificate builder instead",
            bottleneck="expansion subsets",
        )
    if G.n < 2:
        raise PreconditionError("expansion needs at least two vertices")
    adj = G.adjacency_masks()
    best = None
    witness = None
    examined = 0
    for size in range(1, G.n // 2 + 1):
        for S in combinations(range(G.n), size):
            mask = 0
            for u in S:
                mask |= 1 << u
            cut = sum((adj[u] & ~mask).bit_count() for u in S)
            examined += 1
            ratio = Fraction(cut, size)
            if best is None or ratio < best:
                best, witness = ratio, S
    return ExpansionReport(best, witness, examined)


def random_regular_graph(n: int, d: int, seed: int, budget: int = 20000) -> Graph:
    """Configuration-model pairing with rejection of loops and multi-edges."""
    if n < 1 or d < 1:
        raise PreconditionError("n and d must be positive")
    if (n * d) % 2:
        raise PreconditionError("n * d must be even")
    if d >= n:
        raise PreconditionError("degree must be smaller than n")
    rng = random.Random(seed)
    stubs = [v for v in range(n) for _ in range(d)]
    for _ in range(budget):
        rng.shuffle(stubs)
        edges = set()
        ok = True
        for i in range(0, len(stubs), 2):
            u, v = stubs[i], stubs[i + 1]
            key = (min(u, v), max(u, v))
            if u == v or key in edges:
                ok = False
                break
            edges.add(key)
        if ok:
            return Graph(n, tuple(sorted(edges)))
    raise GenerationError(f"no simple {d}-regular pairing on {n} vertices in {budget} attempts; retry with a new seed")
