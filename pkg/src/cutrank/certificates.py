"""{0,1/2}-certificate DAGs: construction, verification and bound extraction.

A node either has red children (every rounding of at most ``t`` fractional
coordinates, both directions) or blue children (points whose convex hull
contains the node's label but which differ from it).  Under any closure
with the t-rounding property, a red step costs one round and a blue step
costs nothing, so the minimum number of red edges on a root-to-leaf path is
a lower bound on the rank minus one.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .config import Guards, default_guards
from .constructions import (
    HALF, Graph, active_vertices, cropped_cube, cut_size, frac_support, graph_from_json, graph_to_json,
    half_integral, point_to_json, round_point, tseitin_membership, tseitin_polytope,
)
from .errors import CertificateError, FormatError, GuardError, PreconditionError
from .exactgeom import (
    HPolytope, VPolytope, conv_membership, hpolytope_from_json, hpolytope_to_json, hrep_contains, rat,
)
from .parity import ParitySystem, enumerate_parity_solutions

RED = "red"
BLUE = "blue"


@dataclass(frozen=True)
class CertEdge:
    child: int
    color: str
    J: tuple | None = None
    a: int | None = None


@dataclass
class CertNode:
    id: int
    label: tuple
    ell: int
    children: list = field(default_factory=list)
    # vertex set U behind the blue step taken here; on a leaf it is the
    # final step whose zero-budget children were dropped
    blue_set: tuple | None = None

    @property
    def color(self) -> str | None:
        colors = {e.color for e in self.children}
        return colors.pop() if len(colors) == 1 else None


@dataclass(frozen=True)
class Reference:
    """The polytope a certificate lives in, with its membership test."""

    kind: str
    polytope: HPolytope
    graph: Graph | None = None

    @classmethod
    def tseitin(cls, G: Graph) -> "Reference":
        return cls("tseitin", tseitin_polytope(G), G)

    @classmethod
    def hpolytope(cls, P: HPolytope) -> "Reference":
        return cls("hpolytope", P)

    def contains(self, x) -> bool:
        if self.kind == "tseitin":
            return tseitin_membership(self.graph, x)
        return hrep_contains(self.polytope, x)

    def to_json(self) -> dict:
        if self.kind == "tseitin":
            return {"kind": "tseitin", "graph": graph_to_json(self.graph)}
        return {"kind": "hpolytope", "polytope": hpolytope_to_json(self.polytope)}

    @classmethod
    def from_json(cls, data: dict) -> "Reference":
        kind = data.get("kind")
        if kind == "tseitin":
            return cls.tseitin(graph_from_json(data["graph"]))
        if kind == "hpolytope":
            return cls.hpolytope(hpolytope_from_json(data["polytope"]))
        raise FormatError(f"unknown reference kind {kind!r}")


class CertDAG:
    """Certificate nodes, memoized by ``(label, ell)``."""

    def __init__(self, t: int, reference: Reference):
        if t < 1:
            raise PreconditionError("t must be positive")
        self.t = t
        self.reference = reference
        self.nodes: list[CertNode] = []
        self.root: int | None = None
        self._memo: dict = {}

    def __len__(self):
        return len(self.nodes)

    def intern(self, label: Sequence, ell: int) -> tuple[int, bool]:
        key = (tuple(label), ell)
        nid = self._memo.get(key)
        if nid is not None:
            return nid, False
        nid = len(self.nodes)
        self.nodes.append(CertNode(nid, tuple(label), ell))
        self._memo[key] = nid
        return nid, True

    def add_edge(self, parent: int, child: int, color: str, J=None, a=None):
        self.nodes[parent].children.append(CertEdge(child, color, None if J is None else tuple(J), a))

    def kind(self, nid: int) -> str:
        if nid == self.root:
            return "root"
        return "internal" if self.nodes[nid].children else "leaf"

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        nodes = []
        for node in self.nodes:
            item = {"id": node.id, "label": point_to_json(node.label), "ell": node.ell, "children": []}
            for e in node.children:
                edge = {"id": e.child, "color": e.color}
                if e.color == RED:
                    edge["J"] = list(e.J)
                    edge["a"] = e.a
                item["children"].append(edge)
            if node.blue_set is not None:
                item["U"] = list(node.blue_set)
            nodes.append(item)
        return {"t": self.t, "reference": self.reference.to_json(), "nodes": nodes, "root": self.root}

    @classmethod
    def from_json(cls, data: dict, reference: Reference | None = None) -> "CertDAG":
        try:
            ref = reference or Reference.from_json(data["reference"])
            C = cls(int(data["t"]), ref)
            ids = {}
            for item in data["nodes"]:
                label = tuple(rat(v) for v in item["label"])
                nid, fresh = C.intern(label, int(item["ell"]))
                if not fresh:
                    raise FormatError(f"duplicate node for label {point_to_json(label)}, ell {item['ell']}")
                ids[int(item["id"])] = nid
                if "U" in item:
                    C.nodes[nid].blue_set = tuple(int(u) for u in item["U"])
            for item in data["nodes"]:
                parent = ids[int(item["id"])]
                for edge in item["children"]:
                    child = ids.get(int(edge["id"]))
                    if child is None:
                        raise FormatError(f"node {item['id']} points at unknown node {edge['id']}")
                    color = edge["color"]
                    if color == RED:
                        C.add_edge(parent, child, RED, [int(j) for j in edge["J"]], int(edge["a"]))
                    elif color == BLUE:
                        C.add_edge(parent, child, BLUE)
                    else:
                        raise FormatError(f"unknown edge color {color!r}")
            C.root = ids[int(data["root"])]
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(f"malformed certificate: {exc}") from exc
        return C

    def to_dot(self) -> str:
        lines = ["digraph certificate {", "  node [shape=box, fontname=monospace];"]
        for node in self.nodes:
            E = ",".join(str(i) for i in frac_support(node.label)) or "-"
            text = " ".join(point_to_json(node.label))
            lines.append(f'  n{node.id} [label="({text})\\nE={{{E}}} ell={node.ell}"];')
        for node in self.nodes:
            for e in node.children:
                if e.color == RED:
                    J = ",".join(map(str, e.J))
                    lines.append(f'  n{node.id} -> n{e.child} [color=red, label="J={{{J}}} a={e.a}"];')
                else:
                    lines.append(f"  n{node.id} -> n{e.child} [color=blue];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def roundings(E: Sequence[int], t: int) -> list[tuple[tuple, int]]:
    """Every (J, a) with J a nonempty subset of E of size at most t."""
    return [(J, a) for k in range(1, min(t, len(E)) + 1) for J in combinations(E, k) for a in (0, 1)]


# ---------------------------------------------------------------------------
# verification

@dataclass(frozen=True)
class VerifyReport:
    valid: bool
    min_red_count: int
    failures: tuple = ()
    # largest red count over root-to-leaf paths; reported for comparison
    # only, it is not a sound bound
    max_red_count: int = 0

    @property
    def rank_lower_bound(self) -> int:
        return self.min_red_count + 1


def _find_cycle(C: CertDAG) -> int | None:
    state = [0] * len(C.nodes)  # 0 new, 1 on stack, 2 done
    for start in range(len(C.nodes)):
        if state[start]:
            continue
        stack = [(start, iter(C.nodes[start].children))]
        state[start] = 1
        while stack:
            nid, it = stack[-1]
            edge = next(it, None)
            if edge is None:
                state[nid] = 2
                stack.pop()
                continue
            if state[edge.child] == 1:
                return edge.child
            if state[edge.child] == 0:
                state[edge.child] = 1
                stack.append((edge.child, iter(C.nodes[edge.child].children)))
    return None


def _topological(C: CertDAG) -> list[int]:
    """Children before parents."""
    order, seen = [], [False] * len(C.nodes)
    for start in range(len(C.nodes)):
        if seen[start]:
            continue
        seen[start] = True
        stack = [(start, iter(C.nodes[start].children))]
        while stack:
            nid, it = stack[-1]
            edge = next(it, None)
            if edge is None:
                order.append(nid)
                stack.pop()
            elif not seen[edge.child]:
                seen[edge.child] = True
                stack.append((edge.child, iter(C.nodes[edge.child].children)))
    return order


def red_counts(C: CertDAG) -> tuple[list[int], list[int]]:
    """Per node, the min and max number of red edges on a path down to a leaf."""
    lo = [0] * len(C.nodes)
    hi = [0] * len(C.nodes)
    for nid in _topological(C):
        kids = C.nodes[nid].children
        if not kids:
            continue
        step = 1 if C.nodes[nid].color == RED else 0
        lo[nid] = step + min(lo[e.child] for e in kids)
        hi[nid] = step + max(hi[e.child] for e in kids)
    return lo, hi


def verify_certificate(C: CertDAG, P: HPolytope | None = None, t: int | None = None) -> VerifyReport:
    """Check every rule at every node; failures are collected, never raised.

    Without ``P`` the certificate's own reference is used, which for Tseitin
    references means the combinatorial membership test.
    """
    t = C.t if t is None else t
    if P is None:
        contains, dim = C.reference.contains, C.reference.polytope.dim
    else:
        contains, dim = (lambda x: hrep_contains(P, x)), P.dim
    failures = []

    def fail(nid, msg):
        failures.append((nid, msg))

    if C.root is None or not 0 <= C.root < len(C.nodes):
        return VerifyReport(False, 0, ((-1, "missing root"),))
    n_nodes = len(C.nodes)
    for node in C.nodes:
        nid, x = node.id, node.label
        if len(x) != dim:
            fail(nid, f"label has dimension {len(x)}, expected {dim}")
            continue
        if any(v not in (0, HALF, 1) for v in x):
            fail(nid, "label is not half-integral")
            continue
        if not contains(x):
            fail(nid, "label outside the reference polytope")
        if any(not 0 <= e.child < n_nodes for e in node.children):
            fail(nid, "edge to a missing node")
            continue
        color = node.color
        if node.children and color is None:
            fail(nid, "mixed red and blue children")
            continue
        if color == RED:
            E = frac_support(x)
            if len(E) < t:
                fail(nid, f"red node with |E(x)| = {len(E)} < t = {t}")
            present = set()
            for e in node.children:
                J = e.J or ()
                if not J or len(J) > t or any(j not in E for j in J) or e.a not in (0, 1):
                    fail(nid, f"red edge with invalid rounding J={list(J)} a={e.a}")
                    continue
                if C.nodes[e.child].label != round_point(x, J, e.a):
                    fail(nid, f"red child for J={list(J)} a={e.a} has the wrong label")
                    continue
                present.add((tuple(sorted(J)), e.a))
            for J, a in roundings(E, t):
                if (J, a) not in present:
                    fail(nid, f"missing red child J={list(J)} a={a}")
        elif color == BLUE:
            labels = [C.nodes[e.child].label for e in node.children]
            if x in labels:
                fail(nid, "blue node appears among its own children")
            elif not conv_membership(x, VPolytope(dim, tuple(labels)))[0]:
                fail(nid, "label not in the convex hull of its blue children")
    cyc = _find_cycle(C)
    if cyc is not None:
        fail(cyc, "cycle")
        return VerifyReport(False, 0, tuple(failures))
    lo, hi = red_counts(C)
    return VerifyReport(not failures, lo[C.root], tuple(failures), hi[C.root])


def lower_bound(C: CertDAG, P: HPolytope | None = None) -> int:
    """Minimum red count of a certificate, which must verify."""
    report = verify_certificate(C, P)
    if not report.valid:
        nid, msg = report.failures[0]
        raise CertificateError(f"certificate does not verify: node {nid}: {msg}")
    return report.min_red_count


# ---------------------------------------------------------------------------
# Tseitin construction

def _crossing(half: list[tuple[int, int]], mask: int) -> int:
    return sum(1 for u, v in half if (mask >> u & 1) != (mask >> v & 1))


def find_violator(G: Graph, x: Sequence, ell: int, t: int, guards: Guards | None = None) -> tuple | None:
    """Largest ``U`` in V(x), ``|U| <= ell``, with at most (t+1)|U| crossing 1/2-edges.

    Among violators of the largest size the lexicographically first wins.
    A largest violator is inclusion-maximal among violators of bounded size.
    """
    guards = guards or default_guards()
    Vx = active_vertices(G, x)
    if len(Vx) > guards.subset_vertices:
        raise GuardError(f"|V(x)| = {len(Vx)} exceeds the subset-search guard {guards.subset_vertices}",
                         bottleneck="violator search")
    half = [G.edges[i] for i in frac_support(x)]
    for size in range(min(ell, len(Vx)), 0, -1):
        for U in combinations(Vx, size):
            mask = 0
            for u in U:
                mask |= 1 << u
            if _crossing(half, mask) <= (t + 1) * size:
                return U
    return None


def blue_children(G: Graph, x: Sequence, U: Iterable[int], cap: int = 1 << 16) -> list[tuple]:
    """All points agreeing with ``x`` off U's 1/2-edges and 0-1 on them, odd at every vertex of U."""
    U = tuple(U)
    E = frac_support(x)
    free = [i for i in E if G.edges[i][0] in U or G.edges[i][1] in U]
    rows, rhs = [], []
    for u in U:
        rows.append(tuple(int(u in G.edges[i]) for i in free))
        ones = sum(1 for i in G.incident(u) if x[i] == 1)
        rhs.append((1 - ones) % 2)
    sols = enumerate_parity_solutions(ParitySystem(tuple(rows), tuple(rhs), len(free)), cap)
    out = []
    for y in sols:
        z = list(x)
        for i, bit in zip(free, y):
            z[i] = Fraction(bit)
        out.append(tuple(z))
    return out


def build_certificate(G: Graph, t: int, guards: Guards | None = None) -> CertDAG:
    """Certificate for the all-1/2 point of the Tseitin polytope of ``G``.

    The root budget is floor(|V|/2).  A node whose every small vertex set
    has many crossing 1/2-edges gets red children at the same budget;
    otherwise the largest violating set ``U`` is fixed by parity and the
    children get budget ``ell - |U|``.  Children that would reach budget 0
    are not created: their parent becomes a leaf and remembers ``U``.
    """
    guards = guards or default_guards()
    if G.n % 2 == 0:
        raise PreconditionError("the graph needs an odd number of vertices")
    if t < 1:
        raise PreconditionError("t must be positive")
    C = CertDAG(t, Reference.tseitin(G))
    root, _ = C.intern((HALF,) * G.m, G.n // 2)
    C.root = root
    queue = deque([root])
    while queue:
        nid = queue.popleft()
        node = C.nodes[nid]
        x, ell = node.label, node.ell
        if ell == 0:
            continue
        U = find_violator(G, x, ell, t, guards)
        if U is None:
            E = frac_support(x)
            if len(E) < t:
                continue
            kids = [(round_point(x, J, a), J, a) for J, a in roundings(E, t)]
            for y, J, a in kids:
                cid, fresh = C.intern(y, ell)
                C.add_edge(nid, cid, RED, J, a)
                if fresh:
                    queue.append(cid)
        else:
            node.blue_set = U
            if ell == len(U):
                continue
            for y in blue_children(G, x, U, guards.enumeration):
                cid, fresh = C.intern(y, ell - len(U))
                C.add_edge(nid, cid, BLUE)
                if fresh:
                    queue.append(cid)
        if len(C.nodes) > guards.nodes:
            raise GuardError(f"certificate exceeded {guards.nodes} nodes", bottleneck="certificate nodes",
                             count=len(C.nodes))
    return C


def cropped_cube_certificate(n: int, t: int, guards: Guards | None = None) -> CertDAG:
    """All-red certificate: every point with more than ``t`` fractional
    coordinates lies in the cropped cube together with all its roundings."""
    guards = guards or default_guards()
    if not 1 <= t <= n:
        raise PreconditionError("need 1 <= t <= n")
    C = CertDAG(t, Reference.hpolytope(cropped_cube(n)))

    def budget(x):
        return (len(frac_support(x)) - 1) // t

    root_label = (HALF,) * n
    C.root, _ = C.intern(root_label, budget(root_label))
    queue = deque([C.root])
    while queue:
        nid = queue.popleft()
        x = C.nodes[nid].label
        E = frac_support(x)
        if len(E) <= t:
            continue
        for J, a in roundings(E, t):
            y = round_point(x, J, a)
            cid, fresh = C.intern(y, budget(y))
            C.add_edge(nid, cid, RED, J, a)
            if fresh:
                queue.append(cid)
        if len(C.nodes) > guards.nodes:
            raise GuardError(f"certificate exceeded {guards.nodes} nodes", bottleneck="certificate nodes",
                             count=len(C.nodes))
    return C


# ---------------------------------------------------------------------------
# path accounting

def path_profiles(C: CertDAG) -> set[tuple[int, frozenset]]:
    """Every (red count, union of blue sets) realised by a root-to-leaf path.

    Computed bottom-up on sets of pairs rather than by walking paths.
    """
    prof: dict[int, set] = {}
    for nid in _topological(C):
        node = C.nodes[nid]
        own = frozenset(node.blue_set or ())
        if not node.children:
            prof[nid] = {(0, own)}
            continue
        acc = set()
        for e in node.children:
            for reds, S in prof[e.child]:
                acc.add((reds + 1, S) if e.color == RED else (reds, S | own))
        prof[nid] = acc
    return prof[C.root]


def budget_violations(C: CertDAG) -> list[tuple[int, str]]:
    """Edges where ell does not stay put on red steps or drop by |U| on blue steps."""
    bad = []
    for node in C.nodes:
        for e in node.children:
            child = C.nodes[e.child]
            if e.color == RED and child.ell != node.ell:
                bad.append((node.id, "ell changed on a red step"))
            if e.color == BLUE:
                need = node.ell - len(node.blue_set or ())
                if node.blue_set is None or child.ell != need:
                    bad.append((node.id, "ell did not drop by |U| on a blue step"))
    return bad


def accounting_bound(G: Graph, t: int, S: Iterable[int]) -> int:
    """Red steps forced on a path whose blue sets union to ``S``."""
    S = set(S)
    return max(0, math.ceil(Fraction(cut_size(G, S) - (t + 1) * len(S), t)))


def expansion_bound(c: Fraction, n: int, t: int) -> int:
    """Guaranteed red count ceil((c - (t+1)) * floor(n/2) / t), clipped at 0."""
    return max(0, math.ceil((Fraction(c) - (t + 1)) * (n // 2) / t))


def half_vector(n: int) -> tuple:
    return tuple([HALF] * n)


def check_labels(points: Iterable[Sequence]) -> list[tuple]:
    return [half_integral(p) for p in points]
