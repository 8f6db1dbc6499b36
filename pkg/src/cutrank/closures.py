"""Split, t-branch split and lattice disjunctions; restricted closures and rank brackets.

Closures here range over a *finite* family (integer vectors with bounded
entries), so every closure computed is a superset of the true closure and
round counts are upper bounds on the true rank.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

from .config import Guards, default_guards
from .constructions import frac_support, half_integral, round_point
from .errors import DimensionError, GuardError, PreconditionError
from .exactgeom import (
    EQ, GE, LE, HPolytope, LinearRow, VPolytope, _dedupe_rows, dd_convert_h_to_v, dd_convert_v_to_h,
    dot, empty_hpolytope, hrep_contains, hull_of_union, slice_vertices,
)
from .parity import ParitySystem, small_support_subset

MODES = ("split", "tbranch", "lattice")


def _canonical_int_vector(pi) -> tuple:
    vec = tuple(int(v) for v in pi)
    if any(Fraction(v) != Fraction(w) for v, w in zip(vec, pi)):
        raise PreconditionError("disjunction vectors must be integral")
    if not any(vec):
        raise PreconditionError("disjunction vector is zero")
    g = 0
    for v in vec:
        g = math.gcd(g, v)
    if g != 1:
        raise PreconditionError(f"disjunction vector {vec} is not primitive (gcd {g})")
    return vec


@dataclass(frozen=True, order=True)
class SplitDisjunction:
    """``pi.x <= delta`` or ``pi.x >= delta + 1``; stored with first nonzero entry positive."""

    pi: tuple
    delta: int

    def __post_init__(self):
        vec = _canonical_int_vector(self.pi)
        delta = int(self.delta)
        lead = next(v for v in vec if v)
        if lead < 0:
            vec = tuple(-v for v in vec)
            delta = -delta - 1
        object.__setattr__(self, "pi", vec)
        object.__setattr__(self, "delta", delta)

    def cells(self):
        return (LinearRow(self.pi, LE, self.delta), LinearRow(self.pi, GE, self.delta + 1))

    def separates(self, v) -> bool:
        """True if ``v`` lies strictly inside the excluded slab."""
        val = dot(self.pi, v)
        return self.delta < val < self.delta + 1


@dataclass(frozen=True)
class TBranchDisjunction:
    terms: tuple

    def __post_init__(self):
        terms = tuple(sorted(set(self.terms)))
        if not terms:
            raise PreconditionError("a t-branch disjunction needs at least one term")
        dims = {len(s.pi) for s in terms}
        if len(dims) != 1:
            raise DimensionError("terms have different dimensions")
        object.__setattr__(self, "terms", terms)

    @property
    def t(self) -> int:
        return len(self.terms)


@dataclass(frozen=True)
class LatticeDisjunction:
    pis: tuple

    def __post_init__(self):
        vecs = set()
        for pi in self.pis:
            if not any(pi):
                continue
            vec = _canonical_int_vector(pi)
            if next(v for v in vec if v) < 0:
                vec = tuple(-v for v in vec)
            vecs.add(vec)
        if not vecs:
            raise PreconditionError("a lattice disjunction needs a nonzero vector")
        object.__setattr__(self, "pis", tuple(sorted(vecs)))

    @property
    def t(self) -> int:
        return len(self.pis)


@dataclass(frozen=True)
class FamilySpec:
    mode: str
    t: int
    coeff_bound: int
    dim: int

    def __post_init__(self):
        if self.mode not in MODES:
            raise PreconditionError(f"mode must be one of {MODES}")
        if self.t < 1 or self.coeff_bound < 1 or self.dim < 1:
            raise PreconditionError("t, coeff_bound and dim must be positive")
        if self.mode == "split" and self.t != 1:
            raise PreconditionError("split mode has t = 1")


# ---------------------------------------------------------------------------
# applying one disjunction

def _vertices(P: HPolytope, base: VPolytope | None) -> VPolytope:
    return dd_convert_h_to_v(P) if base is None else base


def apply_tbranch(P: HPolytope, D, base: VPolytope | None = None, guards: Guards | None = None) -> VPolytope:
    """conv of the points of ``P`` satisfying every term's disjunction."""
    if isinstance(D, SplitDisjunction):
        D = TBranchDisjunction((D,))
    guards = guards or default_guards()
    if D.t > guards.max_t:
        raise GuardError(f"t = {D.t} exceeds the guard {guards.max_t}", bottleneck="t")
    if len(D.terms[0].pi) != P.dim:
        raise DimensionError("disjunction and polytope dimensions differ")
    V = _vertices(P, base)
    if V.is_empty:
        return V
    if not any(s.separates(v) for s in D.terms for v in V.vertices):
        return V
    cells = []
    for pattern in product((0, 1), repeat=D.t):
        extra = [term.cells()[side] for term, side in zip(D.terms, pattern)]
        cell = slice_vertices(P, extra, base=V)
        if not cell.is_empty:
            cells.append(cell)
    if not cells:
        return VPolytope(P.dim, ())
    return hull_of_union(cells)


def _levels(pi, V: VPolytope) -> range:
    values = [dot(pi, v) for v in V.vertices]
    return range(math.ceil(min(values)), math.floor(max(values)) + 1)


def apply_lattice(P: HPolytope, D: LatticeDisjunction, base: VPolytope | None = None,
                  guards: Guards | None = None) -> VPolytope:
    """conv of the points of ``P`` at which every ``pi.x`` is an integer."""
    guards = guards or default_guards()
    if len(D.pis[0]) != P.dim:
        raise DimensionError("disjunction and polytope dimensions differ")
    V = _vertices(P, base)
    if V.is_empty:
        return V
    if all(dot(pi, v).denominator == 1 for pi in D.pis for v in V.vertices):
        return V
    levels = [_levels(pi, V) for pi in D.pis]
    count = math.prod(len(r) for r in levels)
    if count > guards.enumeration:
        raise GuardError(f"{count} lattice level combinations exceed the guard {guards.enumeration}",
                         bottleneck="lattice levels", count=count)
    cells = []
    for combo in product(*levels):
        extra = [LinearRow(pi, EQ, k) for pi, k in zip(D.pis, combo)]
        cell = slice_vertices(P, extra, base=V)
        if not cell.is_empty:
            cells.append(cell)
    if not cells:
        return VPolytope(P.dim, ())
    return hull_of_union(cells)


# ---------------------------------------------------------------------------
# finite families

def canonical_vectors(dim: int, bound: int) -> list[tuple]:
    """Primitive integer vectors, entries in [-bound, bound], first nonzero positive."""
    out = []
    for vec in product(range(-bound, bound + 1), repeat=dim):
        lead = next((v for v in vec if v), 0)
        if lead <= 0:
            continue
        g = 0
        for v in vec:
            g = math.gcd(g, v)
        if g == 1:
            out.append(vec)
    return sorted(out)


def _meeting_splits(pi, V: VPolytope) -> list[SplitDisjunction]:
    """Splits on ``pi`` whose open slab meets conv(V)."""
    values = [dot(pi, v) for v in V.vertices]
    lo, hi = min(values), max(values)
    return [SplitDisjunction(pi, d) for d in range(math.floor(lo), math.ceil(hi))]


def enumerate_family(F: FamilySpec, V: VPolytope, guards: Guards | None = None) -> list:
    """Disjunctions of the family that can change conv(V), in canonical order.

    split   -- (pi, delta) with some vertex strictly inside the slab
    tbranch -- sets of t distinct splits whose slabs meet conv(V), at least
               one of them containing a vertex
    lattice -- sets of t distinct vectors, at least one taking a
               non-integral value at some vertex
    """
    guards = guards or default_guards()
    if F.dim != V.dim:
        raise DimensionError("family and polytope dimensions differ")
    if V.is_empty:
        return []
    vectors = canonical_vectors(F.dim, F.coeff_bound)
    if F.mode == "split":
        fam = [s for pi in vectors for s in _meeting_splits(pi, V)
               if any(s.separates(v) for v in V.vertices)]
        _check_family(len(fam), guards)
        return fam
    if F.mode == "tbranch":
        splits = [s for pi in vectors for s in _meeting_splits(pi, V)]
        effective = [any(s.separates(v) for v in V.vertices) for s in splits]
        k = min(F.t, len(splits))
        _check_family(math.comb(len(splits), k), guards)
        fam = []
        for idx in combinations(range(len(splits)), k):
            if any(effective[i] for i in idx):
                fam.append(TBranchDisjunction(tuple(splits[i] for i in idx)))
        return fam
    moving = [any(dot(pi, v).denominator != 1 for v in V.vertices) for pi in vectors]
    k = min(F.t, len(vectors))
    _check_family(math.comb(len(vectors), k), guards)
    return [LatticeDisjunction(tuple(vectors[i] for i in idx))
            for idx in combinations(range(len(vectors)), k) if any(moving[i] for i in idx)]


def _check_family(count: int, guards: Guards):
    if count > guards.family:
        raise GuardError(f"family of {count} disjunctions exceeds the guard {guards.family}",
                         bottleneck="family size", count=count)


def apply_disjunction(P: HPolytope, D, base=None, guards=None) -> VPolytope:
    if isinstance(D, LatticeDisjunction):
        return apply_lattice(P, D, base, guards)
    return apply_tbranch(P, D, base, guards)


# ---------------------------------------------------------------------------
# closures and rank brackets

def closure_step(P: HPolytope, F: FamilySpec, base: VPolytope | None = None,
                 guards: Guards | None = None, reverse: bool = False) -> tuple[HPolytope, VPolytope]:
    """One restricted closure round, returned in both representations.

    All disjunction hulls are collected first; the intersection is then
    formed from the deduplicated, canonically sorted row set, so the result
    does not depend on the evaluation order.
    """
    if F.dim != P.dim:
        raise DimensionError("family and polytope dimensions differ")
    V = _vertices(P, base)
    if V.is_empty:
        return empty_hpolytope(P.dim), V
    family = enumerate_family(F, V, guards)
    if reverse:
        family = family[::-1]
    rows = list(P.rows)
    for D in family:
        hull = apply_disjunction(P, D, V, guards)
        if hull.is_empty:
            return empty_hpolytope(P.dim), hull
        if hull != V:
            rows.extend(dd_convert_v_to_h(hull).rows)
    rows = sorted(_dedupe_rows(r.normalized() for r in rows), key=lambda r: (r.rel, r.coeffs, r.rhs))
    Q = HPolytope(P.dim, tuple(rows))
    W = dd_convert_h_to_v(Q)
    if W.is_empty:
        return empty_hpolytope(P.dim), W
    return dd_convert_v_to_h(W), W


def closure_round(P: HPolytope, F: FamilySpec, guards: Guards | None = None, reverse: bool = False) -> HPolytope:
    return closure_step(P, F, guards=guards, reverse=reverse)[0]


@dataclass(frozen=True)
class RankBound:
    rounds: int | None
    history: tuple = field(default=())  # vertex counts per round, starting with P

    @property
    def exhausted(self) -> bool:
        return self.rounds is None


def rank_upper_bound(P: HPolytope, F: FamilySpec, max_rounds: int, guards: Guards | None = None) -> RankBound:
    """Iterate the restricted closure until the integer hull is reached."""
    if max_rounds < 1:
        raise PreconditionError("max_rounds must be positive")
    guards = guards or default_guards()
    target = integer_hull(P, guards)
    H, V = P, dd_convert_h_to_v(P)
    history = [len(V)]
    k = 0
    while V.vertices != target.vertices:
        if k == max_rounds:
            return RankBound(None, tuple(history))
        H, V = closure_step(H, F, V, guards)
        k += 1
        history.append(len(V))
    return RankBound(k, tuple(history))


def zero_one_points(P: HPolytope, guards: Guards | None = None) -> list[tuple]:
    """All 0-1 points of ``P``, by depth-first search with row pruning."""
    guards = guards or default_guards()
    n = P.dim
    if n > guards.zero_one_dim:
        raise GuardError(f"0-1 enumeration in dimension {n} exceeds the guard {guards.zero_one_dim}",
                         bottleneck="0-1 enumeration")
    rows = []
    for row in P.rows:
        for coeffs, rhs in row.as_le():
            d = math.lcm(*(c.denominator for c in coeffs), rhs.denominator)
            rows.append(([int(c * d) for c in coeffs], int(rhs * d)))
    # slack_min[r][i]: smallest possible contribution of coordinates i.. of row r
    slack_min = []
    for a, _ in rows:
        suffix = [0] * (n + 1)
        for i in range(n - 1, -1, -1):
            suffix[i] = suffix[i + 1] + min(0, a[i])
        slack_min.append(suffix)
    found = []
    partial = [0] * len(rows)
    x = [0] * n

    def feasible(i):
        return all(partial[r] + slack_min[r][i] <= rows[r][1] for r in range(len(rows)))

    def dfs(i):
        if not feasible(i):
            return
        if i == n:
            found.append(tuple(Fraction(v) for v in x))
            return
        for val in (0, 1):
            x[i] = val
            if val:
                for r, (a, _) in enumerate(rows):
                    partial[r] += a[i]
            dfs(i + 1)
            if val:
                for r, (a, _) in enumerate(rows):
                    partial[r] -= a[i]
        x[i] = 0

    dfs(0)
    return found


def integer_hull(P: HPolytope, guards: Guards | None = None) -> VPolytope:
    """conv of the 0-1 points of ``P`` (each such point is a vertex)."""
    return VPolytope(P.dim, tuple(zero_one_points(P, guards)))


def balas_sequence(P: HPolytope, t: int, guards: Guards | None = None) -> int:
    """Rounds of unit-vector t-branch disjunctions until the integer hull.

    Coordinates are split into consecutive groups of ``t``; round ``k``
    applies the disjunction ``x_j <= 0 or x_j >= 1`` for every ``j`` in group
    ``k``.  At most ceil(n / t) rounds are ever needed.

    For ``P`` inside the unit cube, the polytope after fixing the groups up
    to ``k`` is conv of the faces ``P & {x_S = a}`` over all 0-1 vectors
    ``a`` (sequential convexification).  So instead of forming each hull we
    track the faces still sticking out of the integer hull and stop when
    none is left.  :func:`balas_hulls` forms the hulls literally.
    """
    if t < 1:
        raise PreconditionError("t must be positive")
    n = P.dim
    target = integer_hull(P, guards)
    target_h = None if target.is_empty else dd_convert_v_to_h(target)

    def settled(W: VPolytope) -> bool:
        if W.is_empty:
            return True
        return target_h is not None and all(hrep_contains(target_h, v) for v in W.vertices)

    V = dd_convert_h_to_v(P)
    if settled(V):
        return 0
    frontier = [(P, V)]
    rounds = 0
    for start in range(0, n, t):
        group = range(start, min(start + t, n))
        rounds += 1
        nxt = []
        for face, W in frontier:
            for bits in product((0, 1), repeat=len(group)):
                fix = [LinearRow(_unit(n, j), EQ, b) for j, b in zip(group, bits)]
                sub = slice_vertices(face, fix, base=W)
                if not settled(sub):
                    nxt.append((HPolytope(n, face.rows + tuple(fix)), sub))
        frontier = nxt
        if not frontier:
            return rounds
    raise AssertionError("fixing every coordinate must reach the integer hull")  # pragma: no cover


def _unit(n: int, j: int) -> tuple:
    return tuple(int(i == j) for i in range(n))


def balas_hulls(P: HPolytope, t: int, guards: Guards | None = None) -> list[VPolytope]:
    """The polytopes of the unit-vector sequence, computed by explicit
    disjunction hulls (one per round, until the integer hull)."""
    n = P.dim
    target = integer_hull(P, guards)
    V = dd_convert_h_to_v(P)
    H = P
    out = [V]
    for start in range(0, n, t):
        if V.vertices == target.vertices:
            break
        terms = tuple(SplitDisjunction(_unit(n, j), 0) for j in range(start, min(start + t, n)))
        V = apply_tbranch(H, TBranchDisjunction(terms), V, guards)
        H = empty_hpolytope(n) if V.is_empty else dd_convert_v_to_h(V)
        out.append(V)
    return out


# ---------------------------------------------------------------------------
# rounding witnesses

@dataclass(frozen=True)
class RoundingWitness:
    J: tuple
    lower: tuple  # x with J rounded down
    upper: tuple  # x with J rounded up


def rounding_witness(x: Sequence, pis: Sequence[Sequence[int]]) -> RoundingWitness:
    """Coordinates ``J`` of the fractional support, ``|J| <= t``, whose joint
    rounding makes every ``pi.x`` integral.

    Column ``j`` of the parity matrix holds the parities of the ``pis`` at
    the ``j``-th fractional coordinate; the target vector marks which
    products ``pi.x`` are fractional.  A small column subset hitting the
    target is exactly a set of coordinates to round.
    """
    x = half_integral(x)
    pis = [tuple(int(v) for v in pi) for pi in pis]
    t = len(pis)
    if t < 1:
        raise PreconditionError("need at least one vector")
    if any(len(pi) != len(x) for pi in pis):
        raise DimensionError("vectors and point have different lengths")
    E = frac_support(x)
    if len(E) < t:
        raise PreconditionError(f"|E(x)| = {len(E)} is smaller than t = {t}")
    matrix = tuple(tuple(pi[k] % 2 for k in E) for pi in pis)
    target = tuple(sum(row) % 2 for row in matrix)
    cols = small_support_subset(ParitySystem(matrix, target, len(E)), t)
    J = tuple(E[j] for j in cols)
    return RoundingWitness(J, round_point(x, J, 0), round_point(x, J, 1))
