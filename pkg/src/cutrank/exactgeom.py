"""Exact rational polyhedral kernel.

Everything here works over :class:`fractions.Fraction` (or plain Python ints
inside the double description engine); no floating point is used anywhere.

Two representations are used side by side:

* :class:`HPolytope` -- rows ``a.x (<=|>=|=) b``;
* :class:`VPolytope` -- a canonical (sorted, deduplicated) vertex list.

Conversions go through an incremental double description engine working on
homogenized integer cones, so both directions are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionError, PreconditionError, UnboundedError, FormatError

Rational = Fraction
RatVector = tuple  # tuple[Fraction, ...]

LE, GE, EQ = "<=", ">=", "="
_RELATIONS = (LE, GE, EQ)


# ---------------------------------------------------------------------------
# rationals and vectors

def rat(value) -> Fraction:
    """Parse an int, Fraction or ``"p/q"`` string into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise FormatError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError as exc:
            raise FormatError(f"not a rational: {value!r}") from exc
    raise FormatError(f"not a rational: {value!r}")


def rvec(values: Iterable) -> tuple:
    return tuple(rat(v) for v in values)


def fmt_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def _lcm_denominators(values) -> int:
    d = 1
    for v in values:
        d = d * v.denominator // math.gcd(d, v.denominator)
    return d


def _primitive(vec: list[int]) -> list[int]:
    g = 0
    for v in vec:
        g = math.gcd(g, v)
    if g > 1:
        return [v // g for v in vec]
    return vec


def _to_int(values: Sequence[Fraction]) -> list[int]:
    """Scale rationals by the lcm of their denominators (positive factor)."""
    d = _lcm_denominators(values)
    return _primitive([int(v * d) for v in values])


# ---------------------------------------------------------------------------
# polytope types

@dataclass(frozen=True)
class LinearRow:
    coeffs: tuple
    rel: str
    rhs: Fraction

    def __post_init__(self):
        if self.rel not in _RELATIONS:
            raise FormatError(f"unknown relation {self.rel!r}")
        object.__setattr__(self, "coeffs", rvec(self.coeffs))
        object.__setattr__(self, "rhs", rat(self.rhs))

    def satisfied_by(self, x: Sequence[Fraction]) -> bool:
        lhs = dot(self.coeffs, x)
        if self.rel == LE:
            return lhs <= self.rhs
        if self.rel == GE:
            return lhs >= self.rhs
        return lhs == self.rhs

    def as_le(self) -> list[tuple[tuple, Fraction]]:
        """The row as one or two ``a.x <= b`` pairs."""
        neg = tuple(-c for c in self.coeffs)
        if self.rel == LE:
            return [(self.coeffs, self.rhs)]
        if self.rel == GE:
            return [(neg, -self.rhs)]
        return [(self.coeffs, self.rhs), (neg, -self.rhs)]

    def normalized(self) -> "LinearRow":
        """Primitive integer form; ``>=`` rows are flipped to ``<=``."""
        coeffs, rhs, rel = self.coeffs, self.rhs, self.rel
        if rel == GE:
            coeffs, rhs, rel = tuple(-c for c in coeffs), -rhs, LE
        ints = _to_int(list(coeffs) + [rhs])
        if rel == EQ:
            lead = next((v for v in ints if v != 0), 0)
            if lead < 0:
                ints = [-v for v in ints]
        return LinearRow(tuple(Fraction(v) for v in ints[:-1]), rel, Fraction(ints[-1]))


@dataclass(frozen=True)
class HPolytope:
    dim: int
    rows: tuple

    def __post_init__(self):
        rows = tuple(self.rows)
        if self.dim < 1:
            raise DimensionError("dimension must be positive")
        if not rows:
            raise PreconditionError("an H-polytope needs at least one row (box rows for cube sets)")
        for r in rows:
            if len(r.coeffs) != self.dim:
                raise DimensionError(f"row of length {len(r.coeffs)} in a dimension-{self.dim} polytope")
        object.__setattr__(self, "rows", rows)

    def __len__(self):
        return len(self.rows)


@dataclass(frozen=True)
class VPolytope:
    dim: int
    vertices: tuple = field(default=())

    def __post_init__(self):
        if self.dim < 1:
            raise DimensionError("dimension must be positive")
        verts = sorted(set(rvec(v) for v in self.vertices))
        for v in verts:
            if len(v) != self.dim:
                raise DimensionError(f"vertex of length {len(v)} in a dimension-{self.dim} polytope")
        object.__setattr__(self, "vertices", tuple(verts))

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    def __len__(self):
        return len(self.vertices)

    @classmethod
    def from_points(cls, dim: int, points: Iterable[Sequence]) -> "VPolytope":
        """Canonical V-representation of conv(points): extreme points only."""
        return VPolytope(dim, _extreme_points(dim, [rvec(p) for p in points]))


def box_rows(n: int) -> list[LinearRow]:
    rows = []
    for i in range(n):
        e = tuple(Fraction(int(j == i)) for j in range(n))
        rows.append(LinearRow(e, GE, Fraction(0)))
        rows.append(LinearRow(e, LE, Fraction(1)))
    return rows


def unit_cube(n: int) -> HPolytope:
    return HPolytope(n, tuple(box_rows(n)))


def empty_hpolytope(dim: int) -> HPolytope:
    """Canonical empty set: the single contradictory row ``0 >= 1``."""
    zero = tuple(Fraction(0) for _ in range(dim))
    return HPolytope(dim, (LinearRow(zero, GE, Fraction(1)),))


def hrep_contains(P: HPolytope, x: Sequence) -> bool:
    if len(x) != P.dim:
        raise DimensionError(f"point of length {len(x)} vs polytope dimension {P.dim}")
    x = rvec(x)
    return all(r.satisfied_by(x) for r in P.rows)


# ---------------------------------------------------------------------------
# double description on integer cones

class _DoubleDescription:
    """Incremental double description of ``{y : a.y <= 0 (or = 0)}``.

    State is a lineality basis plus the extreme rays of the pointed part, each
    ray tagged with a bitmask of the processed rows it makes tight.  All
    vectors are primitive integer lists.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self.lineality = [[int(i == j) for j in range(dim)] for i in range(dim)]
        self.rays: list[tuple[list[int], int]] = []
        self.nrows = 0

    @classmethod
    def from_pointed(cls, dim, rows, rays):
        """Rebuild the state of a pointed cone whose extreme rays are known."""
        dd = cls.__new__(cls)
        dd.dim = dim
        dd.lineality = []
        dd.nrows = len(rows)
        dd.rays = []
        for r in rays:
            mask = 0
            for i, a in enumerate(rows):
                if _idot(a, r) == 0:
                    mask |= 1 << i
            dd.rays.append((r, mask))
        return dd

    def add(self, a: list[int], equality: bool = False) -> None:
        bit = 1 << self.nrows
        self.nrows += 1
        piv = None
        for l in self.lineality:
            al = _idot(a, l)
            if al != 0:
                piv = l
                break
        if piv is not None:
            sgn = 1 if al > 0 else -1
            mag = abs(al)
            lineality = []
            for l in self.lineality:
                if l is piv:
                    continue
                d = _idot(a, l)
                lineality.append(_primitive([mag * u - sgn * d * v for u, v in zip(l, piv)]) if d else l)
            rays = []
            for r, m in self.rays:
                d = _idot(a, r)
                if d:
                    r = _primitive([mag * u - sgn * d * v for u, v in zip(r, piv)])
                rays.append((r, m | bit))
            if not equality:
                rays.append(([-sgn * v for v in piv], bit - 1))
            self.lineality = lineality
            self.rays = rays
            return

        values = [_idot(a, r) for r, _ in self.rays]
        pos = [i for i, v in enumerate(values) if v > 0]
        neg = [i for i, v in enumerate(values) if v < 0]
        new = []
        for i, v in enumerate(values):
            r, m = self.rays[i]
            if v == 0:
                new.append((r, m | bit))
            elif v < 0 and not equality:
                new.append((r, m))
        if pos and neg:
            need = self.dim - len(self.lineality) - 2
            # tight[i]: bitset of rays tight at row i, for the adjacency test
            tight = [0] * self.nrows
            for k, (_, m) in enumerate(self.rays):
                kb = 1 << k
                while m:
                    low = m & -m
                    tight[low.bit_length() - 1] |= kb
                    m ^= low
            everyone = (1 << len(self.rays)) - 1
            for p in pos:
                rp, mp = self.rays[p]
                vp = values[p]
                for q in neg:
                    rq, mq = self.rays[q]
                    common = mp & mq
                    if common.bit_count() < need:
                        continue
                    pair = (1 << p) | (1 << q)
                    acc = everyone
                    m = common
                    while m and acc != pair:
                        low = m & -m
                        acc &= tight[low.bit_length() - 1]
                        m ^= low
                    if acc != pair:
                        continue
                    vq = values[q]
                    new.append((_primitive([vp * u - vq * w for u, w in zip(rq, rp)]), common | bit))
        self.rays = new


def _idot(a, b) -> int:
    return sum(x * y for x, y in zip(a, b))


def _row_sort_key(vec):
    return (sum(1 for v in vec if v), vec)


def _homogenized_rows(P: HPolytope) -> tuple[list[list[int]], list[list[int]]]:
    """Rows of the cone ``{(x, lam): a.x - b lam <= 0, lam >= 0}``."""
    eqs, ineqs = [], []
    for row in P.rows:
        if row.rel == EQ:
            vec = _to_int(list(row.coeffs) + [-row.rhs])
            lead = next((v for v in vec if v), 0)
            if lead < 0:
                vec = [-v for v in vec]
            if any(vec):
                eqs.append(vec)
            continue
        for coeffs, rhs in row.as_le():
            vec = _to_int(list(coeffs) + [-rhs])
            if any(vec):
                ineqs.append(vec)
    ineqs.append([0] * P.dim + [-1])
    eqs = sorted(set(map(tuple, eqs)), key=_row_sort_key)
    ineqs = sorted(set(map(tuple, ineqs)), key=_row_sort_key)
    return [list(e) for e in eqs], [list(i) for i in ineqs]


def _vertices_from_rays(dim, dd: _DoubleDescription) -> list[tuple]:
    verts = []
    recession = bool(dd.lineality)
    for r, _ in dd.rays:
        lam = r[dim]
        if lam > 0:
            verts.append(tuple(Fraction(v, lam) for v in r[:dim]))
        else:
            recession = True
    if verts and recession:
        raise UnboundedError("polyhedron is unbounded")
    return verts


_VREP_CACHE: dict = {}
_HREP_CACHE: dict = {}
_CACHE_LIMIT = 20000


def _remember(cache, key, value):
    if len(cache) >= _CACHE_LIMIT:
        cache.clear()
    cache[key] = value
    return value


def dd_convert_h_to_v(P: HPolytope) -> VPolytope:
    """Vertex set of a bounded H-polytope (empty list when ``P`` is empty)."""
    hit = _VREP_CACHE.get(P)
    if hit is not None:
        return hit
    eqs, ineqs = _homogenized_rows(P)
    dd = _DoubleDescription(P.dim + 1)
    for e in eqs:
        dd.add(e, equality=True)
    for a in ineqs:
        dd.add(a)
    return _remember(_VREP_CACHE, P, VPolytope(P.dim, _vertices_from_rays(P.dim, dd)))


def slice_vertices(P: HPolytope, extra: Sequence[LinearRow], base: VPolytope | None = None) -> VPolytope:
    """Vertices of ``P`` intersected with the ``extra`` rows.

    Reuses the vertex description of ``P`` and runs only the incremental
    double description steps for the new rows.
    """
    base = dd_convert_h_to_v(P) if base is None else base
    if base.is_empty:
        return base
    n = P.dim
    eqs, ineqs = _homogenized_rows(P)
    rows = eqs + ineqs
    rays = [_to_int(list(v) + [Fraction(1)]) for v in base.vertices]
    dd = _DoubleDescription.from_pointed(n + 1, rows, rays)
    for row in extra:
        if len(row.coeffs) != n:
            raise DimensionError("slicing row has the wrong dimension")
        if row.rel == EQ:
            vec = _to_int(list(row.coeffs) + [-row.rhs])
            if any(vec):
                dd.add(vec, equality=True)
            continue
        for coeffs, rhs in row.as_le():
            vec = _to_int(list(coeffs) + [-rhs])
            if any(vec):
                dd.add(vec)
        if not dd.rays:
            break
    return VPolytope(n, _vertices_from_rays(n, dd))


def _nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{a : r.a = 0 for r in rows}`` via exact row reduction."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [u - f * v for u, v in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -m[i][fc]
        basis.append(vec)
    return basis


def _facets(dim: int, points: list[tuple]) -> tuple[list[list[int]], list[tuple[list[int], int]]]:
    """Affine-hull equalities and facets of conv(points) as integer rows.

    Each returned row is ``(a, b)`` meaning ``a.x = b`` (equalities) or
    ``a.x <= b`` (facets).  The facet normals are taken orthogonal to the
    equality normals, which makes the representation canonical.
    """
    p0 = points[0]
    diffs = [[u - v for u, v in zip(p, p0)] for p in points[1:]]
    null = [_to_int(v) for v in _nullspace(diffs, dim)]
    dd = _DoubleDescription(dim + 1)
    for nv in null:
        dd.add(list(nv) + [0], equality=True)
    rows = sorted({tuple(_to_int(list(p) + [Fraction(-1)])) for p in points})
    for r in rows:
        dd.add(list(r))
    assert not dd.lineality, "polar cone of a polytope must be pointed"
    facets = []
    for r, _ in dd.rays:
        a, beta = r[:dim], r[dim]
        if any(a):
            facets.append((a, beta))
    equalities = []
    for nv in null:
        b = dot(nv, p0)
        ints = _to_int([Fraction(v) for v in nv] + [b])
        lead = next(v for v in ints if v)
        if lead < 0:
            ints = [-v for v in ints]
        equalities.append(ints)
    facets.sort(key=lambda ab: (ab[0], ab[1]))
    equalities.sort()
    return equalities, facets


def _extreme_points(dim: int, points: list[tuple]) -> list[tuple]:
    pts = sorted(set(points))
    if len(pts) <= 1:
        return pts
    _, facets = _facets(dim, pts)
    masks = []
    for p in pts:
        m = 0
        for i, (a, b) in enumerate(facets):
            if dot(a, p) == b:
                m |= 1 << i
        masks.append(m)
    keep = []
    for i, m in enumerate(masks):
        if not any(j != i and mj & m == m for j, mj in enumerate(masks)):
            keep.append(pts[i])
    return keep


def dd_convert_v_to_h(Q: VPolytope) -> HPolytope:
    """Irredundant H-representation: affine-hull equalities, then facets."""
    hit = _HREP_CACHE.get(Q)
    if hit is not None:
        return hit
    if Q.is_empty:
        raise PreconditionError("cannot convert an empty vertex list to inequalities")
    equalities, facets = _facets(Q.dim, list(Q.vertices))
    rows = [LinearRow(tuple(Fraction(v) for v in e[:-1]), EQ, Fraction(e[-1])) for e in equalities]
    rows += [LinearRow(tuple(Fraction(v) for v in a), LE, Fraction(b)) for a, b in facets]
    return _remember(_HREP_CACHE, Q, HPolytope(Q.dim, tuple(rows)))


def hull_of_union(parts: Sequence[VPolytope]) -> VPolytope:
    if not parts:
        raise PreconditionError("hull_of_union needs at least one part to know the dimension")
    dim = parts[0].dim
    points = []
    for q in parts:
        if q.dim != dim:
            raise DimensionError("parts have different dimensions")
        points.extend(q.vertices)
    return VPolytope.from_points(dim, points)


def v_contains(Q: VPolytope, x: Sequence) -> bool:
    """Membership via the facet description of ``Q``."""
    if Q.is_empty:
        return False
    return hrep_contains(dd_convert_v_to_h(Q), x)


def v_subset(A: VPolytope, B: VPolytope) -> bool:
    if A.is_empty:
        return True
    if B.is_empty:
        return False
    H = dd_convert_v_to_h(B)
    return all(hrep_contains(H, v) for v in A.vertices)


# ---------------------------------------------------------------------------
# exact simplex (Bland's rule)

@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible"
    value: Fraction | None = None
    point: tuple | None = None

    @property
    def infeasible(self) -> bool:
        return self.status == "infeasible"


def _pivot(T, r, c):
    row = T[r]
    inv = 1 / row[c]
    row = [v * inv for v in row]
    T[r] = row
    for i, other in enumerate(T):
        if i != r:
            f = other[c]
            if f:
                T[i] = [u - f * v if v else u for u, v in zip(other, row)]


def _run_simplex(T, basis, cost, ncols):
    """Maximize ``cost`` over the tableau; returns False when unbounded."""
    while True:
        cb = [cost[b] for b in basis]
        inbasis = set(basis)
        entering = None
        for j in range(ncols):
            if j in inbasis:
                continue
            rj = cost[j] - sum(cb[i] * T[i][j] for i in range(len(T)) if cb[i] and T[i][j])
            if rj > 0:
                entering = j
                break
        if entering is None:
            return True
        leave = None
        best = None
        for i, row in enumerate(T):
            a = row[entering]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            return False
        _pivot(T, leave, entering)
        basis[leave] = entering


def _simplex_nonneg(A, rels, b, c):
    """``max c.z`` s.t. ``A z (rels) b``, ``z >= 0``.

    Returns ``("optimal", value, z)``, ``("infeasible", None, None)`` or
    ``("unbounded", None, None)``.
    """
    nv = len(c)
    rows = []
    for a, rel, bi in zip(A, rels, b):
        a = [Fraction(v) for v in a]
        bi = Fraction(bi)
        if bi < 0:
            a, bi = [-v for v in a], -bi
            rel = {LE: GE, GE: LE, EQ: EQ}[rel]
        rows.append((a, rel, bi))
    n_slack = sum(1 for _, rel, _ in rows if rel != EQ)
    n_art = sum(1 for _, rel, _ in rows if rel != LE)
    art0 = nv + n_slack
    ncols = art0 + n_art
    T, basis = [], []
    s = a_idx = 0
    for a, rel, bi in rows:
        line = a + [Fraction(0)] * (n_slack + n_art) + [bi]
        if rel == LE:
            line[nv + s] = Fraction(1)
            basis.append(nv + s)
            s += 1
        else:
            if rel == GE:
                line[nv + s] = Fraction(-1)
                s += 1
            line[art0 + a_idx] = Fraction(1)
            basis.append(art0 + a_idx)
            a_idx += 1
        T.append(line)

    if n_art:
        cost1 = [Fraction(0)] * art0 + [Fraction(-1)] * n_art
        _run_simplex(T, basis, cost1, ncols)
        if sum(T[i][-1] for i, bv in enumerate(basis) if bv >= art0) > 0:
            return "infeasible", None, None
        i = 0
        while i < len(T):
            if basis[i] >= art0:
                j = next((j for j in range(art0) if T[i][j] != 0), None)
                if j is None:
                    del T[i]
                    del basis[i]
                    continue
                _pivot(T, i, j)
                basis[i] = j
            i += 1
        T = [row[:art0] + [row[-1]] for row in T]
    cost2 = [Fraction(v) for v in c] + [Fraction(0)] * n_slack
    if not _run_simplex(T, basis, cost2, art0):
        return "unbounded", None, None
    z = [Fraction(0)] * art0
    for i, bv in enumerate(basis):
        z[bv] = T[i][-1]
    z = z[:nv]
    return "optimal", dot(c, z), z


def lp_optimize(P: HPolytope, objective: Sequence, sense: str = "max") -> LPResult:
    """Exact optimum of ``objective.x`` over ``P``.

    Raises :class:`UnboundedError` if the objective is unbounded.
    """
    if len(objective) != P.dim:
        raise DimensionError("objective dimension does not match the polytope")
    if sense not in ("max", "min"):
        raise ValueError("sense must be 'max' or 'min'")
    c = rvec(objective)
    sign = 1 if sense == "max" else -1
    A, rels, b = [], [], []
    for row in P.rows:
        A.append(list(row.coeffs) + [-v for v in row.coeffs])
        rels.append(row.rel)
        b.append(row.rhs)
    cost = [sign * v for v in c] + [-sign * v for v in c]
    status, _, z = _simplex_nonneg(A, rels, b, cost)
    if status == "infeasible":
        return LPResult("infeasible")
    if status == "unbounded":
        raise UnboundedError(f"objective unbounded ({sense})")
    n = P.dim
    x = tuple(z[i] - z[n + i] for i in range(n))
    return LPResult("optimal", dot(c, x), x)


def conv_membership(x: Sequence, Q: VPolytope) -> tuple[bool, tuple | None]:
    """Is ``x`` a convex combination of ``Q.vertices``?

    On success the multipliers (nonnegative, summing to one, reproducing
    ``x``) are returned alongside ``True``.  When ``x`` happens to be the
    plain average of the vertices the uniform multipliers are returned
    without solving an LP.
    """
    if len(x) != Q.dim:
        raise DimensionError("point and polytope dimensions differ")
    x = rvec(x)
    if Q.is_empty:
        return False, None
    k = len(Q.vertices)
    centroid = tuple(sum(v[j] for v in Q.vertices) / k for j in range(Q.dim))
    if centroid == x:
        return True, tuple(Fraction(1, k) for _ in range(k))
    A = [[v[j] for v in Q.vertices] for j in range(Q.dim)]
    A.append([Fraction(1)] * k)
    b = list(x) + [Fraction(1)]
    status, _, lam = _simplex_nonneg(A, [EQ] * len(A), b, [Fraction(0)] * k)
    if status != "optimal":
        return False, None
    return True, tuple(lam)


# ---------------------------------------------------------------------------
# intersections

def _dedupe_rows(rows: Iterable[LinearRow]) -> list[LinearRow]:
    seen, out = set(), []
    for r in rows:
        key = r.normalized()
        if key in seen:
            continue
        seen.add(key)
        out.append(r)
    return out


def intersect(Ps: Sequence[HPolytope]) -> HPolytope:
    """Intersection with redundant rows removed (LP-based test).

    A row is dropped when optimizing its left-hand side over the other kept
    rows never crosses its right-hand side.  Rows are examined from last to
    first, so among mutually redundant rows the earliest survives.
    """
    if not Ps:
        raise PreconditionError("intersect needs at least one polytope")
    dim = Ps[0].dim
    if any(P.dim != dim for P in Ps):
        raise DimensionError("polytopes have different dimensions")
    rows = _dedupe_rows(r for P in Ps for r in P.rows)
    zero = tuple(Fraction(0) for _ in range(dim))
    if lp_optimize(HPolytope(dim, tuple(rows)), zero).infeasible:
        return empty_hpolytope(dim)
    kept = list(rows)
    for row in reversed(rows):
        others = [r for r in kept if r is not row]
        if not others:
            continue
        if _implied(HPolytope(dim, tuple(others)), row):
            kept.remove(row)
    return HPolytope(dim, tuple(kept))


def _implied(P: HPolytope, row: LinearRow) -> bool:
    try:
        if row.rel in (LE, EQ):
            hi = lp_optimize(P, row.coeffs, "max")
            if hi.value > row.rhs:
                return False
        if row.rel in (GE, EQ):
            lo = lp_optimize(P, row.coeffs, "min")
            if lo.value < row.rhs:
                return False
    except UnboundedError:
        return False
    return True


def irredundant(P: HPolytope) -> HPolytope:
    """Canonical irredundant description computed through the vertex set."""
    V = dd_convert_h_to_v(P)
    if V.is_empty:
        return empty_hpolytope(P.dim)
    return dd_convert_v_to_h(V)


# ---------------------------------------------------------------------------
# JSON forms

def hpolytope_to_json(P: HPolytope) -> dict:
    return {
        "dim": P.dim,
        "rows": [
            {"coeffs": [fmt_rational(c) for c in r.coeffs], "rel": r.rel, "rhs": fmt_rational(r.rhs)}
            for r in P.rows
        ],
    }


def hpolytope_from_json(data: dict) -> HPolytope:
    try:
        dim = int(data["dim"])
        rows = tuple(LinearRow(rvec(r["coeffs"]), r["rel"], rat(r["rhs"])) for r in data["rows"])
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed polytope JSON: {exc}") from exc
    return HPolytope(dim, rows)


def vpolytope_to_json(Q: VPolytope) -> dict:
    return {"dim": Q.dim, "vertices": [[fmt_rational(c) for c in v] for v in Q.vertices]}


def vpolytope_from_json(data: dict) -> VPolytope:
    try:
        return VPolytope(int(data["dim"]), tuple(rvec(v) for v in data["vertices"]))
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed vertex JSON: {exc}") from exc
