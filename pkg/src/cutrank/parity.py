"""Parity systems ``A y = b`` over GF(2).

Rows are packed into Python ints (bit ``j`` is column ``j``) for elimination;
the public functions take and return plain 0/1 sequences.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

from .errors import EnumerationOverflow, FormatError, PreconditionError


@dataclass(frozen=True)
class ParitySystem:
    rows: tuple
    rhs: tuple
    ncols: int

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in r) for r in self.rows)
        rhs = tuple(int(v) for v in self.rhs)
        if len(rows) != len(rhs):
            raise FormatError("row count and right-hand side length differ")
        for r in rows:
            if len(r) != self.ncols:
                raise FormatError(f"row of length {len(r)} in a system with {self.ncols} columns")
            if any(v not in (0, 1) for v in r):
                raise FormatError("parity rows must be bits")
        if any(v not in (0, 1) for v in rhs):
            raise FormatError("parity right-hand side must be bits")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "rhs", rhs)

    @classmethod
    def of(cls, rows, rhs, ncols=None) -> "ParitySystem":
        rows = [list(r) for r in rows]
        if ncols is None:
            if not rows:
                raise FormatError("ncols is required for a system without rows")
            ncols = len(rows[0])
        return cls(tuple(map(tuple, rows)), tuple(rhs), ncols)

    def to_json(self) -> dict:
        return {"rows": [list(r) for r in self.rows], "rhs": list(self.rhs), "ncols": self.ncols}

    @classmethod
    def from_json(cls, data: dict) -> "ParitySystem":
        try:
            rows = data["rows"]
            ncols = data.get("ncols", len(rows[0]) if rows else None)
            return cls.of(rows, data["rhs"], ncols)
        except (KeyError, TypeError, IndexError) as exc:
            raise FormatError(f"malformed parity system: {exc}") from exc


def _pack(bits) -> int:
    out = 0
    for j, b in enumerate(bits):
        if b:
            out |= 1 << j
    return out


def _unpack(word: int, n: int) -> tuple:
    return tuple((word >> j) & 1 for j in range(n))


def _eliminate(S: ParitySystem):
    """Reduced row echelon form of the augmented system.

    Returns ``(pivot_rows, pivot_cols, consistent)`` where each pivot row is
    ``(coeff_word, rhs_bit)``.
    """
    work = [(_pack(r), b) for r, b in zip(S.rows, S.rhs)]
    pivots, cols = [], []
    for col in range(S.ncols):
        bit = 1 << col
        p = next((i for i, (w, _) in enumerate(work) if w & bit), None)
        if p is None:
            continue
        pw, pb = work.pop(p)
        work = [(w ^ pw, b ^ pb) if w & bit else (w, b) for w, b in work]
        pivots = [(w ^ pw, b ^ pb) if w & bit else (w, b) for w, b in pivots]
        pivots.append((pw, pb))
        cols.append(col)
    consistent = all(b == 0 for _, b in work)
    return pivots, cols, consistent


def rank2(S: ParitySystem) -> int:
    return len(_eliminate(S)[1])


def solve_parity(S: ParitySystem) -> tuple | None:
    """One solution (free variables set to zero), or ``None`` if infeasible."""
    pivots, cols, consistent = _eliminate(S)
    if not consistent:
        return None
    y = [0] * S.ncols
    for (_, b), c in zip(pivots, cols):
        y[c] = b
    return tuple(y)


def _nullspace_words(S: ParitySystem, pivots, cols) -> list[int]:
    pivot_set = set(cols)
    basis = []
    for f in range(S.ncols):
        if f in pivot_set:
            continue
        word = 1 << f
        for (w, _), c in zip(pivots, cols):
            if w >> f & 1:
                word |= 1 << c
        basis.append(word)
    return basis


def enumerate_parity_solutions(S: ParitySystem, cap: int = 1 << 16) -> list[tuple]:
    """All solutions, sorted lexicographically.

    Raises :class:`EnumerationOverflow` if there are more than ``cap``.
    """
    pivots, cols, consistent = _eliminate(S)
    if not consistent:
        return []
    null = _nullspace_words(S, pivots, cols)
    count = 1 << len(null)
    if count > cap:
        raise EnumerationOverflow(
            f"{count} solutions exceed the cap of {cap}", bottleneck="parity solutions", count=count
        )
    base = _pack(solve_parity(S))
    words = []
    for choice in product((0, 1), repeat=len(null)):
        w = base
        for pick, v in zip(choice, null):
            if pick:
                w ^= v
        words.append(w)
    return sorted(_unpack(w, S.ncols) for w in words)


def small_support_subset(S: ParitySystem, t: int) -> tuple:
    """Smallest column set ``J``, ``|J| <= t``, whose columns sum to ``b``.

    Needs ``A 1 = b (mod 2)``; with at most ``t`` rows such a ``J`` always
    exists because ``b`` lies in a column space of dimension at most ``t``.
    Search is exhaustive by size, so the answer is the lexicographically
    first set of minimum cardinality.
    """
    if t < 1:
        raise PreconditionError("t must be positive")
    if len(S.rows) > t:
        raise PreconditionError(f"system has {len(S.rows)} rows but t = {t}")
    columns = [_pack(S.rows[i][j] for i in range(len(S.rows))) for j in range(S.ncols)]
    target = _pack(S.rhs)
    total = 0
    for c in columns:
        total ^= c
    if total != target:
        raise PreconditionError("columns of A do not sum to b")
    for size in range(0, min(t, S.ncols) + 1):
        for J in combinations(range(S.ncols), size):
            acc = 0
            for j in J:
                acc ^= columns[j]
            if acc == target:
                return J
    raise AssertionError("no small column subset found although A1 = b")  # pragma: no cover


def solutions_average(S: ParitySystem) -> tuple | None:
    """Exact average of all 0-1 solutions, or ``None`` when infeasible.

    A coordinate touched by some null-space vector splits the solution set
    in half, so it averages to 1/2; every other coordinate is fixed.  When
    every coordinate is free this is the all-1/2 vector.
    """
    pivots, cols, consistent = _eliminate(S)
    if not consistent:
        return None
    support = 0
    for w in _nullspace_words(S, pivots, cols):
        support |= w
    base = solve_parity(S)
    half = Fraction(1, 2)
    return tuple(half if support >> j & 1 else Fraction(base[j]) for j in range(S.ncols))
