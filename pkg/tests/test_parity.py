import random
from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from cutrank.constructions import complete_graph, odd_parity_system
from cutrank.errors import EnumerationOverflow, FormatError, PreconditionError
from cutrank.parity import (
    ParitySystem, enumerate_parity_solutions, rank2, small_support_subset, solutions_average, solve_parity,
)

H = F(1, 2)


def system(rows, rhs, n=None):
    return ParitySystem.of(rows, rhs, n)


def test_k3_odd_system_is_infeasible():
    S = odd_parity_system(complete_graph(3))
    assert S.rows == ((1, 1, 0), (1, 0, 1), (0, 1, 1))
    assert solve_parity(S) is None
    assert enumerate_parity_solutions(S) == []


def test_single_equation_and_empty_system():
    assert solve_parity(system([[1, 1, 1]], [1])) == (1, 0, 0)
    assert solve_parity(ParitySystem((), (), 3)) == (0, 0, 0)
    assert enumerate_parity_solutions(ParitySystem((), (), 2)) == list(product((0, 1), repeat=2))


def test_enumerate_simple():
    assert enumerate_parity_solutions(system([[1, 1]], [1])) == [(0, 1), (1, 0)]


def test_enumerate_cap():
    with pytest.raises(EnumerationOverflow) as info:
        enumerate_parity_solutions(ParitySystem((), (), 5), cap=16)
    assert info.value.count == 32


def test_validation():
    with pytest.raises(FormatError):
        system([[1, 2]], [1])
    with pytest.raises(FormatError):
        system([[1, 0]], [1, 0])
    with pytest.raises(FormatError):
        ParitySystem.from_json({"rows": [[1]]})


def test_json_roundtrip():
    S = system([[1, 0, 1], [0, 1, 1]], [1, 0])
    assert ParitySystem.from_json(S.to_json()) == S


@pytest.mark.parametrize("seed", range(60))
def test_solve_and_enumerate_against_exhaustive(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 12)
    r = rng.randint(0, 6)
    rows = [[rng.randint(0, 1) for _ in range(n)] for _ in range(r)]
    rhs = [rng.randint(0, 1) for _ in range(r)]
    S = ParitySystem.of(rows, rhs, n)
    brute = oracles.parity_solutions(rows, rhs, n)
    y = solve_parity(S)
    assert (y is None) == (not brute)
    if brute:
        assert y in brute
        assert enumerate_parity_solutions(S) == brute
        assert len(brute) == 2 ** (n - oracles.gf2_rank(rows, n))
        assert rank2(S) == oracles.gf2_rank(rows, n)
        avg = tuple(F(sum(col), len(brute)) for col in zip(*brute))
        assert solutions_average(S) == avg
    else:
        assert solutions_average(S) is None


def test_small_support_examples():
    assert small_support_subset(system([[1, 1, 1]], [1]), 1) == (0,)
    assert small_support_subset(system([[1, 0, 1], [1, 1, 0]], [0, 0]), 2) == ()
    A = [[1, 1, 0], [0, 1, 1]]
    assert small_support_subset(system(A, [0, 0]), 2) == ()
    # the only other reachable targets with the all-ones sum fixed are checked exhaustively below


def test_small_support_preconditions():
    with pytest.raises(PreconditionError):
        small_support_subset(system([[1, 1]], [1]), 1)
    with pytest.raises(PreconditionError):
        small_support_subset(system([[1], [1]], [1, 1]), 1)
    with pytest.raises(PreconditionError):
        small_support_subset(system([[1]], [1]), 0)


@pytest.mark.parametrize("t", [1, 2])
@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_small_support_exhaustive_small(t, n):
    for bits in product((0, 1), repeat=t * n):
        A = [list(bits[i * n:(i + 1) * n]) for i in range(t)]
        b = [sum(r) % 2 for r in A]
        J = small_support_subset(ParitySystem.of(A, b, n), t)
        assert J == oracles.first_small_subset(A, b, t)
        assert len(J) <= t
        assert all(sum(r[j] for j in J) % 2 == v for r, v in zip(A, b))


@given(st.integers(1, 3), st.integers(1, 9), st.randoms(use_true_random=False))
@settings(max_examples=80, deadline=None)
def test_small_support_property(t, n, rng):
    A = [[rng.randint(0, 1) for _ in range(n)] for _ in range(t)]
    b = [sum(r) % 2 for r in A]
    J = small_support_subset(ParitySystem.of(A, b, n), t)
    assert J == oracles.first_small_subset(A, b, t)


def test_solutions_average_examples():
    assert solutions_average(system([[1, 1]], [1])) == (H, H)
    assert solutions_average(system([[1, 0]], [1])) == (1, H)
    assert solutions_average(odd_parity_system(complete_graph(3))) is None
