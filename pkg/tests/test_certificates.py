import copy
import json
import random
from fractions import Fraction as F

import pytest

import oracles
import sample_tree
from cutrank.certificates import (
    BLUE, RED, CertDAG, Reference, accounting_bound, blue_children, budget_violations, build_certificate,
    cropped_cube_certificate, expansion_bound, find_violator, half_vector, lower_bound, path_profiles, red_counts,
    roundings, verify_certificate,
)
from cutrank.closures import FamilySpec, balas_sequence, rank_upper_bound
from cutrank.config import Guards
from cutrank.constructions import (
    complete_graph, cropped_cube, cycle_graph, edge_expansion, random_regular_graph, tseitin_membership,
    tseitin_polytope,
)
from cutrank.errors import CertificateError, FormatError, GuardError, PreconditionError
from cutrank.exactgeom import hrep_contains

H = F(1, 2)


@pytest.fixture(scope="module")
def k5():
    return build_certificate(complete_graph(5), 1)


def all_path_reds(C):
    """Red counts of every root-to-leaf path, by explicit walking."""
    out = []

    def walk(nid, reds):
        node = C.nodes[nid]
        if not node.children:
            out.append(reds)
            return
        for e in node.children:
            walk(e.child, reds + (e.color == RED))

    walk(C.root, 0)
    return out


# -- construction -------------------------------------------------------------

def test_k5_certificate(k5):
    rep = verify_certificate(k5)
    assert rep.valid and rep.failures == ()
    assert len(k5) == 201
    assert rep.min_red_count == 2 and rep.rank_lower_bound == 3
    assert k5.nodes[k5.root].label == half_vector(10) and k5.nodes[k5.root].ell == 2
    assert lower_bound(k5) == 2
    assert verify_certificate(k5, tseitin_polytope(complete_graph(5))).valid


def test_k3_certificate_is_a_single_leaf():
    C = build_certificate(complete_graph(3), 1)
    assert len(C) == 1 and C.kind(C.root) == "root"
    assert C.nodes[C.root].blue_set == (0,)
    assert lower_bound(C) == 0


def test_even_vertex_count_rejected():
    with pytest.raises(PreconditionError):
        build_certificate(complete_graph(4), 1)
    with pytest.raises(PreconditionError):
        build_certificate(complete_graph(5), 0)


def test_node_guard():
    with pytest.raises(GuardError):
        build_certificate(complete_graph(5), 1, Guards(nodes=5))


def test_find_violator_examples():
    G = complete_graph(5)
    assert find_violator(G, half_vector(10), 2, 1) is None
    assert find_violator(G, half_vector(10), 2, 2) == (0, 1)
    assert find_violator(complete_graph(3), half_vector(3), 1, 1) == (0,)
    with pytest.raises(GuardError):
        find_violator(G, half_vector(10), 2, 1, Guards(subset_vertices=3))


def test_blue_children_average_back():
    G = cycle_graph(5)
    x = half_vector(5)
    kids = blue_children(G, x, (0,))
    assert sorted(kids) == [(0, H, H, H, 1), (1, H, H, H, 0)]
    assert tuple(sum(c) / len(kids) for c in zip(*kids)) == x


def test_cropped_cube_certificates():
    C = cropped_cube_certificate(3, 1)
    rep = verify_certificate(C)
    assert rep.valid and len(C) == 19 and rep.min_red_count == 2
    assert lower_bound(cropped_cube_certificate(4, 2)) == 1
    assert lower_bound(cropped_cube_certificate(1, 1)) == 0
    with pytest.raises(PreconditionError):
        cropped_cube_certificate(2, 3)


@pytest.mark.parametrize("n,t", [(2, 1), (3, 1), (4, 1), (4, 2), (5, 2)])
def test_cropped_cube_bracket(n, t):
    """The certificate bound never exceeds the unit-vector bound."""
    low = lower_bound(cropped_cube_certificate(n, t)) + 1
    high = balas_sequence(cropped_cube(n), t)
    assert low <= high


def test_bracket_closes_for_split_rank():
    for n in (2, 3):
        low = lower_bound(cropped_cube_certificate(n, 1)) + 1
        assert low == rank_upper_bound(cropped_cube(n), FamilySpec("split", 1, 1, n), 5).rounds == n


# -- structural laws ----------------------------------------------------------

def certificates():
    yield build_certificate(complete_graph(5), 1)
    yield build_certificate(complete_graph(3), 1)
    for s in range(3):
        yield build_certificate(random_regular_graph(5, 4, s), 1)
    yield cropped_cube_certificate(3, 1)
    yield cropped_cube_certificate(4, 2)


def test_k5_red_children_stay_feasible(k5):
    G = complete_graph(5)
    for node in k5.nodes:
        assert tseitin_membership(G, node.label)
        assert node.color != BLUE
        if not node.children:
            assert node.ell == 2 and node.blue_set is not None
        if node.color == RED:
            E = [i for i, v in enumerate(node.label) if v == H]
            assert len(node.children) == len(roundings(E, 1))


def test_budget_law():
    for C in certificates():
        if C.reference.kind == "tseitin":
            assert budget_violations(C) == []


@pytest.mark.parametrize("seed", range(4))
def test_accounting_law(seed):
    G = complete_graph(5) if seed == 0 else random_regular_graph(5, 4, seed)
    for t in (1, 2):
        C = build_certificate(G, t)
        for reds, S in path_profiles(C):
            assert reds >= accounting_bound(G, t, S)
        rep = verify_certificate(C)
        assert rep.min_red_count >= expansion_bound(edge_expansion(G).expansion, G.n, t)


def test_expansion_bound_values():
    assert expansion_bound(3, 5, 1) == 2
    assert expansion_bound(2, 5, 1) == 0
    assert expansion_bound(F(9, 2), 11, 2) == 4


def test_red_count_dp_matches_path_walk():
    for C in list(certificates()) + [sample_tree.sample_tree()]:
        paths = all_path_reds(C)
        lo, hi = red_counts(C)
        assert (lo[C.root], hi[C.root]) == (min(paths), max(paths))
        assert {r for r, _ in path_profiles(C)} == set(paths)


# -- the hand-made tree -------------------------------------------------------

def test_sample_tree_values():
    C = sample_tree.sample_tree()
    rep = verify_certificate(C)
    assert rep.valid
    assert (rep.min_red_count, rep.max_red_count) == (0, 2)


def test_sample_tree_best_value_from_level_sets():
    P = sample_tree.sample_polytope()
    best = oracles.best_certificate_value(P, 1)
    assert best[half_vector(4)] == 1
    assert oracles.in_hull(half_vector(4), [tuple(map(F, p)) for p in oracles.zero_one_points(P)])


# -- tampering ----------------------------------------------------------------

def first_node(C, color):
    return next(n for n in C.nodes if n.color == color)


def test_missing_red_child_is_named():
    C = cropped_cube_certificate(3, 1)
    root = C.nodes[C.root]
    root.children = [e for e in root.children if not (e.J == (1,) and e.a == 0)]
    rep = verify_certificate(C)
    assert not rep.valid
    assert (C.root, "missing red child J=[1] a=0") in rep.failures
    with pytest.raises(CertificateError):
        lower_bound(C)


def test_removed_blue_child_breaks_the_hull():
    C = sample_tree.sample_tree()
    node = first_node(C, BLUE)
    node.children = node.children[:1]
    rep = verify_certificate(C)
    assert rep.failures == ((node.id, "label not in the convex hull of its blue children"),)


def test_blue_self_loop_rejected():
    C = sample_tree.sample_tree()
    C.add_edge(C.root, C.root, BLUE)
    fails = verify_certificate(C).failures
    assert (C.root, "blue node appears among its own children") in fails


def test_cycle_detected():
    C = cropped_cube_certificate(2, 1)
    leaf = next(n for n in C.nodes if not n.children)
    C.add_edge(leaf.id, C.root, BLUE)
    rep = verify_certificate(C)
    assert not rep.valid and any(msg == "cycle" for _, msg in rep.failures)


def test_label_outside_reference():
    C = cropped_cube_certificate(2, 1)
    nid, _ = C.intern((F(0), F(0)), 0)
    rep = verify_certificate(C)
    assert (nid, "label outside the reference polytope") in rep.failures


def test_mixed_colors_and_wrong_labels():
    C = cropped_cube_certificate(2, 1)
    root = C.nodes[C.root]
    other = root.children[0].child
    C.add_edge(C.root, other, BLUE)
    assert (C.root, "mixed red and blue children") in verify_certificate(C).failures
    C = cropped_cube_certificate(2, 1)
    root = C.nodes[C.root]
    e = root.children[0]
    root.children[0] = type(e)(root.children[1].child, RED, e.J, e.a)
    fails = verify_certificate(C).failures
    assert any("wrong label" in msg for _, msg in fails)


def test_red_node_needs_t_fractional_coordinates():
    C = CertDAG(2, Reference.hpolytope(cropped_cube(2)))
    C.root, _ = C.intern((H, F(0)), 0)
    child, _ = C.intern((F(1), F(0)), 0)
    C.add_edge(C.root, child, RED, (0,), 1)
    fails = verify_certificate(C).failures
    assert (C.root, "red node with |E(x)| = 1 < t = 2") in fails


def test_dimension_mismatch_reported():
    C = cropped_cube_certificate(2, 1)
    rep = verify_certificate(C, cropped_cube(3))
    assert not rep.valid and "dimension" in rep.failures[0][1]


# -- serialization ------------------------------------------------------------

def test_json_roundtrip(k5):
    text = json.dumps(k5.to_json())
    C = CertDAG.from_json(json.loads(text))
    assert json.dumps(C.to_json()) == text
    assert verify_certificate(C).min_red_count == 2
    sample = sample_tree.sample_tree()
    again = CertDAG.from_json(sample.to_json())
    assert verify_certificate(again).valid
    assert again.reference.to_json() == sample.reference.to_json()


def test_json_rejects_bad_input():
    data = cropped_cube_certificate(2, 1).to_json()
    broken = copy.deepcopy(data)
    broken["nodes"].append(copy.deepcopy(broken["nodes"][0]))
    broken["nodes"][-1]["id"] = 99
    with pytest.raises(FormatError):
        CertDAG.from_json(broken)
    broken = copy.deepcopy(data)
    broken["nodes"][0]["children"][0]["id"] = 42
    with pytest.raises(FormatError):
        CertDAG.from_json(broken)
    broken = copy.deepcopy(data)
    broken["nodes"][0]["children"][0]["color"] = "green"
    with pytest.raises(FormatError):
        CertDAG.from_json(broken)
    with pytest.raises(FormatError):
        CertDAG.from_json({"t": 1})


def test_dot_output():
    dot = cropped_cube_certificate(2, 1).to_dot()
    assert dot.startswith("digraph certificate {") and dot.rstrip().endswith("}")
    assert 'color=red, label="J={0} a=1"' in dot
    assert dot.count("->") == 4


@pytest.mark.parametrize("seed", range(20))
def test_random_reference_membership(seed):
    rng = random.Random(seed)
    P = cropped_cube(rng.randint(1, 4))
    ref = Reference.hpolytope(P)
    x = tuple(rng.choice((F(0), H, F(1))) for _ in range(P.dim))
    assert ref.contains(x) == hrep_contains(P, x) == oracles.contains(P, x)
    assert Reference.from_json(ref.to_json()).contains(x) == ref.contains(x)
