from itertools import combinations

import pytest
from hypothesis import given
from oracles import all_paths, first_betti, is_convex_brute
from strategies import acyclic_quivers, quivers

from boundquiver import fixtures
from boundquiver.quiver import (Arrow, Path, Quiver, connected_components, convex_subsets,
                                enumerate_paths, has_oriented_cycle, induced_subquiver,
                                is_connected_subset, is_full_convex, paths_of_length)


def test_path_text_and_trivial_paths():
    q = fixtures.load("A").quiver
    assert str(q.trivial("3")) == "e_3"
    assert str(q.path(["alpha", "beta"])) == "alpha*beta"
    assert len(q.path(["alpha", "delta", "epsilon"])) == 3


def test_composing_non_adjacent_arrows_fails():
    q = fixtures.load("A").quiver
    with pytest.raises(ValueError):
        q.path(["alpha", "gamma"])


def test_duplicate_arrow_names_rejected():
    with pytest.raises(ValueError):
        Quiver(("1", "2"), (Arrow("a", "1", "2"), Arrow("a", "2", "1")))


def test_paths_in_example_a():
    q = fixtures.load("A").quiver
    # 5 trivial, 5 arrows, 4 of length two, 2 of length three
    assert [len(paths_of_length(q, k)) for k in range(5)] == [5, 5, 4, 2, 0]


@given(acyclic_quivers())
def test_enumerate_paths_matches_naive_extension(q):
    ours = sorted((p.source, p.target, p.arrows) for p in enumerate_paths(q, 6))
    assert ours == sorted(all_paths(q, 6))


@given(acyclic_quivers())
def test_enumeration_is_sorted_by_length(q):
    lengths = [len(p) for p in enumerate_paths(q, 6)]
    assert lengths == sorted(lengths)


@given(acyclic_quivers(max_vertices=5))
def test_convexity_agrees_with_brute_force(q):
    vs = q.vertices
    for k in range(1, len(vs) + 1):
        for s in combinations(vs, k):
            verdict = is_full_convex(q, s)
            assert bool(verdict) == is_convex_brute(q, s)
            if not verdict:
                w = verdict.witness
                assert w.source in s and w.target in s
                assert any(v not in s for v in q.path_vertices(w))


@given(quivers())
def test_convexity_witness_is_a_real_path(q):
    for k in range(1, len(q.vertices)):
        for s in combinations(q.vertices, k):
            v = is_full_convex(q, s)
            if not v:
                assert q.is_valid_path(v.witness)


@given(acyclic_quivers())
def test_convex_subsets_lists_exactly_the_convex_connected_sets(q):
    listed = set(convex_subsets(q, connected=True))
    expected = {s for k in range(1, len(q.vertices) + 1) for s in combinations(q.vertices, k)
                if is_convex_brute(q, s) and is_connected_subset(q, s)}
    assert listed == expected


def test_convex_subset_budget():
    q = Quiver(tuple(str(i) for i in range(12)))
    with pytest.raises(OverflowError):
        convex_subsets(q, limit=100)


@given(quivers())
def test_opposite_is_an_involution(q):
    assert q.opposite().opposite() == q
    assert has_oriented_cycle(q) == has_oriented_cycle(q.opposite())


@given(quivers())
def test_components_partition_the_vertices(q):
    comps = connected_components(q)
    flat = [v for c in comps for v in c]
    assert sorted(flat) == sorted(q.vertices)
    for c in comps:
        assert is_connected_subset(q, c)


@given(quivers())
def test_induced_subquiver_keeps_inner_arrows(q):
    s = q.vertices[: max(1, len(q.vertices) // 2)]
    sub = induced_subquiver(q, s)
    assert {a.name for a in sub.arrows} == {a.name for a in q.arrows if a.source in s and a.target in s}


def test_oriented_cycle_detection():
    assert has_oriented_cycle(fixtures.load("C").quiver)
    assert not has_oriented_cycle(fixtures.load("A").quiver)
    loop = Quiver(("1",), (Arrow("x", "1", "1"),))
    assert has_oriented_cycle(loop)


def test_unknown_vertex_rejected():
    with pytest.raises(ValueError):
        is_full_convex(fixtures.load("A").quiver, ["9"])


def test_betti_number_of_examples():
    assert first_betti(fixtures.load("A").quiver) == 1
    assert first_betti(fixtures.load("C").quiver) == 2


def test_path_equality_is_structural():
    assert Path("1", "3", ("alpha", "beta")) == fixtures.load("A").quiver.path(["alpha", "beta"])
