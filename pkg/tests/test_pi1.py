from hypothesis import given, settings
from oracles import first_betti
from strategies import presentations

from boundquiver import fixtures
from boundquiver.pi1 import (AbelianInvariants, GroupPresentation, abelianization,
                             fundamental_group, fundamental_groups, minimal_relations,
                             simply_connected_given_presentation,
                             strongly_simply_connected_given_presentation, triviality)
from boundquiver.presentation import parse

SQUARE = """vertices 1 2 3 4
arrow a: 1 -> 2
arrow b: 2 -> 4
arrow c: 1 -> 3
arrow d: 3 -> 4
relations
{rels}
"""


def test_example_a_is_simply_connected():
    p = fixtures.load("A")
    g = fundamental_group(p)
    assert g.generators == ("epsilon",)
    assert triviality(g).verdict == "trivial"
    assert simply_connected_given_presentation(p).verdict == "yes"


def test_example_b_is_simply_connected_but_not_strongly():
    p = fixtures.load("B")
    assert simply_connected_given_presentation(p).verdict == "yes"
    v = strongly_simply_connected_given_presentation(p)
    assert v.verdict == "no"
    assert v.evidence["failing_subset"] == ["2", "3", "4", "5"]


def test_example_c_has_oriented_cycles():
    v = simply_connected_given_presentation(fixtures.load("C"))
    assert v.verdict == "no"
    assert "cycle" in v.evidence["reason"]


def test_commutative_square_is_trivial_and_zero_square_is_not():
    comm = parse(SQUARE.format(rels="  a*b - c*d = 0"))
    assert simply_connected_given_presentation(comm).verdict == "yes"
    zero = parse(SQUARE.format(rels="  a*b = 0\n  c*d = 0"))
    (g,) = fundamental_groups(zero)
    assert abelianization(g) == AbelianInvariants(1, ())
    assert simply_connected_given_presentation(zero).verdict == "no"


def test_minimal_relations_split_redundant_sums():
    p = parse(SQUARE.format(rels="  a*b = 0\n  a*b - c*d = 0"))
    mins = minimal_relations(p)
    # c*d alone lies in the ideal, so the second relation splits
    assert sorted(len(r.terms) for r in mins) == [1, 1, 1]
    assert simply_connected_given_presentation(p).verdict == "no"


def test_torsion_in_the_abelianization():
    g = GroupPresentation(("x",), ((1, 1),))
    ab = abelianization(g)
    assert ab == AbelianInvariants(0, (2,))
    assert str(ab) == "Z/2"
    assert triviality(g).verdict == "nontrivial"


def test_tietze_elimination_proves_triviality():
    g = GroupPresentation(("x", "y"), ((1, -2), (1, 1, -2)))
    t = triviality(g)
    assert t.verdict == "trivial"
    assert len(t.certificate) == 2


def test_word_text():
    g = GroupPresentation(("x", "y"), ())
    assert g.word_text((1, -2)) == "x*y^-1"
    assert g.word_text(()) == "1"


@given(presentations())
@settings(max_examples=30)
def test_generator_count_is_the_cycle_rank(p):
    gens = sum(len(g.generators) for g in fundamental_groups(p))
    assert gens == first_betti(p.quiver)


@given(presentations(cycles=False))
@settings(max_examples=30)
def test_free_rank_is_bounded_by_cycle_rank_and_relators(p):
    groups = fundamental_groups(p)
    for g in groups:
        ab = abelianization(g)
        assert len(g.generators) - len(g.relators) <= ab.free_rank <= len(g.generators)
        if not g.relators:
            assert ab == AbelianInvariants(len(g.generators), ())


@given(presentations(cycles=False))
@settings(max_examples=30)
def test_monomial_presentations_have_free_groups(p):
    if any(len(r.terms) > 1 for r in minimal_relations(p)):
        return
    ranks = sum(abelianization(g).free_rank for g in fundamental_groups(p))
    assert ranks == first_betti(p.quiver)
