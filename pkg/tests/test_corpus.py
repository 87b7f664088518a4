import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boundquiver.algebra import admissibility_check
from boundquiver.corpus import CorpusSpec, generate_corpus
from boundquiver.presentation import serialize
from boundquiver.quiver import has_oriented_cycle, is_connected_subset


def test_spec_parsing():
    spec = CorpusSpec.parse("seed=9,count=3,vertices=2-4,field=Fp(5)")
    assert (spec.seed, spec.count, spec.min_vertices, spec.max_vertices) == (9, 3, 2, 4)
    assert spec.field == "Fp(5)"
    assert CorpusSpec.parse('{"seed": 9, "count": 3}') == CorpusSpec(seed=9, count=3)
    assert CorpusSpec.parse(",".join(f"{k}={v}" for k, v in spec.as_dict().items())) == spec


@pytest.mark.parametrize("text", ["colour=red", "seed", "count=x", "vertices=5-2", "count=-1", "cycle_rate=2"])
def test_bad_specs_rejected(text):
    with pytest.raises(ValueError):
        CorpusSpec.parse(text)


def test_generation_is_a_function_of_the_spec():
    spec = CorpusSpec(seed=11, count=8)
    a = [serialize(p) for p in generate_corpus(spec)]
    b = [serialize(p) for p in generate_corpus(spec)]
    assert a == b
    assert a != [serialize(p) for p in generate_corpus(CorpusSpec(seed=12, count=8))]


def test_names_and_count():
    out = generate_corpus(CorpusSpec(seed=4, count=5))
    assert [p.name for p in out] == [f"corpus_4_{k}" for k in range(1, 6)]


@given(st.integers(0, 10**6))
@settings(max_examples=15)
def test_instances_are_connected_and_admissible(seed):
    spec = CorpusSpec(seed=seed, count=3, max_vertices=4)
    for p in generate_corpus(spec):
        q = p.quiver
        assert spec.min_vertices <= len(q.vertices) <= spec.max_vertices
        assert is_connected_subset(q, q.vertices)
        assert admissibility_check(p) >= 1


def test_zero_densities_give_path_algebras_of_acyclic_quivers():
    for p in generate_corpus(CorpusSpec(seed=2, count=10, relation_density=0.0, cycle_rate=0.0)):
        assert not p.relations
        assert not has_oriented_cycle(p.quiver)


def test_prime_field_instances():
    (p,) = generate_corpus(CorpusSpec(seed=1, count=1, field="Fp(3)"))
    assert p.field.characteristic == 3
