"""Hypothesis strategies for small quivers and presentations."""

from hypothesis import strategies as st

from boundquiver.corpus import CorpusSpec, generate_corpus
from boundquiver.quiver import Arrow, Quiver


@st.composite
def acyclic_quivers(draw, max_vertices=5, max_arrows=7):
    n = draw(st.integers(1, max_vertices))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), max_size=max_arrows) if pairs else st.just([]))
    verts = tuple(str(i + 1) for i in range(n))
    arrows = tuple(Arrow(f"x{k}", verts[i], verts[j]) for k, (i, j) in enumerate(chosen))
    return Quiver(verts, arrows)


@st.composite
def quivers(draw, max_vertices=4, max_arrows=6):
    """Arbitrary quivers, loops and cycles included."""
    n = draw(st.integers(1, max_vertices))
    ends = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
    chosen = draw(st.lists(ends, max_size=max_arrows))
    verts = tuple(str(i + 1) for i in range(n))
    return Quiver(verts, tuple(Arrow(f"y{k}", verts[i], verts[j]) for k, (i, j) in enumerate(chosen)))


@st.composite
def presentations(draw, cycles=True):
    """One instance of a small generated corpus."""
    seed = draw(st.integers(0, 10**6))
    density = draw(st.sampled_from([0.0, 0.3, 0.6]))
    spec = CorpusSpec(seed=seed, count=1, min_vertices=2, max_vertices=4,
                      relation_density=density, cycle_rate=0.3 if cycles else 0.0)
    return generate_corpus(spec)[0]
