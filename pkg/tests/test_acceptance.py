"""Acceptance criteria 1-10; a summary line per criterion prints at the end of the run."""

import json
import os
import subprocess
import sys
from pathlib import Path

import pytest
from oracles import algebra_dimension, interval_modules, is_convex_brute, tits_form_roots

from boundquiver import fixtures
from boundquiver.algebra import (compute_basis, ideal_membership, natural_map_check,
                                 present_basis_algebra, quotient_idempotent, truncate_idempotent)
from boundquiver.ar import knit
from boundquiver.classes import classify, verdict_map, verify_theorem
from boundquiver.cli import run
from boundquiver.homology import global_dimension
from boundquiver.pi1 import (abelianization, fundamental_group, simply_connected_given_presentation,
                             strongly_simply_connected_given_presentation)
from boundquiver.presentation import parse
from boundquiver.quiver import Path as QPath
from boundquiver.quiver import is_full_convex

GOLDEN = Path(__file__).parent / "golden"


def linear_quiver(n):
    lines = ["algebra lin", "vertices " + " ".join(str(i) for i in range(1, n + 1))]
    lines += [f"arrow a{i}: {i} -> {i + 1}" for i in range(1, n)]
    return parse("\n".join(lines))


D4 = parse("""algebra D4
vertices 1 2 3 4
arrow a: 1 -> 4
arrow b: 2 -> 4
arrow c: 3 -> 4
""")


# --------------------------------------------------------------------------
# 1. first worked example

crit1 = pytest.mark.criterion(1, "example A: dim 12, tilted, quotient not tilted, {1,2,3,5} not convex")


@crit1
def test_a_dimension_matches_path_reduction_oracle():
    p = fixtures.load("A")
    assert algebra_dimension(p) == 12
    assert compute_basis(p).dim == 12


@crit1
def test_a_is_tilted_with_slice_witness():
    v = {c.name: c for c in classify(fixtures.load("A"))}
    assert v["tilted"].verdict == "yes"
    assert v["tilted"].evidence["slice"]


@crit1
def test_a_quotient_at_four_is_not_tilted():
    q = quotient_idempotent(fixtures.load("A"), ["1", "2", "3", "5"])
    assert verdict_map(classify(q))["tilted"] == "no"


@crit1
def test_a_subset_not_convex_with_witness():
    p = fixtures.load("A")
    verdict = is_full_convex(p.quiver, ["1", "2", "3", "5"])
    assert not verdict
    w = verdict.witness
    assert w.source in "1235" and w.target in "1235"
    assert "4" in p.quiver.path_vertices(w)
    assert not is_convex_brute(p.quiver, ["1", "2", "3", "5"])


# --------------------------------------------------------------------------
# 2. second worked example

crit2 = pytest.mark.criterion(2, "example B: convex iso (10,10), gldim 1, pi1 trivial vs Z, not ssc")
B_SUB = ["2", "3", "4", "5"]


@crit2
def test_b_subset_convex_and_natural_map_iso():
    p = fixtures.load("B")
    assert is_full_convex(p.quiver, B_SUB)
    rep = natural_map_check(p, B_SUB)
    assert rep.is_iso and tuple(rep.dims) == (10, 10)


@crit2
def test_b_induced_subalgebra_is_hereditary():
    q = quotient_idempotent(fixtures.load("B"), B_SUB)
    g = global_dimension(compute_basis(q))
    assert g.is_finite and g.value == 1


@crit2
def test_b_fundamental_groups():
    p = fixtures.load("B")
    assert abelianization(fundamental_group(p)).trivial
    assert simply_connected_given_presentation(p).verdict == "yes"
    sub = abelianization(fundamental_group(quotient_idempotent(p, B_SUB)))
    assert (sub.free_rank, sub.torsion) == (1, ())
    ssc = strongly_simply_connected_given_presentation(p)
    assert ssc.verdict == "no"
    assert ssc.evidence["failing_subset"] == B_SUB


# --------------------------------------------------------------------------
# 3. third worked example

crit3 = pytest.mark.criterion(3, "example C: truncation 4 vs quotient 3, 2-cycle, gldim inf, hereditary support")


@crit3
def test_c_truncation_differs_from_quotient():
    p = fixtures.load("C")
    assert not is_full_convex(p.quiver, ["1", "4"])
    rep = natural_map_check(p, ["1", "4"])
    assert rep.verdict == "not-iso" and tuple(rep.dims) == (4, 3)


@crit3
def test_c_truncation_presents_as_two_cycle_with_zero_relations():
    nfb = compute_basis(fixtures.load("C"))
    pres = present_basis_algebra(truncate_idempotent(nfb, ["1", "4"]))
    q = pres.quiver
    assert sorted(q.vertices) == ["1", "4"]
    assert sorted((a.source, a.target) for a in q.arrows) == [("1", "4"), ("4", "1")]
    one_four = next(a.name for a in q.arrows if a.source == "1")
    four_one = next(a.name for a in q.arrows if a.source == "4")
    for word, end in (((one_four, four_one), "1"), ((four_one, one_four), "4")):
        assert ideal_membership(pres, {QPath(end, end, word): pres.field.one})
    assert compute_basis(pres).dim == 4


@crit3
def test_c_global_dimension_infinite_with_certificate():
    g = global_dimension(compute_basis(fixtures.load("C")))
    assert g.is_infinite and "recurs" in g.note


@crit3
def test_c_left_support_components_hereditary():
    rep = verify_theorem(fixtures.load("C"), "cluster-left-support")
    assert rep.status == "pass"
    assert all(c["verdict"] == "yes" for c in rep.checks if "component" in c)


# --------------------------------------------------------------------------
# 4-9. corpus suites


@pytest.mark.criterion(4, "truncation equals quotient on every connected convex subset of the corpus")
def test_corpus_convex_truncation_iso(corpus_run):
    assert len(corpus_run) >= 100
    checked = [(r.name, s, rep) for r in corpus_run for s, rep in r.convex_iso]
    assert len(checked) >= len(corpus_run)
    bad = [(n, s, rep.as_dict()) for n, s, rep in checked if not rep.is_iso]
    assert bad == []


@pytest.mark.criterion(5, "homological comparison on every convex subset of the corpus")
def test_corpus_convex_homology(corpus_run):
    failures = [(r.name, h.subset, [c.as_dict() for c in h.failures])
                for r in corpus_run for h in r.homology if not h.ok]
    assert failures == []
    for r in corpus_run:
        ext_pairs = {c.check.split("(", 1)[1] for h in r.homology for c in h.comparisons
                     if c.check.startswith("Ext^2")}
        sampled = sum(1 for h in r.homology for c in h.comparisons if c.check.startswith("Ext^2"))
        assert sampled >= 5 and ext_pairs, r.name
        assert any(c.check.startswith("gldim") for h in r.homology for c in h.comparisons)


@pytest.mark.criterion(6, "class verdicts never drop to no on convex quotients")
def test_corpus_class_descent(corpus_run):
    finite = [r for r in corpus_run if r.finite]
    assert finite
    assert sum(len(r.descent) for r in finite) > 0
    bad = [(r.name, s, c) for r in finite for s, c, v in r.descent if v == "no"]
    assert bad == []


@pytest.mark.criterion(7, "left-support components are quasi-tilted and tilted")
def test_corpus_left_support_classes(corpus_run):
    finite = [r for r in corpus_run if r.finite]
    bad = [(r.name, th, rep.as_dict()) for r in finite for th, rep in r.left_support.items()
           if rep.status != "pass"]
    assert bad == []
    assert sum(1 for r in finite if r.support_vertices) > 0


crit8 = pytest.mark.criterion(8, "knitting: A_n and D4 counts, mesh additivity, tau^-1 tau = id")


@crit8
@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_linear_counts_match_interval_modules(n):
    arq = knit(compute_basis(linear_quiver(n)))
    expected = interval_modules(n)
    assert len(arq.nodes) == len(expected) == n * (n + 1) // 2
    assert sorted(x.dimvec for x in arq.nodes) == sorted(expected)


@crit8
def test_d4_count_matches_positive_roots():
    arq = knit(compute_basis(D4))
    roots = tits_form_roots(D4.quiver)
    assert len(arq.nodes) == len(roots) == 12
    assert sorted(x.dimvec for x in arq.nodes) == sorted(roots)


@crit8
def test_corpus_mesh_and_tau_roundtrip(corpus_run):
    checks = [(r.name, m) for r in corpus_run for m in r.mesh]
    assert checks
    assert [(n, m) for n, m in checks if not (m[1] and m[2])] == []


@pytest.mark.criterion(9, "left part is predecessor closed and left support is full convex")
def test_corpus_left_part_invariants(corpus_run):
    finite = [r for r in corpus_run if r.finite]
    assert all(r.left_closed is True for r in finite)
    assert all(r.support_convex is True and r.support_convex_oracle is True for r in finite)


# --------------------------------------------------------------------------
# 10. determinism

GOLDEN_RUNS = {
    "classify_A": ["classify", "A"],
    "quotient_A": ["quotient", "A", "--keep", "1,2,3,5"],
    "isocheck_C": ["isocheck", "C", "--keep", "1,4"],
    "info_B": ["info", "B"],
    "pi1_B": ["pi1", "B", "--strong"],
    "knit_C": ["knit", "C"],
    "leftsupport_A": ["leftsupport", "A"],
    "verify_A": ["verify", "A", "class-descent"],
}

crit10 = pytest.mark.criterion(10, "byte-identical JSON reports across runs and execution modes")


@crit10
@pytest.mark.parametrize("name", sorted(GOLDEN_RUNS))
def test_reports_match_golden(name):
    out, _ = run(GOLDEN_RUNS[name])
    again, _ = run(GOLDEN_RUNS[name])
    assert out == again
    assert out == (GOLDEN / f"{name}.json").read_text(encoding="utf-8")


@crit10
def test_reports_stable_across_processes_and_hash_seeds():
    outs = []
    for seed in ("0", "12345"):
        env = dict(os.environ, PYTHONHASHSEED=seed)
        r = subprocess.run([sys.executable, "-m", "boundquiver", "classify", "A"],
                           capture_output=True, env=env, check=False)
        assert r.returncode == 0
        outs.append(r.stdout)
    assert outs[0] == outs[1]
    assert outs[0].decode() == (GOLDEN / "classify_A.json").read_text(encoding="utf-8")


@crit10
def test_corpus_report_independent_of_worker_count():
    spec = "seed=5,count=6,vertices=2-4"
    serial, code1 = run(["corpus", spec, "--verify", "convex-iso,class-descent"])
    parallel, code2 = run(["corpus", spec, "--verify", "convex-iso,class-descent", "--jobs", "2"])
    assert code1 == code2 == 0
    a, b = json.loads(serial), json.loads(parallel)
    assert a.pop("command") != b.pop("command")
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert a["results"]["summary"]["convex-iso"]["fail"] == 0
