"""Fundamental groups of bound quiver presentations.

Generators are the arrows outside a BFS spanning tree of the underlying
graph; every minimal relation with at least two terms contributes relators
identifying the words of its paths.  Words are tuples of nonzero ints:
``k + 1`` is generator ``k`` and ``-(k + 1)`` its inverse.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

import sympy

from .algebra import NormalFormBasis, compute_basis, quotient_idempotent
from .presentation import AlgebraPresentation, Relation
from .quiver import connected_components, convex_subsets, has_oriented_cycle, induced_subquiver

MAX_SUPPORT = 16
DEFAULT_TIETZE_BUDGET = 10000

Word = tuple[int, ...]


def minimal_relations(p: AlgebraPresentation, nfb: NormalFormBasis | None = None) -> list[Relation]:
    """Inclusion-minimal sub-sums of the given relations that lie in the ideal."""
    nfb = nfb or compute_basis(p)
    out: list[Relation] = []
    for r in p.relations:
        terms = r.terms
        if len(terms) > MAX_SUPPORT:
            raise ValueError(f"relation support of {len(terms)} paths exceeds {MAX_SUPPORT}")
        found: list[frozenset[int]] = []
        for size in range(1, len(terms) + 1):
            for idx in combinations(range(len(terms)), size):
                s = frozenset(idx)
                if any(f <= s for f in found):
                    continue
                if not nfb.reduce({terms[i][1]: terms[i][0] for i in idx}):
                    found.append(s)
                    out.append(Relation(tuple(terms[i] for i in idx)))
    return out


@dataclass
class GroupPresentation:
    generators: tuple[str, ...]          # names of the non-tree arrows
    relators: tuple[Word, ...]
    vertices: tuple[str, ...] = ()
    tree: tuple[str, ...] = ()

    def word_text(self, w: Word) -> str:
        if not w:
            return "1"
        return "*".join(self.generators[abs(x) - 1] + ("^-1" if x < 0 else "") for x in w)

    def as_dict(self) -> dict:
        return {"vertices": list(self.vertices), "tree": list(self.tree),
                "generators": list(self.generators),
                "relators": [self.word_text(w) for w in self.relators]}


def _spanning_tree(q, comp: tuple[str, ...]) -> list[str]:
    members = set(comp)
    seen = {comp[0]}
    tree = []
    queue = deque([comp[0]])
    incident: dict[str, list] = {v: [] for v in comp}
    for a in q.arrows:
        if a.source in members and a.target in members:
            incident[a.source].append((a, a.target))
            if a.target != a.source:
                incident[a.target].append((a, a.source))
    while queue:
        x = queue.popleft()
        for a, y in incident[x]:
            if y not in seen:
                seen.add(y)
                tree.append(a.name)
                queue.append(y)
    return tree


def _free_reduce(w) -> Word:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def _inverse(w: Word) -> Word:
    return tuple(-x for x in reversed(w))


def _cyclic_reduce(w: Word) -> Word:
    w = _free_reduce(w)
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return w


def fundamental_groups(p: AlgebraPresentation, nfb: NormalFormBasis | None = None) -> list[GroupPresentation]:
    """One group presentation per connected component of the quiver."""
    q = p.quiver
    rels = minimal_relations(p, nfb)
    out = []
    for comp in connected_components(q):
        members = set(comp)
        tree = _spanning_tree(q, comp)
        tset = set(tree)
        gens = tuple(a.name for a in q.arrows
                     if a.source in members and a.target in members and a.name not in tset)
        gidx = {g: k + 1 for k, g in enumerate(gens)}

        def word(path) -> Word:
            return tuple(gidx[a] for a in path.arrows if a in gidx)

        relators = []
        for r in rels:
            if r.source not in members or len(r.terms) < 2:
                continue
            w1 = word(r.terms[0][1])
            for _, x in r.terms[1:]:
                rel = _cyclic_reduce(w1 + _inverse(word(x)))
                relators.append(rel)
        out.append(GroupPresentation(gens, tuple(relators), comp, tuple(tree)))
    return out


def fundamental_group(p: AlgebraPresentation, nfb: NormalFormBasis | None = None) -> GroupPresentation:
    groups = fundamental_groups(p, nfb)
    if len(groups) != 1:
        raise ValueError("quiver is not connected; use fundamental_groups")
    return groups[0]


@dataclass
class AbelianInvariants:
    free_rank: int
    torsion: tuple[int, ...]

    @property
    def trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z/{t}" for t in self.torsion]
        return " x ".join(parts) if parts else "0"


def abelianization(g: GroupPresentation) -> AbelianInvariants:
    n = len(g.generators)
    if n == 0:
        return AbelianInvariants(0, ())
    rows = []
    for w in g.relators:
        row = [0] * n
        for x in w:
            row[abs(x) - 1] += 1 if x > 0 else -1
        if any(row):
            rows.append(row)
    if not rows:
        return AbelianInvariants(n, ())
    from sympy.matrices.normalforms import smith_normal_form

    snf = smith_normal_form(sympy.Matrix(rows), domain=sympy.ZZ)
    diag = [abs(int(snf[i, i])) for i in range(min(snf.shape))]
    nonzero = [d for d in diag if d]
    torsion = tuple(sorted(d for d in nonzero if d > 1))
    return AbelianInvariants(n - len(nonzero), torsion)


@dataclass
class TrivialityVerdict:
    verdict: str                       # trivial | nontrivial | unknown
    certificate: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"verdict": self.verdict, "certificate": self.certificate}


def triviality(g: GroupPresentation, budget: int = DEFAULT_TIETZE_BUDGET) -> TrivialityVerdict:
    ab = abelianization(g)
    if not ab.trivial:
        return TrivialityVerdict("nontrivial", [f"abelianization {ab}"])
    gens = set(range(1, len(g.generators) + 1))
    rels = [_cyclic_reduce(w) for w in g.relators]
    trace = []
    work = 0
    while gens:
        rels = [w for w in (_cyclic_reduce(w) for w in rels) if w]
        pick = None
        for k, w in enumerate(rels):
            counts: dict[int, int] = {}
            for x in w:
                counts[abs(x)] = counts.get(abs(x), 0) + 1
            once = sorted(a for a, c in counts.items() if c == 1)
            if once:
                pick = (k, once[0])
                break
        if pick is None:
            return TrivialityVerdict("unknown", trace + ["no generator occurs exactly once in a relator"])
        k, a = pick
        w = rels.pop(k)
        i = next(j for j, x in enumerate(w) if abs(x) == a)
        # w = u a^e v = 1  =>  a^e = u^-1 v^-1
        u, e, v = w[:i], w[i], w[i + 1:]
        repl = _inverse(u) + _inverse(v)
        if e < 0:
            repl = _inverse(repl)
        name = g.generators[a - 1]
        trace.append(f"eliminate {name} = {g.word_text(repl) if repl else '1'}")
        new = []
        for r in rels:
            out: list[int] = []
            for x in r:
                if abs(x) == a:
                    out.extend(repl if x > 0 else _inverse(repl))
                else:
                    out.append(x)
            work += len(out)
            if work > budget:
                return TrivialityVerdict("unknown", trace + [f"rewriting budget {budget} exhausted"])
            new.append(tuple(out))
        rels = new
        gens.discard(a)
    return TrivialityVerdict("trivial", trace or ["no generators"])


@dataclass
class ConnectivityVerdict:
    verdict: str                        # yes | no | unknown
    evidence: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"verdict": self.verdict, "evidence": self.evidence,
                "scope": "for the given presentation"}


def simply_connected_given_presentation(p: AlgebraPresentation,
                                        budget: int = DEFAULT_TIETZE_BUDGET) -> ConnectivityVerdict:
    if has_oriented_cycle(p.quiver):
        return ConnectivityVerdict("no", {"reason": "quiver has an oriented cycle"})
    groups = fundamental_groups(p)
    unknown = None
    details = []
    for g in groups:
        t = triviality(g, budget)
        details.append({"component": list(g.vertices), "group": g.as_dict(), **t.as_dict()})
        if t.verdict == "nontrivial":
            return ConnectivityVerdict("no", {"reason": "nontrivial fundamental group", "components": details})
        if t.verdict == "unknown":
            unknown = True
    if unknown:
        return ConnectivityVerdict("unknown", {"components": details})
    return ConnectivityVerdict("yes", {"components": details})


def strongly_simply_connected_given_presentation(p: AlgebraPresentation, subset_budget: int = 4096,
                                                 budget: int = DEFAULT_TIETZE_BUDGET) -> ConnectivityVerdict:
    try:
        subsets = convex_subsets(p.quiver, connected=True, limit=subset_budget)
    except OverflowError as exc:
        return ConnectivityVerdict("unknown", {"reason": str(exc)})
    unknown = []
    for s in subsets:
        v = simply_connected_given_presentation(quotient_idempotent(p, s), budget)
        if v.verdict == "no":
            return ConnectivityVerdict("no", {"failing_subset": list(s), "reason": v.evidence.get("reason")})
        if v.verdict == "unknown":
            unknown.append(list(s))
    if unknown:
        return ConnectivityVerdict("unknown", {"undecided_subsets": unknown})
    return ConnectivityVerdict("yes", {"convex_subsets_checked": len(subsets)})
