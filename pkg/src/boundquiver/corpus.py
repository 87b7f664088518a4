"""Seeded random bound quiver presentations for property runs."""

from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass

from .algebra import admissibility_check
from .errors import BudgetExceeded
from .linalg import field_from_name
from .presentation import AlgebraPresentation, Relation
from .quiver import Arrow, Path, Quiver, enumerate_paths, has_oriented_cycle


@dataclass(frozen=True)
class CorpusSpec:
    seed: int = 1
    count: int = 20
    min_vertices: int = 2
    max_vertices: int = 5
    arrow_density: float = 0.35
    relation_density: float = 0.4
    cycle_rate: float = 0.1
    field: str = "QQ"

    @classmethod
    def parse(cls, text: str) -> "CorpusSpec":
        """``seed=1,count=20,vertices=3-6,...`` or a JSON object."""
        text = text.strip()
        if text.startswith("{"):
            data = json.loads(text)
        else:
            data = {}
            for item in filter(None, (x.strip() for x in text.split(","))):
                key, _, value = item.partition("=")
                data[key.strip().replace("-", "_")] = value.strip()
        if "vertices" in data:
            lo, _, hi = str(data.pop("vertices")).partition("-")
            data["min_vertices"], data["max_vertices"] = int(lo), int(hi or lo)
        kwargs = {}
        for f, default in asdict(cls()).items():
            if f in data:
                kwargs[f] = type(default)(data.pop(f))
        if data:
            raise ValueError(f"unknown corpus spec keys: {sorted(data)}")
        spec = cls(**kwargs)
        if not 1 <= spec.min_vertices <= spec.max_vertices:
            raise ValueError("bad vertex range")
        if spec.count < 0:
            raise ValueError("count must be non-negative")
        for key in ("arrow_density", "relation_density", "cycle_rate"):
            if not 0 <= getattr(spec, key) <= 1:
                raise ValueError(f"{key} must lie in [0, 1]")
        return spec

    def as_dict(self) -> dict:
        return asdict(self)


def _random_quiver(rng: random.Random, n: int, spec: CorpusSpec) -> Quiver:
    verts = [str(i) for i in range(1, n + 1)]
    edges: set[tuple[int, int]] = set()
    for j in range(1, n):
        i = rng.randrange(j)
        edges.add((i, j) if rng.random() < 0.5 else (j, i))
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) not in edges and (j, i) not in edges and rng.random() < spec.arrow_density:
                edges.add((i, j) if rng.random() < 0.5 else (j, i))
    # orient acyclically by a random order unless a cycle is requested
    order = list(range(n))
    rng.shuffle(order)
    rank = {v: k for k, v in enumerate(order)}
    arrows = []
    for i, j in sorted(edges):
        a, b = (i, j) if rank[i] < rank[j] else (j, i)
        arrows.append((a, b))
    if n >= 2 and rng.random() < spec.cycle_rate and arrows:
        a, b = arrows[rng.randrange(len(arrows))]
        arrows.append((b, a))
    return Quiver(tuple(verts), tuple(Arrow(f"a{k + 1}", verts[s], verts[t])
                                      for k, (s, t) in enumerate(arrows)))


def _random_relations(rng: random.Random, q: Quiver, spec: CorpusSpec, cyclic: bool) -> list[Relation]:
    fld = field_from_name(spec.field)
    max_len = 4 if cyclic else 3
    paths = [p for p in enumerate_paths(q, max_len) if len(p) >= 2]
    by_ends: dict[tuple[str, str, int], list[Path]] = {}
    for p in paths:
        by_ends.setdefault((p.source, p.target, len(p)), []).append(p)
    rels: list[Relation] = []
    used: set[Path] = set()
    for p in paths:
        if p in used or rng.random() >= spec.relation_density:
            continue
        partners = [x for x in by_ends[(p.source, p.target, len(p))] if x != p and x not in used]
        if partners and rng.random() < 0.5:
            other = partners[rng.randrange(len(partners))]
            coeff = fld(rng.choice([1, 1, 1, 2, -1]))
            rels.append(Relation(((fld.one, p), (-coeff, other))))
            used.update((p, other))
        else:
            rels.append(Relation(((fld.one, p),)))
            used.add(p)
    if cyclic:
        # kill every cycle of length two or three through a monomial relation
        for p in paths:
            if p.source == p.target and p not in used and len(p) <= 3:
                rels.append(Relation(((fld.one, p),)))
                used.add(p)
    return rels


def generate_corpus(spec: CorpusSpec, budget: int = 16) -> list[AlgebraPresentation]:
    """Admissibility-screened presentations; a pure function of ``spec``."""
    rng = random.Random(spec.seed)
    fld = field_from_name(spec.field)
    out = []
    attempts = 0
    while len(out) < spec.count:
        attempts += 1
        if attempts > 50 * spec.count + 100:
            raise RuntimeError("corpus generation keeps failing admissibility")
        n = rng.randint(spec.min_vertices, spec.max_vertices)
        q = _random_quiver(rng, n, spec)
        cyclic = has_oriented_cycle(q)
        rels = _random_relations(rng, q, spec, cyclic)
        try:
            p = AlgebraPresentation(q, tuple(rels), fld, f"corpus_{spec.seed}_{len(out) + 1}")
            admissibility_check(p, budget)
        except (BudgetExceeded, ValueError):
            continue
        out.append(p)
    return out
