"""Left and right parts, the left support, and algebra-class verdicts.

Verdicts are three-valued.  Anything that needs the AR quiver becomes
``unknown`` when knitting runs out of budget.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .algebra import (NormalFormBasis, compute_basis, natural_map_check, present_basis_algebra,
                      quotient_idempotent, truncate_idempotent)
from .ar import (DEFAULT_MODULE_DIM_BUDGET, DEFAULT_NODE_BUDGET, ARQuiver, PredecessorRelation,
                 knit, predecessors)
from .errors import BudgetExceeded
from .homology import (DEFAULT_RESOLUTION_BUDGET, HomDim, global_dimension,
                       injective_dimension, projective_dimension)
from .modules import annihilator_dim, direct_sum, hom_dim
from .presentation import AlgebraPresentation, serialize
from .quiver import connected_components, convex_subsets, is_full_convex

CLASS_NAMES = ("hereditary", "tilted", "quasi-tilted", "shod", "weakly-shod",
               "laura", "left-glued", "right-glued")
DEFAULT_SLICE_BUDGET = 200000
DEFAULT_SUBSET_BUDGET = 4096


@dataclass
class Budgets:
    nilpotency: int = 64
    dimension: int = 20000
    nodes: int = DEFAULT_NODE_BUDGET
    module_dim: int = DEFAULT_MODULE_DIM_BUDGET
    resolution: int = DEFAULT_RESOLUTION_BUDGET
    slice: int = DEFAULT_SLICE_BUDGET
    subsets: int = DEFAULT_SUBSET_BUDGET
    tietze: int = 10000

    def key(self) -> tuple:
        return (self.nilpotency, self.dimension, self.nodes, self.module_dim,
                self.resolution, self.slice, self.subsets, self.tietze)


@dataclass
class ClassVerdict:
    name: str
    verdict: str                 # yes | no | unknown
    evidence: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"class": self.name, "verdict": self.verdict, "evidence": self.evidence}


# --------------------------------------------------------------------------
# analysis context

class Analysis:
    """Lazily computed homological and AR data for one algebra."""

    def __init__(self, p: AlgebraPresentation, budgets: Budgets | None = None,
                 nfb: NormalFormBasis | None = None):
        self.p = p
        self.budgets = budgets or Budgets()
        b = self.budgets
        self.alg = nfb or compute_basis(p, b.nilpotency, b.dimension)
        self._arq: ARQuiver | None = None
        self._arq_error: BudgetExceeded | None = None
        self._pd: dict[int, HomDim] = {}
        self._id: dict[int, HomDim] = {}
        self._pred: PredecessorRelation | None = None

    @property
    def gldim(self) -> HomDim:
        return global_dimension(self.alg, self.budgets.resolution)

    @property
    def arq(self) -> ARQuiver | None:
        if self._arq is None and self._arq_error is None:
            try:
                self._arq = knit(self.alg, self.budgets.nodes, self.budgets.module_dim)
            except BudgetExceeded as exc:
                self._arq_error = exc
        return self._arq

    @property
    def knit_note(self) -> str:
        return str(self._arq_error) if self._arq_error else ""

    @property
    def rep_finite(self) -> bool | None:
        return True if self.arq is not None else None

    @property
    def pred(self) -> PredecessorRelation:
        if self._pred is None:
            self._pred = predecessors(self.arq)
        return self._pred

    def pd(self, i: int) -> HomDim:
        if i not in self._pd:
            self._pd[i] = projective_dimension(self.arq.nodes[i], self.budgets.resolution)
        return self._pd[i]

    def id(self, i: int) -> HomDim:
        if i not in self._id:
            self._id[i] = injective_dimension(self.arq.nodes[i], self.budgets.resolution)
        return self._id[i]


# --------------------------------------------------------------------------
# left and right parts

@dataclass
class PartReport:
    side: str                             # left | right
    members: list[int] | None             # None when unknown
    dims: dict[int, str]                  # pd (left) or id (right) per node
    note: str = ""

    def as_dict(self, arq: ARQuiver | None = None) -> dict:
        out = {"side": self.side, "note": self.note,
               "members": self.members,
               "dims": {str(k): v for k, v in sorted(self.dims.items())}}
        if arq is not None and self.members is not None:
            out["member_dimvecs"] = [list(arq.nodes[i].dimvec) for i in self.members]
        return out


def left_part(an: Analysis) -> PartReport:
    """``{Y : pd X <= 1 for every predecessor X of Y}``."""
    arq = an.arq
    if arq is None:
        return PartReport("left", None, {}, an.knit_note)
    n = len(arq.nodes)
    small = {i: an.pd(i).at_most(1) for i in range(n)}
    dims = {i: str(an.pd(i)) for i in range(n)}
    if any(v is None for v in small.values()):
        return PartReport("left", None, dims, "some projective dimension is unknown")
    members = [y for y in range(n) if all(small[x] for x in an.pred.predecessors(y))]
    return PartReport("left", members, dims)


def right_part(an: Analysis) -> PartReport:
    """``{Y : id X <= 1 for every successor X of Y}``."""
    arq = an.arq
    if arq is None:
        return PartReport("right", None, {}, an.knit_note)
    n = len(arq.nodes)
    small = {i: an.id(i).at_most(1) for i in range(n)}
    dims = {i: str(an.id(i)) for i in range(n)}
    if any(v is None for v in small.values()):
        return PartReport("right", None, dims, "some injective dimension is unknown")
    members = [y for y in range(n) if all(small[x] for x in an.pred.successors(y))]
    return PartReport("right", members, dims)


# --------------------------------------------------------------------------
# slices

def _components_of_nodes(an: Analysis) -> list[list[int]]:
    """Group AR nodes by the connected component of the algebra they live on."""
    comps = connected_components(an.alg.quiver)
    where = {v: k for k, c in enumerate(comps) for v in c}
    groups: list[list[int]] = [[] for _ in comps]
    for i, x in enumerate(an.arq.nodes):
        groups[where[x.support()[0]]].append(i)
    return groups


def find_slice(an: Analysis, budget: int = DEFAULT_SLICE_BUDGET) -> tuple[list[int] | None, int]:
    """Backtracking search for a complete slice.

    Returns the slice (node indices) or None, and the number of search steps.
    Raises ``BudgetExceeded`` when the step budget runs out.
    """
    arq = an.arq
    pred = an.pred
    orbits = arq.orbits()
    orbit_of = {i: k for k, o in enumerate(orbits) for i in o}
    hom_cache: dict[tuple[int, int], int] = {}

    def hom_to_tau(x: int, y: int) -> int:
        t = arq.tau.get(y)
        if t is None:
            return 0
        key = (x, t)
        if key not in hom_cache:
            hom_cache[key] = hom_dim(arq.nodes[x], arq.nodes[t])
        return hom_cache[key]

    groups = _components_of_nodes(an)
    group_of = {i: k for k, g in enumerate(groups) for i in g}
    steps = 0
    chosen: dict[int, int] = {}     # orbit -> node

    def consistent(new: int) -> bool:
        for x in chosen.values():
            if hom_to_tau(x, new) or hom_to_tau(new, x):
                return False
            if x != new and pred.leq(x, new) and pred.leq(new, x):
                return False
        return not hom_to_tau(new, new)

    def convex_closure_ok() -> bool | None:
        """Forced members between chosen nodes; None when an extension is forced."""
        sel = set(chosen.values())
        for x in sel:
            for z in sel:
                if x == z or not pred.leq(x, z):
                    continue
                for y in pred.reach[x]:
                    if y in sel or not pred.leq(y, z):
                        continue
                    k = orbit_of[y]
                    if k in chosen:
                        return False
        return True

    def forced_members() -> list[int]:
        sel = set(chosen.values())
        out = set()
        for x in sel:
            for z in sel:
                if x != z and pred.leq(x, z):
                    out.update(y for y in pred.reach[x] if y not in sel and pred.leq(y, z))
        return sorted(out)

    def final_ok() -> bool:
        sel = sorted(chosen.values())
        for g in groups:
            part = [i for i in sel if i in set(g)]
            if not part or not _connected(arq, part):
                return False
        return annihilator_dim(direct_sum([arq.nodes[i] for i in sel])) == 0

    def search() -> bool:
        nonlocal steps
        steps += 1
        if steps > budget:
            raise BudgetExceeded("slice-search", budget, "complete slice search did not finish")
        if convex_closure_ok() is False:
            return False
        forced = forced_members()
        if forced:
            y = forced[0]
            k = orbit_of[y]
            if not consistent(y):
                return False
            chosen[k] = y
            ok = search()
            if not ok:
                del chosen[k]
            return ok
        free = [k for k in range(len(orbits)) if k not in chosen]
        if not free:
            return final_ok()
        k = free[0]
        for y in orbits[k]:
            if consistent(y):
                chosen[k] = y
                if search():
                    return True
                del chosen[k]
        return False

    found = search()
    return (sorted(chosen.values()) if found else None), steps


def _connected(arq: ARQuiver, part: list[int]) -> bool:
    members = set(part)
    adj: dict[int, set[int]] = {i: set() for i in part}
    for (s, t) in arq.arrows:
        if s in members and t in members:
            adj[s].add(t)
            adj[t].add(s)
    seen = {part[0]}
    stack = [part[0]]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(members)


# --------------------------------------------------------------------------
# classification

def _node_desc(an: Analysis, i: int) -> dict:
    return {"node": i, "dimvec": list(an.arq.nodes[i].dimvec),
            "pd": str(an.pd(i)), "id": str(an.id(i))}


def classify(p: AlgebraPresentation | Analysis, budgets: Budgets | None = None) -> list[ClassVerdict]:
    an = p if isinstance(p, Analysis) else Analysis(p, budgets)
    cached = an.alg.cache.get(("classify", an.budgets.key()))
    if cached is not None:
        return cached
    out: list[ClassVerdict] = []
    g = an.gldim
    ev_g = {"gldim": str(g)}
    if g.is_infinite:
        ev_g["certificate"] = g.note
    her = g.at_most(1)
    out.append(ClassVerdict("hereditary", "unknown" if her is None else ("yes" if her else "no"), ev_g))

    arq = an.arq
    if arq is None:
        note = {"note": an.knit_note or "AR quiver unavailable"}
        for name in CLASS_NAMES[1:]:
            out.append(ClassVerdict(name, "unknown", dict(note)))
        an.alg.cache[("classify", an.budgets.key())] = out
        return out

    n = len(arq.nodes)
    # tilted
    try:
        sl, steps = find_slice(an, an.budgets.slice)
        if sl is not None:
            out.append(ClassVerdict("tilted", "yes", {
                "slice": sl, "slice_dimvecs": [list(arq.nodes[i].dimvec) for i in sl]}))
        else:
            out.append(ClassVerdict("tilted", "no", {
                "note": "complete slice search exhausted", "search_steps": steps,
                "orbits": len(arq.orbits())}))
    except BudgetExceeded as exc:
        out.append(ClassVerdict("tilted", "unknown", {"note": str(exc)}))

    # shod and quasi-tilted
    pds = [an.pd(i) for i in range(n)]
    ids = [an.id(i) for i in range(n)]
    bad = None
    unknown = False
    for i in range(n):
        a, b = pds[i].at_most(1), ids[i].at_most(1)
        if a or b:
            continue
        if a is None or b is None:
            unknown = True
            continue
        bad = i
        break
    lp, rp = left_part(an), right_part(an)
    union = None
    if lp.members is not None and rp.members is not None:
        union = len(set(lp.members) | set(rp.members)) == n
    if bad is not None:
        shod = ClassVerdict("shod", "no", {"violating_module": _node_desc(an, bad)})
    elif unknown:
        shod = ClassVerdict("shod", "unknown", {"note": "some homological dimension unknown"})
    else:
        shod = ClassVerdict("shod", "yes", {"note": "every indecomposable has pd <= 1 or id <= 1",
                                            "ind_is_L_union_R": union})
    out.append(ClassVerdict("quasi-tilted", *_quasi_tilted(shod, g, union)))
    out.append(shod)

    # weakly shod: no path injective ~> cycle ~> projective
    pred = an.pred
    witness = None
    for c in range(n):
        if not pred.on_cycle(c):
            continue
        inj = [i for i in arq.injective_at if pred.leq(i, c)]
        proj = [j for j in arq.projective_at if pred.leq(c, j)]
        if inj and proj:
            witness = {"injective": inj[0], "cycle_node": c, "projective": proj[0]}
            break
    if witness:
        out.append(ClassVerdict("weakly-shod", "no", witness))
    else:
        out.append(ClassVerdict("weakly-shod", "yes", {
            "note": "no path from an injective through a cycle to a projective"}))

    for name in ("laura", "left-glued", "right-glued"):
        out.append(ClassVerdict(name, "yes", {"note": "representation-finite", "nodes": n}))
    an.alg.cache[("classify", an.budgets.key())] = out
    return out


def _quasi_tilted(shod: ClassVerdict, g: HomDim, union: bool | None) -> tuple[str, dict]:
    small = g.at_most(2)
    ev = {"gldim": str(g), "ind_is_L_union_R": union}
    if shod.verdict == "no" or small is False:
        return "no", ev
    if shod.verdict == "unknown" or small is None:
        return "unknown", ev
    return "yes", ev


def verdict_map(verdicts: Iterable[ClassVerdict]) -> dict[str, str]:
    return {v.name: v.verdict for v in verdicts}


# --------------------------------------------------------------------------
# left support

@dataclass
class LeftSupportReport:
    vertices: tuple[str, ...] | None
    convex: bool | None
    presentation: AlgebraPresentation | None
    components: list[tuple[tuple[str, ...], list[ClassVerdict]]]
    note: str = ""

    def as_dict(self) -> dict:
        return {
            "vertices": None if self.vertices is None else list(self.vertices),
            "convex": self.convex,
            "presentation": serialize(self.presentation) if self.presentation else None,
            "components": [{"vertices": list(c), "classes": [v.as_dict() for v in vs]}
                           for c, vs in self.components],
            "note": self.note,
        }


def left_support(p: AlgebraPresentation | Analysis, budgets: Budgets | None = None) -> LeftSupportReport:
    an = p if isinstance(p, Analysis) else Analysis(p, budgets)
    lp = left_part(an)
    if lp.members is None:
        return LeftSupportReport(None, None, None, [], lp.note)
    arq = an.arq
    members = set(lp.members)
    verts = tuple(v for v in an.alg.quiver.vertices
                  if any(i in members for i, u in arq.projective_at.items() if u == v))
    if not verts:
        return LeftSupportReport(verts, True, None, [], "no projective lies in the left part")
    convex = bool(is_full_convex(an.alg.quiver, verts))
    trunc = truncate_idempotent(an.alg, verts)
    pres = present_basis_algebra(trunc, an.budgets.nilpotency, name=f"{an.p.name}_lambda")
    comps = []
    for comp in connected_components(pres.quiver):
        sub = quotient_idempotent(an.p, comp)
        comps.append((comp, classify(Analysis(sub, an.budgets))))
    return LeftSupportReport(verts, convex, pres, comps)


# --------------------------------------------------------------------------
# theorem verification

@dataclass
class TheoremReport:
    theorem: str
    status: str                    # pass | fail | skipped | unknown
    checks: list[dict] = field(default_factory=list)
    note: str = ""

    def as_dict(self) -> dict:
        return {"theorem": self.theorem, "status": self.status, "note": self.note,
                "checks": self.checks}


THEOREMS = ("convex-iso", "class-descent", "sc-descent", "ssc-descent", "left-support-quasi-tilted",
            "left-support-tilted", "cluster-left-support", "cluster-truncation", "convex-homology")
# short ids accepted on the command line
THEOREM_ALIASES = {"crux": "convex-iso", "main1": "class-descent", "main2": "sc-descent",
                   "cor1": "ssc-descent", "main3a": "left-support-quasi-tilted",
                   "main3b": "left-support-tilted", "DS": "cluster-left-support",
                   "cluster": "cluster-truncation", "remark1": "convex-homology"}


def _subsets(p: AlgebraPresentation, s, budgets: Budgets) -> list[tuple[str, ...]]:
    if s is not None:
        return [tuple(v for v in p.quiver.vertices if v in {str(x) for x in s})]
    return convex_subsets(p.quiver, connected=True, limit=budgets.subsets)


def _combine(checks: list[dict]) -> str:
    states = [c["status"] for c in checks]
    if "fail" in states:
        return "fail"
    if "unknown" in states:
        return "unknown"
    return "pass"


def verify_theorem(p: AlgebraPresentation, theorem: str, s: Iterable[str] | None = None,
                   budgets: Budgets | None = None) -> TheoremReport:
    budgets = budgets or Budgets()
    theorem = THEOREM_ALIASES.get(theorem, theorem)
    if theorem not in THEOREMS:
        raise ValueError(f"unknown theorem {theorem!r}; choose from {', '.join(THEOREMS)}")
    handler = globals()["_verify_" + theorem.replace("-", "_")]
    return handler(p, s, budgets)


def _verify_convex_iso(p, s, budgets):
    checks = []
    base = compute_basis(p, budgets.nilpotency, budgets.dimension)
    for sub in _subsets(p, s, budgets):
        if not is_full_convex(p.quiver, sub):
            checks.append({"subset": list(sub), "status": "skipped", "note": "not convex"})
            continue
        rep = natural_map_check(p, sub, base)
        checks.append({"subset": list(sub), "status": "pass" if rep.is_iso else "fail", **rep.as_dict()})
    return TheoremReport("convex-iso", _combine(checks), checks)


def _verify_class_descent(p, s, budgets):
    big = classify(Analysis(p, budgets))
    yes = [v.name for v in big if v.verdict == "yes"]
    checks = []
    if not yes:
        return TheoremReport("class-descent", "skipped", [], "no class verdict is yes for the algebra")
    for sub in _subsets(p, s, budgets):
        if not is_full_convex(p.quiver, sub):
            checks.append({"subset": list(sub), "status": "skipped", "note": "not convex"})
            continue
        small = verdict_map(classify(Analysis(quotient_idempotent(p, sub), budgets)))
        for name in yes:
            v = small[name]
            status = {"yes": "pass", "no": "fail"}.get(v, "unknown")
            checks.append({"subset": list(sub), "class": name, "quotient_verdict": v, "status": status})
    return TheoremReport("class-descent", _combine(checks), checks)


def _verify_sc_descent(p, s, budgets):
    from .pi1 import simply_connected_given_presentation, strongly_simply_connected_given_presentation

    ssc = strongly_simply_connected_given_presentation(p, budgets.subsets, budgets.tietze)
    if ssc.verdict != "yes":
        return TheoremReport("sc-descent", "skipped", [], f"strongly simply connected: {ssc.verdict}")
    checks = []
    for sub in _subsets(p, s, budgets):
        if not is_full_convex(p.quiver, sub):
            continue
        sc = simply_connected_given_presentation(quotient_idempotent(p, sub), budgets.tietze)
        status = {"yes": "pass", "no": "fail"}.get(sc.verdict, "unknown")
        checks.append({"subset": list(sub), "simply_connected": sc.verdict, "status": status})
    return TheoremReport("sc-descent", _combine(checks), checks)


def _verify_ssc_descent(p, s, budgets):
    from .pi1 import strongly_simply_connected_given_presentation

    an = Analysis(p, budgets)
    if an.arq is None:
        return TheoremReport("ssc-descent", "skipped", [], "representation-finiteness not established")
    ssc = strongly_simply_connected_given_presentation(p, budgets.subsets, budgets.tietze)
    if ssc.verdict != "yes":
        return TheoremReport("ssc-descent", "skipped", [], f"strongly simply connected: {ssc.verdict}")
    checks = []
    for sub in _subsets(p, s, budgets):
        if not is_full_convex(p.quiver, sub):
            continue
        qp = quotient_idempotent(p, sub)
        sc = strongly_simply_connected_given_presentation(qp, budgets.subsets, budgets.tietze)
        finite = Analysis(qp, budgets).arq is not None
        status = "fail" if sc.verdict == "no" or not finite else ("pass" if sc.verdict == "yes" else "unknown")
        checks.append({"subset": list(sub), "strongly_simply_connected": sc.verdict,
                       "representation_finite": finite, "status": status})
    return TheoremReport("ssc-descent", _combine(checks), checks)


def _left_support_checks(p, budgets, wanted: str, theorem: str):
    an = Analysis(p, budgets)
    ls = left_support(an)
    if ls.vertices is None:
        return TheoremReport(theorem, "unknown", [], ls.note)
    checks = [{"check": "left support is full convex", "vertices": list(ls.vertices),
               "status": "pass" if ls.convex else "fail"}]
    for comp, verdicts in ls.components:
        v = verdict_map(verdicts)[wanted]
        status = {"yes": "pass", "no": "fail"}.get(v, "unknown")
        checks.append({"component": list(comp), "class": wanted, "verdict": v, "status": status})
    return TheoremReport(theorem, _combine(checks), checks, ls.note)


def _verify_left_support_quasi_tilted(p, s, budgets):
    return _left_support_checks(p, budgets, "quasi-tilted", "left-support-quasi-tilted")


def _verify_left_support_tilted(p, s, budgets):
    an = Analysis(p, budgets)
    if an.arq is None:
        return TheoremReport("left-support-tilted", "skipped", [], "left-supportedness not established")
    rep = _left_support_checks(p, budgets, "tilted", "left-support-tilted")
    rep.note = "left supported (representation-finite)"
    return rep


def _verify_cluster_left_support(p, s, budgets):
    if "cluster-tilted" not in p.tags:
        return TheoremReport("cluster-left-support", "skipped", [], "input is not annotated cluster-tilted")
    return _left_support_checks(p, budgets, "hereditary", "cluster-left-support")


def _verify_cluster_truncation(p, s, budgets):
    if "cluster-tilted" not in p.tags:
        return TheoremReport("cluster-truncation", "skipped", [], "input is not annotated cluster-tilted")
    base = compute_basis(p, budgets.nilpotency, budgets.dimension)
    checks = []
    for sub in _subsets(p, s, budgets):
        if not is_full_convex(p.quiver, sub):
            checks.append({"subset": list(sub), "status": "skipped", "note": "not convex"})
            continue
        pres = present_basis_algebra(truncate_idempotent(base, sub), budgets.nilpotency)
        two_cycle = any(a.source != a.target and any(b.source == a.target and b.target == a.source
                                                     for b in pres.quiver.arrows)
                        for a in pres.quiver.arrows)
        g = global_dimension(compute_basis(pres, budgets.nilpotency, budgets.dimension), budgets.resolution)
        g_ok = None if not g.is_known else (g.is_infinite or g.value <= 1)
        status = "fail" if two_cycle or g_ok is False else ("pass" if g_ok else "unknown")
        checks.append({"subset": list(sub), "two_cycle": two_cycle, "gldim": str(g), "status": status})
    return TheoremReport("cluster-truncation", _combine(checks), checks,
                         "necessary conditions only; gldim 0 counts as hereditary")


def _verify_convex_homology(p, s, budgets):
    from .homology import compare_convex_homology

    base = compute_basis(p, budgets.nilpotency, budgets.dimension)
    checks = []
    for sub in _subsets(p, s, budgets):
        if not is_full_convex(p.quiver, sub):
            continue
        rep = compare_convex_homology(p, sub, nfb=base, budget=budgets.resolution)
        checks.append({"subset": list(sub), "status": "pass" if rep.ok else "fail",
                       "failures": [c.as_dict() for c in rep.failures]})
    return TheoremReport("convex-homology", _combine(checks), checks)
