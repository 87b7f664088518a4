"""Auslander-Reiten translates, almost split sequences and knitting.

``tau M`` is the kernel of ``nu(d_1)`` for a minimal presentation
``P_1 -> P_0 -> M -> 0``, where ``nu`` is the Nakayama functor sending
``P_v`` to ``I_v``.  ``tau^-1`` is computed as ``D tau D`` over the opposite
algebra.  The almost split sequence ending in ``M`` is the pushout along a
nonzero element of ``Ext^1(M, tau M)`` killed by the radical of ``End(M)``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .algebra import NormalFormBasis, concat
from .decompose import (DecompositionResult, ModuleRegistry, Summand, decompose,
                        _primary_eigenvalue, indecomposable_parts, iso_witness)
from .errors import BudgetExceeded
from .homology import free_map, free_module, projective_cover
from .linalg import Mat
from .modules import (Morphism, Representation, direct_sum, dual, end_basis, hom_space,
                      injective, projective, quotient, radical_bases, submodule)

DEFAULT_NODE_BUDGET = 512
DEFAULT_MODULE_DIM_BUDGET = 32


def nakayama_injective(alg: NormalFormBasis, v: str) -> Representation:
    """``I_v`` in coordinates dual to the basis paths ``x -> v`` of the algebra itself."""
    key = ("nu", v)
    hit = alg.cache.get(key)
    if hit is not None:
        return hit
    q = alg.quiver
    fld = alg.field
    dims = {x: len(alg.block(x, v)) for x in q.vertices}
    maps = {}
    for a in q.arrows:
        src = alg.block(a.source, v)   # e_x L e_v, dual basis at x
        tgt = alg.block(a.target, v)
        pos = {k: n for n, k in enumerate(src)}
        # left multiplication by a: e_w L e_v -> e_x L e_v, then transpose
        lm = Mat(fld, len(tgt), len(src))
        for r, k in enumerate(tgt):
            x = concat(q.arrow_path(a.name), alg.basis[k])
            for j, c in alg.reduce_path(x).items():
                lm.rows[r][pos[j]] = c
        maps[a.name] = lm.T
    hit = Representation(alg, dims, maps, label=f"I{v}")
    alg.cache[key] = hit
    return hit


def _nu_of_free_map(alg: NormalFormBasis, src_gens, tgt_gens, images) -> Morphism:
    """Apply the Nakayama functor to ``free(src_gens) -> free(tgt_gens)``."""
    fld = alg.field
    q = alg.quiver
    src = direct_sum([nakayama_injective(alg, v) for v in src_gens])
    tgt = direct_sum([nakayama_injective(alg, v) for v in tgt_gens])
    mats = {}
    for x in q.vertices:
        m = Mat(fld, src.dims[x], tgt.dims[x])
        r0 = 0
        for c, v in enumerate(src_gens):
            zs = alg.block(x, v)
            toff = 0
            img = images[c]
            ioff = 0
            for cp, vp in enumerate(tgt_gens):
                lam_block = alg.block(vp, v)
                seg = img[ioff: ioff + len(lam_block)]
                ioff += len(lam_block)
                ys = alg.block(x, vp)
                if any(seg) and zs and ys:
                    zpos = {k: n for n, k in enumerate(zs)}
                    for yi, yk in enumerate(ys):
                        # reduce(y * lambda) in e_x L e_v
                        acc: dict[int, object] = {}
                        for lk, coeff in zip(lam_block, seg):
                            if not coeff:
                                continue
                            for k, d in alg.mul(yk, lk).items():
                                acc[k] = acc.get(k, 0) + coeff * d
                        for k, d in acc.items():
                            if d:
                                m.rows[r0 + zpos[k]][toff + yi] = m.rows[r0 + zpos[k]][toff + yi] + d
                toff += len(ys)
            r0 += len(zs)
        mats[x] = m
    return Morphism(src, tgt, mats)


def _minimal_presentation(m: Representation):
    step0 = projective_cover(m)
    if step0.kernel.dim == 0:
        return step0, None, None
    step1 = projective_cover(step0.kernel)
    emb = step0.kernel_basis
    images = [(Mat(m.field, 1, len(t), [t]) @ emb[v]).rows[0] for t, v in zip(step1.tops, step1.gens)]
    return step0, step1, images


def ar_translate(m: Representation) -> Representation:
    """``tau M = D Tr M``; ``M`` must be indecomposable and not projective."""
    step0, step1, images = _minimal_presentation(m)
    if step1 is None:
        raise ValueError("tau is undefined on projective modules")
    nu = _nu_of_free_map(m.alg, step1.gens, step0.gens, images)
    kb = {v: nu.mats[v].left_kernel() for v in m.quiver.vertices}
    tau, _ = submodule(nu.src, kb)
    return tau


def tau_inverse(m: Representation) -> Representation:
    """``tau^-1 M = D tau D M``; ``M`` must be indecomposable and not injective."""
    d = dual(m)
    try:
        t = ar_translate(d)
    except ValueError:
        raise ValueError("tau inverse is undefined on injective modules") from None
    back = dual(t)
    return Representation(m.alg, back.dims, back.maps)


def is_projective_module(m: Representation) -> bool:
    return projective_cover(m).kernel.dim == 0


def is_injective_module(m: Representation) -> bool:
    return projective_cover(dual(m)).kernel.dim == 0


# --------------------------------------------------------------------------
# almost split sequences

def _flat(f: Morphism) -> list:
    out = []
    for v in f.src.quiver.vertices:
        out.extend(f.mats[v].flat())
    return out


def radical_of_end(m: Representation) -> list[Mat]:
    """A basis of ``rad End(M)`` for an indecomposable ``M`` (total matrices)."""
    ends = end_basis(m)
    fld = m.field
    ident = Mat.identity(fld, m.dim)
    gens = []
    for f in ends:
        lam = _primary_eigenvalue(f)
        if lam is None:
            raise ValueError("End(M) is not split local over the base field")
        g = f - ident.scale(lam)
        if not g.is_zero():
            gens.append(g.flat())
    if not gens:
        return []
    n = m.dim
    basis = Mat(fld, len(gens), n * n, gens).row_basis()
    return [Mat(fld, n, n, [r[i * n:(i + 1) * n] for i in range(n)]) for r in basis.rows]


@dataclass
class ARSequence:
    left: Representation          # tau M
    middle: DecompositionResult
    right: Representation         # M
    middle_module: Representation

    @property
    def additive(self) -> bool:
        return all(self.middle_module.dims[v] == self.left.dims[v] + self.right.dims[v]
                   for v in self.right.quiver.vertices)


def ar_sequence(m: Representation, tau_m: Representation | None = None) -> ARSequence:
    alg = m.alg
    fld = m.field
    q = alg.quiver
    step0 = projective_cover(m)
    if step0.kernel.dim == 0:
        raise ValueError("no almost split sequence ends in a projective module")
    n = tau_m if tau_m is not None else ar_translate(m)
    omega = step0.kernel
    kb = step0.kernel_basis
    p0 = step0.free

    # Hom(Omega, N) and the restrictions from Hom(P0, N)
    hom_on = hom_space(omega, n)
    if not hom_on:
        raise ArithmeticError("Ext^1(M, tau M) vanished; module is not indecomposable")
    restr = []
    for c, v in enumerate(step0.gens):
        for k in range(n.dims[v]):
            img = [fld.zero] * n.dims[v]
            img[k] = fld.one
            g = free_map(alg, step0.gens, [img if i == c else [fld.zero] * n.dims[gv]
                                           for i, gv in enumerate(step0.gens)], n)
            restr.append(_flat(Morphism(omega, n, {w: kb[w] @ g.mats[w] for w in q.vertices})))
    width = len(_flat(hom_on[0]))
    rmat = Mat(fld, len(restr), width, restr) if restr else Mat(fld, 0, width)
    annihilators = rmat.right_kernel()   # w with R w = 0; v in R iff v . w = 0 for all w

    # lift radical endomorphisms of M to Omega
    lifts = []
    cover = step0.cover
    for f_total in radical_of_end(m):
        f = Morphism.from_total(m, m, f_total)
        imgs = []
        for c, v in enumerate(step0.gens):
            target = Mat(fld, 1, m.dims[v], [step0.tops[c]]) @ f.mats[v]
            imgs.append(cover.mats[v].solve_any_left(target).rows[0])
        f0 = free_map(alg, step0.gens, imgs, p0)
        f1 = {w: kb[w].solve_left(kb[w] @ f0.mats[w]) for w in q.vertices}
        lifts.append(f1)

    def dot(vec, w):
        s = fld.zero
        for a, b in zip(vec, w):
            if a and b:
                s = s + a * b
        return s

    rows = []
    for f1 in lifts:
        comp = [_flat(Morphism(omega, n, {w: f1[w] @ h.mats[w] for w in q.vertices})) for h in hom_on]
        for w in annihilators.rows:
            rows.append([dot(cv, w) for cv in comp])
    sols = (Mat(fld, len(rows), len(hom_on), rows).right_kernel() if rows
            else Mat.identity(fld, len(hom_on)))
    chosen = None
    for x in sols.rows:
        vec = [fld.zero] * width
        for xi, h in zip(x, hom_on):
            if xi:
                vec = [a + xi * b for a, b in zip(vec, _flat(h))]
        if any(dot(vec, w) for w in annihilators.rows):
            chosen = x
            break
    if chosen is None:
        raise ArithmeticError("no almost split extension found")
    h = {w: Mat(fld, omega.dims[w], n.dims[w]) for w in q.vertices}
    for xi, hb in zip(chosen, hom_on):
        if xi:
            h = {w: h[w] + hb.mats[w].scale(xi) for w in q.vertices}

    # pushout (P0 + N) / {(iota x, -h x)}
    total = direct_sum([p0, n])
    bases = {w: kb[w].hstack(-h[w]) for w in q.vertices}
    e, _ = quotient(total, bases)
    return ARSequence(n, decompose(e), m, e)


# --------------------------------------------------------------------------
# knitting

@dataclass
class ARQuiver:
    alg: NormalFormBasis
    nodes: list[Representation]
    arrows: dict[tuple[int, int], int]          # (source, target) -> multiplicity
    tau: dict[int, int]                         # non-projective node -> tau node
    projective_at: dict[int, str]               # node -> vertex with P_vertex
    injective_at: dict[int, str]
    caveats: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def tau_inverse(self) -> dict[int, int]:
        return {j: i for i, j in self.tau.items()}

    def is_projective(self, i: int) -> bool:
        return i in self.projective_at

    def is_injective(self, i: int) -> bool:
        return i in self.injective_at

    def successors(self, i: int) -> list[int]:
        return sorted(t for (s, t) in self.arrows if s == i)

    def predecessors_of(self, i: int) -> list[int]:
        return sorted(s for (s, t) in self.arrows if t == i)

    def find(self, m: Representation) -> int | None:
        for i, x in enumerate(self.nodes):
            if x.dimvec == m.dimvec and iso_witness(x, m) is not None:
                return i
        return None

    def node_label(self, i: int) -> str:
        x = self.nodes[i]
        base = "".join(str(d) for d in x.dimvec)
        tags = []
        if i in self.projective_at:
            tags.append(f"P{self.projective_at[i]}")
        if i in self.injective_at:
            tags.append(f"I{self.injective_at[i]}")
        return base + (" " + "=".join(tags) if tags else "")

    def orbits(self) -> list[list[int]]:
        """tau-orbits, each listed from its most tau-shifted member."""
        seen: set[int] = set()
        inv = self.tau_inverse
        out = []
        for i in range(len(self.nodes)):
            if i in seen:
                continue
            start = i
            while start in self.tau and self.tau[start] not in seen and self.tau[start] != i:
                start = self.tau[start]
            orbit = []
            cur = start
            while cur is not None and cur not in seen:
                orbit.append(cur)
                seen.add(cur)
                cur = inv.get(cur)
            out.append(orbit)
        return out

    def as_dict(self) -> dict:
        return {
            "nodes": [{"index": i, "dimvec": list(x.dimvec),
                       "projective": self.projective_at.get(i),
                       "injective": self.injective_at.get(i),
                       "tau": self.tau.get(i)} for i, x in enumerate(self.nodes)],
            "arrows": [[s, t, m] for (s, t), m in sorted(self.arrows.items())],
        }

    def to_dot(self) -> str:
        lines = ["digraph AR {", "  rankdir=LR;"]
        for i in range(len(self.nodes)):
            lines.append(f'  n{i} [label="{self.node_label(i)}"];')
        for (s, t), m in sorted(self.arrows.items()):
            extra = f' [label="{m}"]' if m > 1 else ""
            lines.append(f"  n{s} -> n{t}{extra};")
        for s, t in sorted(self.tau.items()):
            lines.append(f"  n{s} -> n{t} [style=dashed, constraint=false];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def knit(alg: NormalFormBasis, node_budget: int = DEFAULT_NODE_BUDGET,
         dim_budget: int = DEFAULT_MODULE_DIM_BUDGET) -> ARQuiver:
    """Closure of the projectives and injectives under the AR structure.

    Raises ``BudgetExceeded`` when more than ``node_budget`` classes appear
    or a module exceeds ``dim_budget``; for a representation-finite algebra
    the closure is all of ``ind L``.
    """
    key = ("knit", node_budget, dim_budget)
    hit = alg.cache.get(key)
    if isinstance(hit, ARQuiver):
        return hit
    if isinstance(hit, BudgetExceeded):
        raise hit
    try:
        arq = _knit(alg, node_budget, dim_budget)
    except BudgetExceeded as exc:
        alg.cache[key] = exc
        raise
    alg.cache[key] = arq
    return arq


def _knit(alg: NormalFormBasis, node_budget: int, dim_budget: int) -> ARQuiver:
    reg = ModuleRegistry()
    proj_at: dict[int, str] = {}
    inj_at: dict[int, str] = {}
    queue: deque[int] = deque()
    caveats: list[str] = []

    def add(m: Representation) -> int:
        if m.dim > dim_budget:
            raise BudgetExceeded("module-dimension", dim_budget, "representation-infinite or budget too small")
        i, new = reg.add(m)
        if new:
            if len(reg) > node_budget:
                raise BudgetExceeded("nodes", node_budget, "representation-infinite or budget too small")
            queue.append(i)
        return i

    verts = alg.quiver.vertices
    for v in verts:
        proj_at[add(projective(alg, v))] = v
    for v in verts:
        i = add(injective(alg, v))
        inj_at[i] = v
    arrows: dict[tuple[int, int], int] = {}
    tau: dict[int, int] = {}
    while queue:
        i = queue.popleft()
        x = reg.modules[i]
        if i in proj_at:
            rad = submodule(x, radical_bases(x))[0]
            parts = indecomposable_parts(rad, caveats)
        else:
            tx = ar_translate(x)
            t = add(tx)
            tau[i] = t
            seq = ar_sequence(x, reg.modules[t])
            if not seq.additive:
                raise AssertionError("almost split sequence is not additive")
            caveats.extend(seq.middle.caveats)
            parts = seq.middle.modules
        for y in parts:
            j = add(y)
            arrows[(j, i)] = arrows.get((j, i), 0) + 1
        if i not in inj_at:
            add(tau_inverse(x))
    # canonical order
    order = sorted(range(len(reg)), key=lambda k: (reg.modules[k].dim, reg.modules[k].dimvec, k))
    pos = {k: n for n, k in enumerate(order)}
    nodes = [reg.modules[k] for k in order]
    return ARQuiver(
        alg=alg,
        nodes=nodes,
        arrows={(pos[s], pos[t]): m for (s, t), m in sorted(arrows.items())},
        tau={pos[s]: pos[t] for s, t in tau.items()},
        projective_at={pos[k]: v for k, v in proj_at.items()},
        injective_at={pos[k]: v for k, v in inj_at.items()},
        caveats=sorted(set(caveats)),
    )


@dataclass
class PredecessorRelation:
    """Reflexive-transitive closure of the AR-quiver arrows."""

    reach: list[frozenset[int]]       # reach[i] = {j : i ~> j}

    def leq(self, i: int, j: int) -> bool:
        return j in self.reach[i]

    def predecessors(self, j: int) -> list[int]:
        return [i for i in range(len(self.reach)) if j in self.reach[i]]

    def successors(self, i: int) -> list[int]:
        return sorted(self.reach[i])

    def on_cycle(self, i: int) -> bool:
        return any(i in self.reach[j] for j in self.reach[i] if j != i)


def predecessors(arq: ARQuiver) -> PredecessorRelation:
    n = len(arq.nodes)
    succ: list[list[int]] = [[] for _ in range(n)]
    for (s, t) in arq.arrows:
        succ[s].append(t)
    reach = []
    for i in range(n):
        seen = {i}
        stack = [i]
        while stack:
            x = stack.pop()
            for y in succ[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        reach.append(frozenset(seen))
    return PredecessorRelation(reach)
