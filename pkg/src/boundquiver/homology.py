"""Minimal projective resolutions, homological dimensions and Ext.

Projective dimensions are computed on indecomposable summands: ``pd X`` is
one more than the largest ``pd`` among the summands of the syzygy of ``X``.
A summand graph that returns to an earlier isomorphism class is a
certificate that the dimension is infinite.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .algebra import NormalFormBasis, compute_basis, quotient_idempotent
from .decompose import ModuleRegistry, indecomposable_parts
from .errors import BudgetExceeded
from .linalg import Mat
from .modules import (Morphism, Representation, direct_sum, extend_by_zero, injective,
                      projective, radical_bases, simple, submodule)
from .presentation import AlgebraPresentation
from .quiver import is_full_convex

DEFAULT_RESOLUTION_BUDGET = 32
DEFAULT_CLASS_BUDGET = 4000


@dataclass(frozen=True)
class HomDim:
    """A homological dimension: finite, certified infinite, or unknown."""

    value: int | None
    status: str = "finite"         # finite | infinite | unknown
    note: str = ""

    @classmethod
    def finite(cls, n: int) -> "HomDim":
        return cls(n, "finite")

    @classmethod
    def infinite(cls, note: str = "") -> "HomDim":
        return cls(None, "infinite", note)

    @classmethod
    def unknown(cls, note: str = "") -> "HomDim":
        return cls(None, "unknown", note)

    @property
    def is_finite(self) -> bool:
        return self.status == "finite"

    @property
    def is_infinite(self) -> bool:
        return self.status == "infinite"

    @property
    def is_known(self) -> bool:
        return self.status != "unknown"

    def at_most(self, k: int) -> bool | None:
        if self.status == "finite":
            return self.value <= k
        if self.status == "infinite":
            return False
        return None

    def __le__(self, other: "HomDim") -> bool | None:
        if not (self.is_known and other.is_known):
            return None
        if other.is_infinite:
            return True
        if self.is_infinite:
            return False
        return self.value <= other.value

    def __str__(self) -> str:
        if self.status == "finite":
            return str(self.value)
        return "inf" if self.status == "infinite" else "unknown"

    def as_json(self):
        return self.value if self.status == "finite" else str(self)


def hom_max(dims: Iterable[HomDim]) -> HomDim:
    dims = list(dims)
    inf = [d for d in dims if d.is_infinite]
    if inf:
        return inf[0]
    unk = [d for d in dims if not d.is_known]
    if unk:
        return unk[0]
    return HomDim.finite(max((d.value for d in dims), default=0))


# --------------------------------------------------------------------------
# free modules and covers

def free_module(alg: NormalFormBasis, gens: Sequence[str]) -> Representation:
    """``P = (+)_c P_{gens[c]}`` with the copies stacked in order at each vertex."""
    if not gens:
        return Representation(alg, {})
    return direct_sum([projective(alg, v) for v in gens])


def _copy_offsets(alg: NormalFormBasis, gens: Sequence[str], w: str) -> list[int]:
    out, k = [], 0
    for v in gens:
        out.append(k)
        k += len(alg.block(v, w))
    return out


@dataclass
class CoverStep:
    gens: tuple[str, ...]
    tops: list[list]               # representative of each generator in X_{gens[c]}
    free: Representation
    cover: Morphism                # free -> X
    kernel: Representation
    kernel_basis: dict[str, Mat]   # rows in free-module coordinates


def projective_cover(x: Representation) -> CoverStep:
    alg = x.alg
    q = alg.quiver
    fld = x.field
    rad = radical_bases(x)
    gens: list[str] = []
    tops: list[list] = []
    for v in q.vertices:
        if x.dims[v] == 0:
            continue
        comp = rad[v].extend_to_basis()
        for row in comp.rows:
            gens.append(v)
            tops.append(list(row))
    free = free_module(alg, gens)
    mats = {}
    for w in q.vertices:
        rows = []
        for c, v in enumerate(gens):
            top = Mat(fld, 1, x.dims[v], [tops[c]])
            for k in alg.block(v, w):
                rows.append((top @ x.path_matrix(alg.basis[k])).rows[0])
        mats[w] = Mat(fld, len(rows), x.dims[w], rows)
    cover = Morphism(free, x, mats)
    kb = {w: mats[w].left_kernel() for w in q.vertices}
    kernel, _ = submodule(free, kb)
    return CoverStep(tuple(gens), tops, free, cover, kernel, kb)


def syzygy(x: Representation) -> Representation:
    return projective_cover(x).kernel


# --------------------------------------------------------------------------
# resolutions

@dataclass
class Resolution:
    """``... -> P_1 -> P_0 -> M -> 0`` described by generators.

    ``images[k][c]`` is the image of the ``c``-th generator of ``P_k``: for
    ``k = 0`` a vector of ``M``, otherwise a vector of ``P_{k-1}`` at the
    generator's vertex.
    """

    module: Representation
    gens: list[tuple[str, ...]]
    images: list[list[list]]
    syzygies: list[Representation]
    complete: bool
    minimal: bool = True

    @property
    def length(self) -> int | None:
        if not self.complete:
            return None
        return len(self.gens) - 1 if self.gens and self.gens[-1] else 0

    def term(self, k: int) -> Representation:
        return free_module(self.module.alg, self.gens[k])

    def multiplicities(self, k: int) -> dict[str, int]:
        out = {v: 0 for v in self.module.quiver.vertices}
        for v in self.gens[k]:
            out[v] += 1
        return out

    def differential(self, k: int) -> Morphism:
        """``d_k: P_k -> P_{k-1}`` for ``k >= 1`` and the augmentation for ``k = 0``."""
        tgt = self.module if k == 0 else self.term(k - 1)
        return free_map(self.module.alg, self.gens[k], self.images[k], tgt)


def free_map(alg: NormalFormBasis, gens: Sequence[str], images: Sequence[list],
             tgt: Representation) -> Morphism:
    """The map from ``free_module(gens)`` sending generator ``c`` to ``images[c]``."""
    fld = alg.field
    src = free_module(alg, gens)
    mats = {}
    for w in alg.quiver.vertices:
        rows = []
        for c, v in enumerate(gens):
            img = Mat(fld, 1, tgt.dims[v], [list(images[c])])
            for j in alg.block(v, w):
                rows.append((img @ tgt.path_matrix(alg.basis[j])).rows[0])
        mats[w] = Mat(fld, len(rows), tgt.dims[w], rows)
    return Morphism(src, tgt, mats)


def minimal_projective_resolution(m: Representation, max_len: int = DEFAULT_RESOLUTION_BUDGET) -> Resolution:
    """Resolve through ``P_{max_len}``; ``complete`` says whether it stopped."""
    gens, images, syz = [], [], []
    x = m
    emb: dict[str, Mat] | None = None
    for k in range(max_len + 1):
        step = projective_cover(x)
        gens.append(step.gens)
        if emb is None:
            images.append(step.tops)
        else:
            images.append([(Mat(m.field, 1, len(t), [t]) @ emb[v]).rows[0]
                           for t, v in zip(step.tops, step.gens)])
        if step.kernel.dim == 0:
            return Resolution(m, gens, images, syz, True)
        syz.append(step.kernel)
        x = step.kernel
        emb = step.kernel_basis
    return Resolution(m, gens, images, syz, False)


# --------------------------------------------------------------------------
# projective dimension through the syzygy summand graph

def _registry(alg: NormalFormBasis) -> ModuleRegistry:
    reg = alg.cache.get("registry")
    if reg is None:
        reg = alg.cache["registry"] = ModuleRegistry()
    return reg


def _class_of(alg: NormalFormBasis, x: Representation) -> int:
    return _registry(alg).add(x)[0]


def _pd_of_class(alg: NormalFormBasis, idx: int, budget: int) -> int | None:
    """``None`` encodes a certified infinite projective dimension."""
    reg = _registry(alg)
    memo: dict[int, int | None] = alg.cache.setdefault("pd", {})
    syz_parts: dict[int, list[int]] = alg.cache.setdefault("syz", {})
    on_stack: set[int] = set()

    def visit(i: int, depth: int):
        if i in memo:
            return memo[i]
        if i in on_stack:
            return None
        if depth > budget:
            raise BudgetExceeded("resolution", budget, "syzygies keep changing")
        if len(reg) > DEFAULT_CLASS_BUDGET:
            raise BudgetExceeded("modules", DEFAULT_CLASS_BUDGET, "too many syzygy summands")
        if i not in syz_parts:
            omega = syzygy(reg.modules[i])
            syz_parts[i] = [_class_of(alg, y) for y in indecomposable_parts(omega)]
        kids = syz_parts[i]
        on_stack.add(i)
        vals = [visit(j, depth + 1) for j in kids]
        on_stack.discard(i)
        if any(v is None for v in vals):
            val = None
        else:
            val = 1 + max(vals) if vals else 0
        memo[i] = val
        return val

    return visit(idx, 0)


def projective_dimension(m: Representation, budget: int = DEFAULT_RESOLUTION_BUDGET) -> HomDim:
    if m.dim == 0:
        return HomDim.finite(0)
    alg = m.alg
    vals = []
    try:
        for x in indecomposable_parts(m):
            vals.append(_pd_of_class(alg, _class_of(alg, x), budget))
    except BudgetExceeded as exc:
        return HomDim.unknown(str(exc))
    if any(v is None for v in vals):
        for x in indecomposable_parts(m):
            i = _class_of(alg, x)
            if alg.cache["pd"].get(i, 0) is None:
                return HomDim.infinite(periodicity_certificate(alg, i))
    return HomDim.finite(max(vals))


def periodicity_certificate(alg: NormalFormBasis, idx: int) -> str:
    """Chain of indecomposable syzygy summands from ``idx`` until one recurs."""
    reg = _registry(alg)
    memo = alg.cache["pd"]
    syz = alg.cache["syz"]
    chain = [idx]
    while True:
        nxt = next(j for j in syz[chain[-1]] if memo.get(j, 0) is None)
        if nxt in chain:
            k = chain.index(nxt)
            dv = [str(reg.modules[i].dimvec) for i in chain + [nxt]]
            return ("syzygy summand recurs up to isomorphism: " + " -> ".join(dv)
                    + f" (period {len(chain) - k})")
        chain.append(nxt)


def injective_dimension(m: Representation, budget: int = DEFAULT_RESOLUTION_BUDGET) -> HomDim:
    """``id M = pd D M`` over the opposite algebra."""
    from .modules import dual

    return projective_dimension(dual(m), budget)


def global_dimension(alg: NormalFormBasis, budget: int = DEFAULT_RESOLUTION_BUDGET) -> HomDim:
    key = ("gldim", budget)
    hit = alg.cache.get(key)
    if hit is None:
        hit = hom_max(projective_dimension(simple(alg, v), budget) for v in alg.quiver.vertices)
        alg.cache[key] = hit
    return hit


pd = projective_dimension
id_ = injective_dimension
gldim = global_dimension


# --------------------------------------------------------------------------
# Ext

def _hom_from_free(alg: NormalFormBasis, gens: Sequence[str], n: Representation) -> int:
    return sum(n.dims[v] for v in gens)


def _cochain(alg: NormalFormBasis, res: Resolution, k: int, n: Representation) -> Mat:
    """``Hom(P_{k-1}, N) -> Hom(P_k, N)``, precomposition with ``d_k``."""
    fld = alg.field
    prev, cur = res.gens[k - 1], res.gens[k]
    roff = []
    acc = 0
    for v in prev:
        roff.append(acc)
        acc += n.dims[v]
    nrows = acc
    coff = []
    acc = 0
    for v in cur:
        coff.append(acc)
        acc += n.dims[v]
    out = Mat(fld, nrows, acc)
    for c, v in enumerate(cur):
        img = res.images[k][c]
        offs = _copy_offsets(alg, prev, v)
        for cp, vp in enumerate(prev):
            block = alg.block(vp, v)
            if not block or not n.dims[vp] or not n.dims[v]:
                continue
            seg = img[offs[cp]: offs[cp] + len(block)]
            if not any(seg):
                continue
            lam = {j: a for j, a in zip(block, seg) if a}
            mat = n.element_matrix(vp, v, lam)
            for i, row in enumerate(mat.rows):
                target = out.rows[roff[cp] + i]
                for j, a in enumerate(row):
                    if a:
                        target[coff[c] + j] = target[coff[c] + j] + a
    return out


def ext_dim(m: Representation, n: Representation, i: int,
            res: Resolution | None = None) -> int:
    """``dim Ext^i(M, N)`` from the cohomology of ``Hom(P_*, N)``."""
    if i < 0:
        raise ValueError("negative degree")
    alg = m.alg
    if res is None or (not res.complete and len(res.gens) < i + 2):
        res = minimal_projective_resolution(m, i + 1)
    if i >= len(res.gens):
        return 0
    h = _hom_from_free(alg, res.gens[i], n)
    r_in = _cochain(alg, res, i, n).rank() if i >= 1 else 0
    r_out = _cochain(alg, res, i + 1, n).rank() if i + 1 < len(res.gens) else 0
    return h - r_in - r_out


# --------------------------------------------------------------------------
# convex subcategories

@dataclass
class Comparison:
    check: str
    lhs: str
    rhs: str
    ok: bool | None

    def as_dict(self) -> dict:
        return {"check": self.check, "lhs": self.lhs, "rhs": self.rhs,
                "ok": "unknown" if self.ok is None else self.ok}


@dataclass
class ConvexHomologyReport:
    subset: tuple[str, ...]
    comparisons: list[Comparison] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok is not False for c in self.comparisons)

    @property
    def failures(self) -> list[Comparison]:
        return [c for c in self.comparisons if c.ok is False]

    def as_dict(self) -> dict:
        return {"subset": list(self.subset), "ok": self.ok,
                "comparisons": [c.as_dict() for c in self.comparisons]}


def sample_modules(alg: NormalFormBasis) -> list[Representation]:
    """Simples, projectives and injectives, which is enough variety for Ext checks."""
    out = []
    for v in alg.quiver.vertices:
        out.append(simple(alg, v))
    for v in alg.quiver.vertices:
        out.append(projective(alg, v))
        out.append(injective(alg, v))
    return out


def compare_convex_homology(p: AlgebraPresentation, s: Iterable[str], samples: int = 8,
                            max_degree: int = 3, nfb: NormalFormBasis | None = None,
                            budget: int = DEFAULT_RESOLUTION_BUDGET) -> ConvexHomologyReport:
    members = tuple(v for v in p.quiver.vertices if v in {str(x) for x in s})
    if not is_full_convex(p.quiver, members):
        raise ValueError("subset is not convex")
    big = nfb or compute_basis(p)
    small = compute_basis(quotient_idempotent(p, members), *big._budgets)
    rep = ConvexHomologyReport(members)
    g_small, g_big = global_dimension(small, budget), global_dimension(big, budget)
    rep.comparisons.append(Comparison("gldim B <= gldim L", str(g_small), str(g_big), g_small <= g_big))
    for v in members:
        a = projective_dimension(simple(small, v), budget)
        b = projective_dimension(simple(big, v), budget)
        rep.comparisons.append(Comparison(f"pd_B S{v} <= pd_L S{v}", str(a), str(b), a <= b))
    mods = sample_modules(small)
    pairs = [(x, y) for x in range(len(mods)) for y in range(len(mods))]
    rng = random.Random(len(members) * 7919 + small.dim)
    rng.shuffle(pairs)
    for x, y in pairs[:samples]:
        mb, nb = mods[x], mods[y]
        ml, nl = extend_by_zero(mb, big), extend_by_zero(nb, big)
        res_b = minimal_projective_resolution(mb, max_degree + 1)
        res_l = minimal_projective_resolution(ml, max_degree + 1)
        for i in range(max_degree + 1):
            eb = ext_dim(mb, nb, i, res_b)
            el = ext_dim(ml, nl, i, res_l)
            name = f"Ext^{i}({mb.label or mb.dimvec}, {nb.label or nb.dimvec})"
            rep.comparisons.append(Comparison(name, str(eb), str(el), eb == el))
    return rep
