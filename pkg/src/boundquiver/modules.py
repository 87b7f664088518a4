"""Right modules over a bound quiver algebra, stored as representations.

A representation assigns a vector space ``K^{d_v}`` to each vertex and a
matrix to each arrow ``a: v -> w`` of shape ``d_v x d_w``.  Elements are
row vectors and a path ``a*b`` acts as ``A @ B``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .algebra import NormalFormBasis, concat
from .linalg import Mat, block_diag
from .quiver import Path


class Representation:
    __slots__ = ("alg", "dims", "maps", "label", "_cache")

    def __init__(self, alg: NormalFormBasis, dims: Mapping[str, int] | Sequence[int],
                 maps: Mapping[str, Mat] | None = None, label: str | None = None):
        q = alg.quiver
        if not isinstance(dims, Mapping):
            dims = dict(zip(q.vertices, dims))
        self.alg = alg
        self.dims: dict[str, int] = {v: int(dims.get(v, 0)) for v in q.vertices}
        fld = alg.field
        full = {}
        for a in q.arrows:
            m = (maps or {}).get(a.name)
            shape = (self.dims[a.source], self.dims[a.target])
            if m is None:
                m = Mat(fld, *shape)
            elif m.shape != shape:
                raise ValueError(f"map for {a.name} has shape {m.shape}, expected {shape}")
            full[a.name] = m
        self.maps: dict[str, Mat] = full
        self.label = label
        self._cache: dict = {}

    # shape ---------------------------------------------------------------
    @property
    def field(self):
        return self.alg.field

    @property
    def quiver(self):
        return self.alg.quiver

    @property
    def dim(self) -> int:
        return sum(self.dims.values())

    @property
    def dimvec(self) -> tuple[int, ...]:
        return tuple(self.dims[v] for v in self.quiver.vertices)

    def offsets(self) -> dict[str, int]:
        out, k = {}, 0
        for v in self.quiver.vertices:
            out[v] = k
            k += self.dims[v]
        return out

    def is_zero(self) -> bool:
        return self.dim == 0

    def support(self) -> tuple[str, ...]:
        return tuple(v for v in self.quiver.vertices if self.dims[v])

    # action --------------------------------------------------------------
    def path_matrix(self, p: Path) -> Mat:
        if not p.arrows:
            return Mat.identity(self.field, self.dims[p.source])
        m = self.maps[p.arrows[0]]
        for a in p.arrows[1:]:
            m = m @ self.maps[a]
        return m

    def element_matrix(self, s: str, t: str, elem: Mapping[int, object]) -> Mat:
        """Action of an element of ``e_s L e_t`` given in basis coordinates."""
        out = Mat(self.field, self.dims[s], self.dims[t])
        for i, c in elem.items():
            out = out + self.path_matrix(self.alg.basis[i]).scale(c)
        return out

    def validate(self) -> None:
        for r in self.alg.presentation.relations:
            acc = Mat(self.field, self.dims[r.source], self.dims[r.target])
            for c, p in r.terms:
                acc = acc + self.path_matrix(p).scale(c)
            if not acc.is_zero():
                raise ValueError(f"relation {self.alg.presentation.relation_text(r)} fails")

    def total_arrow_matrix(self, name: str) -> Mat:
        """Arrow action as an endomorphism of the total space."""
        a = self.quiver.arrow(name)
        off = self.offsets()
        n = self.dim
        out = Mat(self.field, n, n)
        m = self.maps[name]
        for i in range(m.nrows):
            row = out.rows[off[a.source] + i]
            row[off[a.target]: off[a.target] + m.ncols] = m.rows[i]
        return out

    def __repr__(self) -> str:
        tag = f" {self.label}" if self.label else ""
        return f"<Representation{tag} dims={self.dimvec}>"


@dataclass
class Morphism:
    """A module map given vertexwise: ``mats[v]`` has shape ``dim M_v x dim N_v``."""

    src: Representation
    tgt: Representation
    mats: dict[str, Mat]

    @classmethod
    def zero(cls, m: Representation, n: Representation) -> "Morphism":
        return cls(m, n, {v: Mat(m.field, m.dims[v], n.dims[v]) for v in m.quiver.vertices})

    @classmethod
    def identity(cls, m: Representation) -> "Morphism":
        return cls(m, m, {v: Mat.identity(m.field, m.dims[v]) for v in m.quiver.vertices})

    @classmethod
    def from_total(cls, m: Representation, n: Representation, total: Mat) -> "Morphism":
        om, on = m.offsets(), n.offsets()
        mats = {}
        for v in m.quiver.vertices:
            rows = total.rows[om[v]: om[v] + m.dims[v]]
            mats[v] = Mat(m.field, m.dims[v], n.dims[v],
                          [list(r[on[v]: on[v] + n.dims[v]]) for r in rows])
        return cls(m, n, mats)

    def total(self) -> Mat:
        return block_diag(self.src.field, [self.mats[v] for v in self.src.quiver.vertices])

    def then(self, g: "Morphism") -> "Morphism":
        """Composite ``g . self`` (first self, then g)."""
        return Morphism(self.src, g.tgt, {v: self.mats[v] @ g.mats[v] for v in self.mats})

    def __add__(self, g: "Morphism") -> "Morphism":
        return Morphism(self.src, self.tgt, {v: self.mats[v] + g.mats[v] for v in self.mats})

    def scale(self, c) -> "Morphism":
        return Morphism(self.src, self.tgt, {v: m.scale(c) for v, m in self.mats.items()})

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.mats.values())

    def is_iso(self) -> bool:
        return all(m.is_invertible() for m in self.mats.values())

    def commutes(self) -> bool:
        for a in self.src.quiver.arrows:
            lhs = self.src.maps[a.name] @ self.mats[a.target]
            rhs = self.mats[a.source] @ self.tgt.maps[a.name]
            if lhs != rhs:
                return False
        return True

    def rank(self) -> int:
        return sum(m.rank() for m in self.mats.values())


# --------------------------------------------------------------------------
# standard modules

def projective(alg: NormalFormBasis, i: str) -> Representation:
    """``P_i = e_i L``: at vertex ``v`` the span of basis paths ``i -> v``."""
    key = ("P", i)
    hit = alg.cache.get(key)
    if hit is not None:
        return hit
    q = alg.quiver
    fld = alg.field
    dims = {v: len(alg.block(i, v)) for v in q.vertices}
    maps = {}
    for a in q.arrows:
        src = alg.block(i, a.source)
        tgt = alg.block(i, a.target)
        pos = {k: n for n, k in enumerate(tgt)}
        rows = []
        for k in src:
            row = [fld.zero] * len(tgt)
            x = concat(alg.basis[k], q.arrow_path(a.name))
            for j, c in alg.reduce_path(x).items():
                row[pos[j]] = c
            rows.append(row)
        maps[a.name] = Mat(fld, len(src), len(tgt), rows)
    rep = Representation(alg, dims, maps, label=f"P{i}")
    alg.cache[key] = rep
    return rep


def projective_basis(alg: NormalFormBasis, i: str) -> list[Path]:
    """Basis paths of ``P_i`` in the order used by :func:`projective`."""
    return [alg.basis[k] for v in alg.quiver.vertices for k in alg.block(i, v)]


def dual(m: Representation) -> Representation:
    """``D M = Hom_K(M, K)``, a representation over the opposite algebra."""
    op = m.alg.opposite()
    return Representation(op, m.dims, {a: x.T for a, x in m.maps.items()}, label=_dual_label(m.label))


def _dual_label(label: str | None) -> str | None:
    if not label:
        return None
    if label.startswith("P"):
        return "I" + label[1:]
    if label.startswith("I"):
        return "P" + label[1:]
    if label.startswith("D(") and label.endswith(")"):
        return label[2:-1]
    return f"D({label})"


def injective(alg: NormalFormBasis, i: str) -> Representation:
    """``I_i = D(L e_i)``, the dual of the opposite algebra's projective."""
    key = ("I", i)
    hit = alg.cache.get(key)
    if hit is None:
        d = dual(projective(alg.opposite(), i))
        hit = Representation(alg, d.dims, d.maps, label=f"I{i}")
        alg.cache[key] = hit
    return hit


def simple(alg: NormalFormBasis, i: str) -> Representation:
    return Representation(alg, {i: 1}, label=f"S{i}")


def regular(alg: NormalFormBasis) -> Representation:
    return direct_sum([projective(alg, v) for v in alg.quiver.vertices])


def direct_sum(parts: Sequence[Representation]) -> Representation:
    if not parts:
        raise ValueError("empty direct sum needs an algebra; use zero_module")
    alg = parts[0].alg
    q = alg.quiver
    dims = {v: sum(p.dims[v] for p in parts) for v in q.vertices}
    maps = {a.name: block_diag(alg.field, [p.maps[a.name] for p in parts]) for a in q.arrows}
    return Representation(alg, dims, maps)


def zero_module(alg: NormalFormBasis) -> Representation:
    return Representation(alg, {})


def change_algebra(m: Representation, alg: NormalFormBasis) -> Representation:
    """Reinterpret the same data over an algebra with the same quiver."""
    return Representation(alg, m.dims, m.maps, m.label)


# --------------------------------------------------------------------------
# subquotients

def _restrict_maps(m: Representation, bases: Mapping[str, Mat]) -> dict[str, Mat]:
    maps = {}
    for a in m.quiver.arrows:
        img = bases[a.source] @ m.maps[a.name]
        maps[a.name] = bases[a.target].solve_left(img)
    return maps


def submodule(m: Representation, bases: Mapping[str, Mat]) -> tuple[Representation, Morphism]:
    """Subrepresentation spanned vertexwise by independent rows ``bases[v]``."""
    sub = Representation(m.alg, {v: bases[v].nrows for v in m.quiver.vertices},
                         _restrict_maps(m, bases))
    return sub, Morphism(sub, m, {v: bases[v] for v in m.quiver.vertices})


def quotient(m: Representation, bases: Mapping[str, Mat]) -> tuple[Representation, Morphism]:
    """``M / U`` where ``U`` is spanned by ``bases``; returns the projection too."""
    fld = m.field
    comp = {}
    proj = {}
    for v in m.quiver.vertices:
        b = bases[v]
        c = b.extend_to_basis() if b.nrows else Mat.identity(fld, m.dims[v])
        comp[v] = c
        full = b.vstack(c) if b.nrows else c
        inv = full.inverse() if full.nrows else full
        # coordinates of x in the basis [b; c], keep the c-part
        proj[v] = inv.select_cols(range(b.nrows, full.nrows))
    maps = {}
    for a in m.quiver.arrows:
        maps[a.name] = comp[a.source] @ m.maps[a.name] @ proj[a.target]
    qm = Representation(m.alg, {v: comp[v].nrows for v in m.quiver.vertices}, maps)
    return qm, Morphism(m, qm, proj)


def kernel(f: Morphism) -> tuple[Representation, Morphism]:
    return submodule(f.src, {v: f.mats[v].left_kernel() for v in f.src.quiver.vertices})


def image_bases(f: Morphism) -> dict[str, Mat]:
    return {v: f.mats[v].row_basis() for v in f.src.quiver.vertices}


def cokernel(f: Morphism) -> tuple[Representation, Morphism]:
    return quotient(f.tgt, image_bases(f))


def radical_bases(m: Representation) -> dict[str, Mat]:
    """``M rad L``: at each vertex the span of the images of incoming arrows."""
    fld = m.field
    out = {}
    for v in m.quiver.vertices:
        acc = Mat(fld, 0, m.dims[v])
        for a in m.quiver.in_arrows(v):
            acc = acc.vstack(m.maps[a.name])
        out[v] = acc.row_basis()
    return out


def top_dims(m: Representation) -> dict[str, int]:
    rad = radical_bases(m)
    return {v: m.dims[v] - rad[v].nrows for v in m.quiver.vertices}


def socle_bases(m: Representation) -> dict[str, Mat]:
    """Elements killed by every arrow."""
    out = {}
    for v in m.quiver.vertices:
        outs = m.quiver.out_arrows(v)
        if not outs or m.dims[v] == 0:
            out[v] = Mat.identity(m.field, m.dims[v])
            continue
        acc = m.maps[outs[0].name]
        for a in outs[1:]:
            acc = acc.hstack(m.maps[a.name])
        out[v] = acc.left_kernel()
    return out


# --------------------------------------------------------------------------
# Hom

def hom_space(m: Representation, n: Representation) -> list[Morphism]:
    """Basis of ``Hom(M, N)`` by solving the commutation equations."""
    q = m.quiver
    fld = m.field
    off, k = {}, 0
    for v in q.vertices:
        off[v] = k
        k += m.dims[v] * n.dims[v]
    if k == 0:
        return []
    eqs: list[list] = []
    z = fld.zero
    for a in q.arrows:
        s, t = a.source, a.target
        A, B = m.maps[a.name], n.maps[a.name]
        ms, mt, ns, nt = m.dims[s], m.dims[t], n.dims[s], n.dims[t]
        if ms == 0 or nt == 0:
            continue
        # (A f_t - f_s B)[i][c] = 0
        for i in range(ms):
            Ai = A.rows[i]
            for c in range(nt):
                row = [z] * k
                for j in range(mt):
                    x = Ai[j]
                    if x:
                        idx = off[t] + j * nt + c
                        row[idx] = row[idx] + x
                for j in range(ns):
                    y = B.rows[j][c]
                    if y:
                        idx = off[s] + i * ns + j
                        row[idx] = row[idx] - y
                if any(row):
                    eqs.append(row)
    sols = Mat(fld, len(eqs), k, eqs).right_kernel() if eqs else Mat.identity(fld, k)
    out = []
    for sol in sols.rows:
        mats = {}
        for v in q.vertices:
            mv, nv = m.dims[v], n.dims[v]
            mats[v] = Mat(fld, mv, nv, [sol[off[v] + i * nv: off[v] + (i + 1) * nv] for i in range(mv)])
        out.append(Morphism(m, n, mats))
    return out


def hom_dim(m: Representation, n: Representation) -> int:
    return len(hom_space(m, n))


def end_basis(m: Representation) -> list[Mat]:
    """Basis of ``End(M)`` as total-space matrices (identity first when possible)."""
    hit = m._cache.get("end")
    if hit is None:
        hit = [f.total() for f in hom_space(m, m)]
        m._cache["end"] = hit
    return hit


def annihilator_dim(m: Representation) -> int:
    """Dimension of ``{x in L : M x = 0}``."""
    alg = m.alg
    cols = []
    for i, x in enumerate(alg.basis):
        pm = m.path_matrix(x) if m.dims[x.source] and m.dims[x.target] else None
        cols.append(pm.flat() if pm is not None else [])
    # the action map L -> End_K(M) is block diagonal over (source, target) blocks
    rank = 0
    for (s, t), idx in alg.blocks.items():
        if not idx or not (m.dims[s] and m.dims[t]):
            continue
        rows = [cols[i] for i in idx]
        rank += Mat(alg.field, len(rows), len(rows[0]), rows).rank()
    return alg.dim - rank


def is_faithful(m: Representation) -> bool:
    return annihilator_dim(m) == 0


def restrict_to_subset(m: Representation, alg: NormalFormBasis) -> Representation:
    """A module supported inside a vertex subset, seen over the algebra on that subset."""
    for v in m.quiver.vertices:
        if m.dims[v] and not alg.quiver.has_vertex(v):
            raise ValueError(f"module is supported at {v}, outside the subset")
    return Representation(alg, {v: m.dims[v] for v in alg.quiver.vertices},
                          {a.name: m.maps[a.name] for a in alg.quiver.arrows}, m.label)


def extend_by_zero(m: Representation, alg: NormalFormBasis) -> Representation:
    """The inverse of :func:`restrict_to_subset`."""
    return Representation(alg, m.dims, {a: x for a, x in m.maps.items()}, m.label)


def canonical_text(m: Representation) -> str:
    """Deterministic textual form of the stored matrices."""
    parts = [",".join(map(str, m.dimvec))]
    for a in m.quiver.arrows:
        x = m.maps[a.name]
        parts.append(a.name + ":" + ";".join(" ".join(m.field.fmt(c) for c in r) for r in x.rows))
    return "|".join(parts)
