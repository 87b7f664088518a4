"""Finite-dimensional bound quiver algebras ``KQ/I`` as explicit vector spaces.

The ideal is computed by exact elimination in the path space.  For
homogeneous relations this happens degree by degree until the first degree
``N`` in which every path lies in the ideal; presentations with
inhomogeneous relations are accepted on acyclic quivers, where the whole
path algebra is finite-dimensional.  Pivots are the largest paths in the
length-then-lexicographic order, so basis paths are the non-pivot ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from .errors import BudgetExceeded
from .linalg import Field, Mat
from .presentation import AlgebraPresentation, Relation
from .quiver import Arrow, Path, Quiver, has_oriented_cycle, induced_subquiver, paths_of_length

DEFAULT_NILPOTENCY_BUDGET = 64
DEFAULT_DIMENSION_BUDGET = 20000


def concat(p: Path, q: Path) -> Path | None:
    if p.target != q.source:
        return None
    if not p.arrows:
        return q
    if not q.arrows:
        return p
    return Path(p.source, q.target, p.arrows + q.arrows)


class _Echelon:
    """Sparse reduced echelon form over paths; the pivot of a row is its largest path."""

    def __init__(self, key, fld: Field):
        self.key = key
        self.field = fld
        self.rows: dict[Path, dict[Path, object]] = {}

    def reduce(self, vec: Mapping[Path, object]) -> dict[Path, object]:
        v = {p: c for p, c in vec.items() if c}
        for p in [p for p in v if p in self.rows]:
            c = v.get(p)
            if not c:
                continue
            for q, d in self.rows[p].items():
                nv = v.get(q, 0) - c * d
                if nv:
                    v[q] = nv
                else:
                    v.pop(q, None)
        return v

    def add(self, vec: Mapping[Path, object]) -> dict[Path, object] | None:
        v = self.reduce(vec)
        if not v:
            return None
        piv = max(v, key=self.key)
        inv = self.field.one / v[piv]
        v = {q: c * inv for q, c in v.items()}
        for row in self.rows.values():
            c = row.get(piv)
            if c:
                for q, d in v.items():
                    nv = row.get(q, 0) - c * d
                    if nv:
                        row[q] = nv
                    else:
                        row.pop(q, None)
        self.rows[piv] = v
        return v


def _left_mul(q: Quiver, a: Arrow, vec: Mapping[Path, object]):
    out = {}
    for p, c in vec.items():
        if p.source != a.target:
            return {}
        out[Path(a.source, p.target, (a.name,) + p.arrows)] = c
    return out


def _right_mul(q: Quiver, vec: Mapping[Path, object], a: Arrow):
    out = {}
    for p, c in vec.items():
        if p.target != a.source:
            return {}
        out[Path(p.source, a.target, p.arrows + (a.name,))] = c
    return out


def _relation_vec(r: Relation) -> dict[Path, object]:
    return {p: c for c, p in r.terms}


@dataclass
class _Ideal:
    nilpotency_index: int
    paths: list[Path]            # every path of length < N, in path order
    echelon: _Echelon


def _graded_ideal(p: AlgebraPresentation, budget: int, dim_budget: int) -> _Ideal:
    q = p.quiver
    key = q.path_key
    ech = _Echelon(key, p.field)
    by_degree: dict[int, list[dict]] = {}
    for r in p.relations:
        by_degree.setdefault(len(r.terms[0][1]), []).append(_relation_vec(r))
    layer = [q.trivial(v) for v in q.vertices]
    paths = list(layer)
    prev_rows: list[dict] = []
    d = 0
    while True:
        d += 1
        if d > budget:
            raise BudgetExceeded("nilpotency", budget, "ideal possibly not admissible")
        layer = [Path(x.source, a.target, x.arrows + (a.name,))
                 for x in layer for a in q.out_arrows(x.target)]
        if not layer:
            return _Ideal(d, paths, ech)
        if len(paths) + len(layer) > dim_budget:
            raise BudgetExceeded("dimension", dim_budget, "path space too large")
        deg = _Echelon(key, p.field)
        gens = list(by_degree.get(d, []))
        for row in prev_rows:
            for a in q.arrows:
                gens.append(_left_mul(q, a, row))
                gens.append(_right_mul(q, row, a))
        for g in gens:
            if g:
                deg.add(g)
        if len(deg.rows) == len(layer):
            return _Ideal(d, paths, ech)
        layer.sort(key=key)
        paths.extend(layer)
        ech.rows.update(deg.rows)
        prev_rows = list(deg.rows.values())


def _acyclic_ideal(p: AlgebraPresentation, budget: int, dim_budget: int) -> _Ideal:
    q = p.quiver
    key = q.path_key
    all_paths = []
    layer = [q.trivial(v) for v in q.vertices]
    while layer:
        all_paths.extend(sorted(layer, key=key))
        if len(all_paths) > dim_budget:
            raise BudgetExceeded("dimension", dim_budget, "path space too large")
        layer = [Path(x.source, a.target, x.arrows + (a.name,))
                 for x in layer for a in q.out_arrows(x.target)]
    ech = _Echelon(key, p.field)
    queue = [_relation_vec(r) for r in p.relations]
    while queue:
        row = ech.add(queue.pop())
        if row is None:
            continue
        snapshot = dict(row)
        for a in q.arrows:
            for g in (_left_mul(q, a, snapshot), _right_mul(q, snapshot, a)):
                if g:
                    queue.append(g)
    longest = max(len(x) for x in all_paths)
    for n in range(1, longest + 2):
        if n > budget:
            raise BudgetExceeded("nilpotency", budget, "ideal possibly not admissible")
        if all(x in ech.rows and len(ech.rows[x]) == 1 for x in all_paths if len(x) == n):
            return _Ideal(n, [x for x in all_paths if len(x) < n], ech)
    raise AssertionError("unreachable")


def _build_ideal(p: AlgebraPresentation, budget: int, dim_budget: int) -> _Ideal:
    if p.is_homogeneous:
        return _graded_ideal(p, budget, dim_budget)
    if has_oriented_cycle(p.quiver):
        raise ValueError("inhomogeneous relations are only supported on acyclic quivers")
    return _acyclic_ideal(p, budget, dim_budget)


def admissibility_check(p: AlgebraPresentation, budget: int = DEFAULT_NILPOTENCY_BUDGET,
                        dim_budget: int = DEFAULT_DIMENSION_BUDGET) -> int:
    """Smallest ``N <= budget`` with every path of length ``N`` in the ideal."""
    return _build_ideal(p, budget, dim_budget).nilpotency_index


class NormalFormBasis:
    """Basis of normal-form paths of ``KQ/I`` with structure constants.

    Elements are sparse dicts ``{basis index: coefficient}``.
    """

    def __init__(self, p: AlgebraPresentation, budget: int = DEFAULT_NILPOTENCY_BUDGET,
                 dim_budget: int = DEFAULT_DIMENSION_BUDGET):
        ideal = _build_ideal(p, budget, dim_budget)
        q = p.quiver
        self.presentation = p
        self.quiver = q
        self.field = p.field
        self.nilpotency_index = ideal.nilpotency_index
        self._budgets = (budget, dim_budget)
        vpos = {v: i for i, v in enumerate(q.vertices)}
        basis = [x for x in ideal.paths if x not in ideal.echelon.rows]
        basis.sort(key=lambda x: (vpos[x.source], vpos[x.target], q.path_key(x)))
        if len(basis) > dim_budget:
            raise BudgetExceeded("dimension", dim_budget, "algebra too large")
        self.basis: tuple[Path, ...] = tuple(basis)
        self.index: dict[Path, int] = {x: i for i, x in enumerate(basis)}
        self.blocks: dict[tuple[str, str], tuple[int, ...]] = {
            (s, t): () for s in q.vertices for t in q.vertices}
        tmp: dict[tuple[str, str], list[int]] = {}
        for i, x in enumerate(basis):
            tmp.setdefault((x.source, x.target), []).append(i)
        self.blocks.update({k: tuple(v) for k, v in tmp.items()})
        self._nf: dict[Path, dict[int, object]] = {}
        for piv, row in ideal.echelon.rows.items():
            self._nf[piv] = {self.index[x]: -c for x, c in row.items() if x != piv}
        self._mul_cache: dict[tuple[int, int], dict[int, object]] = {}
        self._opposite: NormalFormBasis | None = None
        self.cache: dict = {}

    # basic data ---------------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.quiver.vertices

    @cached_property
    def cartan(self) -> list[list[int]]:
        """``cartan[i][j] = dim e_i L e_j`` in vertex order."""
        vs = self.quiver.vertices
        return [[len(self.blocks[(s, t)]) for t in vs] for s in vs]

    def block(self, s: str, t: str) -> tuple[int, ...]:
        return self.blocks[(s, t)]

    # reduction ----------------------------------------------------------
    def reduce_path(self, x: Path) -> dict[int, object]:
        if len(x) >= self.nilpotency_index:
            return {}
        i = self.index.get(x)
        if i is not None:
            return {i: self.field.one}
        nf = self._nf.get(x)
        if nf is None:
            raise ValueError(f"{x} is not a path of this algebra")
        return dict(nf)

    def reduce(self, combo) -> dict[int, object]:
        """Reduce ``{Path: coeff}`` (or ``[(coeff, Path)]``) to basis coordinates."""
        items = combo.items() if isinstance(combo, Mapping) else ((p, c) for c, p in combo)
        out: dict[int, object] = {}
        for x, c in items:
            if not c:
                continue
            for i, d in self.reduce_path(x).items():
                nv = out.get(i, 0) + c * d
                if nv:
                    out[i] = nv
                else:
                    out.pop(i, None)
        return out

    def mul(self, i: int, j: int) -> dict[int, object]:
        key = (i, j)
        hit = self._mul_cache.get(key)
        if hit is None:
            x = concat(self.basis[i], self.basis[j])
            hit = {} if x is None else self.reduce_path(x)
            self._mul_cache[key] = hit
        return hit

    def multiply(self, x: Mapping[int, object], y: Mapping[int, object]) -> dict[int, object]:
        out: dict[int, object] = {}
        for i, a in x.items():
            for j, b in y.items():
                for k, c in self.mul(i, j).items():
                    nv = out.get(k, 0) + a * b * c
                    if nv:
                        out[k] = nv
                    else:
                        out.pop(k, None)
        return out

    def element_text(self, x: Mapping[int, object]) -> str:
        if not x:
            return "0"
        parts = []
        for i in sorted(x):
            c = x[i]
            name = str(self.basis[i])
            parts.append(name if c == 1 else f"{self.field.fmt(c)}*{name}")
        return " + ".join(parts)

    def opposite(self) -> "NormalFormBasis":
        if self._opposite is None:
            from .presentation import opposite

            op = NormalFormBasis(opposite(self.presentation), *self._budgets)
            op._opposite = self
            self._opposite = op
        return self._opposite

    def __repr__(self) -> str:
        return f"NormalFormBasis({self.presentation.name}, dim={self.dim})"


def compute_basis(p: AlgebraPresentation, budget: int = DEFAULT_NILPOTENCY_BUDGET,
                  dim_budget: int = DEFAULT_DIMENSION_BUDGET) -> NormalFormBasis:
    return NormalFormBasis(p, budget, dim_budget)


def ideal_membership(p: AlgebraPresentation | NormalFormBasis, candidate) -> bool:
    """Whether a linear combination of parallel paths lies in the ideal."""
    nfb = p if isinstance(p, NormalFormBasis) else compute_basis(p)
    items = list(candidate.items()) if isinstance(candidate, Mapping) else [(x, c) for c, x in candidate]
    ends = {(x.source, x.target) for x, c in items if c}
    if len(ends) > 1:
        raise ValueError("candidate paths are not parallel")
    return not nfb.reduce(dict(items))


# --------------------------------------------------------------------------
# idempotent quotient and truncation

def quotient_idempotent(p: AlgebraPresentation, s: Iterable[str]) -> AlgebraPresentation:
    """Presentation of ``L/<e'>`` where ``e'`` is the sum of the vertices outside ``s``."""
    members = frozenset(str(v) for v in s)
    sub = induced_subquiver(p.quiver, members)
    if len(sub.vertices) == len(p.quiver.vertices):
        return p
    rels = []
    for r in p.relations:
        terms = tuple((c, x) for c, x in r.terms
                      if all(v in members for v in p.quiver.path_vertices(x)))
        if terms:
            rels.append(Relation(terms))
    name = f"{p.name}_keep_" + "_".join(sub.vertices)
    return AlgebraPresentation(sub, tuple(rels), p.field, name, ())


@dataclass
class BasisAlgebra:
    """A finite-dimensional algebra given by a basis and structure constants.

    ``ends[i]`` is the pair of idempotent labels ``(s, t)`` with
    ``e_s b_i e_t = b_i``; ``idempotents`` maps each label to the basis index
    of its idempotent.  The non-idempotent basis elements span the radical.
    """

    field: Field
    labels: tuple[str, ...]
    ends: tuple[tuple[str, str], ...]
    idempotents: dict[str, int]
    table: dict[tuple[int, int], dict[int, object]]
    paths: tuple[Path, ...] | None = None

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def vertices(self) -> tuple[str, ...]:
        return tuple(self.idempotents)

    def mul(self, x: Mapping[int, object], y: Mapping[int, object]) -> dict[int, object]:
        out: dict[int, object] = {}
        for i, a in x.items():
            for j, b in y.items():
                for k, c in self.table.get((i, j), {}).items():
                    nv = out.get(k, 0) + a * b * c
                    if nv:
                        out[k] = nv
                    else:
                        out.pop(k, None)
        return out

    def is_associative(self) -> bool:
        one = self.field.one
        n = self.dim
        for i in range(n):
            for j in range(n):
                ij = self.table.get((i, j), {})
                for k in range(n):
                    if self.mul(ij, {k: one}) != self.mul({i: one}, self.table.get((j, k), {})):
                        return False
        return True


def truncate_idempotent(nfb: NormalFormBasis, s: Iterable[str]) -> BasisAlgebra:
    """The algebra ``e L e`` for ``e`` the sum of the vertices in ``s``."""
    members = frozenset(str(v) for v in s)
    keep = [i for i, x in enumerate(nfb.basis) if x.source in members and x.target in members]
    pos = {i: k for k, i in enumerate(keep)}
    table = {}
    for a, i in enumerate(keep):
        for b, j in enumerate(keep):
            prod = nfb.mul(i, j)
            if prod:
                table[(a, b)] = {pos[k]: c for k, c in prod.items()}
    idem = {v: pos[nfb.index[nfb.quiver.trivial(v)]] for v in nfb.quiver.vertices if v in members}
    return BasisAlgebra(
        field=nfb.field,
        labels=tuple(str(nfb.basis[i]) for i in keep),
        ends=tuple((nfb.basis[i].source, nfb.basis[i].target) for i in keep),
        idempotents=idem,
        table=table,
        paths=tuple(nfb.basis[i] for i in keep),
    )


@dataclass
class IsoReport:
    verdict: str                          # "iso" | "not-iso"
    dims: tuple[int, int]                 # (dim e L e, dim L/<e'>)
    witness: str | None = None
    multiplicative: bool = True
    surjective: bool = True

    @property
    def is_iso(self) -> bool:
        return self.verdict == "iso"

    def as_dict(self) -> dict:
        return {"verdict": self.verdict, "dims": list(self.dims), "witness": self.witness,
                "multiplicative": self.multiplicative, "surjective": self.surjective}


def natural_map_check(p: AlgebraPresentation, s: Iterable[str],
                      nfb: NormalFormBasis | None = None) -> IsoReport:
    """Compare ``e L e`` with ``L/<e'>`` through the residue map on basis paths."""
    members = frozenset(str(v) for v in s)
    nfb = nfb or compute_basis(p)
    qb = compute_basis(quotient_idempotent(p, members), *nfb._budgets)
    keep = [i for i, x in enumerate(nfb.basis) if x.source in members and x.target in members]
    fld = nfb.field

    def image(i: int) -> dict[int, object]:
        x = nfb.basis[i]
        if not all(v in members for v in nfb.quiver.path_vertices(x)):
            return {}
        return qb.reduce_path(x)

    images = {i: image(i) for i in keep}

    def apply(elem: Mapping[int, object]) -> dict[int, object]:
        out: dict[int, object] = {}
        for i, c in elem.items():
            for k, d in images[i].items():
                nv = out.get(k, 0) + c * d
                if nv:
                    out[k] = nv
                else:
                    out.pop(k, None)
        return out

    multiplicative = all(
        apply(nfb.mul(i, j)) == qb.multiply(images[i], images[j]) for i in keep for j in keep)
    m = Mat(fld, len(keep), qb.dim,
            [[images[i].get(k, fld.zero) for k in range(qb.dim)] for i in keep])
    rank = m.rank()
    surjective = rank == qb.dim
    dims = (len(keep), qb.dim)
    if surjective and rank == len(keep) and multiplicative:
        return IsoReport("iso", dims, None, multiplicative, surjective)
    witness = None
    ker = m.left_kernel()
    if ker.nrows:
        vec = {keep[k]: c for k, c in enumerate(ker.rows[0]) if c}
        witness = nfb.element_text(vec)
    elif not surjective:
        witness = "image misses part of the quotient"
    return IsoReport("not-iso", dims, witness, multiplicative, surjective)


# --------------------------------------------------------------------------
# recovering a quiver presentation from a basis algebra

def _span_echelon(fld: Field, n: int, vectors: Iterable[Mapping[int, object]]) -> Mat:
    rows = [[v.get(k, fld.zero) for k in range(n)] for v in vectors]
    if not rows:
        return Mat(fld, 0, n)
    return Mat(fld, len(rows), n, rows).row_basis()


def _in_span(basis: Mat, vec: list) -> bool:
    if basis.nrows == 0:
        return not any(vec)
    return basis.vstack(Mat(basis.field, 1, basis.ncols, [vec])).rank() == basis.nrows


def present_basis_algebra(a: BasisAlgebra, budget: int = DEFAULT_NILPOTENCY_BUDGET,
                          name: str = "T") -> AlgebraPresentation:
    """Quiver with relations for a basic algebra given by a path-like basis."""
    fld = a.field
    n = a.dim
    one = fld.one
    idem_idx = set(a.idempotents.values())
    rad = [i for i in range(n) if i not in idem_idx]
    rad_vecs = [{i: one} for i in rad]

    # radical powers, to bound path lengths
    power = _span_echelon(fld, n, rad_vecs)
    powers = [power]
    while power.nrows:
        if len(powers) > budget:
            raise BudgetExceeded("nilpotency", budget, "radical not nilpotent within budget")
        prods = []
        for row in power.rows:
            x = {k: c for k, c in enumerate(row) if c}
            for i in rad:
                y = a.mul(x, {i: one})
                if y:
                    prods.append(y)
        power = _span_echelon(fld, n, prods)
        powers.append(power)
    loewy = len(powers)          # rad^loewy = 0
    rad2 = powers[1] if len(powers) > 1 else Mat(fld, 0, n)

    # arrows: basis elements completing rad^2 to rad, block by block
    verts = a.vertices
    arrows: list[Arrow] = []
    lifts: dict[str, int] = {}
    used_names: set[str] = set()
    for s in verts:
        for t in verts:
            span = rad2
            for i in rad:
                if a.ends[i] != (s, t):
                    continue
                vec = [one if k == i else fld.zero for k in range(n)]
                if _in_span(span, vec):
                    continue
                span = span.vstack(Mat(fld, 1, n, [vec])).row_basis()
                base = (("_".join(a.paths[i].arrows) if a.paths and a.paths[i].arrows else None)
                        or f"x{len(arrows) + 1}")
                nm = base
                k = 2
                while nm in used_names:
                    nm = f"{base}_{k}"
                    k += 1
                used_names.add(nm)
                arrows.append(Arrow(nm, s, t))
                lifts[nm] = i
    quiver = Quiver(verts, tuple(arrows))

    def evaluate(x: Path) -> dict[int, object]:
        if not x.arrows:
            return {a.idempotents[x.source]: one}
        elem = {lifts[x.arrows[0]]: one}
        for nm in x.arrows[1:]:
            elem = a.mul(elem, {lifts[nm]: one})
            if not elem:
                break
        return elem

    kernel: list[dict[Path, object]] = []
    for d in range(2, loewy + 1):
        layer = paths_of_length(quiver, d)
        by_block: dict[tuple[str, str], list[Path]] = {}
        for x in layer:
            by_block.setdefault((x.source, x.target), []).append(x)
        for (s, t), xs in by_block.items():
            m = Mat(fld, len(xs), n, [[evaluate(x).get(k, fld.zero) for k in range(n)] for x in xs])
            for row in m.left_kernel().rows:
                kernel.append({xs[k]: c for k, c in enumerate(row) if c})
    # mixed-degree kernel elements
    by_block_all: dict[tuple[str, str], list[Path]] = {}
    for d in range(2, loewy + 1):
        for x in paths_of_length(quiver, d):
            by_block_all.setdefault((x.source, x.target), []).append(x)
    for (s, t), xs in by_block_all.items():
        if len({len(x) for x in xs}) < 2:
            continue
        m = Mat(fld, len(xs), n, [[evaluate(x).get(k, fld.zero) for k in range(n)] for x in xs])
        for row in m.left_kernel().rows:
            kernel.append({xs[k]: c for k, c in enumerate(row) if c})

    key = quiver.path_key
    kech = _Echelon(key, fld)
    for v in kernel:
        kech.add(v)
    candidates = sorted(kech.rows.items(), key=lambda kv: key(kv[0]))
    gen = _Echelon(key, fld)
    relations: list[Relation] = []

    def close(vec):
        queue = [vec]
        while queue:
            row = gen.add(queue.pop())
            if row is None:
                continue
            snap = dict(row)
            for arr in quiver.arrows:
                for g in (_left_mul(quiver, arr, snap), _right_mul(quiver, snap, arr)):
                    g = {x: c for x, c in g.items() if len(x) <= loewy}
                    if g:
                        queue.append(g)

    for _, vec in candidates:
        if not gen.reduce(vec):
            continue
        terms = tuple(sorted(((c, x) for x, c in vec.items()), key=lambda t: key(t[1]), reverse=True))
        relations.append(Relation(terms))
        close(vec)
    return AlgebraPresentation(quiver, tuple(relations), fld, name, ())
