"""Krull-Schmidt decomposition and isomorphism tests.

Splitting uses the Fitting lemma: for an endomorphism ``f`` whose minimal
polynomial factors as ``prod q_i^e_i`` with at least two coprime factors,
the kernels of ``q_i(f)^e_i`` split the module.  When no candidate
endomorphism splits, locality of ``End(M)`` is certified by exhibiting the
span of ``f - lambda_f`` as a nilpotent two-sided ideal of codimension one.
"""

from __future__ import annotations

import random
import warnings
import zlib
from dataclasses import dataclass, field

import sympy

from .errors import FieldSensitivity
from .linalg import Field, Mat
from .modules import Morphism, Representation, canonical_text, end_basis, hom_space, submodule


# --------------------------------------------------------------------------
# polynomials of matrices

def minimal_polynomial(f: Mat) -> list:
    """Monic minimal polynomial, lowest coefficient first."""
    fld = f.field
    n = f.nrows
    if n == 0:
        return [fld.one]
    ident = Mat.identity(fld, n)
    # incremental echelon on flattened powers, tracking combinations
    piv_rows: list[tuple[int, list, list]] = []
    power = ident
    k = 0
    while True:
        vec = power.flat()
        combo = [fld.zero] * (k + 1)
        combo[k] = fld.one
        for col, row, rcombo in piv_rows:
            c = vec[col]
            if c:
                vec = [a - c * b for a, b in zip(vec, row)]
                combo = [a - c * (rcombo[i] if i < len(rcombo) else 0) for i, a in enumerate(combo)]
        col = next((i for i, a in enumerate(vec) if a), None)
        if col is None:
            return [fld(0) + c for c in combo]
        inv = fld.one / vec[col]
        piv_rows.append((col, [a * inv for a in vec], [a * inv for a in combo]))
        power = power @ f
        k += 1


def poly_eval(coeffs: list, f: Mat) -> Mat:
    fld = f.field
    n = f.nrows
    out = Mat(fld, n, n)
    for c in reversed(coeffs):
        out = out @ f
        if c:
            for i in range(n):
                out.rows[i][i] = out.rows[i][i] + c
    return out


def _poly_mul(p: list, q: list, zero) -> list:
    out = [zero] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] = out[i + j] + a * b
    return out


def _single_root(coeffs: list, fld: Field):
    """Return ``lam`` when the monic polynomial is ``(x - lam)^k``, else None."""
    k = len(coeffs) - 1
    if k == 0:
        return None
    if fld.characteristic and k % fld.characteristic == 0:
        return _SENTINEL
    lam = -coeffs[k - 1] / fld(k)
    p = [fld.one]
    for _ in range(k):
        p = _poly_mul(p, [-lam, fld.one], fld.zero)
    return lam if p == coeffs else None


_SENTINEL = object()


def factor_polynomial(coeffs: list, fld: Field) -> list[tuple[list, int]]:
    """Monic irreducible factors with multiplicity (exact, via sympy)."""
    lam = _single_root(coeffs, fld)
    if lam is not None and lam is not _SENTINEL:
        return [([-lam, fld.one], len(coeffs) - 1)]
    x = sympy.Symbol("x")
    if fld.characteristic:
        p = fld.characteristic
        poly = sympy.Poly([int(str(c)) for c in reversed(coeffs)], x, modulus=p)
    else:
        poly = sympy.Poly([sympy.Rational(int(c.numerator), int(c.denominator)) for c in reversed(coeffs)],
                          x, domain=sympy.QQ)
    _, facs = poly.factor_list()
    out = []
    for fac, mult in facs:
        fac = fac.monic()
        cs = [fld(0) + _to_field(c, fld) for c in reversed(fac.all_coeffs())]
        out.append((cs, int(mult)))
    out.sort(key=lambda t: (len(t[0]), [str(c) for c in t[0]]))
    return out


def _to_field(c, fld: Field):
    c = sympy.Rational(c)
    return fld(int(c.p)) / fld(int(c.q))


# --------------------------------------------------------------------------
# decomposition

@dataclass
class Summand:
    module: Representation
    multiplicity: int


@dataclass
class DecompositionResult:
    summands: list[Summand]
    caveats: list[str] = field(default_factory=list)

    @property
    def modules(self) -> list[Representation]:
        return [s.module for s in self.summands for _ in range(s.multiplicity)]

    @property
    def dimvecs(self) -> list[tuple[int, ...]]:
        return [m.dimvec for m in self.modules]


def _vertex_polynomial(f: Morphism, coeffs: list) -> dict[str, Mat]:
    return {v: poly_eval(coeffs, m) for v, m in f.mats.items()}


def _split_by(m: Representation, f_total: Mat) -> list[Representation] | None:
    coeffs = minimal_polynomial(f_total)
    facs = factor_polynomial(coeffs, m.field)
    if len(facs) < 2:
        return None
    f = Morphism.from_total(m, m, f_total)
    parts = []
    for q, e in facs:
        qe = [m.field.one]
        for _ in range(e):
            qe = _poly_mul(qe, q, m.field.zero)
        g = _vertex_polynomial(f, qe)
        sub, _ = submodule(m, {v: g[v].left_kernel() for v in g})
        parts.append(sub)
    assert sum(p.dim for p in parts) == m.dim
    return parts


def _primary_eigenvalue(f: Mat):
    coeffs = minimal_polynomial(f)
    lam = _single_root(coeffs, f.field)
    if lam is _SENTINEL:
        facs = factor_polynomial(coeffs, f.field)
        if len(facs) == 1 and len(facs[0][0]) == 2:
            return -facs[0][0][0]
        return None
    return lam


def _span_contains(basis: Mat, vec: list) -> bool:
    if basis.nrows == 0:
        return not any(vec)
    return basis.vstack(Mat(basis.field, 1, basis.ncols, [vec])).rank() == basis.nrows


def local_certificate(ends: list[Mat]) -> bool:
    """True when ``span{f - lambda_f}`` is a nilpotent ideal of codimension one."""
    if not ends:
        return False
    fld = ends[0].field
    n = ends[0].nrows
    ident = Mat.identity(fld, n)
    jgens = []
    for f in ends:
        lam = _primary_eigenvalue(f)
        if lam is None:
            return False
        jgens.append(f - ident.scale(lam))
    jflat = [g.flat() for g in jgens]
    jspan = Mat(fld, len(jflat), n * n, jflat).row_basis()
    if jspan.nrows != len(ends) - 1:
        return False
    for j in jgens:
        for e in ends:
            for prod in (j @ e, e @ j):
                if not _span_contains(jspan, prod.flat()):
                    return False
    # nilpotency of the ideal: powers shrink to zero
    power = [Mat(fld, n, n, [r[i * n:(i + 1) * n] for i in range(n)]) for r in jspan.rows]
    for _ in range(n + 1):
        if not power:
            return True
        prods = [(a @ b).flat() for a in power for b in jgens]
        nxt = Mat(fld, len(prods), n * n, prods).row_basis() if prods else Mat(fld, 0, n * n)
        if nxt.nrows >= len(power):
            return False
        power = [Mat(fld, n, n, [r[i * n:(i + 1) * n] for i in range(n)]) for r in nxt.rows]
    return not power


def _candidates(ends: list[Mat], rng: random.Random, extra: int):
    yield from ends
    for a in ends:
        for b in ends:
            yield a @ b
    fld = ends[0].field
    for _ in range(extra):
        acc = Mat(fld, ends[0].nrows, ends[0].ncols)
        for e in ends:
            acc = acc + e.scale(fld(rng.randint(-3, 3)))
        yield acc


def _seed(m: Representation) -> int:
    return zlib.crc32(canonical_text(m).encode())


def indecomposable_parts(m: Representation, caveats: list[str] | None = None) -> list[Representation]:
    """Split ``m`` into indecomposable summands (no grouping)."""
    if m.dim == 0:
        return []
    if m._cache.get("indecomposable"):
        return [m]
    ends = end_basis(m)
    if len(ends) == 1:
        m._cache["indecomposable"] = True
        return [m]
    rng = random.Random(_seed(m))
    for f in _candidates(ends, rng, 6):
        if _primary_eigenvalue(f) is not None:
            continue
        parts = _split_by(m, f)
        if parts:
            out = []
            for p in parts:
                out.extend(indecomposable_parts(p, caveats))
            return out
    if not local_certificate(ends):
        for f in _candidates(ends, rng, 24):
            parts = _split_by(m, f)
            if parts:
                out = []
                for p in parts:
                    out.extend(indecomposable_parts(p, caveats))
                return out
        msg = (f"locality of End(M) not certified for dims {m.dimvec}; "
               "treated as indecomposable over the base field")
        warnings.warn(msg, FieldSensitivity, stacklevel=2)
        if caveats is not None:
            caveats.append(msg)
    m._cache["indecomposable"] = True
    return [m]


def is_indecomposable(m: Representation) -> bool:
    return m.dim > 0 and len(indecomposable_parts(m)) == 1


def iso_witness(m: Representation, n: Representation) -> Morphism | None:
    """An isomorphism between indecomposables, or None when they differ.

    For an indecomposable ``M`` the non-invertible maps ``M -> N`` form a
    proper subspace when ``M`` and ``N`` are isomorphic, so some basis
    element of ``Hom(M, N)`` is invertible.
    """
    if m.dimvec != n.dimvec:
        return None
    if m is n:
        return Morphism.identity(m)
    for f in hom_space(m, n):
        if f.is_iso():
            return f
    return None


def is_isomorphic(m: Representation, n: Representation) -> bool:
    if m.dimvec != n.dimvec:
        return False
    pm, pn = indecomposable_parts(m), indecomposable_parts(n)
    if len(pm) != len(pn):
        return False
    remaining = list(pn)
    for x in pm:
        hit = next((k for k, y in enumerate(remaining) if iso_witness(x, y) is not None), None)
        if hit is None:
            return False
        remaining.pop(hit)
    return True


def decompose(m: Representation) -> DecompositionResult:
    caveats: list[str] = []
    parts = indecomposable_parts(m, caveats)
    groups: list[Summand] = []
    for p in parts:
        for g in groups:
            if iso_witness(g.module, p) is not None:
                g.multiplicity += 1
                break
        else:
            groups.append(Summand(p, 1))
    return DecompositionResult(groups, caveats)


class ModuleRegistry:
    """Isomorphism classes of indecomposables over one algebra."""

    def __init__(self):
        self.modules: list[Representation] = []
        self._by_dim: dict[tuple[int, ...], list[int]] = {}

    def find(self, m: Representation) -> int | None:
        for i in self._by_dim.get(m.dimvec, []):
            if iso_witness(self.modules[i], m) is not None:
                return i
        return None

    def add(self, m: Representation) -> tuple[int, bool]:
        """Index of the class of ``m``; the flag says whether it is new."""
        i = self.find(m)
        if i is not None:
            return i, False
        self.modules.append(m)
        self._by_dim.setdefault(m.dimvec, []).append(len(self.modules) - 1)
        m._cache["indecomposable"] = True
        return len(self.modules) - 1, True

    def __len__(self) -> int:
        return len(self.modules)
