"""Brute-force reference computations, independent of the library's engines.

Only the data classes (Quiver, Path, AlgebraPresentation) are shared with
the code under test; all linear algebra here goes through sympy.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

import sympy


def all_paths(q, max_len):
    """Every path of length 0..max_len, built by naive extension."""
    out = [(v, v, ()) for v in q.vertices]
    frontier = [(a.source, a.target, (a.name,)) for a in q.arrows]
    length = 1
    while frontier and length <= max_len:
        out.extend(frontier)
        nxt = []
        for s, t, word in frontier:
            for a in q.arrows:
                if a.source == t:
                    nxt.append((s, a.target, word + (a.name,)))
        frontier = nxt
        length += 1
    return out


def _coeff(c):
    return Fraction(int(c.numerator), int(c.denominator)) if hasattr(c, "numerator") else Fraction(int(c))


def _relation_words(p):
    return [[(_coeff(c), path.source, path.target, tuple(path.arrows)) for c, path in r.terms]
            for r in p.relations]


def _rank(rows, ncols):
    if not rows:
        return 0
    return sympy.Matrix(len(rows), ncols, lambda i, j: rows[i][j]).rank()


def graded_dimensions(p, max_degree=40):
    """``dim (KQ/I)_d`` per degree for homogeneous relations, over QQ.

    ``I_d`` is spanned by all ``u r v`` of degree ``d``; stops at the first
    degree whose quotient is zero.
    """
    q = p.quiver
    rels = _relation_words(p)
    dims = []
    for d in range(max_degree + 1):
        paths = [x for x in all_paths(q, d) if len(x[2]) == d]
        if not paths:
            dims.append(0)
            break
        col = {x: i for i, x in enumerate(paths)}
        rows = []
        for r in rels:
            k = len(r[0][3])
            if k > d:
                continue
            for lu in range(d - k + 1):
                lefts = [x for x in all_paths(q, lu) if len(x[2]) == lu]
                rights = [x for x in all_paths(q, d - k - lu) if len(x[2]) == d - k - lu]
                for u in lefts:
                    for v in rights:
                        row = [0] * len(paths)
                        ok = False
                        for c, s, t, w in r:
                            if u[1] != s or v[0] != t:
                                continue
                            key = (u[0], v[1], u[2] + w + v[2])
                            row[col[key]] += c
                            ok = True
                        if ok and any(row):
                            rows.append(row)
        dims.append(len(paths) - _rank(rows, len(paths)))
        if dims[-1] == 0:
            break
    return dims


def algebra_dimension(p):
    """Total dimension by per-degree path reduction (homogeneous relations)."""
    return sum(graded_dimensions(p))


def block_dimensions(p):
    """``dim e_s (KQ/I) e_t`` per ordered vertex pair, same method as above."""
    q = p.quiver
    rels = _relation_words(p)
    out = {(s, t): 0 for s in q.vertices for t in q.vertices}
    d = 0
    while True:
        paths = [x for x in all_paths(q, d) if len(x[2]) == d]
        if not paths:
            return out
        total = 0
        for s, t in out:
            block = [x for x in paths if x[0] == s and x[1] == t]
            if not block:
                continue
            col = {x: i for i, x in enumerate(block)}
            rows = []
            for r in rels:
                k = len(r[0][3])
                for lu in range(d - k + 1):
                    for u in (x for x in all_paths(q, lu) if len(x[2]) == lu and x[0] == s):
                        for v in (x for x in all_paths(q, d - k - lu)
                                  if len(x[2]) == d - k - lu and x[1] == t):
                            row = [0] * len(block)
                            for c, rs, rt, w in r:
                                if u[1] == rs and v[0] == rt:
                                    row[col[(s, t, u[2] + w + v[2])]] += c
                            if any(row):
                                rows.append(row)
            n = len(block) - _rank(rows, len(block))
            out[(s, t)] += n
            total += n
        if total == 0:
            return out
        d += 1


def is_convex_brute(q, subset, max_len=None):
    """A path leaving the subset and coming back disproves convexity."""
    s = set(subset)
    max_len = max_len or 2 * len(q.vertices) + 2
    for src, tgt, word in all_paths(q, max_len):
        if src in s and tgt in s and word:
            verts = [src]
            arrows = {a.name: a for a in q.arrows}
            for name in word:
                verts.append(arrows[name].target)
            if any(v not in s for v in verts):
                return False
    return True


def tits_form_roots(q, bound=4):
    """Positive dimension vectors with Tits form 1 (entries up to ``bound``)."""
    vs = list(q.vertices)
    idx = {v: i for i, v in enumerate(vs)}
    roots = []
    for x in product(range(bound + 1), repeat=len(vs)):
        if not any(x):
            continue
        val = sum(c * c for c in x) - sum(x[idx[a.source]] * x[idx[a.target]] for a in q.arrows)
        if val == 1:
            roots.append(x)
    return roots


def interval_modules(n):
    """Dimension vectors of the interval modules of a linear quiver on n vertices."""
    return [tuple(1 if i <= k <= j else 0 for k in range(n)) for i in range(n) for j in range(i, n)]


def first_betti(q):
    """Cycle rank of the underlying graph: arrows - vertices + components."""
    parent = {v: v for v in q.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in q.arrows:
        parent[find(a.source)] = find(a.target)
    comps = len({find(v) for v in q.vertices})
    return len(q.arrows) - len(q.vertices) + comps
