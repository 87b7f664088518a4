"""Bound quiver presentations and the ``.quiv`` text format.

Example::

    algebra A
    vertices 1 2 3
    arrow a: 1 -> 2
    arrow b: 2 -> 3
    field QQ
    relations
      a*b = 0

Statements are one per line; indentation and blank lines are ignored and
``#`` starts a comment.  Relation lines read ``lhs = rhs`` (stored as
``lhs - rhs``) or a bare linear combination (meaning ``= 0``); several
relations may share a line when separated by ``;``.  ``tag <word>`` attaches
an annotation such as ``cluster-tilted``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path as FsPath

from .linalg import QQ, Field, PrimeField
from .quiver import Arrow, Path, Quiver

FieldSpec = Field


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(f"{where}{message}")


@dataclass(frozen=True)
class Relation:
    terms: tuple[tuple[object, Path], ...]

    @property
    def source(self) -> str:
        return self.terms[0][1].source

    @property
    def target(self) -> str:
        return self.terms[0][1].target

    @property
    def paths(self) -> tuple[Path, ...]:
        return tuple(p for _, p in self.terms)

    @property
    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    @property
    def is_homogeneous(self) -> bool:
        return len({len(p) for _, p in self.terms}) == 1

    def validate(self) -> None:
        if not self.terms:
            raise ValueError("relation has no terms")
        src, tgt = self.source, self.target
        seen = set()
        for c, p in self.terms:
            if not c:
                raise ValueError("zero coefficient in relation")
            if p.source != src or p.target != tgt:
                raise ValueError("relation terms are not parallel")
            if len(p) < 2:
                raise ValueError(f"path {p} in relation has length < 2")
            if p in seen:
                raise ValueError(f"repeated path {p} in relation")
            seen.add(p)


@dataclass(frozen=True)
class AlgebraPresentation:
    quiver: Quiver
    relations: tuple[Relation, ...] = ()
    field: Field = QQ
    name: str = "L"
    tags: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "relations", tuple(self.relations))
        object.__setattr__(self, "tags", tuple(sorted(set(self.tags))))
        for r in self.relations:
            r.validate()
            for _, p in r.terms:
                if not self.quiver.is_valid_path(p):
                    raise ValueError(f"{p} is not a path of the quiver")

    @property
    def is_homogeneous(self) -> bool:
        return all(r.is_homogeneous for r in self.relations)

    def with_name(self, name: str) -> "AlgebraPresentation":
        return AlgebraPresentation(self.quiver, self.relations, self.field, name, self.tags)

    def relation_text(self, r: Relation) -> str:
        return _lincomb_text(self.field, r.terms) + " = 0"


# --------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<id>[^\W\d][\w']*)|(?P<op>[-+*=()]))")
_VERTEX_TOKEN = re.compile(r"[\w'.-]+$")
_NAME = re.compile(r"[^\W\d][\w']*$")


def _tokens(text: str, lineno: int, col0: int):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos:].strip()[0]!r}", lineno, col0 + pos + 1)
        kind = m.lastgroup
        val = m.group(kind)
        out.append((kind, val, col0 + m.start(kind) + 1))
        pos = m.end()
    return out


def _parse_lincomb(toks, i, lineno):
    """Parse ``coeff? path (+- coeff? path)*`` or ``0``.  Returns (terms, i)."""
    terms: list[tuple[Fraction, list[str], int]] = []
    sign = Fraction(1)
    first = True
    while True:
        if i < len(toks) and toks[i][0] == "op" and toks[i][1] in "+-":
            sign = sign * (-1 if toks[i][1] == "-" else 1)
            i += 1
        elif not first:
            break
        if i >= len(toks):
            raise ParseError("expected a term", lineno, toks[-1][2] if toks else 1)
        coeff = Fraction(1)
        col = toks[i][2]
        if toks[i][0] == "num":
            coeff = Fraction(toks[i][1])
            i += 1
            if i < len(toks) and toks[i][0] == "op" and toks[i][1] == "*":
                i += 1
            if i >= len(toks) or toks[i][0] != "id":
                if coeff != 0:
                    raise ParseError("a nonzero scalar is not a valid relation term", lineno, col)
                terms.append((Fraction(0), [], col))
                first = False
                sign = Fraction(1)
                continue
        if toks[i][0] != "id":
            raise ParseError(f"expected an arrow name, got {toks[i][1]!r}", lineno, toks[i][2])
        arrows = [toks[i][1]]
        i += 1
        while i + 1 < len(toks) and toks[i][1] == "*" and toks[i + 1][0] == "id":
            arrows.append(toks[i + 1][1])
            i += 2
        if coeff == 0:
            raise ParseError("zero coefficient", lineno, col)
        terms.append((sign * coeff, arrows, col))
        sign = Fraction(1)
        first = False
    return terms, i


def _parse_relation_line(text: str, lineno: int, col0: int):
    toks = _tokens(text, lineno, col0)
    if not toks:
        return None
    lhs, i = _parse_lincomb(toks, 0, lineno)
    rhs: list = []
    if i < len(toks) and toks[i][1] == "=":
        rhs, i = _parse_lincomb(toks, i + 1, lineno)
    if i != len(toks):
        raise ParseError(f"unexpected token {toks[i][1]!r}", lineno, toks[i][2])
    terms = [(c, a, col) for c, a, col in lhs if a] + [(-c, a, col) for c, a, col in rhs if a]
    return terms, col0 + 1


def parse(text: str) -> AlgebraPresentation:
    name = "L"
    vertices: list[str] | None = None
    arrows: list[Arrow] = []
    arrow_pos: dict[str, tuple[int, int]] = {}
    field_spec: Field = QQ
    tags: list[str] = []
    raw_relations: list[tuple[list, int, int]] = []
    in_relations = False
    keywords = ("algebra", "vertices", "arrow", "field", "relations", "tag")

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        stripped = line.strip()
        if not stripped:
            continue
        col0 = len(line) - len(line.lstrip())
        head, _, rest = stripped.partition(" ")
        head_kw = head.rstrip(":")
        if head_kw in keywords:
            in_relations = False
        else:
            if not in_relations:
                raise ParseError(f"unknown statement {head!r}", lineno, col0 + 1)
            for part in _split_semicolons(line):
                text_part, pcol = part
                parsed = _parse_relation_line(text_part, lineno, pcol)
                if parsed is not None:
                    raw_relations.append((parsed[0], lineno, parsed[1]))
            continue
        rest = rest.strip()
        if head_kw == "algebra":
            if not rest or len(rest.split()) != 1:
                raise ParseError("expected: algebra <name>", lineno, col0 + 1)
            name = rest
        elif head_kw == "vertices":
            vs = rest.split()
            for v in vs:
                if not _VERTEX_TOKEN.match(v):
                    raise ParseError(f"bad vertex id {v!r}", lineno, col0 + 1 + stripped.find(v))
            if vertices is not None:
                raise ParseError("vertices declared twice", lineno, col0 + 1)
            if len(set(vs)) != len(vs):
                raise ParseError("duplicate vertex id", lineno, col0 + 1)
            vertices = vs
        elif head_kw == "arrow":
            m = re.match(r"([^\s:]+)\s*:\s*([^\s]+)\s*->\s*([^\s]+)\s*$", rest)
            if not m:
                raise ParseError("expected: arrow <name>: <v> -> <w>", lineno, col0 + 1)
            aname, v, w = m.groups()
            if not _NAME.match(aname):
                raise ParseError(f"bad arrow name {aname!r}", lineno, col0 + 7)
            if aname in arrow_pos:
                raise ParseError(f"duplicate arrow {aname!r}", lineno, col0 + 7)
            arrow_pos[aname] = (lineno, col0 + 7)
            arrows.append(Arrow(aname, v, w))
        elif head_kw == "field":
            m = re.match(r"^(QQ|(?:Fp|GF)\((\d+)\))$", rest.replace(" ", ""))
            if not m:
                raise ParseError(f"unknown field {rest!r}", lineno, col0 + 7)
            try:
                field_spec = QQ if m.group(1) == "QQ" else PrimeField(int(m.group(2)))
            except ValueError as exc:
                raise ParseError(str(exc), lineno, col0 + 7) from None
        elif head_kw == "tag":
            if not rest:
                raise ParseError("expected: tag <word>", lineno, col0 + 1)
            tags.extend(rest.split())
        elif head_kw == "relations":
            in_relations = True
            if rest:
                for text_part, pcol in _split_semicolons(line[line.index("relations") + 9:],
                                                         line.index("relations") + 9):
                    parsed = _parse_relation_line(text_part, lineno, pcol)
                    if parsed is not None:
                        raw_relations.append((parsed[0], lineno, parsed[1]))

    if vertices is None:
        raise ParseError("missing 'vertices' statement", 1, 1)
    vset = set(vertices)
    for a in arrows:
        for v in (a.source, a.target):
            if v not in vset:
                ln, col = arrow_pos[a.name]
                raise ParseError(f"unknown vertex {v!r} in arrow {a.name!r}", ln, col)
    quiver = Quiver(tuple(vertices), tuple(arrows))

    relations = []
    for terms, lineno, col in raw_relations:
        combined: dict[Path, object] = {}
        for coeff, arrow_names, tcol in terms:
            for an in arrow_names:
                if not quiver.has_arrow(an):
                    raise ParseError(f"unknown arrow {an!r}", lineno, tcol)
            try:
                p = quiver.path(arrow_names)
            except ValueError as exc:
                raise ParseError(str(exc), lineno, tcol) from None
            if len(p) < 2:
                raise ParseError(f"path {p} in relation has length < 2", lineno, tcol)
            c = field_spec(coeff)
            if not c:
                raise ParseError("coefficient vanishes in the chosen field", lineno, tcol)
            combined[p] = combined.get(p, field_spec.zero) + c
        rterms = tuple((c, p) for p, c in combined.items() if c)
        if not rterms:
            raise ParseError("relation is zero", lineno, col)
        ends = {(p.source, p.target) for _, p in rterms}
        if len(ends) > 1:
            raise ParseError("relation terms are not parallel", lineno, col)
        relations.append(Relation(rterms))
    return AlgebraPresentation(quiver, tuple(relations), field_spec, name, tuple(tags))


def _split_semicolons(line: str, offset: int = 0):
    parts = []
    start = 0
    for i, ch in enumerate(line):
        if ch == ";":
            parts.append((line[start:i], offset + start))
            start = i + 1
    parts.append((line[start:], offset + start))
    return parts


def load(path) -> AlgebraPresentation:
    return parse(FsPath(path).read_text(encoding="utf-8"))


# --------------------------------------------------------------------------
# serialization

def _lincomb_text(fld: Field, terms) -> str:
    out = []
    for k, (c, p) in enumerate(terms):
        neg = False
        if fld.characteristic == 0 and c < 0:
            neg, c = True, -c
        word = "*".join(p.arrows)
        coeff = "" if c == 1 else fld.fmt(c) + " "
        if k == 0:
            out.append(("-" if neg else "") + coeff + word)
        else:
            out.append(("- " if neg else "+ ") + coeff + word)
    return " ".join(out)


def serialize(p: AlgebraPresentation) -> str:
    lines = [f"algebra {p.name}", f"field {p.field.name}"]
    for t in p.tags:
        lines.append(f"tag {t}")
    lines.append("vertices " + " ".join(p.quiver.vertices))
    for a in p.quiver.arrows:
        lines.append(f"arrow {a.name}: {a.source} -> {a.target}")
    if p.relations:
        lines.append("relations")
        for r in p.relations:
            lines.append("  " + p.relation_text(r))
    return "\n".join(lines) + "\n"


def opposite(p: AlgebraPresentation) -> AlgebraPresentation:
    """Reverse every arrow and every relation word; arrow names are kept."""
    rels = tuple(
        Relation(tuple((c, Path(q.target, q.source, tuple(reversed(q.arrows)))) for c, q in r.terms))
        for r in p.relations)
    name = p.name[:-3] if p.name.endswith("_op") else p.name + "_op"
    return AlgebraPresentation(p.quiver.opposite(), rels, p.field, name, p.tags)
