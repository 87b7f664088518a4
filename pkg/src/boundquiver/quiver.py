"""Finite quivers, paths, full subquivers and convexity."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Path:
    """A path read left to right: ``a*b`` traverses ``a`` first.

    The empty arrow tuple denotes the trivial path ``e_source``.
    """

    source: str
    target: str
    arrows: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.arrows)

    @property
    def is_trivial(self) -> bool:
        return not self.arrows

    def __str__(self) -> str:
        if not self.arrows:
            return f"e_{self.source}"
        return "*".join(self.arrows)


@dataclass(frozen=True)
class ConvexityVerdict:
    convex: bool
    witness: Path | None = None

    def __bool__(self) -> bool:
        return self.convex


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...] = ()
    _vindex: dict = field(init=False, repr=False, compare=False, hash=False)
    _aindex: dict = field(init=False, repr=False, compare=False, hash=False)
    _out: dict = field(init=False, repr=False, compare=False, hash=False)
    _in: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        verts = tuple(str(v) for v in self.vertices)
        arrows = tuple(a if isinstance(a, Arrow) else Arrow(*map(str, a)) for a in self.arrows)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "arrows", arrows)
        if len(set(verts)) != len(verts):
            raise ValueError("duplicate vertex ids")
        vindex = {v: i for i, v in enumerate(verts)}
        aindex = {}
        out: dict[str, list[Arrow]] = {v: [] for v in verts}
        inc: dict[str, list[Arrow]] = {v: [] for v in verts}
        for i, a in enumerate(arrows):
            if a.name in aindex:
                raise ValueError(f"duplicate arrow id {a.name!r}")
            if a.source not in vindex or a.target not in vindex:
                raise ValueError(f"arrow {a.name!r} has an undeclared endpoint")
            aindex[a.name] = i
            out[a.source].append(a)
            inc[a.target].append(a)
        object.__setattr__(self, "_vindex", vindex)
        object.__setattr__(self, "_aindex", aindex)
        object.__setattr__(self, "_out", {v: tuple(x) for v, x in out.items()})
        object.__setattr__(self, "_in", {v: tuple(x) for v, x in inc.items()})

    def arrow(self, name: str) -> Arrow:
        return self.arrows[self._aindex[name]]

    def has_arrow(self, name: str) -> bool:
        return name in self._aindex

    def has_vertex(self, v: str) -> bool:
        return v in self._vindex

    def out_arrows(self, v: str) -> tuple[Arrow, ...]:
        return self._out[v]

    def in_arrows(self, v: str) -> tuple[Arrow, ...]:
        return self._in[v]

    def vertex_index(self, v: str) -> int:
        return self._vindex[v]

    def arrow_index(self, name: str) -> int:
        return self._aindex[name]

    def trivial(self, v: str) -> Path:
        return Path(v, v, ())

    def arrow_path(self, name: str) -> Path:
        a = self.arrow(name)
        return Path(a.source, a.target, (name,))

    def path(self, arrows: Sequence[str]) -> Path:
        """Build and validate a nontrivial path from arrow ids."""
        if not arrows:
            raise ValueError("use trivial() for trivial paths")
        arrs = [self.arrow(a) for a in arrows]
        for x, y in zip(arrs, arrs[1:]):
            if x.target != y.source:
                raise ValueError(f"arrows {x.name} and {y.name} do not compose")
        return Path(arrs[0].source, arrs[-1].target, tuple(arrows))

    def compose(self, p: Path, q: Path) -> Path | None:
        if p.target != q.source:
            return None
        return Path(p.source, q.target, p.arrows + q.arrows)

    def path_key(self, p: Path) -> tuple:
        """Length first, then lexicographic on arrow declaration order."""
        if not p.arrows:
            return (0, (), self._vindex[p.source])
        return (len(p.arrows), tuple(self._aindex[a] for a in p.arrows), 0)

    def path_vertices(self, p: Path) -> list[str]:
        out = [p.source]
        for a in p.arrows:
            out.append(self.arrow(a).target)
        return out

    def is_valid_path(self, p: Path) -> bool:
        if not p.arrows:
            return p.source == p.target and p.source in self._vindex
        try:
            q = self.path(p.arrows)
        except (KeyError, ValueError):
            return False
        return q == p

    def opposite(self) -> "Quiver":
        return Quiver(self.vertices, tuple(Arrow(a.name, a.target, a.source) for a in self.arrows))


def enumerate_paths(q: Quiver, max_len: int) -> list[Path]:
    """All paths of length at most ``max_len`` in length-then-lexicographic order."""
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    layer = [q.trivial(v) for v in q.vertices]
    out = list(layer)
    for _ in range(max_len):
        nxt = []
        for p in layer:
            for a in q.out_arrows(p.target):
                nxt.append(Path(p.source, a.target, p.arrows + (a.name,)))
        if not nxt:
            break
        nxt.sort(key=q.path_key)
        out.extend(nxt)
        layer = nxt
    return out


def paths_of_length(q: Quiver, n: int) -> list[Path]:
    layer = [q.trivial(v) for v in q.vertices]
    for _ in range(n):
        layer = [Path(p.source, a.target, p.arrows + (a.name,))
                 for p in layer for a in q.out_arrows(p.target)]
    layer.sort(key=q.path_key)
    return layer


def _check_subset(q: Quiver, s: Iterable[str]) -> frozenset[str]:
    members = frozenset(str(v) for v in s)
    bad = [v for v in members if not q.has_vertex(v)]
    if bad:
        raise ValueError(f"vertices not in quiver: {sorted(bad)}")
    return members


def is_full_convex(q: Quiver, s: Iterable[str]) -> ConvexityVerdict:
    """Decide whether the vertex-induced subquiver on ``s`` is convex.

    A witness is a path that starts and ends in ``s`` but leaves it.
    """
    members = _check_subset(q, s)
    for u in q.vertices:
        if u not in members:
            continue
        # BFS through outside vertices only
        parent: dict[str, tuple[str, str] | None] = {}
        queue: deque[str] = deque()
        for a in q.out_arrows(u):
            if a.target not in members and a.target not in parent:
                parent[a.target] = (u, a.name)
                queue.append(a.target)
        while queue:
            x = queue.popleft()
            for a in q.out_arrows(x):
                if a.target in members:
                    arrows = [a.name]
                    cur = x
                    while True:
                        prev, name = parent[cur]  # type: ignore[misc]
                        arrows.append(name)
                        if prev == u:
                            break
                        cur = prev
                    arrows.reverse()
                    return ConvexityVerdict(False, q.path(arrows))
                if a.target not in parent:
                    parent[a.target] = (x, a.name)
                    queue.append(a.target)
    return ConvexityVerdict(True, None)


def induced_subquiver(q: Quiver, s: Iterable[str]) -> Quiver:
    members = _check_subset(q, s)
    verts = tuple(v for v in q.vertices if v in members)
    arrows = tuple(a for a in q.arrows if a.source in members and a.target in members)
    return Quiver(verts, arrows)


def has_oriented_cycle(q: Quiver) -> bool:
    indeg = {v: 0 for v in q.vertices}
    for a in q.arrows:
        indeg[a.target] += 1
    queue = deque(v for v in q.vertices if indeg[v] == 0)
    seen = 0
    while queue:
        v = queue.popleft()
        seen += 1
        for a in q.out_arrows(v):
            indeg[a.target] -= 1
            if indeg[a.target] == 0:
                queue.append(a.target)
    return seen != len(q.vertices)


def connected_components(q: Quiver) -> list[tuple[str, ...]]:
    """Partition of the vertices by connectivity of the underlying graph."""
    seen: set[str] = set()
    comps = []
    for v in q.vertices:
        if v in seen:
            continue
        comp = []
        queue = deque([v])
        seen.add(v)
        while queue:
            x = queue.popleft()
            comp.append(x)
            for a in q.out_arrows(x) + q.in_arrows(x):
                y = a.target if a.source == x else a.source
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        comps.append(tuple(sorted(comp, key=q.vertex_index)))
    return comps


def is_connected_subset(q: Quiver, s: Iterable[str]) -> bool:
    members = _check_subset(q, s)
    if not members:
        return False
    return len(connected_components(induced_subquiver(q, members))) == 1


def convex_subsets(q: Quiver, *, connected: bool = True, limit: int | None = None) -> list[tuple[str, ...]]:
    """Nonempty full convex vertex subsets, smallest first, in vertex order.

    Raises ``OverflowError`` when more than ``limit`` subsets would be examined.
    """
    n = len(q.vertices)
    if limit is not None and 2**n - 1 > limit:
        raise OverflowError(f"{2**n - 1} vertex subsets exceed the budget of {limit}")
    found = []
    for mask in range(1, 2**n):
        subset = tuple(v for i, v in enumerate(q.vertices) if mask >> i & 1)
        if connected and not is_connected_subset(q, subset):
            continue
        if is_full_convex(q, subset):
            found.append(subset)
    found.sort(key=lambda t: (len(t), [q.vertex_index(v) for v in t]))
    return found
