"""Discrete spaces: graphs with group actions, grid paths, subdivisions and
the thin groupoids attached to subdivisions."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import BoundExceeded, InvalidStructure
from .groupoid import FiniteGroupoid, TranslationGroupoid, translation_groupoid, unit_groupoid
from .groups import GroupAction, make_action, trivial_action, trivial_group
from .labels import label_key, render, sorted_labels
from .morphism import EquivariantMap, StrictMorphism

PATH_BOUND = 10**6


class DiscretePath:
    """Samples v_start, ..., v_end of a path on the integer grid.

    Consecutive samples are equal or adjacent in the ambient graph; validity
    is checked by ``is_valid_in`` rather than at construction.
    """

    __slots__ = ("samples", "start", "_hash")

    def __init__(self, samples: Sequence, start: int = 0):
        object.__setattr__(self, "samples", tuple(samples))
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "_hash", hash((self.samples, start)))
        if not self.samples:
            raise InvalidStructure("a path needs at least one sample")

    def __setattr__(self, name, value):
        raise AttributeError("DiscretePath is immutable")

    def __eq__(self, other):
        if not isinstance(other, DiscretePath):
            return NotImplemented
        return self._hash == other._hash and self.samples == other.samples and self.start == other.start

    def __hash__(self):
        return self._hash

    def __len__(self):
        return len(self.samples)

    def __repr__(self):
        if self.start:
            return f"DiscretePath({self.samples!r}, start={self.start})"
        return f"DiscretePath({self.samples!r})"

    @property
    def end(self) -> int:
        return self.start + len(self.samples) - 1

    def at(self, r: int):
        if not self.start <= r <= self.end:
            raise IndexError(f"sample {r} outside [{self.start}, {self.end}]")
        return self.samples[r - self.start]

    def restrict(self, a: int, b: int) -> "DiscretePath":
        if not self.start <= a <= b <= self.end:
            raise InvalidStructure(f"[{a}, {b}] is not inside [{self.start}, {self.end}]")
        return DiscretePath(self.samples[a - self.start:b - self.start + 1], a)

    def shifted(self, start: int) -> "DiscretePath":
        return DiscretePath(self.samples, start)

    def is_valid_in(self, graph) -> bool:
        s = self.samples
        return all(s[i] == s[i + 1] or graph.adjacent(s[i], s[i + 1]) for i in range(len(s) - 1)) \
            and all(graph.has_vertex(v) for v in s)

    def sort_key(self):
        return (self.start, tuple(label_key(v) for v in self.samples))

    def to_json(self):
        from .labels import to_json
        return [to_json(v) for v in self.samples]

    def render(self) -> str:
        return "[" + ",".join(render(v) for v in self.samples) + "]"


def constant_path(v, T: int, start: int = 0) -> DiscretePath:
    return DiscretePath((v,) * (T - start + 1), start)


@dataclass(frozen=True, eq=False)
class SpaceGraph:
    vertices: tuple
    edges: frozenset = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(sorted_labels(self.vertices)))
        edges = frozenset(frozenset(e) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        vs = set(self.vertices)
        for e in edges:
            if len(e) != 2:
                raise InvalidStructure("self-loops are not allowed")
            if not e <= vs:
                raise InvalidStructure(f"edge {sorted_labels(e)} mentions an unknown vertex")

    @classmethod
    def from_pairs(cls, vertices: Iterable, pairs: Iterable[Sequence]) -> "SpaceGraph":
        pairs = list(pairs)
        for u, v in pairs:
            if u == v:
                raise InvalidStructure(f"self-loop at {u!r}")
        return cls(tuple(vertices), frozenset(frozenset(p) for p in pairs))

    @cached_property
    def _nbrs(self) -> dict:
        out = {v: set() for v in self.vertices}
        for e in self.edges:
            u, v = tuple(e)
            out[u].add(v)
            out[v].add(u)
        return {v: tuple(sorted_labels(ns)) for v, ns in out.items()}

    def neighbors(self, v) -> tuple:
        return self._nbrs[v]

    def adjacent(self, u, v) -> bool:
        return v in self._nbrs.get(u, ())

    def has_vertex(self, v) -> bool:
        return v in self._nbrs

    def max_degree(self) -> int:
        return max((len(n) for n in self._nbrs.values()), default=0)

    def __eq__(self, other):
        if not isinstance(other, SpaceGraph):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    __hash__ = None


class PathSpace:
    """The space of grid paths of a graph, as an implicit graph.

    Two distinct paths are adjacent when they are pointwise equal or adjacent.
    """

    def __init__(self, graph: SpaceGraph, T: int):
        self.graph = graph
        self.T = T

    def has_vertex(self, p) -> bool:
        return isinstance(p, DiscretePath) and p.start == 0 and p.end == self.T and p.is_valid_in(self.graph)

    def adjacent(self, p: DiscretePath, q: DiscretePath) -> bool:
        if p == q or len(p) != len(q):
            return False
        g = self.graph
        return all(a == b or g.adjacent(a, b) for a, b in zip(p.samples, q.samples))


@dataclass(frozen=True, eq=False)
class GraphAction:
    """A finite group acting on a graph by automorphisms."""

    graph: SpaceGraph
    action: GroupAction

    def __post_init__(self):
        if tuple(self.action.carrier) != self.graph.vertices:
            raise InvalidStructure("action carrier differs from the vertex set")
        self.action.validate()
        for g in self.action.group.elements:
            for e in self.graph.edges:
                u, v = tuple(e)
                if not self.graph.adjacent(self.action(g, u), self.action(g, v)):
                    raise InvalidStructure(f"{g!r} does not preserve the edge {sorted_labels(e)}")

    @property
    def group(self):
        return self.action.group

    @cached_property
    def groupoid(self) -> TranslationGroupoid:
        return translation_groupoid(self.action, validate=False)

    def __eq__(self, other):
        if not isinstance(other, GraphAction):
            return NotImplemented
        return self is other or (self.graph == other.graph and self.action == other.action)

    __hash__ = None


def act_on_path(action: GroupAction, g, p: DiscretePath) -> DiscretePath:
    perm = action.perms[g]
    return DiscretePath([perm[v] for v in p.samples], p.start)


def concat(p: DiscretePath, q: DiscretePath) -> DiscretePath:
    """p followed by q; q is placed to start where p ends and must begin at p's last sample."""
    if p.samples[-1] != q.samples[0]:
        raise InvalidStructure(f"cannot concatenate: {p.samples[-1]!r} != {q.samples[0]!r}")
    return DiscretePath(p.samples + q.samples[1:], p.start)


@dataclass(frozen=True)
class GridSubdivision:
    """Cuts 0 = c_0 <= c_1 <= ... <= c_n = T; repeated cuts give degenerate pieces."""

    T: int
    cuts: tuple

    def __post_init__(self):
        c = tuple(self.cuts)
        object.__setattr__(self, "cuts", c)
        if len(c) < 2 or c[0] != 0 or c[-1] != self.T:
            raise InvalidStructure(f"cuts {c} must start at 0 and end at {self.T}")
        if any(c[i] > c[i + 1] for i in range(len(c) - 1)):
            raise InvalidStructure(f"cuts {c} are not non-decreasing")

    @property
    def n(self) -> int:
        return len(self.cuts) - 1

    def pieces(self) -> list[tuple[int, int]]:
        return [(self.cuts[i], self.cuts[i + 1]) for i in range(self.n)]

    @staticmethod
    def trivial(T: int) -> "GridSubdivision":
        return GridSubdivision(T, (0, T))


def interval_groupoid(s: GridSubdivision) -> FiniteGroupoid:
    """The thin groupoid of a subdivision.

    Objects are tagged samples (r, i), 1 <= i <= n, with c_{i-1} <= r <= c_i.
    There is exactly one arrow (r, i) -> (r, j) when every cut between the two
    pieces sits at r, and none otherwise.
    """
    cuts = s.cuts
    objects = [(r, i) for i in range(1, s.n + 1) for r in range(cuts[i - 1], cuts[i] + 1)]

    def linked(r, i, j):
        lo, hi = min(i, j), max(i, j)
        return all(cuts[m] == r for m in range(lo, hi))

    arrows, src, tgt = [], {}, {}
    for (r, i) in objects:
        for (q, j) in objects:
            if q == r and linked(r, i, j):
                a = ((r, i), (r, j))
                arrows.append(a)
                src[a], tgt[a] = (r, i), (r, j)
    out: dict = {}
    for a in arrows:
        out.setdefault(src[a], []).append(a)
    comp = {}
    for a in arrows:
        for b in out[tgt[a]]:
            comp[(b, a)] = (src[a], tgt[b])
    unit = {x: (x, x) for x in objects}
    inv = {a: (a[1], a[0]) for a in arrows}
    return FiniteGroupoid(tuple(objects), tuple(arrows), src, tgt, comp, unit, inv)


def collapse_to_grid(s: GridSubdivision) -> StrictMorphism:
    """The functor from the thin groupoid of ``s`` onto the discrete grid {0..T}."""
    thin = interval_groupoid(s)
    grid = unit_groupoid(range(s.T + 1))
    e = grid.group.identity
    return StrictMorphism(thin, grid, {x: x[0] for x in thin.objects},
                          {a: (e, a[0][0]) for a in thin.arrows})


def enumerate_paths(graph: SpaceGraph, T: int, bound: int = PATH_BOUND) -> tuple[DiscretePath, ...]:
    """All grid paths with T steps, in lexicographic order."""
    if T < 0:
        raise InvalidStructure("grid size must be non-negative")
    estimate = len(graph.vertices) * (graph.max_degree() + 1) ** T
    if estimate > bound:
        raise BoundExceeded(f"path enumeration may produce {estimate} paths, over the bound of {bound}")
    options = {v: tuple(sorted_labels((v,) + graph.neighbors(v))) for v in graph.vertices}
    layer = [(v,) for v in graph.vertices]
    for _ in range(T):
        layer = [p + (w,) for p in layer for w in options[p[-1]]]
    return tuple(DiscretePath(p) for p in layer)


def path_action(gaction: GraphAction, T: int, paths: Sequence[DiscretePath] | None = None) -> GroupAction:
    if paths is None:
        paths = enumerate_paths(gaction.graph, T)
    act = gaction.action
    return make_action(act.group, paths, lambda g, p: act_on_path(act, g, p))


def free_path_translation_groupoid(gaction: GraphAction, T: int) -> TranslationGroupoid:
    """G acting pointwise on the paths of the graph with T steps."""
    return translation_groupoid(path_action(gaction, T), validate=False)


def orbit_quotient(gaction: GraphAction) -> tuple[GraphAction, EquivariantMap]:
    """The orbit graph with the trivial group, and the quotient map onto it.

    Orbits are named by their smallest vertex.  Fails if an edge joins two
    points of the same orbit, which would become a self-loop.
    """
    act = gaction.action
    rep = act.orbit_index
    pairs = set()
    for e in gaction.graph.edges:
        u, v = tuple(e)
        if rep[u] == rep[v]:
            raise InvalidStructure(f"edge {sorted_labels(e)} collapses to a loop in the quotient")
        pairs.add(frozenset((rep[u], rep[v])))
    vertices = sorted_labels(set(rep.values()))
    qgraph = SpaceGraph(tuple(vertices), frozenset(pairs))
    qaction = GraphAction(qgraph, trivial_action(trivial_group(), vertices))
    e = qaction.group.identity
    f = EquivariantMap(gaction.groupoid, qaction.groupoid,
                       {g: e for g in act.group.elements}, dict(rep))
    return qaction, f
