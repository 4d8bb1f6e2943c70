"""Finite graphs, graphs with half-edges and half-edge weighted multigraphs.

All containers are immutable after construction.  Vertex, edge and
half-edge ids are opaque strings; the declared vertex order is the
canonical order used for iteration, edge endpoint order and tie breaking.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import InputError

EDGE_SEP = "--"


def _freeze(obj, name, value):
    object.__setattr__(obj, name, value)


@dataclass(frozen=True)
class FiniteGraph:
    """A finite simple graph.

    ``coords`` maps a vertex to ``(cell, lattice position)`` when the graph
    is a window of a periodic graph.  ``root`` / ``marked`` record the
    distinguished vertex or edge of a ball.
    """

    vertices: tuple
    edges: tuple
    coords: Mapping | None = None
    labels: Mapping | None = None
    root: str | None = None
    marked: tuple | None = None
    _index: dict = field(init=False, repr=False, compare=False)
    _adj: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        verts = tuple(self.vertices)
        index = {}
        for v in verts:
            if v in index:
                raise InputError(f"duplicate vertex {v!r}")
            index[v] = len(index)
        adj = {v: [] for v in verts}
        canon = set()
        for e in self.edges:
            u, v = e
            if u not in index or v not in index:
                raise InputError(f"edge {e!r} has an undeclared endpoint")
            if u == v:
                raise InputError(f"self-loop at {u!r}")
            pair = (u, v) if index[u] < index[v] else (v, u)
            if pair in canon:
                raise InputError(f"duplicate edge {pair!r}")
            canon.add(pair)
            adj[u].append(v)
            adj[v].append(u)
        edges = tuple(sorted(canon, key=lambda p: (index[p[0]], index[p[1]])))
        if self.labels is not None:
            labels = {v: Fraction(x) for v, x in self.labels.items()}
            for v, x in labels.items():
                if v not in index:
                    raise InputError(f"label on unknown vertex {v!r}")
                if not 0 <= x <= 1:
                    raise InputError(f"label {x} at {v!r} outside [0,1]")
            _freeze(self, "labels", labels)
        if self.root is not None and self.root not in index:
            raise InputError(f"root {self.root!r} is not a vertex")
        if self.marked is not None:
            m = tuple(self.marked)
            if len(m) != 2 or not all(x in index for x in m):
                raise InputError(f"marked edge {self.marked!r} is not an edge")
            m = m if index[m[0]] < index[m[1]] else (m[1], m[0])
            if m not in canon:
                raise InputError(f"marked edge {self.marked!r} is not an edge")
            _freeze(self, "marked", m)
        _freeze(self, "vertices", verts)
        _freeze(self, "edges", edges)
        _freeze(self, "_index", index)
        _freeze(self, "_adj", {v: tuple(sorted(ns, key=index.__getitem__)) for v, ns in adj.items()})

    def __contains__(self, v):
        return v in self._index

    def index(self, v) -> int:
        return self._index[v]

    def neighbors(self, v) -> tuple:
        try:
            return self._adj[v]
        except KeyError:
            raise InputError(f"unknown vertex {v!r}") from None

    def degree(self, v) -> int:
        return len(self.neighbors(v))

    def canonical_pair(self, u, v) -> tuple:
        if u not in self._index or v not in self._index:
            raise InputError(f"unknown edge {(u, v)!r}")
        return (u, v) if self._index[u] < self._index[v] else (v, u)

    def has_edge(self, u, v) -> bool:
        return u in self._adj and v in self._adj[u]

    def edge_id(self, u, v) -> str:
        a, b = self.canonical_pair(u, v)
        return f"{a}{EDGE_SEP}{b}"

    def edge_ids(self) -> tuple:
        return tuple(f"{a}{EDGE_SEP}{b}" for a, b in self.edges)


@dataclass(frozen=True)
class HalfEdgeGraph:
    """A finite graph plus dangling half-edges, ``half_edges[h]`` = vertex."""

    base: FiniteGraph
    half_edges: Mapping = field(default_factory=dict)
    _elements: tuple = field(init=False, repr=False, compare=False)
    _ends: dict = field(init=False, repr=False, compare=False)
    _incident: dict = field(init=False, repr=False, compare=False)
    _rank: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        g = self.base
        eids = g.edge_ids()
        ends = dict(zip(eids, g.edges))
        for h, v in self.half_edges.items():
            if v not in g:
                raise InputError(f"half-edge {h!r} assigned to unknown vertex {v!r}")
            if h in ends:
                raise InputError(f"half-edge id {h!r} collides with an edge id")
        hs = sorted(self.half_edges, key=lambda h: (g.index(self.half_edges[h]), h))
        half = {h: self.half_edges[h] for h in hs}
        for h in hs:
            ends[h] = (half[h],)
        elements = tuple(eids) + tuple(hs)
        incident = {v: [] for v in g.vertices}
        for x in elements:
            for v in ends[x]:
                incident[v].append(x)
        _freeze(self, "half_edges", half)
        _freeze(self, "_elements", elements)
        _freeze(self, "_ends", ends)
        _freeze(self, "_incident", {v: tuple(xs) for v, xs in incident.items()})
        _freeze(self, "_rank", {x: i for i, x in enumerate(elements)})

    @property
    def vertices(self) -> tuple:
        return self.base.vertices

    @property
    def edges(self) -> tuple:
        return self.base.edge_ids()

    @property
    def elements(self) -> tuple:
        """Edge ids in canonical order followed by half-edge ids."""
        return self._elements

    def is_half_edge(self, x) -> bool:
        return x in self.half_edges

    def ends(self, x) -> tuple:
        try:
            return self._ends[x]
        except KeyError:
            raise InputError(f"unknown edge or half-edge {x!r}") from None

    def incident(self, v) -> tuple:
        try:
            return self._incident[v]
        except KeyError:
            raise InputError(f"unknown vertex {v!r}") from None

    def rank(self, x) -> int:
        return self._rank[x]

    def half_edges_at(self, v) -> tuple:
        return tuple(x for x in self.incident(v) if x in self.half_edges)


@dataclass(frozen=True)
class WeightedMultigraph:
    """Multigraph with loops and a half-edge weighting ``m(v, e) >= 1``."""

    vertices: tuple
    edges: tuple
    ends: Mapping
    weights: Mapping
    _incident: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        verts = tuple(self.vertices)
        edges = tuple(self.edges)
        if len(set(verts)) != len(verts):
            raise InputError("duplicate multigraph vertex")
        if len(set(edges)) != len(edges):
            raise InputError("duplicate multigraph edge")
        vset = set(verts)
        ends = {}
        for e in edges:
            if e not in self.ends:
                raise InputError(f"edge {e!r} has no endpoints")
            s = tuple(dict.fromkeys(self.ends[e]))
            if not 1 <= len(s) <= 2 or not set(s) <= vset:
                raise InputError(f"edge {e!r} has invalid endpoints {self.ends[e]!r}")
            ends[e] = s
        if set(self.ends) - set(edges):
            raise InputError("endpoints given for undeclared edges")
        weights = {}
        for (v, e), k in self.weights.items():
            if e not in ends or v not in ends[e]:
                raise InputError(f"weight m({v!r},{e!r}) on a non-incident pair")
            if int(k) != k or k < 1:
                raise InputError(f"weight m({v!r},{e!r}) = {k!r} is not a positive integer")
            weights[(v, e)] = int(k)
        incident = {v: [] for v in verts}
        for e in edges:
            for v in ends[e]:
                if (v, e) not in weights:
                    raise InputError(f"missing weight m({v!r},{e!r})")
                incident[v].append(e)
        _freeze(self, "vertices", verts)
        _freeze(self, "edges", edges)
        _freeze(self, "ends", ends)
        _freeze(self, "weights", weights)
        _freeze(self, "_incident", {v: tuple(es) for v, es in incident.items()})

    @classmethod
    def from_graph(cls, g: FiniteGraph) -> "WeightedMultigraph":
        """View a simple graph as a multigraph with unit weights."""
        eids = g.edge_ids()
        ends = dict(zip(eids, g.edges))
        weights = {(v, e): 1 for e in eids for v in ends[e]}
        return cls(g.vertices, eids, ends, weights)

    def incident(self, v) -> tuple:
        try:
            return self._incident[v]
        except KeyError:
            raise InputError(f"unknown vertex {v!r}") from None

    def m(self, v, e) -> int:
        return self.weights.get((v, e), 0)

    def wdeg(self, v) -> int:
        return sum(self.weights[(v, e)] for e in self.incident(v))


@dataclass(frozen=True)
class RationalMatching:
    """Exact rational values on edges (and half-edges)."""

    values: Mapping

    def __post_init__(self):
        vals = {}
        for k, x in self.values.items():
            q = Fraction(x)
            if not 0 <= q <= 1:
                raise InputError(f"value {q} on {k!r} outside [0,1]")
            vals[k] = q
        _freeze(self, "values", vals)

    def __getitem__(self, key) -> Fraction:
        return self.values[key]

    def __len__(self):
        return len(self.values)

    def restrict(self, keys: Iterable) -> "RationalMatching":
        return RationalMatching({k: self.values[k] for k in keys})


@dataclass(frozen=True)
class FpmCheck:
    """Outcome of :func:`validate_fpm`: per-vertex sums and the failures."""

    sums: dict
    violations: dict

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def neighbors(g: FiniteGraph, v) -> set:
    return set(g.neighbors(v))


def distances(g: FiniteGraph, sources: Iterable, limit: int | None = None) -> dict:
    """BFS distances from ``sources``; vertices beyond ``limit`` are omitted."""
    dist = {}
    queue = deque()
    for s in sources:
        if s not in g:
            raise InputError(f"unknown vertex {s!r}")
        if s not in dist:
            dist[s] = 0
            queue.append(s)
    while queue:
        u = queue.popleft()
        d = dist[u]
        if limit is not None and d >= limit:
            continue
        for w in g.neighbors(u):
            if w not in dist:
                dist[w] = d + 1
                queue.append(w)
    return dist


def induced_subgraph(g: FiniteGraph, keep: Iterable, root=None, marked=None) -> FiniteGraph:
    keep = set(keep)
    for v in keep:
        if v not in g:
            raise InputError(f"unknown vertex {v!r}")
    verts = tuple(v for v in g.vertices if v in keep)
    edges = tuple(e for e in g.edges if e[0] in keep and e[1] in keep)
    coords = None if g.coords is None else {v: g.coords[v] for v in verts}
    labels = None if g.labels is None else {v: g.labels[v] for v in verts if v in g.labels}
    return FiniteGraph(verts, edges, coords=coords, labels=labels, root=root, marked=marked)


def ball(g: FiniteGraph, v, n: int) -> FiniteGraph:
    """Induced subgraph on the vertices within distance ``n`` of ``v``."""
    if n < 0:
        raise InputError("radius must be non-negative")
    if v not in g:
        raise InputError(f"unknown vertex {v!r}")
    return induced_subgraph(g, distances(g, [v], n), root=v)


def edge_ball(g: FiniteGraph, e, n: int) -> FiniteGraph:
    """Induced subgraph on ``B_n(x) | B_n(y)`` for the edge ``e = (x, y)``."""
    if n < 0:
        raise InputError("radius must be non-negative")
    x, y = e
    if not g.has_edge(x, y):
        raise InputError(f"unknown edge {e!r}")
    return induced_subgraph(g, distances(g, [x, y], n), marked=(x, y))


def half_edge_id(inside, outside) -> str:
    return f"{inside}>{outside}"


def induced_with_half_edges(g: FiniteGraph, S: Iterable) -> HalfEdgeGraph:
    """``N_1/2(S)``: the induced graph on S plus one half-edge per boundary edge."""
    S = set(S)
    missing = [v for v in S if v not in g]
    if missing:
        raise InputError(f"vertices {sorted(map(str, missing))} are not in the graph")
    sub = induced_subgraph(g, S)
    half = {}
    for u, v in g.edges:
        if (u in S) != (v in S):
            inside, outside = (u, v) if u in S else (v, u)
            half[half_edge_id(inside, outside)] = inside
    return HalfEdgeGraph(sub, half)


def as_half_edge_graph(g) -> HalfEdgeGraph:
    return g if isinstance(g, HalfEdgeGraph) else HalfEdgeGraph(g, {})


def validate_fpm(g, f: RationalMatching) -> FpmCheck:
    """Check the vertex equations of a fractional perfect matching exactly.

    For a :class:`WeightedMultigraph` the equation at ``v`` is
    ``sum_e m(v, e) f(e) = 1`` with each loop counted once; for graphs
    (with half-edges) it is ``sum f = 1`` over incident edges and half-edges.
    """
    values = f.values if isinstance(f, RationalMatching) else RationalMatching(f).values
    if isinstance(g, WeightedMultigraph):
        domain = set(g.edges)
        if set(values) != domain:
            raise InputError(_domain_message(domain, values))
        sums = {v: sum((g.weights[(v, e)] * values[e] for e in g.incident(v)), Fraction(0))
                for v in g.vertices}
    else:
        h = as_half_edge_graph(g)
        domain = set(h.elements)
        if set(values) != domain:
            raise InputError(_domain_message(domain, values))
        sums = {v: sum((values[x] for x in h.incident(v)), Fraction(0)) for v in h.vertices}
    violations = {v: s for v, s in sums.items() if s != 1}
    return FpmCheck(sums, violations)


def _domain_message(domain, values):
    missing = sorted(map(str, domain - set(values)))
    extra = sorted(map(str, set(values) - domain))
    return f"matching domain mismatch: missing {missing}, unexpected {extra}"
