"""Canonical codes for rooted and edge-rooted finite graphs.

The code is the lexicographically least adjacency list over all leaves of
an individualization/refinement search tree whose initial colouring is the
distance to the root (or to the distinguished edge).  Because refinement
and individualization are isomorphism invariant, two inputs get equal codes
iff they are isomorphic as rooted (edge-rooted) graphs.  Branches are
pruned with automorphisms found along the way and with twin vertices.
"""
from __future__ import annotations

import struct
from collections import deque
from dataclasses import dataclass

from .errors import InputError
from .graphs import FiniteGraph

ROOTED = "rooted"
EDGE_ROOTED = "edge-rooted"


@dataclass(frozen=True)
class CanonicalCode:
    code: bytes
    radius: int
    kind: str

    @property
    def hex(self) -> str:
        return self.code.hex()

    def __repr__(self):
        return f"CanonicalCode({self.kind}, r={self.radius}, {self.hex[:16]}...)"


def _rank(signatures):
    order = {s: i for i, s in enumerate(sorted(set(signatures)))}
    return [order[s] for s in signatures]


def _refine(adj, colors):
    ncls = len(set(colors))
    while True:
        sigs = [(colors[v], tuple(sorted(colors[u] for u in adj[v]))) for v in range(len(adj))]
        new = _rank(sigs)
        k = len(set(new))
        if k == ncls:
            return new
        colors, ncls = new, k


def _individualize(colors, v):
    c = colors[v]
    return _rank([2 * x + (1 if (x == c and w != v) else 0) for w, x in enumerate(colors)])


def _orbits(n, generators):
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for gamma in generators:
        for a, b in enumerate(gamma):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    return find


class _Search:
    def __init__(self, adj):
        self.adj = adj
        self.nbr = [frozenset(a) for a in adj]
        self.best = None
        self.seen = {}
        self.autos = []

    def leaf(self, colors):
        cert = tuple(sorted((min(colors[u], colors[v]), max(colors[u], colors[v]))
                            for u in range(len(self.adj)) for v in self.adj[u] if u < v))
        labeling = tuple(colors)
        other = self.seen.get(cert)
        if other is not None:
            inverse = [0] * len(labeling)
            for v, lab in enumerate(other):
                inverse[lab] = v
            self.autos.append(tuple(inverse[labeling[v]] for v in range(len(labeling))))
        else:
            self.seen[cert] = labeling
        if self.best is None or cert < self.best:
            self.best = cert

    def _twin(self, u, v):
        return self.nbr[u] - {v} == self.nbr[v] - {u}

    def run(self, colors, prefix=()):
        n = len(colors)
        cells = {}
        for v, c in enumerate(colors):
            cells.setdefault(c, []).append(v)
        target = next((cells[c] for c in sorted(cells) if len(cells[c]) > 1), None)
        if target is None:
            self.leaf(colors)
            return
        explored = []
        for v in target:
            if any(self._twin(u, v) for u in explored):
                continue
            if explored:
                stab = [g for g in self.autos if all(g[p] == p for p in prefix)]
                if stab:
                    find = _orbits(n, stab)
                    rv = find(v)
                    if any(find(u) == rv for u in explored):
                        continue
            explored.append(v)
            self.run(_refine(self.adj, _individualize(colors, v)), prefix + (v,))


def _encode(kind, n, cert) -> bytes:
    head = struct.pack(">BHH", 0 if kind == ROOTED else 1, n, len(cert))
    return head + b"".join(struct.pack(">HH", a, b) for a, b in cert)


def canonical_code(g: FiniteGraph, r: int) -> CanonicalCode:
    """Canonical code of a rooted (``g.root``) or edge-rooted (``g.marked``) graph."""
    if g.root is not None:
        kind, sources = ROOTED, [g.root]
    elif g.marked is not None:
        kind, sources = EDGE_ROOTED, list(g.marked)
    else:
        raise InputError("canonical_code needs a root vertex or a distinguished edge")
    idx = {v: i for i, v in enumerate(g.vertices)}
    n = len(idx)
    adj = [[idx[u] for u in g.neighbors(v)] for v in g.vertices]
    dist = [n + 1] * n
    queue = deque()
    for s in sources:
        dist[idx[s]] = 0
        queue.append(idx[s])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if dist[w] > dist[u] + 1:
                dist[w] = dist[u] + 1
                queue.append(w)
    search = _Search(adj)
    search.run(_refine(adj, _rank(dist)))
    return CanonicalCode(_encode(kind, n, search.best), r, kind)
