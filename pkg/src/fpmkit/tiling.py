"""Fractional perfect matchings of graphs tiled by a half-edge transitive tile.

A tile template ``F`` is a :class:`HalfEdgeGraph`.  Its matching ``tau``
averages one perfect matching per edge/half-edge and then averages over
``Aut(F)``; ``tau`` is constant (= ``c``) on half-edges, so copying it onto
every tile and putting ``c`` on cross-tile edges gives a fractional perfect
matching of the host.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import CapacityError, DomainError, InputError, NotTransitive, TilingError
from .graphs import (HalfEdgeGraph, RationalMatching, as_half_edge_graph,
                     distances, half_edge_id, induced_subgraph, validate_fpm)
from .matching import first_pm, matching_kernel, pm_with

AUT_LIMIT = 16


@dataclass(frozen=True)
class Automorphism:
    vertices: dict
    half_edges: dict

    def image(self, g: HalfEdgeGraph, x):
        if x in self.half_edges:
            return self.half_edges[x]
        u, v = g.ends(x)
        return g.base.edge_id(self.vertices[u], self.vertices[v])


@dataclass(frozen=True)
class AutGroup:
    graph: HalfEdgeGraph
    elements: tuple

    def __len__(self):
        return len(self.elements)


def _invariant(g: HalfEdgeGraph, v):
    return (g.base.degree(v), len(g.half_edges_at(v)))


def _vertex_isomorphisms(src: HalfEdgeGraph, dst: HalfEdgeGraph):
    """Yield adjacency- and half-edge-count-preserving bijections src -> dst."""
    sv, dv = src.vertices, dst.vertices
    if len(sv) != len(dv):
        return
    inv = {v: _invariant(dst, v) for v in dv}
    mapping, used = {}, set()

    def rec(i):
        if i == len(sv):
            yield dict(mapping)
            return
        v = sv[i]
        want = _invariant(src, v)
        for w in dv:
            if w in used or inv[w] != want:
                continue
            if all(src.base.has_edge(v, u) == dst.base.has_edge(w, mapping[u]) for u in sv[:i]):
                mapping[v] = w
                used.add(w)
                yield from rec(i + 1)
                used.discard(w)
                del mapping[v]

    yield from rec(0)


def automorphisms(F, limit: int = AUT_LIMIT) -> AutGroup:
    """Every automorphism of ``F`` as a (vertex, half-edge) permutation pair."""
    F = as_half_edge_graph(F)
    if len(F.vertices) > limit:
        raise CapacityError("automorphism search", len(F.vertices), limit)
    elements = []
    for vmap in _vertex_isomorphisms(F, F):
        per_vertex = [list(itertools.permutations(F.half_edges_at(vmap[v]))) for v in F.vertices]
        for choice in itertools.product(*per_vertex):
            hmap = {}
            for v, image in zip(F.vertices, choice):
                hmap.update(zip(F.half_edges_at(v), image))
            elements.append(Automorphism(vmap, hmap))
    return AutGroup(F, tuple(elements))


def half_edge_orbits(F, group: AutGroup | None = None) -> list:
    F = as_half_edge_graph(F)
    group = group or automorphisms(F)
    parent = {h: h for h in F.half_edges}

    def find(h):
        while parent[h] != h:
            parent[h] = parent[parent[h]]
            h = parent[h]
        return h

    for gamma in group.elements:
        for h, k in gamma.half_edges.items():
            a, b = find(h), find(k)
            if a != b:
                parent[max(a, b, key=F.rank)] = min(a, b, key=F.rank)
    orbits = {}
    for h in F.half_edges:
        orbits.setdefault(find(h), []).append(h)
    return [tuple(o) for o in orbits.values()]


def is_half_edge_transitive(F, group: AutGroup | None = None):
    """``(transitive, orbits)``; a template with no half-edges is transitive."""
    orbits = half_edge_orbits(F, group)
    return len(orbits) <= 1, orbits


def average_over_automorphisms(F, f, group: AutGroup | None = None) -> RationalMatching:
    """``(1/|Aut F|) sum_gamma f o gamma``, an Aut(F)-invariant FPM."""
    F = as_half_edge_graph(F)
    f = f if isinstance(f, RationalMatching) else RationalMatching(f)
    if not validate_fpm(F, f).ok:
        raise InputError("input is not a fractional perfect matching of the template")
    group = group or automorphisms(F)
    n = len(group)
    return RationalMatching({x: sum((f[g.image(F, x)] for g in group.elements), Fraction(0)) / n
                             for x in F.elements})


def tile_matching(F):
    """``(tau, c)`` for a half-edge transitive template ``F``.

    ``c`` is ``None`` when ``F`` has no half-edges.
    """
    F = as_half_edge_graph(F)
    fallback = first_pm(F)
    if fallback is None:
        raise DomainError("template has no perfect matching")
    group = automorphisms(F)
    transitive, orbits = is_half_edge_transitive(F, group)
    if not transitive:
        raise NotTransitive(orbits)
    elems = F.elements
    tau_prime = {x: Fraction(0) for x in elems}
    for e in elems:
        M = pm_with(F, e, include=True) or fallback
        for x in M.selected:
            tau_prime[x] += 1
    tau_prime = RationalMatching({x: v / len(elems) for x, v in tau_prime.items()})
    tau = average_over_automorphisms(F, tau_prime, group)
    values = {tau[h] for h in F.half_edges}
    if len(values) > 1:
        raise AssertionError("averaged matching is not constant on half-edges")
    c = values.pop() if values else None
    return tau, c


@dataclass(frozen=True)
class TileIso:
    vertices: dict    # host vertex -> template vertex
    half_edges: dict  # tile half-edge id -> template half-edge id
    host_elements: dict  # tile half-edge id -> host edge or half-edge id


@dataclass(frozen=True)
class Tiling:
    host: HalfEdgeGraph
    template: HalfEdgeGraph
    tiles: tuple
    isos: tuple

    def tile_of(self) -> dict:
        return {v: i for i, t in enumerate(self.tiles) for v in t}


def tile_with_half_edges(host: HalfEdgeGraph, tile):
    """``N_1/2(T)`` in a host with half-edges, plus where each half-edge came from."""
    T = set(tile)
    base = host.base
    sub = induced_subgraph(base, T)
    half, origin = {}, {}
    for (u, v), eid in zip(base.edges, base.edge_ids()):
        if (u in T) != (v in T):
            inside, outside = (u, v) if u in T else (v, u)
            h = half_edge_id(inside, outside)
            half[h] = inside
            origin[h] = eid
    for h, v in host.half_edges.items():
        if v in T:
            half[h] = v
            origin[h] = h
    return HalfEdgeGraph(sub, half), origin


def verify_tiling(host, tiles, F) -> Tiling:
    """Check a vertex partition and find one isomorphism per tile onto ``F``."""
    host = as_half_edge_graph(host)
    F = as_half_edge_graph(F)
    owner = {}
    for i, t in enumerate(tiles):
        for v in t:
            if v not in host.base:
                raise TilingError(f"tile {i} contains unknown vertex {v!r}", tile=i)
            if v in owner:
                raise TilingError(f"vertex {v!r} is in tiles {owner[v]} and {i}", tile=i)
            owner[v] = i
    uncovered = [v for v in host.vertices if v not in owner]
    if uncovered:
        raise TilingError(f"vertices {uncovered} are not covered by any tile")
    ordered, isos = [], []
    for i, t in enumerate(tiles):
        t = tuple(v for v in host.vertices if v in set(t))
        if not t:
            raise TilingError(f"tile {i} is empty", tile=i)
        sub = induced_subgraph(host.base, t)
        if len(distances(sub, [t[0]])) != len(t):
            raise TilingError(f"tile {i} is not connected", tile=i)
        tile_graph, origin = tile_with_half_edges(host, t)
        if (len(t), len(tile_graph.half_edges)) != (len(F.vertices), len(F.half_edges)):
            raise TilingError(f"tile {i} has {len(t)} vertices and {len(tile_graph.half_edges)} "
                              f"half-edges; template has {len(F.vertices)} and {len(F.half_edges)}",
                              tile=i)
        vmap = next(_vertex_isomorphisms(tile_graph, F), None)
        if vmap is None:
            raise TilingError(f"tile {i} is not isomorphic to the template", tile=i)
        hmap = {}
        for v in t:
            hmap.update(zip(tile_graph.half_edges_at(v), F.half_edges_at(vmap[v])))
        ordered.append(t)
        isos.append(TileIso(vmap, hmap, origin))
    return Tiling(host, F, tuple(ordered), tuple(isos))


def extend_matching(tiling: Tiling, tau: RationalMatching, c) -> RationalMatching:
    """Copy ``tau`` onto each tile via its isomorphism; cross-tile edges get ``c``."""
    F, host = tiling.template, tiling.host
    if set(tau.values) != set(F.elements):
        raise InputError("tau is not a matching of this tiling's template")
    owner = tiling.tile_of()
    eta = {}
    for (x, y), eid in zip(host.base.edges, host.base.edge_ids()):
        if owner[x] == owner[y]:
            vm = tiling.isos[owner[x]].vertices
            eta[eid] = tau[F.base.edge_id(vm[x], vm[y])]
        else:
            if c is None:
                raise InputError("template has no half-edges but the host has cross-tile edges")
            eta[eid] = Fraction(c)
    for h, v in host.half_edges.items():
        eta[h] = tau[tiling.isos[owner[v]].half_edges[h]]
    eta = RationalMatching(eta)
    check = validate_fpm(host, eta)
    if not check.ok:
        raise AssertionError(f"extended matching fails at {sorted(check.violations)}")
    return eta


@dataclass(frozen=True)
class ThetaCertificate:
    theta: Fraction | None
    kernel_size: int
    witness: str | None = None

    @property
    def vacuous(self) -> bool:
        return self.kernel_size == 0

    @property
    def ok(self) -> bool:
        return self.witness is None


def theta_certificate(host, eta: RationalMatching) -> ThetaCertificate:
    """``theta* = min over kernel elements of min(eta, 1 - eta)``."""
    host = as_half_edge_graph(host)
    report = matching_kernel(host)
    kernel = [x for x in host.elements if x in report.kernel]
    if not kernel:
        return ThetaCertificate(None, 0)
    theta = min(min(eta[x], 1 - eta[x]) for x in kernel)
    witness = next((x for x in kernel if eta[x] in (0, 1)), None)
    return ThetaCertificate(theta, len(kernel), witness)
