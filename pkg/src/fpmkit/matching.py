"""Exact matching algorithms on small graphs with half-edges and on
weighted multigraphs.

Perfect matchings are compared by their *mate vector*: the tuple, indexed
by vertices in canonical order, of the rank of the element covering each
vertex.  "Lexicographically least" always refers to that order, which is
also the order in which :func:`enumerate_pms` emits matchings.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction

from .errors import CapacityError, InputError
from .graphs import HalfEdgeGraph, RationalMatching, WeightedMultigraph, as_half_edge_graph
from .lp import ExactLP

DEFAULT_ENUM_LIMIT = 24
HALL_SUBSET_LIMIT = 20


def enum_limit() -> int:
    """Vertex cap for exhaustive matching searches (``FPMKIT_ENUM_LIMIT``)."""
    raw = os.environ.get("FPMKIT_ENUM_LIMIT")
    return int(raw) if raw else DEFAULT_ENUM_LIMIT


@dataclass(frozen=True)
class PerfectMatching:
    selected: frozenset

    def __contains__(self, x):
        return x in self.selected

    def indicator(self, g: HalfEdgeGraph) -> RationalMatching:
        return RationalMatching({x: Fraction(int(x in self.selected)) for x in g.elements})


@dataclass(frozen=True)
class KernelReport:
    kernel: frozenset
    forced: frozenset
    forbidden: frozenset
    pm_exists: bool


def _check_capacity(g: HalfEdgeGraph, what: str):
    limit = enum_limit()
    if len(g.vertices) > limit:
        raise CapacityError(what, len(g.vertices), limit)


def _search(g: HalfEdgeGraph, include=None, exclude=None, mrv=False):
    """Yield perfect matchings as tuples of element ids.

    With ``mrv=False`` the branching vertex is the first uncovered vertex
    and matchings come out in mate-vector order.  ``mrv=True`` branches on
    the most constrained vertex instead (existence queries only).
    """
    order = g.vertices
    covered = set()
    chosen = []
    if include is not None:
        ends = g.ends(include)
        covered.update(ends)
        chosen.append(include)

    def options(v):
        return [x for x in g.incident(v)
                if x != exclude and not any(w in covered for w in g.ends(x))]

    def rec():
        free = [v for v in order if v not in covered]
        if not free:
            yield tuple(chosen)
            return
        if mrv:
            best = None
            for v in free:
                opts = options(v)
                if not opts:
                    return
                if best is None or len(opts) < len(best[1]):
                    best = (v, opts)
            v, opts = best
        else:
            v = free[0]
            opts = options(v)
        for x in opts:
            ends = g.ends(x)
            covered.update(ends)
            chosen.append(x)
            yield from rec()
            chosen.pop()
            covered.difference_update(ends)

    yield from rec()


def _exists(g, include=None, exclude=None) -> bool:
    return next(_search(g, include, exclude, mrv=True), None) is not None


def enumerate_pms(g) -> list:
    """All perfect matchings of ``g``, in mate-vector order."""
    g = as_half_edge_graph(g)
    _check_capacity(g, "perfect matching enumeration")
    return [PerfectMatching(frozenset(m)) for m in _search(g)]


def pm_with(g, e, include: bool = True):
    """Least perfect matching containing (or avoiding) ``e``; ``None`` if none."""
    g = as_half_edge_graph(g)
    g.ends(e)
    _check_capacity(g, "perfect matching search")
    if include:
        found = next(_search(g, include=e), None)
    else:
        found = next(_search(g, exclude=e), None)
    return None if found is None else PerfectMatching(frozenset(found))


def first_pm(g):
    g = as_half_edge_graph(g)
    _check_capacity(g, "perfect matching search")
    found = next(_search(g), None)
    return None if found is None else PerfectMatching(frozenset(found))


def matching_kernel(g) -> KernelReport:
    """Partition edges and half-edges into kernel / forced / forbidden."""
    g = as_half_edge_graph(g)
    _check_capacity(g, "matching kernel")
    everything = frozenset(g.elements)
    if not _exists(g):
        return KernelReport(frozenset(), frozenset(), everything, False)
    kernel, forced, forbidden = set(), set(), set()
    for x in g.elements:
        with_x = _exists(g, include=x)
        without_x = _exists(g, exclude=x)
        if with_x and without_x:
            kernel.add(x)
        elif with_x:
            forced.add(x)
        else:
            forbidden.add(x)
    return KernelReport(frozenset(kernel), frozenset(forced), frozenset(forbidden), True)


def _neighbor_objects(g: HalfEdgeGraph, v):
    # adjacent vertices and half-edges at v are distinct neighbour objects
    return [("v", w) for w in g.base.neighbors(v)] + [("h", h) for h in g.half_edges_at(v)]


def _color_classes(g: HalfEdgeGraph, coloring):
    if set(coloring) != set(g.vertices):
        raise InputError("coloring must assign every vertex exactly once")
    colors = sorted(set(coloring.values()), key=repr)
    if len(colors) > 2:
        raise InputError(f"coloring uses {len(colors)} colors")
    for u, v in g.base.edges:
        if coloring[u] == coloring[v]:
            raise InputError(f"coloring is not proper on edge {(u, v)!r}")
    return [tuple(v for v in g.vertices if coloring[v] == c) for c in colors]


def _hall_by_subsets(g, classes):
    masks = {}
    objects = {}
    for side in classes:
        for v in side:
            m = 0
            for o in _neighbor_objects(g, v):
                m |= 1 << objects.setdefault(o, len(objects))
            masks[v] = m
    largest = max((len(s) for s in classes), default=0)
    for size in range(1, largest + 1):
        for side in classes:
            for S in itertools.combinations(side, size):
                m = 0
                for v in S:
                    m |= masks[v]
                if bin(m).count("1") < size:
                    return S
    return None


def _hall_by_augmenting(g, classes):
    for side in classes:
        adj = {v: _neighbor_objects(g, v) for v in side}
        mate_of = {}

        def augment(v, seen):
            for o in adj[v]:
                if o in seen:
                    continue
                seen.add(o)
                if o not in mate_of or augment(mate_of[o], seen):
                    mate_of[o] = v
                    return True
            return False

        for v in side:
            if not augment(v, set()):
                # alternating-path closure from v is a Hall violator
                S, frontier, seen_o = {v}, [v], set()
                while frontier:
                    u = frontier.pop()
                    for o in adj[u]:
                        if o not in seen_o:
                            seen_o.add(o)
                            w = mate_of.get(o)
                            if w is not None and w not in S:
                                S.add(w)
                                frontier.append(w)
                return tuple(x for x in side if x in S)
    return None


def hall_check(g, coloring, method: str = "auto"):
    """Return ``None`` if Hall's condition holds on both colour classes,
    otherwise a violating vertex set.

    Below :data:`HALL_SUBSET_LIMIT` vertices per side the witness is a
    smallest violator found by subset enumeration; above it the witness
    comes from an augmenting-path search and need not be smallest.
    """
    g = as_half_edge_graph(g)
    classes = _color_classes(g, coloring)
    if method == "auto":
        small = all(len(s) <= HALL_SUBSET_LIMIT for s in classes)
        method = "subsets" if small else "augmenting"
    if method == "subsets":
        return _hall_by_subsets(g, classes)
    if method == "augmenting":
        return _hall_by_augmenting(g, classes)
    raise InputError(f"unknown Hall method {method!r}")


@dataclass(frozen=True)
class FarkasCertificate:
    """Infeasibility witness ``y`` over vertices.

    With ``c = y^T M`` (``M[v][e] = m(v, e)``), every ``f`` in the unit box
    has ``y^T M f <= sum_e max(c_e, 0)``; the certificate is valid when that
    bound is strictly below ``sum_v y_v``, which ``M f = 1`` would require.
    """

    y: dict

    def verify(self, g: WeightedMultigraph) -> bool:
        if set(self.y) != set(g.vertices):
            return False
        total = sum(self.y.values(), Fraction(0))
        bound = Fraction(0)
        for e in g.edges:
            c = sum((self.y[v] * g.weights[(v, e)] for v in g.ends[e]), Fraction(0))
            bound += max(c, Fraction(0))
        return bound < total


def _box_system(g: WeightedMultigraph):
    n = len(g.edges)
    col = {e: j for j, e in enumerate(g.edges)}
    A, b = [], []
    for v in g.vertices:
        row = [Fraction(0)] * (2 * n)
        for e in g.incident(v):
            row[col[e]] = Fraction(g.weights[(v, e)])
        A.append(row)
        b.append(Fraction(1))
    for j in range(n):
        row = [Fraction(0)] * (2 * n)
        row[j] = row[n + j] = Fraction(1)
        A.append(row)
        b.append(Fraction(1))
    return A, b


def _solve_box(g: WeightedMultigraph):
    if not g.edges:
        if g.vertices:
            return None, FarkasCertificate({v: Fraction(1) for v in g.vertices})
        return None, None
    A, b = _box_system(g)
    lp = ExactLP(A, b)
    if not lp.feasible:
        y = dict(zip(g.vertices, lp.farkas[:len(g.vertices)]))
        return None, FarkasCertificate(y)
    return lp, None


def fpm_feasible(g: WeightedMultigraph):
    """A weighted fractional perfect matching, or a :class:`FarkasCertificate`."""
    lp, cert = _solve_box(g)
    if cert is not None:
        return cert
    if lp is None:
        return RationalMatching({})
    x = lp.point()
    return RationalMatching(dict(zip(g.edges, x)))


def interior_fpm(g: WeightedMultigraph):
    """Average of the per-edge maximisers and minimisers of the polytope.

    The result lies in the relative interior: every edge whose value is not
    fixed by the constraints gets a value strictly between its extremes.
    """
    lp, cert = _solve_box(g)
    if cert is not None:
        return cert
    if lp is None:
        return RationalMatching({})
    n = len(g.edges)
    total = [Fraction(0)] * n
    for j in range(n):
        c = [Fraction(0)] * (2 * n)
        c[j] = Fraction(1)
        for maximize in (True, False):
            x = lp.optimize(c, maximize=maximize)
            for i in range(n):
                total[i] += x[i]
    return RationalMatching({e: total[i] / (2 * n) for i, e in enumerate(g.edges)})
