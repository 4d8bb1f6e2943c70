"""Type multigraph of a periodic graph, truncated at a working radius.

Vertex types are canonical codes of radius-``r`` rooted balls, edge types
canonical codes of radius-``r`` edge balls.  The weight ``m(v, e)`` is the
number of edges at a representative of ``v`` whose radius-``(r-1)`` edge
ball matches that of ``e``.  Lattice translations are automorphisms, so
one representative per cell sees every type.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .canon import CanonicalCode, canonical_code
from .errors import InputError, NotStabilized
from .graphs import FiniteGraph, WeightedMultigraph, ball, edge_ball
from .matching import interior_fpm
from .periodic import PeriodicGraphSpec, complete_within, cube, expand_window, full_degree, vertex_name

UNCERTIFIED = "uncertified"
HEURISTIC = "heuristic"


@dataclass(frozen=True)
class TypeTable:
    spec: PeriodicGraphSpec
    radius: int
    vertex_types: tuple
    edge_types: tuple
    quotient: WeightedMultigraph
    phi_V: dict
    phi_E: dict
    stabilization: str = UNCERTIFIED
    edge_codes_below: tuple = ()
    _vid: dict = field(init=False, repr=False, compare=False)
    _eid: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_vid", {c.code: f"v{i}" for i, c in enumerate(self.vertex_types)})
        object.__setattr__(self, "_eid", {c.code: f"e{i}" for i, c in enumerate(self.edge_types)})

    @property
    def weights(self) -> dict:
        return self.quotient.weights

    def vertex_type_of(self, code: CanonicalCode):
        return self._vid.get(code.code)

    def edge_type_of(self, code: CanonicalCode):
        return self._eid.get(code.code)

    def edge_code(self, type_id: str) -> CanonicalCode:
        return self.edge_types[int(type_id[1:])]


def _window_for(spec: PeriodicGraphSpec, r: int, origin=None) -> FiniteGraph:
    reach = (r + 2) * spec.max_shift()
    return expand_window(spec, cube(spec.dim, reach, origin))


def compute_types(spec: PeriodicGraphSpec, r: int, origin=None) -> TypeTable:
    """Radius-``r`` vertex/edge types, the quotient multigraph and weights."""
    if r < 1:
        raise InputError("working radius must be at least 1")
    origin = tuple(origin) if origin is not None else spec.origin()
    window = _window_for(spec, r, origin)
    reps = [vertex_name(c, origin) for c in spec.cells]

    vcode = {}

    def vertex_code(x):
        if x not in vcode:
            vcode[x] = canonical_code(ball(window, x, r), r)
        return vcode[x]

    vertex_types, vid = [], {}
    for x in reps:
        c = vertex_code(x)
        if c.code not in vid:
            vid[c.code] = f"v{len(vertex_types)}"
            vertex_types.append(c)

    edge_types, eid, below = [], {}, []
    rep_edges = {}
    code_below = {}
    for x in reps:
        for y in window.neighbors(x):
            pair = window.canonical_pair(x, y)
            if pair in rep_edges:
                continue
            c = canonical_code(edge_ball(window, pair, r), r)
            code_below[pair] = canonical_code(edge_ball(window, pair, r - 1), r - 1)
            if c.code not in eid:
                eid[c.code] = f"e{len(edge_types)}"
                edge_types.append(c)
                below.append(code_below[pair])
            rep_edges[pair] = eid[c.code]

    ends = {}
    for pair, e in rep_edges.items():
        if e not in ends:
            ends[e] = tuple(dict.fromkeys(vid[vertex_code(v).code] for v in pair))

    weights = {}
    rep_of_type = {}
    for x in reps:
        rep_of_type.setdefault(vid[vertex_code(x).code], x)
    for v, x in rep_of_type.items():
        counts = Counter(code_below[window.canonical_pair(x, y)].code for y in window.neighbors(x))
        for e, s in ends.items():
            if v in s:
                weights[(v, e)] = counts[below[int(e[1:])].code]

    quotient = WeightedMultigraph(tuple(vid.values()), tuple(ends), ends, weights)
    phi_V = {x: vid[c.code] for x, c in vcode.items()}
    return TypeTable(spec, r, tuple(vertex_types), tuple(edge_types), quotient,
                     phi_V, dict(rep_edges), UNCERTIFIED, tuple(below))


def _bijection(pairs):
    """Map from the finer to the coarser ids if it is a well-defined bijection."""
    forward, backward = {}, {}
    for fine, coarse in pairs:
        if forward.setdefault(fine, coarse) != coarse:
            return None
        if backward.setdefault(coarse, fine) != fine:
            return None
    return forward


def refines_bijectively(coarse: TypeTable, fine: TypeTable) -> bool:
    """Types at consecutive radii correspond one-to-one with equal weights."""
    vmap = _bijection((fine.phi_V[x], coarse.phi_V[x])
                      for x in fine.phi_V if x in coarse.phi_V)
    emap = _bijection((fine.phi_E[p], coarse.phi_E[p])
                      for p in fine.phi_E if p in coarse.phi_E)
    if vmap is None or emap is None:
        return False
    if len(vmap) != len(coarse.vertex_types) or len(emap) != len(coarse.edge_types):
        return False
    if len(fine.weights) != len(coarse.weights):
        return False
    for (v, e), k in fine.weights.items():
        if coarse.weights.get((vmap[v], emap[e])) != k:
            return False
    return True


def find_stable_radius(spec: PeriodicGraphSpec, r_max: int, k: int = 1):
    """Smallest ``r <= r_max`` whose types and weights persist through ``r + k``.

    Raises :class:`NotStabilized` if no such radius exists.  The result is
    a heuristic certificate, flagged as such on the returned table.
    """
    if r_max < 1 or k < 1:
        raise InputError("r_max and k must be at least 1")
    tables = {}

    def table(i):
        if i not in tables:
            tables[i] = compute_types(spec, i)
        return tables[i]

    for r in range(1, r_max + 1):
        if all(refines_bijectively(table(i), table(i + 1)) for i in range(r, r + k)):
            t = table(r)
            stable = TypeTable(spec, t.radius, t.vertex_types, t.edge_types, t.quotient,
                               t.phi_V, t.phi_E, HEURISTIC, t.edge_codes_below)
            return r, stable
    raise NotStabilized(f"types did not stabilize for r <= {r_max} with {k} confirmations; "
                        f"try a larger r_max")


@dataclass
class LemmaReport:
    interior: int = 0
    checks: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def fail(self, kind, vertex, **detail):
        self.violations.append({"check": kind, "vertex": vertex, **detail})


def interior_vertices(spec: PeriodicGraphSpec, window: FiniteGraph, r: int) -> list:
    full = full_degree(spec, window)
    return [v for v in window.vertices if complete_within(window, full, v, r)]


def verify_lemmas(table: TypeTable, window: FiniteGraph) -> LemmaReport:
    """Check the homomorphism and weighted-degree identities on a window.

    For every vertex ``x`` with a complete radius-``(r+1)`` ball: each edge
    type at ``x`` joins the types of its endpoints, the edge types at ``x``
    are exactly the quotient edges at its type, ``deg(x) = wdeg``, and each
    weight equals the number of edges at ``x`` of that type.
    """
    r = table.radius
    interior = interior_vertices(table.spec, window, r + 1)
    if not interior:
        raise InputError("window has no vertex with a complete radius-(r+1) ball")
    q = table.quotient
    report = LemmaReport(interior=len(interior))
    vtype, etype = {}, {}

    def vt(x):
        if x not in vtype:
            vtype[x] = table.vertex_type_of(canonical_code(ball(window, x, r), r))
        return vtype[x]

    def et(pair):
        if pair not in etype:
            etype[pair] = table.edge_type_of(canonical_code(edge_ball(window, pair, r), r))
        return etype[pair]

    for x in interior:
        v = vt(x)
        report.checks += 1
        if v is None:
            report.fail("vertex-type", x, detail="radius-r ball matches no vertex type")
            continue
        seen = Counter()
        for y in window.neighbors(x):
            e = et(window.canonical_pair(x, y))
            report.checks += 1
            if e is None:
                report.fail("edge-type", x, neighbor=y, detail="edge ball matches no edge type")
                continue
            seen[e] += 1
            expect = set(q.ends[e])
            got = {v, vt(y)}
            if got != expect:
                report.fail("endpoints", x, neighbor=y, edge_type=e,
                            expected=sorted(expect), got=sorted(map(str, got)))
        incident = set(q.incident(v))
        report.checks += 3
        if set(seen) != incident:
            report.fail("neighborhood", x, expected=sorted(incident), got=sorted(seen))
        if window.degree(x) != q.wdeg(v):
            report.fail("degree", x, degree=window.degree(x), wdeg=q.wdeg(v))
        for e in sorted(incident | set(seen)):
            if q.m(v, e) != seen[e]:
                report.fail("weight", x, edge_type=e, m=q.m(v, e), count=seen[e])
    return report


def quotient_fpm(spec: PeriodicGraphSpec, r_max: int = 4, k: int = 1):
    """Stable type table and an interior weighted FPM (or a Farkas certificate)."""
    _, table = find_stable_radius(spec, r_max, k)
    return table, interior_fpm(table.quotient)
