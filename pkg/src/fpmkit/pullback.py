"""Pull a quotient matching back to windows as a radius-r local rule."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .canon import canonical_code
from .errors import ConsistencyError, InputError, NoInterior
from .graphs import FiniteGraph, RationalMatching, edge_ball, validate_fpm
from .periodic import PeriodicGraphSpec, complete_within, expand_window, full_degree
from .quotient import TypeTable

LABEL_BITS = 32
LABEL_GENERATOR = "python-random-mt19937-getrandbits32"


@dataclass(frozen=True)
class LocalRule:
    """Edge value as a function of the radius-``radius`` edge-ball code."""

    radius: int
    table: dict

    def __post_init__(self):
        for code, x in self.table.items():
            if not 0 <= x <= 1:
                raise InputError(f"rule value {x} outside [0,1]")

    def value(self, code: bytes):
        return self.table.get(code)


@dataclass(frozen=True)
class WindowMatching:
    radius: int
    values: dict
    boundary_undefined: tuple
    interior: tuple = field(default=())

    def matching(self) -> RationalMatching:
        return RationalMatching(self.values)


def make_local_rule(table: TypeTable, f_quotient) -> LocalRule:
    if not isinstance(f_quotient, RationalMatching):
        raise InputError("quotient solution is not a matching")
    if not validate_fpm(table.quotient, f_quotient).ok:
        raise InputError("quotient solution violates the weighted vertex equations")
    return LocalRule(table.radius, {c.code: f_quotient[f"e{i}"] for i, c in enumerate(table.edge_types)})


def apply_rule(spec: PeriodicGraphSpec, rule: LocalRule, box=None,
               window: FiniteGraph | None = None) -> WindowMatching:
    """Evaluate ``rule`` on every window edge with a complete edge ball.

    Edges whose radius-r edge ball leaves the window are reported as
    ``boundary_undefined``.  Every vertex whose radius-(r+1) ball is
    complete must then have value sum exactly 1.
    """
    if window is None:
        window = expand_window(spec, box)
    r = rule.radius
    full = full_degree(spec, window)
    complete = {v: complete_within(window, full, v, r) for v in window.vertices}
    interior = tuple(v for v in window.vertices if complete_within(window, full, v, r + 1))
    if not interior:
        raise NoInterior(f"window has no vertex with a complete radius-{r + 1} ball")
    values, undefined = {}, []
    for (x, y), eid in zip(window.edges, window.edge_ids()):
        if not (complete[x] and complete[y]):
            undefined.append(eid)
            continue
        val = rule.value(canonical_code(edge_ball(window, (x, y), r), r).code)
        if val is None:
            raise ConsistencyError(f"edge {eid} has an edge type missing from the rule")
        values[eid] = val
    for v in interior:
        s = sum((values[window.edge_id(v, w)] for w in window.neighbors(v)), Fraction(0))
        if s != 1:
            raise ConsistencyError(f"vertex {v} has value sum {s}, expected 1")
    return WindowMatching(r, values, tuple(undefined), interior)


def bernoulli_window(spec: PeriodicGraphSpec, box, seed) -> FiniteGraph:
    """Window with i.i.d. labels ``k / 2^32`` from a seeded Mersenne Twister."""
    w = expand_window(spec, box)
    rng = random.Random(seed)
    labels = {v: Fraction(rng.getrandbits(LABEL_BITS), 1 << LABEL_BITS) for v in w.vertices}
    return FiniteGraph(w.vertices, w.edges, coords=w.coords, labels=labels)


def _fingerprint(wm: WindowMatching) -> bytes:
    from .jsonio import dumps, window_matching_to_json
    return dumps(window_matching_to_json(wm)).encode()


def label_independence_check(spec, rule, box, seeds, applier=apply_rule):
    """``None`` if the rule output is identical across all labelled windows,
    otherwise ``(seed_a, seed_b)`` for the first pair that differs."""
    seeds = list(seeds)
    if len(seeds) < 2:
        raise InputError("need at least two seeds")
    ref = None
    for s in seeds:
        fp = _fingerprint(applier(spec, rule, box, window=bernoulli_window(spec, box, s)))
        if ref is None:
            ref = (s, fp)
        elif fp != ref[1]:
            return (ref[0], s)
    return None
