"""Z^d-periodic graphs given by a finite voltage presentation."""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InputError
from .graphs import FiniteGraph


@dataclass(frozen=True)
class Generator:
    """Edges ``(a, x) -- (b, x + shift)`` for every lattice point ``x``."""

    a: str
    b: str
    shift: tuple

    def reversed(self) -> "Generator":
        return Generator(self.b, self.a, tuple(-s for s in self.shift))


@dataclass(frozen=True)
class PeriodicGraphSpec:
    dim: int
    cells: tuple
    generators: tuple
    _incidence: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.dim < 0:
            raise InputError("dimension must be non-negative")
        cells = tuple(self.cells)
        if len(set(cells)) != len(cells):
            raise InputError("duplicate cell id")
        gens = tuple(g if isinstance(g, Generator) else Generator(g[0], g[1], tuple(g[2]))
                     for g in self.generators)
        order = {c: i for i, c in enumerate(cells)}
        seen = set()
        incidence = {c: [] for c in cells}
        for g in gens:
            if g.a not in order or g.b not in order:
                raise InputError(f"generator {g} uses an unknown cell")
            if len(g.shift) != self.dim or not all(isinstance(s, int) for s in g.shift):
                raise InputError(f"generator {g} shift must be {self.dim} integers")
            if g.a == g.b and not any(g.shift):
                raise InputError(f"generator {g} would create loops")
            key = min((order[g.a], order[g.b], g.shift), (order[g.b], order[g.a], g.reversed().shift))
            if key in seen:
                raise InputError(f"generator {g} duplicates another realized edge")
            seen.add(key)
            incidence[g.a].append((g.b, g.shift))
            incidence[g.b].append((g.a, g.reversed().shift))
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "_incidence", {c: tuple(v) for c, v in incidence.items()})

    def degree(self, cell) -> int:
        return len(self._incidence[cell])

    def neighbors(self, vertex) -> list:
        """Neighbours of ``(cell, x)`` in the infinite realized graph."""
        cell, x = vertex
        return [(b, tuple(xi + si for xi, si in zip(x, s))) for b, s in self._incidence[cell]]

    def max_shift(self) -> int:
        return max((abs(s) for g in self.generators for s in g.shift), default=0)

    def origin(self) -> tuple:
        return (0,) * self.dim


def vertex_name(cell, x) -> str:
    return f"{cell}[{','.join(map(str, x))}]"


def parse_box(text: str) -> tuple:
    """``"a..b,c..d"`` -> ``((a, b), (c, d))``; the empty string is the 0-d box."""
    text = text.strip()
    if not text:
        return ()
    box = []
    for part in text.split(","):
        try:
            lo, hi = part.split("..")
            box.append((int(lo), int(hi)))
        except ValueError:
            raise InputError(f"bad box interval {part!r}") from None
    return tuple(box)


def cube(dim: int, radius: int, center=None) -> tuple:
    center = center or (0,) * dim
    return tuple((c - radius, c + radius) for c in center)


def expand_window(spec: PeriodicGraphSpec, box) -> FiniteGraph:
    """Induced subgraph on ``cells x box``, ordered by cell then coordinate."""
    box = tuple(tuple(iv) for iv in box)
    if len(box) != spec.dim:
        raise InputError(f"box has {len(box)} axes, spec has dimension {spec.dim}")
    if any(lo > hi for lo, hi in box):
        raise InputError(f"empty box {box}")
    points = list(itertools.product(*(range(lo, hi + 1) for lo, hi in box)))
    inside = set(points)
    verts, coords = [], {}
    for c in spec.cells:
        for x in points:
            name = vertex_name(c, x)
            verts.append(name)
            coords[name] = (c, x)
    edges = []
    for c in spec.cells:
        for x in points:
            for g in spec.generators:
                if g.a != c:
                    continue
                y = tuple(xi + si for xi, si in zip(x, g.shift))
                if y in inside:
                    edges.append((vertex_name(c, x), vertex_name(g.b, y)))
    return FiniteGraph(tuple(verts), tuple(edges), coords=coords)


def full_degree(spec: PeriodicGraphSpec, window: FiniteGraph) -> set:
    """Window vertices whose whole infinite-graph neighbourhood is present."""
    return {v for v in window.vertices if window.degree(v) == spec.degree(window.coords[v][0])}


def complete_within(window: FiniteGraph, full: set, v, r: int) -> bool:
    """True iff the window's radius-``r`` ball at ``v`` equals the true ball.

    That holds exactly when every vertex at distance ``< r`` has full degree.
    """
    if r == 0:
        return True
    seen = {v}
    frontier = [v]
    for _ in range(r):
        nxt = []
        for u in frontier:
            if u not in full:
                return False
            for w in window.neighbors(u):
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return True


def infinite_spheres(spec: PeriodicGraphSpec, start, n_max: int) -> list:
    """Sizes of the distance spheres ``0..n_max`` around ``start``."""
    seen = {start}
    frontier = [start]
    sizes = [1]
    for _ in range(n_max):
        nxt = []
        for u in frontier:
            for w in spec.neighbors(u):
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
        sizes.append(len(frontier))
    return sizes


def isoperimetric_profile(spec: PeriodicGraphSpec, n_max: int, cell=None) -> list:
    """``(n, |outer boundary of B_n| / |B_n|)`` for balls at a fixed vertex.

    The boundary is the set of vertices outside ``B_n`` adjacent to it,
    i.e. the sphere of radius ``n + 1``.
    """
    if n_max < 0:
        raise InputError("n_max must be non-negative")
    cell = spec.cells[0] if cell is None else cell
    sizes = infinite_spheres(spec, (cell, spec.origin()), n_max + 1)
    out = []
    for n in range(n_max + 1):
        out.append((n, Fraction(sizes[n + 1], sum(sizes[:n + 1]))))
    return out
