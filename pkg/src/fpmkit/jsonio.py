"""JSON encodings of every exchanged object.  Rationals are ``"p/q"`` strings."""
from __future__ import annotations

import json
from fractions import Fraction

from .errors import InputError, ParseError
from .graphs import FiniteGraph, HalfEdgeGraph, RationalMatching, WeightedMultigraph
from .matching import FarkasCertificate
from .periodic import PeriodicGraphSpec


def frac(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_frac(s) -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise ParseError(f"expected a rational string, got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad rational {s!r}") from None


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from None


def _guard(fn):
    def wrapper(data, *args, **kwargs):
        try:
            return fn(data, *args, **kwargs)
        except ParseError:
            raise
        except (InputError, KeyError, TypeError, ValueError, AttributeError) as exc:
            raise ParseError(f"{fn.__name__}: {exc}") from None
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@_guard
def graph_from_json(data) -> HalfEdgeGraph:
    """``{"vertices", "edges", "half_edges"?, "labels"?}`` -> graph with half-edges."""
    verts = tuple(str(v) for v in data["vertices"])
    edges = tuple((str(u), str(v)) for u, v in data["edges"])
    labels = data.get("labels")
    if labels is not None:
        labels = {str(v): parse_frac(x) for v, x in labels.items()}
    base = FiniteGraph(verts, edges, labels=labels)
    half = {str(h["id"]): str(h["at"]) for h in data.get("half_edges", [])}
    if len(half) != len(data.get("half_edges", [])):
        raise ParseError("duplicate half-edge id")
    return HalfEdgeGraph(base, half)


def graph_to_json(g) -> dict:
    h = g if isinstance(g, HalfEdgeGraph) else HalfEdgeGraph(g, {})
    out = {"vertices": list(h.vertices), "edges": [list(e) for e in h.base.edges],
           "half_edges": [{"id": k, "at": v} for k, v in h.half_edges.items()]}
    if h.base.labels is not None:
        out["labels"] = {v: frac(x) for v, x in h.base.labels.items()}
    return out


@_guard
def multigraph_from_json(data) -> WeightedMultigraph:
    verts = tuple(str(v) for v in data["vertices"])
    edges = tuple(str(e["id"]) for e in data["edges"])
    ends = {str(e["id"]): tuple(str(v) for v in e["ends"]) for e in data["edges"]}
    weights = {}
    for w in data["weights"]:
        key = (str(w["v"]), str(w["e"]))
        if key in weights:
            raise ParseError(f"duplicate weight entry {key}")
        if isinstance(w["m"], bool) or not isinstance(w["m"], int):
            raise ParseError(f"weight {key} must be an integer")
        weights[key] = w["m"]
    return WeightedMultigraph(verts, edges, ends, weights)


def multigraph_to_json(g: WeightedMultigraph) -> dict:
    return {"vertices": list(g.vertices),
            "edges": [{"id": e, "ends": list(g.ends[e])} for e in g.edges],
            "weights": [{"v": v, "e": e, "m": g.weights[(v, e)]} for e in g.edges for v in g.ends[e]]}


@_guard
def spec_from_json(data) -> PeriodicGraphSpec:
    gens = []
    for g in data["generators"]:
        shift = g["shift"]
        if not all(isinstance(s, int) and not isinstance(s, bool) for s in shift):
            raise ParseError(f"shift {shift!r} must be integers")
        gens.append((str(g["from"]), str(g["to"]), tuple(shift)))
    dim = data["dim"]
    if isinstance(dim, bool) or not isinstance(dim, int):
        raise ParseError("dim must be an integer")
    return PeriodicGraphSpec(dim, tuple(str(c) for c in data["cells"]), tuple(gens))


def spec_to_json(spec: PeriodicGraphSpec) -> dict:
    return {"dim": spec.dim, "cells": list(spec.cells),
            "generators": [{"from": g.a, "to": g.b, "shift": list(g.shift)} for g in spec.generators]}


def matching_to_json(f: RationalMatching) -> dict:
    return {"values": {k: frac(v) for k, v in f.values.items()}}


@_guard
def matching_from_json(data) -> RationalMatching:
    return RationalMatching({str(k): parse_frac(v) for k, v in data["values"].items()})


def farkas_to_json(cert: FarkasCertificate) -> dict:
    return {"type": "farkas", "y": {v: frac(x) for v, x in cert.y.items()}}


@_guard
def farkas_from_json(data) -> FarkasCertificate:
    if data.get("type") != "farkas":
        raise ParseError("not a Farkas certificate")
    return FarkasCertificate({str(v): parse_frac(x) for v, x in data["y"].items()})


def solution_to_json(sol) -> dict:
    if isinstance(sol, FarkasCertificate):
        return {"feasible": False, "certificate": farkas_to_json(sol)}
    return {"feasible": True, "matching": matching_to_json(sol)}


def type_table_to_json(table) -> dict:
    return {
        "radius": table.radius,
        "stabilization": table.stabilization,
        "vertex_types": [{"id": f"v{i}", "code": c.hex} for i, c in enumerate(table.vertex_types)],
        "edge_types": [{"id": f"e{i}", "code": c.hex, "code_below": b.hex}
                       for i, (c, b) in enumerate(zip(table.edge_types, table.edge_codes_below))],
        "quotient": multigraph_to_json(table.quotient),
        "phi_V": dict(table.phi_V),
        "phi_E": {f"{a}--{b}": e for (a, b), e in table.phi_E.items()},
    }


def local_rule_to_json(rule) -> dict:
    return {"radius": rule.radius, "table": {code.hex(): frac(x) for code, x in rule.table.items()}}


@_guard
def local_rule_from_json(data):
    from .pullback import LocalRule
    radius = data["radius"]
    if isinstance(radius, bool) or not isinstance(radius, int):
        raise ParseError("rule radius must be an integer")
    return LocalRule(radius, {bytes.fromhex(k): parse_frac(v) for k, v in data["table"].items()})


def window_matching_to_json(wm) -> dict:
    return {"radius": wm.radius, "values": {k: frac(v) for k, v in wm.values.items()},
            "boundary_undefined": list(wm.boundary_undefined)}


@_guard
def tiling_from_json(data) -> dict:
    tiles = [[str(v) for v in t] for t in data["tiles"]]
    return {"tiles": tiles, "template": data.get("template")}


def theta_to_json(cert) -> dict:
    out = {"theta": None if cert.theta is None else frac(cert.theta), "kernel_size": cert.kernel_size}
    if cert.witness is not None:
        out["failure_witness"] = cert.witness
    return out
