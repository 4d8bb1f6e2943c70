import itertools
import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import FIXTURES
from fpmkit.errors import DomainError, InputError, NotTransitive, TilingError
from fpmkit.graphs import FiniteGraph, HalfEdgeGraph, RationalMatching, validate_fpm
from fpmkit.jsonio import graph_from_json
from fpmkit.matching import hall_check
from fpmkit.tiling import (automorphisms, average_over_automorphisms, extend_matching,
                           is_half_edge_transitive, theta_certificate, tile_matching, verify_tiling)
from gen import tiled_host
from oracles import brute_pms

F = Fraction
seeds = st.integers(0, 2**32 - 1)


def load(name):
    return graph_from_json(json.loads((FIXTURES / name).read_text()))


TWO_PATH = load("two_path_tile.json")
C4_TILE = load("c4_tile.json")


def cycle(n, prefix="c"):
    vs = tuple(f"{prefix}{i}" for i in range(n))
    return FiniteGraph(vs, tuple((vs[i], vs[(i + 1) % n]) for i in range(n)))


def brute_automorphisms(F_):
    """All (vertex, half-edge) permutation pairs preserving edges and attachments."""
    vs, hs = F_.vertices, tuple(F_.half_edges)
    edges = {frozenset(e) for e in F_.base.edges}
    out = []
    for pv in itertools.permutations(vs):
        phi = dict(zip(vs, pv))
        if {frozenset((phi[u], phi[v])) for u, v in F_.base.edges} != edges:
            continue
        for ph in itertools.permutations(hs):
            psi = dict(zip(hs, ph))
            if all(F_.half_edges[psi[h]] == phi[F_.half_edges[h]] for h in hs):
                out.append((phi, psi))
    return out


def image(F_, phi, psi, x):
    if x in psi:
        return psi[x]
    u, v = F_.ends(x)
    return F_.base.edge_id(phi[u], phi[v])


def tau_oracle(F_):
    """Direct evaluation of the tile formulas from brute-force matchings."""
    def key(pm):
        cover = {v: F_.rank(x) for x in pm for v in F_.ends(x)}
        return tuple(cover[v] for v in F_.vertices)

    pms = sorted(brute_pms(F_), key=key)
    elems = F_.elements
    tp = {x: F(0) for x in elems}
    for e in elems:
        M = next((m for m in pms if e in m), pms[0])
        for x in M:
            tp[x] += F(1, len(elems))
    group = brute_automorphisms(F_)
    return {x: sum(tp[image(F_, phi, psi, x)] for phi, psi in group) / len(group) for x in elems}


def test_automorphism_counts():
    assert len(automorphisms(TWO_PATH)) == 2
    assert len(automorphisms(cycle(4))) == 8
    lone = HalfEdgeGraph(FiniteGraph(("v",), ()), {"h1": "v", "h2": "v"})
    assert len(automorphisms(lone)) == 2
    for g in (TWO_PATH, C4_TILE, lone):
        assert len(automorphisms(g)) == len(brute_automorphisms(g))


def test_transitivity_examples():
    assert is_half_edge_transitive(TWO_PATH)[0]
    uvw = HalfEdgeGraph(FiniteGraph(("u", "v", "w"), (("u", "v"), ("v", "w"))), {"hu": "u", "hv": "v"})
    ok, orbits = is_half_edge_transitive(uvw)
    assert not ok and sorted(orbits) == [("hu",), ("hv",)]
    assert is_half_edge_transitive(cycle(4))[0]


def test_tile_matching_two_path():
    tau, c = tile_matching(TWO_PATH)
    uv = next(x for x in TWO_PATH.elements if not TWO_PATH.is_half_edge(x))
    assert tau[uv] == F(1, 3) and c == F(2, 3)
    assert all(tau[h] == F(2, 3) for h in TWO_PATH.half_edges)
    assert validate_fpm(TWO_PATH, tau).ok


def test_tile_matching_small_cases():
    single = HalfEdgeGraph(FiniteGraph(("v",), ()), {"h": "v"})
    assert tile_matching(single) == (RationalMatching({"h": 1}), 1)
    edge = FiniteGraph(("u", "v"), (("u", "v"),))
    tau, c = tile_matching(edge)
    assert tau.values == {"u--v": 1} and c is None


def test_tile_matching_c4_against_oracle():
    assert len(brute_pms(C4_TILE)) == 7
    tau, c = tile_matching(C4_TILE)
    assert tau.values == tau_oracle(C4_TILE)
    assert validate_fpm(C4_TILE, tau).ok
    assert {tau[h] for h in C4_TILE.half_edges} == {c}
    for phi, psi in brute_automorphisms(C4_TILE):
        assert all(tau[image(C4_TILE, phi, psi, x)] == tau[x] for x in C4_TILE.elements)


def test_tile_matching_errors():
    with pytest.raises(DomainError):
        tile_matching(cycle(3))
    uvw = HalfEdgeGraph(FiniteGraph(("u", "v", "w", "x"), (("u", "v"), ("v", "w"), ("w", "x"))),
                        {"hu": "u", "hv": "v"})
    with pytest.raises(NotTransitive) as exc:
        tile_matching(uvw)
    assert len(exc.value.orbits) == 2


def test_averaging_examples():
    c4 = cycle(4)
    pm = {"c0--c1": 1, "c2--c3": 1, "c1--c2": 0, "c0--c3": 0}
    assert set(average_over_automorphisms(c4, pm).values.values()) == {F(1, 2)}
    half = {x: F(1, 2) for x in c4.edge_ids()}
    assert average_over_automorphisms(c4, half).values == half
    uv = next(x for x in TWO_PATH.elements if not TWO_PATH.is_half_edge(x))
    tp = {uv: F(1, 3), **{h: F(2, 3) for h in TWO_PATH.half_edges}}
    assert average_over_automorphisms(TWO_PATH, tp).values == tp
    with pytest.raises(InputError):
        average_over_automorphisms(c4, {x: F(1) for x in c4.edge_ids()})


def test_verify_tiling_examples():
    c6 = cycle(6)
    t = verify_tiling(c6, [["c0", "c1"], ["c2", "c3"], ["c4", "c5"]], TWO_PATH)
    assert len(t.isos) == 3
    with pytest.raises(TilingError) as exc:
        verify_tiling(c6, [["c0", "c1", "c2"], ["c3", "c4", "c5"]], TWO_PATH)
    assert exc.value.tile == 0
    pairs = FiniteGraph(("a", "b", "c", "d"), (("a", "b"), ("c", "d")))
    dot = HalfEdgeGraph(FiniteGraph(("x",), ()), {"h": "x"})
    assert len(verify_tiling(pairs, [["a"], ["b"], ["c"], ["d"]], dot).isos) == 4


@pytest.mark.parametrize("tiles,witness", [
    ([["c0", "c1"], ["c1", "c2"], ["c3", "c4", "c5"]], 1),   # overlap
    ([["c0", "c1"], ["c2", "c3"]], None),                   # uncovered
    ([["c0", "c2"], ["c1", "c3"], ["c4", "c5"]], 0),         # disconnected
    ([["c0", "c1"], ["c2", "zz"], ["c3", "c4", "c5"]], 1),   # unknown vertex
])
def test_verify_tiling_failures(tiles, witness):
    with pytest.raises(TilingError) as exc:
        verify_tiling(cycle(6), tiles, TWO_PATH)
    assert exc.value.tile == witness


@pytest.mark.parametrize("n", [6, 8])
def test_extend_on_even_cycles(n):
    host = cycle(n)
    tiles = [[f"c{i}", f"c{i + 1}"] for i in range(0, n, 2)]
    tau, c = tile_matching(TWO_PATH)
    eta = extend_matching(verify_tiling(host, tiles, TWO_PATH), tau, c)
    for i in range(n):
        e = host.edge_id(f"c{i}", f"c{(i + 1) % n}")
        assert eta[e] == (F(1, 3) if i % 2 == 0 else F(2, 3))
    assert validate_fpm(host, eta).ok
    cert = theta_certificate(host, eta)
    assert cert.theta == F(1, 3) and cert.kernel_size == n and cert.ok


def test_extend_lone_edge_and_mismatch():
    edge = FiniteGraph(("u", "v"), (("u", "v"),))
    tau, c = tile_matching(edge)
    t = verify_tiling(edge, [["u", "v"]], edge)
    assert extend_matching(t, tau, c).values == {"u--v": 1}
    with pytest.raises(InputError):
        extend_matching(t, tile_matching(TWO_PATH)[0], F(2, 3))


def test_theta_vacuous_and_fault_injected():
    p4 = FiniteGraph(("a", "b", "c", "d"), (("a", "b"), ("b", "c"), ("c", "d")))
    cert = theta_certificate(p4, RationalMatching({"a--b": 1, "b--c": 0, "c--d": 1}))
    assert cert.vacuous and cert.ok and cert.theta is None
    c6 = cycle(6)
    eta = {e: F(1, 2) for e in c6.edge_ids()}
    eta["c1--c2"] = F(0)
    bad = theta_certificate(c6, RationalMatching(eta))
    assert not bad.ok and bad.witness == "c1--c2" and bad.theta == 0


@settings(max_examples=25)
@given(seeds, st.sampled_from(["path", "c4"]), st.integers(0, 1))
def test_random_tiled_hosts(seed, template, keep):
    rng = random.Random(seed)
    tiles = rng.randint(2, 12) if template == "path" else rng.randint(2, 6)
    host, parts, color = tiled_host(rng, template, tiles, keep)
    F_ = TWO_PATH if template == "path" else C4_TILE
    assert hall_check(host, color) is None
    tau, c = tile_matching(F_)
    eta = extend_matching(verify_tiling(host, parts, F_), tau, c)
    assert validate_fpm(host, eta).ok
    cert = theta_certificate(host, eta)
    assert cert.ok and cert.theta > 0
    if template == "path":
        assert cert.theta == F(1, 3)
