"""Run every bundled fixture through the full pipelines."""
from __future__ import annotations

from importlib import resources
from pathlib import Path

from .errors import FpmError
from .graphs import validate_fpm
from .jsonio import graph_from_json, loads, matching_from_json, multigraph_from_json, parse_frac, spec_from_json
from .matching import FarkasCertificate, fpm_feasible, interior_fpm
from .periodic import cube, expand_window
from .pullback import apply_rule, label_independence_check, make_local_rule
from .quotient import find_stable_radius, verify_lemmas
from .tiling import extend_matching, theta_certificate, tile_matching, verify_tiling

MULTIGRAPH_FIXTURES = ("four_vertex_multigraph.json",)
SPEC_FIXTURES = ("z_path.json", "z2_grid.json", "ladder.json", "pendant_z.json", "double_pendant_z.json")
TILING_FIXTURES = (("c6_host.json", "c6_tiling.json"),)


def fixture_dir() -> Path:
    return Path(str(resources.files("fpmkit") / "fixtures"))


class _Checks:
    def __init__(self):
        self.items = []

    def add(self, name, ok, detail=None):
        entry = {"name": name, "ok": bool(ok)}
        if detail is not None:
            entry["detail"] = detail
        self.items.append(entry)
        return ok


def _load(base: Path, name):
    return loads((base / name).read_text(encoding="utf-8"))


def _check_multigraph(base, name, checks):
    data = _load(base, name)
    g = multigraph_from_json(data)
    published = matching_from_json(data["published_matching"])
    checks.add(f"{name}: published matching", validate_fpm(g, published).ok)
    expected = data["expected_degree"]
    bad = {v: g.wdeg(v) for v in g.vertices if g.wdeg(v) != expected[v]}
    checks.add(f"{name}: weighted degree equals graph degree", not bad,
               {v: f"wdeg {w} != degree {expected[v]}" for v, w in bad.items()} or None)
    sol = fpm_feasible(g)
    checks.add(f"{name}: feasible point", not isinstance(sol, FarkasCertificate) and validate_fpm(g, sol).ok)


def _check_spec(base, name, checks):
    data = _load(base, name)
    spec = spec_from_json(data)
    expect = data.get("expect", {})
    r, table = find_stable_radius(spec, 6, 1)
    counts = (len(table.vertex_types), len(table.edge_types))
    want = (expect.get("vertex_types", counts[0]), expect.get("edge_types", counts[1]))
    checks.add(f"{name}: stable types", counts == want, {"radius": r, "types": list(counts)})
    reach = (r + 1) * spec.max_shift() + 4 if spec.dim else 0
    box = cube(spec.dim, reach)
    report = verify_lemmas(table, expand_window(spec, box))
    checks.add(f"{name}: lemma checks", report.ok,
               {"interior": report.interior, "violations": report.violations[:3]})
    sol = interior_fpm(table.quotient)
    feasible = not isinstance(sol, FarkasCertificate)
    if not feasible:
        checks.add(f"{name}: Farkas certificate", sol.verify(table.quotient))
    checks.add(f"{name}: feasibility", feasible == expect.get("feasible", feasible))
    if feasible:
        rule = make_local_rule(table, sol)
        wm = apply_rule(spec, rule, box)
        checks.add(f"{name}: pullback", bool(wm.interior), {"interior": len(wm.interior)})
        checks.add(f"{name}: label independence",
                   label_independence_check(spec, rule, box, [0, 1, 2]) is None)


def _check_tiling(base, host_name, tiling_name, checks):
    host = graph_from_json(_load(base, host_name))
    tdata = _load(base, tiling_name)
    F = graph_from_json(_load(base, tdata["template"]))
    tau, c = tile_matching(F)
    tiling = verify_tiling(host, tdata["tiles"], F)
    eta = extend_matching(tiling, tau, c)
    checks.add(f"{tiling_name}: extended matching", validate_fpm(host, eta).ok)
    cert = theta_certificate(host, eta)
    detail = {"theta": None if cert.theta is None else str(cert.theta)}
    ok = cert.ok and (cert.vacuous or cert.theta > 0)
    if "expect_theta" in tdata:
        ok = ok and cert.theta == parse_frac(tdata["expect_theta"])
    checks.add(f"{tiling_name}: theta", ok, detail)


def run_selfcheck(directory=None) -> dict:
    base = Path(directory) if directory else fixture_dir()
    checks = _Checks()
    jobs = [(n, _check_multigraph, (n,)) for n in MULTIGRAPH_FIXTURES]
    jobs += [(n, _check_spec, (n,)) for n in SPEC_FIXTURES]
    jobs += [(t, _check_tiling, (h, t)) for h, t in TILING_FIXTURES]
    for name, fn, args in jobs:
        try:
            fn(base, *args, checks)
        except (FpmError, OSError, KeyError, TypeError, ValueError) as exc:
            checks.add(f"{name}: load/run", False, f"{type(exc).__name__}: {exc}")
    return {"ok": all(c["ok"] for c in checks.items), "checks": checks.items}
