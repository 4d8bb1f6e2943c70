"""``fpmkit`` command-line interface.

Every command prints one deterministic JSON report.  Exit codes:
0 ok, 1 self-check failure, 2 parse/usage error, 3 not stabilized,
4 infeasible, 5 window without interior, 6 invalid tiling,
7 template not half-edge transitive.
"""
from __future__ import annotations

import argparse
import hashlib
import sys
from pathlib import Path

from . import __version__
from .errors import (CapacityError, ConsistencyError, DomainError, InputError, NoInterior,
                     NotStabilized, NotTransitive, ParseError, TilingError)
from .graphs import validate_fpm
from .jsonio import (dumps, frac, graph_from_json, local_rule_from_json, local_rule_to_json, loads,
                     multigraph_from_json, multigraph_to_json, solution_to_json, spec_from_json,
                     theta_to_json, tiling_from_json, type_table_to_json, window_matching_to_json)
from .matching import FarkasCertificate, interior_fpm
from .periodic import expand_window, parse_box
from .pullback import LABEL_GENERATOR, apply_rule, bernoulli_window, make_local_rule
from .quotient import compute_types, find_stable_radius
from .tiling import extend_matching, theta_certificate, tile_matching, verify_tiling

EXIT_OK, EXIT_SELFCHECK, EXIT_PARSE, EXIT_UNSTABLE = 0, 1, 2, 3
EXIT_INFEASIBLE, EXIT_NO_INTERIOR, EXIT_TILING, EXIT_NOT_TRANSITIVE = 4, 5, 6, 7
DEFAULT_RMAX = 6


class CommandFailed(Exception):
    def __init__(self, code, message, results=None):
        self.code = code
        self.results = results
        super().__init__(message)


class Inputs:
    """Reads input files and records their digests for the report."""

    def __init__(self):
        self.digests = {}

    def read(self, path) -> object:
        p = Path(path)
        try:
            raw = p.read_bytes()
        except OSError as exc:
            raise ParseError(f"cannot read {path}: {exc.strerror}") from None
        self.digests[str(path)] = hashlib.sha256(raw).hexdigest()
        try:
            return loads(raw.decode("utf-8"))
        except UnicodeDecodeError:
            raise ParseError(f"{path} is not UTF-8") from None


def _report(argv, inputs, results):
    return {"tool": "fpmkit", "version": __version__, "command": list(argv),
            "inputs": dict(sorted(inputs.digests.items())), "exact": True, "results": results}


def _table(spec, radius, confirm):
    if radius == "auto":
        _, table = find_stable_radius(spec, DEFAULT_RMAX, confirm)
        return table
    try:
        r = int(radius)
    except ValueError:
        raise ParseError(f"--radius must be 'auto' or an integer, got {radius!r}") from None
    return compute_types(spec, r)


def _solve(g):
    sol = interior_fpm(g)
    out = solution_to_json(sol)
    if isinstance(sol, FarkasCertificate):
        out["certificate_verified"] = sol.verify(g)
    else:
        out["validated"] = validate_fpm(g, sol).ok
    return sol, out


def _solve_spec(spec, args):
    table = _table(spec, args.radius, args.confirm)
    sol, out = _solve(table.quotient)
    results = {"type_table": type_table_to_json(table), "solution": out}
    if not isinstance(sol, FarkasCertificate):
        results["rule"] = local_rule_to_json(make_local_rule(table, sol))
    return table, sol, results


def cmd_quotient(args, inputs):
    spec = spec_from_json(inputs.read(args.spec))
    table = _table(spec, args.radius, args.confirm)
    return {"type_table": type_table_to_json(table)}, EXIT_OK


def cmd_solve(args, inputs):
    data = inputs.read(args.input)
    if isinstance(data, dict) and "generators" in data:
        _, sol, results = _solve_spec(spec_from_json(data), args)
    else:
        if isinstance(data, dict) and "results" in data and "type_table" in data["results"]:
            data = data["results"]["type_table"]
        if isinstance(data, dict) and "quotient" in data:
            data = data["quotient"]
        g = multigraph_from_json(data)
        sol, out = _solve(g)
        results = {"multigraph": multigraph_to_json(g), "solution": out}
    if isinstance(sol, FarkasCertificate):
        return results, EXIT_INFEASIBLE
    return results, EXIT_OK


def _load_rule(data):
    if isinstance(data, dict) and "results" in data:
        data = data["results"]
    if isinstance(data, dict) and "rule" in data:
        data = data["rule"]
    if not isinstance(data, dict) or "table" not in data:
        raise ParseError("solution file carries no local rule (infeasible quotient?)")
    return local_rule_from_json(data)


def cmd_pullback(args, inputs):
    spec = spec_from_json(inputs.read(args.spec))
    if args.solution:
        rule = _load_rule(inputs.read(args.solution))
    else:
        _, sol, results = _solve_spec(spec, args)
        if isinstance(sol, FarkasCertificate):
            raise CommandFailed(EXIT_INFEASIBLE, "quotient admits no fractional perfect matching", results)
        rule = local_rule_from_json(results["rule"])
    box = parse_box(args.box)
    window = bernoulli_window(spec, box, args.seed) if args.seed is not None else None
    wm = apply_rule(spec, rule, box, window=window)
    results = {"window_matching": window_matching_to_json(wm), "interior_vertices": len(wm.interior),
               "interior_sums_verified": True}
    if args.seed is not None:
        results["labels"] = {"seed": args.seed, "generator": LABEL_GENERATOR, "denominator": "2^32"}
    if args.dot:
        from .dot import matching_dot
        Path(args.dot).write_text(matching_dot(window or expand_window(spec, box), wm.values))
    return results, EXIT_OK


def cmd_tile(args, inputs):
    host = graph_from_json(inputs.read(args.host))
    tiling = tiling_from_json(inputs.read(args.tiling))
    template_path = args.template
    if template_path is None:
        if not tiling["template"]:
            raise ParseError("no template given on the command line or in the tiling file")
        template_path = str(Path(args.tiling).parent / tiling["template"])
    F = graph_from_json(inputs.read(template_path))
    try:
        tau, c = tile_matching(F)
    except NotTransitive as exc:
        raise CommandFailed(EXIT_NOT_TRANSITIVE, str(exc),
                            {"orbits": [list(o) for o in exc.orbits]}) from None
    except DomainError as exc:
        raise CommandFailed(EXIT_TILING, str(exc)) from None
    try:
        t = verify_tiling(host, tiling["tiles"], F)
    except TilingError as exc:
        raise CommandFailed(EXIT_TILING, str(exc), {"witness_tile": exc.tile}) from None
    eta = extend_matching(t, tau, c)
    cert = theta_certificate(t.host, eta)
    results = {"tau": {k: frac(v) for k, v in tau.values.items()},
               "c": None if c is None else frac(c),
               "eta": {k: frac(v) for k, v in eta.values.items()},
               "certificate": theta_to_json(cert),
               "isos": [{"vertices": iso.vertices, "half_edges": iso.half_edges} for iso in t.isos]}
    if args.dot:
        from .dot import matching_dot
        Path(args.dot).write_text(matching_dot(t.host.base, eta.values))
    return results, EXIT_OK


def cmd_selfcheck(args, inputs):
    from .selfcheck import run_selfcheck
    results = run_selfcheck(args.fixtures)
    if not results["ok"]:
        failed = [c["name"] for c in results["checks"] if not c["ok"]]
        raise CommandFailed(EXIT_SELFCHECK, f"failed checks: {', '.join(failed)}", results)
    return results, EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fpmkit", description="Exact fractional perfect matchings "
                                "of periodic graphs via type quotients and tilings.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, radius=True):
        if radius:
            sp.add_argument("--radius", default="auto", help="'auto' or a fixed working radius")
            sp.add_argument("--confirm", type=int, default=1, help="confirmation radii for 'auto'")
        sp.add_argument("--out", help="write the report here instead of stdout")

    sp = sub.add_parser("quotient", help="type table of a periodic graph spec")
    sp.add_argument("spec")
    common(sp)
    sp.set_defaults(func=cmd_quotient)

    sp = sub.add_parser("solve", help="weighted FPM of a quotient (or of a spec's quotient)")
    sp.add_argument("input")
    common(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("pullback", help="apply the local rule to a finite window")
    sp.add_argument("spec")
    sp.add_argument("solution", nargs="?", help="solve report or rule JSON; solved inline if omitted")
    sp.add_argument("--box", required=True, help='window, e.g. "-5..5" or "0..9,0..9"')
    sp.add_argument("--seed", type=int, help="label the window with this seed")
    sp.add_argument("--dot", help="also write a DOT rendering")
    common(sp)
    sp.set_defaults(func=cmd_pullback)

    sp = sub.add_parser("tile", help="extend a tile matching over a tiled host and certify theta")
    sp.add_argument("host")
    sp.add_argument("tiling")
    sp.add_argument("template", nargs="?")
    sp.add_argument("--dot", help="also write a DOT rendering")
    common(sp, radius=False)
    sp.set_defaults(func=cmd_tile)

    sp = sub.add_parser("selfcheck", help="run the bundled fixtures")
    sp.add_argument("--fixtures", help="fixture directory (defaults to the bundled one)")
    common(sp, radius=False)
    sp.set_defaults(func=cmd_selfcheck)
    return p


def _emit(args, text):
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    inputs = Inputs()
    try:
        results, code = args.func(args, inputs)
    except CommandFailed as exc:
        if exc.results is not None:
            _emit(args, dumps(_report(argv, inputs, {"error": str(exc), **exc.results})))
        print(f"fpmkit: {exc}", file=sys.stderr)
        return exc.code
    except NotStabilized as exc:
        print(f"fpmkit: {exc}", file=sys.stderr)
        return EXIT_UNSTABLE
    except NoInterior as exc:
        print(f"fpmkit: {exc}; enlarge --box", file=sys.stderr)
        return EXIT_NO_INTERIOR
    except (ParseError, InputError, CapacityError) as exc:
        print(f"fpmkit: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ConsistencyError as exc:
        print(f"fpmkit: consistency failure: {exc}", file=sys.stderr)
        return EXIT_SELFCHECK
    _emit(args, dumps(_report(argv, inputs, results)))
    return code


if __name__ == "__main__":
    sys.exit(main())
