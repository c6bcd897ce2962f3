"""Command-line interface.

All output is JSON with rationals as reduced "p/q" strings and a
top-level schema tag.  Exit codes: 0 success, 1 verification failure,
2 parse error, 3 precondition violation, 4 internal invariant breach
(never expected).  CONESING_SEED overrides the default sampling seed.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import __version__
from .catalog import (SearchParams, audit_catalog, catalog_to_json,
                      entry_from_json, enumerate_catalog, mld_spectrum,
                      search_bounds)
from .counterexamples import (an_min_over_actions, diagonal_cone_report,
                              rnc_family_report)
from .divisors import max_isotropy
from .errors import (ConesingError, InternalInvariantError, ParseError,
                     PreconditionError)
from .jsonio import (SCHEMA, couple_from_json, divisor_to_json, dumps, fmt_q,
                     integral_divisor_to_json, loads, parse_q)
from .quotient import (cartier_index_of_kx, horizontal_log_discrepancy,
                       log_fano_quotient, vertex_decomposition,
                       vertex_log_discrepancy)
from .resolution import blow_down, build_graph, mld_vertex, transverse_types
from .sections import hilbert_series, presentation
from .toric import (Fan, ToricDivisor, random_primitive_samples,
                    verify_comparison)

DEFAULT_SEED = 20260801


def _seed(args) -> int:
    env = os.environ.get("CONESING_SEED")
    if getattr(args, "seed", None) is not None:
        return args.seed
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ParseError(f"CONESING_SEED {env!r} is not an integer")
    return DEFAULT_SEED


def _read_json(path: str):
    try:
        if path == "-":
            return loads(sys.stdin.read())
        with open(path, "r", encoding="utf-8") as fh:
            return loads(fh.read())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}")


def _load_couple(path: str):
    return couple_from_json(_read_json(path))


def _emit(doc: dict, out: str | None) -> None:
    doc = {"schema": SCHEMA, **doc}
    text = dumps(doc)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _quotient_json(C) -> list:
    from .jsonio import point_to_json
    B = log_fano_quotient(C)
    return [{"point": point_to_json(p), "coeff": fmt_q(b)}
            for p, b in B.boundary]


def cmd_describe(args) -> int:
    C = _load_couple(args.couple)
    vd = vertex_decomposition(C)
    G = build_graph(C)
    bd = blow_down(G)
    hd = hilbert_series(C)
    horizontals = {repr(p): fmt_q(horizontal_log_discrepancy(C, p))
                   for p, _ in C.divisor.terms}
    doc = {
        "divisor": divisor_to_json(C.divisor),
        "degree": fmt_q(C.degree()),
        "quotient": _quotient_json(C),
        "a_e0": fmt_q(vertex_log_discrepancy(C)),
        "horizontal": horizontals,
        "m": vd.m,
        "u": vd.u,
        "H": integral_divisor_to_json(vd.H),
        "cartier_index_kx": vd.m,
        "mld": fmt_q(mld_vertex(C)),
        "graph": G.to_json(),
        "blown_down": bd.to_json(),
        "det": G.determinant,
        "hilbert": hd.to_json(),
        "isotropies": {repr(p): c.denominator for p, c in C.divisor.terms},
        "max_isotropy": max_isotropy(C),
        "transverse_mlds": {repr(p): fmt_q(m) for p, _, m in transverse_types(C)},
    }
    _emit(doc, args.out)
    return 0


def cmd_hilbert(args) -> int:
    C = _load_couple(args.couple)
    hd = hilbert_series(C)
    doc = {"series": hd.to_json()}
    if args.through is not None:
        from .sections import h0
        doc["values"] = [h0(C, n) for n in range(args.through + 1)]
    _emit(doc, args.out)
    return 0


def cmd_presentation(args) -> int:
    C = _load_couple(args.couple)
    pres = presentation(C, gen_bound=args.gen_bound, rel_bound=args.rel_bound)
    hd = hilbert_series(C)
    doc = {"series": hd.to_json(),
           "generators": list(pres.generator_degrees),
           "relations": list(pres.relation_degrees),
           "equations": list(pres.equations or []),
           "verified_through": pres.verified_through}
    _emit(doc, args.out)
    return 0


def cmd_discrepancy(args) -> int:
    C = _load_couple(args.couple)
    vd = vertex_decomposition(C)
    doc = {
        "quotient": _quotient_json(C),
        "a_e0": fmt_q(vertex_log_discrepancy(C)),
        "horizontal": {repr(p): fmt_q(horizontal_log_discrepancy(C, p))
                       for p, _ in C.divisor.terms},
        "m": vd.m, "u": vd.u, "H": integral_divisor_to_json(vd.H),
        "cartier_index_kx": cartier_index_of_kx(C),
    }
    _emit(doc, args.out)
    return 0


def cmd_resolve(args) -> int:
    C = _load_couple(args.couple)
    G = build_graph(C)
    doc = G.to_json()
    doc["mld"] = fmt_q(mld_vertex(C))
    doc["blown_down"] = blow_down(G).to_json()
    _emit(doc, args.out)
    return 0


def cmd_enumerate(args) -> int:
    params = SearchParams(epsilon=parse_q(args.epsilon),
                          isotropy_bound=args.isotropy_bound)
    entries = enumerate_catalog(params, jobs=args.jobs)
    doc = catalog_to_json(entries, params)
    doc["bounds"] = search_bounds(params).to_json()
    _emit(doc, args.out)
    return 0


def cmd_mld_set(args) -> int:
    params = SearchParams(epsilon=parse_q(args.epsilon),
                          isotropy_bound=args.isotropy_bound)
    entries = enumerate_catalog(params, jobs=args.jobs)
    doc = {"params": {"epsilon": fmt_q(params.epsilon),
                      "isotropy_bound": params.isotropy_bound},
           "mld_spectrum": [fmt_q(m) for m in mld_spectrum(entries)],
           "count": len(entries)}
    _emit(doc, args.out)
    return 0


def cmd_audit(args) -> int:
    params = SearchParams(epsilon=parse_q(args.epsilon),
                          isotropy_bound=args.isotropy_bound)
    doc = _read_json(args.catalog)
    if not isinstance(doc, dict) or "entries" not in doc:
        raise ParseError("catalog file must carry an 'entries' array")
    try:
        entries = [entry_from_json(e) for e in doc["entries"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad catalog entry: {exc}")
    report = audit_catalog(entries, params)
    _emit(report.to_json(), args.out)
    return 0 if report.ok else 1


def cmd_toric_check(args) -> int:
    fan_doc = _read_json(args.fan)
    for key in ("rank", "rays", "cones"):
        if not isinstance(fan_doc, dict) or key not in fan_doc:
            raise ParseError(f"fan file missing {key!r}")
    F = Fan(rank=int(fan_doc["rank"]),
            rays=tuple(tuple(int(x) for x in r) for r in fan_doc["rays"]),
            max_cones=tuple(tuple(int(i) for i in c) for c in fan_doc["cones"]))
    div_doc = _read_json(args.divisor)
    if not isinstance(div_doc, list) or len(div_doc) != len(F.rays):
        raise ParseError("divisor file must list one coefficient per ray")
    D = ToricDivisor.of([parse_q(c) for c in div_doc])
    samples = random_primitive_samples(_seed(args), F.rank, args.samples)
    report = verify_comparison(F, D, samples)
    _emit(report.to_json(), args.out)
    return 0 if not report.violations and report.vertex_ok is not False else 1


def cmd_verify_examples(args) -> int:
    checks = []
    ok = True

    an_results = []
    for n in range(1, args.an_n + 1):
        best, witness = an_min_over_actions(n, args.an_box)
        good = best >= n
        ok = ok and good
        an_results.append({"n": n, "min": best, "witness": list(witness),
                           "ok": good})
    checks.append({"name": "a_type_isotropy_lower_bound",
                   "box": args.an_box,
                   "ok": all(r["ok"] for r in an_results),
                   "rows": an_results if args.an_n <= 12 else
                   an_results[:3] + an_results[-3:]})

    rnc_rows = rnc_family_report(args.rnc_max)
    rnc_ok = all(r.a_e0 * r.m == 2 and r.max_isotropy == 1
                 and r.link_determinant == r.m for r in rnc_rows)
    index_unbounded = max(r.cartier_index_kx for r in rnc_rows) >= args.rnc_max // 2
    ok = ok and rnc_ok and index_unbounded
    checks.append({"name": "rational_normal_cone_family",
                   "ok": rnc_ok and index_unbounded,
                   "rows": [r.to_json() for r in rnc_rows]})

    diag_rows = [diagonal_cone_report(d) for d in (1, 2, 3)]
    diag_ok = all(r.a_e0 == r.d + 1 and r.max_isotropy == 1 and r.smooth
                  for r in diag_rows)
    ok = ok and diag_ok
    checks.append({"name": "diagonal_cone_family", "ok": diag_ok,
                   "rows": [r.to_json() for r in diag_rows]})

    _emit({"ok": ok, "checks": checks}, args.out)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="conesing",
        description="exact invariants of cone surface singularities")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def add_couple(p):
        p.add_argument("--couple", required=True,
                       help="couple JSON file ('-' for stdin)")

    def add_out(p):
        p.add_argument("--out", default=None, help="write JSON here instead of stdout")

    p = sub.add_parser("describe", help="full invariant report for a couple")
    add_couple(p); add_out(p)
    p.set_defaults(func=cmd_describe)

    p = sub.add_parser("hilbert", help="Hilbert series of the section ring")
    add_couple(p); add_out(p)
    p.add_argument("--through", type=int, default=None,
                   help="also list h(0..N)")
    p.set_defaults(func=cmd_hilbert)

    p = sub.add_parser("presentation", help="generators and relations")
    add_couple(p); add_out(p)
    p.add_argument("--gen-bound", type=int, default=None)
    p.add_argument("--rel-bound", type=int, default=None)
    p.set_defaults(func=cmd_presentation)

    p = sub.add_parser("discrepancy", help="quotient-side discrepancy data")
    add_couple(p); add_out(p)
    p.set_defaults(func=cmd_discrepancy)

    p = sub.add_parser("resolve", help="star-shaped resolution graph")
    add_couple(p); add_out(p)
    p.set_defaults(func=cmd_resolve)

    p = sub.add_parser("enumerate", help="catalog of eps-lc cone singularities")
    p.add_argument("--epsilon", required=True)
    p.add_argument("--isotropy-bound", type=int, required=True)
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    add_out(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("mld-set", help="mld spectrum of a catalog")
    p.add_argument("--epsilon", required=True)
    p.add_argument("--isotropy-bound", type=int, required=True)
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    add_out(p)
    p.set_defaults(func=cmd_mld_set)

    p = sub.add_parser("audit", help="re-verify a catalog file")
    p.add_argument("--catalog", required=True)
    p.add_argument("--epsilon", required=True)
    p.add_argument("--isotropy-bound", type=int, required=True)
    add_out(p)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("toric-check", help="discrepancy comparison on a fan")
    p.add_argument("--fan", required=True)
    p.add_argument("--divisor", required=True)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=None)
    add_out(p)
    p.set_defaults(func=cmd_toric_check)

    p = sub.add_parser("verify-examples", help="run the counterexample families")
    p.add_argument("--an-n", type=int, default=200)
    p.add_argument("--an-box", type=int, default=500)
    p.add_argument("--rnc-max", type=int, default=50)
    add_out(p)
    p.set_defaults(func=cmd_verify_examples)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad flags, which matches the parse-error code
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return 3
    except InternalInvariantError as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return 4
    except ConesingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
