"""Command-line front end: python -m selmer2 <subcommand> ..."""
from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

from .errors import DomainError, Refusal, VerificationError

SCHEMA_VERSION = 1
EXIT_OK, EXIT_VERIFY, EXIT_REFUSED, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (int, float, str, bool)) or x is None:
        return x
    return str(x)


def _emit(record, out):
    record = dict(record)
    record.setdefault("schema_version", SCHEMA_VERSION)
    out.write(json.dumps(_jsonable(record), indent=None) + "\n")


def _emit_csv(header, rows, out):
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow(r)


def _curve(args):
    from .poly import CurveInvariants

    if getattr(args, "f", None):
        return CurveInvariants.parse(args.f)
    if getattr(args, "c", None):
        return CurveInvariants.parse(args.c)
    raise UsageError("give --f POLY or --c c2,...,c_{2n+2}")


# ---------------------------------------------------------------------------


def cmd_descent(args, out):
    from .descent import integral_orbit_data, integral_pair, ideal_verify, parse_points, soluble_orbit_rep
    from .etale import EtaleElement, compare_classes, gram_alpha

    c = _curve(args)
    pts = parse_points(args.points or "")
    rep = soluble_orbit_rep(pts, c)
    alpha = rep.alpha.representative
    rec = {"command": "descent", "f": str(c.f), "points": [str(p) for p in pts]}
    rec.update(rep.to_json())
    rec["gram_alpha"] = gram_alpha(c.f, alpha).rows()
    flags = {"split": rep.split}
    if rep.T is not None:
        flags["charpoly_is_f"] = rep.T.charpoly() == c.f
        flags["AT_symmetric"] = rep.T.is_self_adjoint()
    if rep.plane is not None:
        flags["plane_isotropic"] = True
    cmp = compare_classes(alpha, EtaleElement.one(c.f))
    rec["class_vs_distinguished"] = cmp.verdict
    if args.r is not None:
        pair = integral_pair(pts, c.f, args.r)
        ok, certs = ideal_verify(pair)
        flags["ideal_verified"] = ok
        rec["integral_pair"] = {"alpha": pair.alpha.representative.to_json(), "ideal": pair.basis_matrix(),
                                "certificates": certs}
        data = integral_orbit_data(pair, rep.plane)
        rec["integral_pair"]["T_standard_integral"] = data.get("T_standard_integral")
    rec["verified"] = flags
    _emit(rec, out)
    return EXIT_VERIFY if flags.get("ideal_verified") is False else EXIT_OK


def cmd_orbits(args, out):
    from .orbits import construct_Tf, distinguished_shape_check, orbit_summary

    c = _curve(args)
    T = construct_Tf(c)
    summ = orbit_summary(c)
    _emit({"command": "orbits", "f": str(c.f), "T_f": T.to_json(), "staircase": distinguished_shape_check(T),
           "charpoly_is_f": T.charpoly() == c.f, "summary": summ.to_json()}, out)
    return EXIT_OK


def cmd_local(args, out):
    from .localdata import place_data, product_formula_check

    c = _curve(args)
    places = [p.strip() for p in args.places.split(",") if p.strip()]
    odd = []
    for pl in places:
        d = place_data(c, pl)
        if d.place != "inf" and d.place != 2:
            odd.append(d.place)
        _emit(d.to_json(), out)
    _emit({"command": "local", "f": str(c.f), "product_formula": product_formula_check(c, odd)}, out)
    return EXIT_OK


def _task(args):
    from .stats import EnumerationTask, height_bound_for_budget

    budget = args.budget
    X = Fraction(args.X) if args.X else height_bound_for_budget(args.n, budget)
    return EnumerationTask(args.n, X, minimal=args.minimal, squarefree_disc=args.squarefree_disc,
                           budget=budget)


def cmd_enumerate(args, out):
    from .stats import box_count, coefficient_ranges, enumerate_invariants

    task = _task(args)
    header = {"command": "enumerate", "n": task.n, "X": str(task.X), "box_count": box_count(task.n, task.X),
              "ranges": coefficient_ranges(task.n, task.X)}
    curves = list(enumerate_invariants(task))
    if args.out == "csv":
        out.write(f"# box_count={header['box_count']} X={header['X']}\n")
        _emit_csv([f"c{k}" for k in range(2, 2 * task.n + 3)], [cu.c for cu in curves], out)
    else:
        header["count"] = len(curves)
        header["curves"] = [list(cu.c) for cu in curves] if not args.count_only else None
        _emit(header, out)
    return EXIT_OK


def cmd_densities(args, out):
    from .stats import density_report, factorization_type_census

    if args.type_census:
        tc = factorization_type_census(args.p, args.n)
        rec = tc.to_json()
        rec["command"] = "densities"
        _emit(rec, out)
        return EXIT_OK if tc.agrees() else EXIT_VERIFY
    task = _task(args)
    props = args.properties.split(",") if args.properties else ["distinguished2"]
    rep = density_report(task, props, jobs=args.jobs)
    rec = rep.to_json()
    rec["command"] = "densities"
    if args.out == "csv":
        rows = []
        for prop, cnt in rep.counts.items():
            for k, v in cnt.items():
                rows.append([prop, k, v, rep.total, Fraction(v, rep.total) if rep.total else 0])
        _emit_csv(["property", "value", "count", "total", "fraction"], rows, out)
    else:
        _emit(rec, out)
    return EXIT_OK


def cmd_cusp(args, out):
    from .cusp import verify_cusp_lemma

    rep = verify_cusp_lemma(args.n, every_subset=args.all_subsets)
    rec = rep.to_json()
    rec["command"] = "cusp-verify"
    _emit(rec, out)
    return EXIT_OK if rep.passed else EXIT_VERIFY


def cmd_ff_census(args, out):
    from .census import CSV_HEADER, ff_census_all, ff_orbit_census, so_group_order

    if args.f:
        rows = [ff_orbit_census(args.n, args.q, args.f)]
    else:
        rows, _ = ff_census_all(args.n, args.q)
    if args.out == "json":
        for r in rows:
            _emit({"command": "ff-census", "q": r.q, "f": list(r.f), "points": r.points, "orbits": r.orbits,
                   "stabilizers": list(r.stabilizers), "distinguished_orbits": r.distinguished_orbits,
                   "staircase_orbits": r.staircase_orbits, "cycle_type": list(r.cycle_type),
                   "two_torsion_dim": r.two_torsion, "predicted_orbits": r.predicted_orbits(),
                   "so_order": so_group_order(args.n + 1, args.q)}, out)
    else:
        _emit_csv(CSV_HEADER, [r.as_csv_fields() for r in rows], out)
    ok = all(r.orbits == r.predicted_orbits() for r in rows)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_minimality(args, out):
    from .stats import minimality_sieve, rescale_for_integrality

    c = _curve(args)
    r = minimality_sieve(c)
    rec = {"command": "minimality", "c": list(c.c), "minimal": r == "minimal",
           "reduced": list(c.c) if r == "minimal" else list(r.c)}
    if args.rescale:
        rec["rescaled"] = list(rescale_for_integrality(c).c)
    _emit(rec, out)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser():
    p = _Parser(prog="selmer2", description="2-descent, orbit and density tools for y^2 = f(x)")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp, curve=True):
        sp.add_argument("--out", choices=("json", "csv"), default="json")
        sp.add_argument("--json", dest="out", action="store_const", const="json")
        if curve:
            sp.add_argument("--f", help='monic trace-zero polynomial, e.g. "x^6+3"')
            sp.add_argument("--c", help="invariants c2,...,c_{2n+2}")

    sp = sub.add_parser("descent", help="alpha, isotropic plane and T from points")
    common(sp)
    sp.add_argument("--points", default="", help='"(x,y);(x,y)" or "(quad:d; x=a+b√d, y=c+e√d)"')
    sp.add_argument("--r", help="integral interpolant r(x) with r(x_i) = y_i")
    sp.set_defaults(func=cmd_descent)

    sp = sub.add_parser("orbits", help="T_f and distinguished orbit data")
    common(sp)
    sp.set_defaults(func=cmd_orbits)

    sp = sub.add_parser("local", help="local data per place")
    common(sp)
    sp.add_argument("--places", default="3,inf", help="comma list of primes and/or inf")
    sp.set_defaults(func=cmd_local)

    for name, fn in (("enumerate", cmd_enumerate), ("densities", cmd_densities)):
        sp = sub.add_parser(name)
        common(sp, curve=False)
        sp.add_argument("--n", type=int, default=2)
        sp.add_argument("--X", help="height bound (H < X); default: largest X fitting the budget")
        sp.add_argument("--budget", type=int, default=10 ** 6)
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--minimal", action="store_true")
        sp.add_argument("--squarefree-disc", action="store_true")
        sp.set_defaults(func=fn)
        if name == "enumerate":
            sp.add_argument("--count-only", action="store_true")
        else:
            sp.add_argument("--properties", help="comma list: distinguished2, squarefree-disc, real-roots, "
                                                 "factorization-type:p, j2-local:p")
            sp.add_argument("--type-census", action="store_true",
                            help="factor all monic polynomials of degree 2n+2 mod p")
            sp.add_argument("--p", type=int, default=3)

    sp = sub.add_parser("cusp-verify")
    common(sp, curve=False)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--all-subsets", action="store_true")
    sp.set_defaults(func=cmd_cusp)

    sp = sub.add_parser("ff-census")
    common(sp, curve=False)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--q", type=int, default=3)
    sp.add_argument("--f", help="single fiber; default: all separable f")
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=cmd_ff_census)
    sp.set_defaults(out="csv")

    sp = sub.add_parser("minimality")
    common(sp)
    sp.add_argument("--rescale", action="store_true", help="also print c_i * 2^(4i)")
    sp.set_defaults(func=cmd_minimality)
    return p


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise UsageError(parser.format_help())
        return args.func(args, out)
    except UsageError as exc:
        err.write(str(exc) + "\n")
        return EXIT_USAGE
    except VerificationError as exc:
        err.write(f"verification failed: {exc}\n")
        return EXIT_VERIFY
    except (Refusal, DomainError) as exc:
        rec = {"error": type(exc).__name__, "message": str(exc)}
        if exc.certificate is not None:
            rec["certificate"] = exc.certificate
        err.write(json.dumps(_jsonable(rec)) + "\n")
        return EXIT_REFUSED


def cli_main(argv=None):
    return main(argv)
