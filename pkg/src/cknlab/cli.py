"""Command-line front end.

Every subcommand writes one deterministic JSON document (or a CSV table with
``--format csv``) to stdout or ``--out``.  Exit status: 0 when all checks
pass, 1 when a check fails (the report is still written), 2 for invalid
arguments or parameters.
"""

import argparse
import math
import sys

import numpy as np

from . import acceptance
from . import emden_fowler as ef
from . import extremals as ex
from . import identities as ids
from . import integrals as integ
from . import rayleigh as ray
from . import report
from . import spectral as sp
from .cones import ConeSpec
from .errors import CKNError
from .fields import ExtremalSpec
from .params import REGION_HEADER, CknParams, classify, derive, region_grid, region_rows


class UsageError(Exception):
    pass


def _abd(args, default=(0.0, 0.0, 3)):
    a = default[0] if args.a is None else args.a
    b = default[1] if args.b is None else args.b
    d = default[2] if args.d is None else args.d
    return CknParams(a, b, d)


def _derived_dict(dp):
    return {
        "a": dp.params.a, "b": dp.params.b, "d": dp.d, "a_c": dp.a_c, "p": dp.p, "alpha": dp.alpha,
        "n": dp.n, "beta": dp.beta, "sigma": dp.sigma, "Lambda": dp.Lambda,
        "alpha_fs": dp.alpha_fs, "alpha_cd": dp.alpha_cd,
    }


# subcommands --------------------------------------------------------------


def cmd_params(args):
    cp = _abd(args)
    dp = derive(cp, strict=args.strict)
    flags = classify(dp, abstract_window=args.abstract_window)
    return {"derived": _derived_dict(dp), "flags": flags}, True, None


def cmd_regions(args):
    d = args.d or 3
    a_c = (d - 2) / 2
    a_range = (args.a_min if args.a_min is not None else a_c - 3, args.a_max if args.a_max is not None else a_c - 0.01)
    b_range = (args.b_min if args.b_min is not None else a_range[0], args.b_max if args.b_max is not None else a_c + 1)
    rows = region_rows(region_grid(d, a_range, b_range, args.resolution))
    payload = {"d": d, "a_range": a_range, "b_range": b_range, "header": REGION_HEADER,
               "rows": [list(r) for r in rows]}
    return payload, True, (REGION_HEADER, rows)


def cmd_verify_identities(args):
    if args.d is not None and args.d not in (2, 3, 4):
        raise UsageError("--d must be 2, 3 or 4")
    if args.n is not None and args.n <= 2:
        raise UsageError("--n must exceed 2")
    if args.alpha is not None and args.alpha <= 0:
        raise UsageError("--alpha must be positive")
    sets = ids.sample_sets(args.trials, args.seed, d=args.d, n=args.n, alpha=args.alpha)
    reps = ids.run_suite(sets)
    payload = {"trials": args.trials, "seed": args.seed, "reports": reps}
    return payload, all(r.pass_ for r in reps.values()), None


def cmd_verify_extremal(args):
    if args.a is not None or args.b is not None or args.d is not None:
        cases = [_abd(args)]
    else:
        cases = [CknParams(*c) for c in acceptance.NAMED_CASES] + ex.parameter_sweep(args.sweep, args.seed)
    out, ok = [], True
    for cp in cases:
        spec, reps = ex.verify_extremal(cp)
        scaling = ex.check_scaling_family(spec, (0.5, 2.0, 10.0))
        reps = reps + [scaling]
        ok &= all(r.passed for r in reps)
        out.append({"params": _derived_dict(spec.derived), "mu": spec.mu, "checks": reps})
    neumann = []
    for name, rep, want in ex.neumann_suite():
        neumann.append({"case": name, "expected_pass": want, **rep.to_dict()})
        ok &= rep.passed == want
    return {"cases": out, "neumann": neumann}, ok, None


def _growth_dict(rep):
    return {"radii": rep.radii, "values": rep.values, "ratios": rep.ratios,
            "fitted_exponent": rep.fitted_exponent, "ratio_sup": rep.ratio_sup}


def _cone(args, d):
    if args.cone == "full":
        return None
    if args.theta is None:
        raise UsageError("--theta is required for arc and cap cones")
    cone = ConeSpec.arc(args.theta) if args.cone == "arc" else ConeSpec.cap(args.theta)
    if (args.cone == "arc") != (d == 2):
        raise UsageError("arcs live in d = 2 and caps in d = 3")
    return cone


def cmd_integrals(args):
    cp = _abd(args)
    spec = ex.normalize(ExtremalSpec(derive(cp, strict=True)))
    dp = spec.derived
    cone = _cone(args, dp.d)
    R = sorted(args.R) if args.R else [1.0, 2.0, 4.0, 8.0, 10.0]
    vol = integ.volume_growth(dp, R, cone)
    const = integ.closed_form_volume_constant(dp, cone)
    vol_err = float(np.max(np.abs(np.asarray(vol.ratios) / const - 1)))
    pr = integ.prop33_check(spec, cone=cone)
    ratios = np.asarray(pr.ratios)
    pr_ok = abs(pr.fitted_exponent / (dp.n + 2) - 1) <= 0.02 and bool(np.all(np.diff(ratios) < 0))
    qs = args.q if args.q else [0.0, 2.0, dp.n / 2 + 1]
    lem = {f"{q:g}": integ.lemma44_check(spec, q, cone=cone) for q in qs}
    ok = vol_err <= 1e-10 and pr_ok and all(math.isfinite(r.ratio_sup) for r in lem.values())
    payload = {
        "params": _derived_dict(dp),
        "cone": {"kind": "full_space" if cone is None else cone.kind, "theta": None if cone is None else cone.theta},
        "volume_growth": {**_growth_dict(vol), "C_star": const, "max_ratio_error": vol_err},
        "prop33": {**_growth_dict(pr), "expected_exponent": dp.n + 2},
        "lemma44": {q: _growth_dict(r) for q, r in lem.items()},
    }
    if args.table == "volume":
        table = vol
    elif args.table == "prop33":
        table = pr
    else:
        try:
            table = lem[f"{float(args.table):g}"]
        except (KeyError, ValueError):
            raise UsageError(f"--table must be volume, prop33 or one of the q values {list(lem)}")
    return payload, ok, (("R", "value", "ratio"), table.csv_rows())


def cmd_spectrum(args):
    header = sp.SCAN_HEADER
    if args.kind == "sphere":
        res = sp.lambda1_sphere(args.d or 3)
        return {"kind": "sphere", "result": res}, True, (header, [(None, res.lambda1, res.branch, True, True)])
    if args.theta is not None:
        res = sp.lambda1_arc(args.theta) if args.kind == "arc" else sp.lambda1_cap(args.theta)
        d = 2 if args.kind == "arc" else 3
        convex = args.theta <= (math.pi if args.kind == "arc" else math.pi / 2)
        row = (args.theta, res.lambda1, res.branch, convex, res.lambda1 >= d - 1 - 1e-9)
        ok = row[4] or not convex
        return {"kind": args.kind, "theta": args.theta, "result": res, "convex": convex}, ok, (header, [row])
    rows, crossing = sp.convexity_threshold_scan(args.kind, sp.default_grid(args.kind))
    ok = all(r[4] for r in rows if r[3])
    payload = {"kind": args.kind, "header": header, "rows": [list(r) for r in rows], "crossing": crossing}
    return payload, ok, (header, rows)


def cmd_ef_profile(args):
    if args.Lambda is not None or args.p is not None:
        if args.Lambda is None or args.p is None:
            raise UsageError("--Lambda and --p go together")
        prof = ef.bvp_recover(args.Lambda, args.p, args.S, args.n_s)
        err = float(np.max(np.abs(prof.phi - ef.soliton(prof.s_grid, args.Lambda, args.p))))
        payload = {"mode": "shooting", "Lambda": args.Lambda, "p": args.p, "S": float(prof.s_grid[-1]),
                   "n_s": int(prof.s_grid.size), "phi0": float(np.max(prof.phi)),
                   "soliton_amplitude": ef.soliton_params(args.Lambda, args.p)[0], "sup_error_vs_soliton": err,
                   "ode_residual": ef.ode_residual(prof)}
        return payload, err <= 1e-4, (("s", "phi"), prof.csv_rows())
    cp = _abd(args)
    spec = ex.normalize(ExtremalSpec(derive(cp, strict=True)))
    dp = spec.derived
    S = ef.adaptive_S(dp.Lambda, dp.p) if args.S is None else args.S
    prof = ef.transform(spec, S, args.n_s)
    res = ef.ode_residual(prof)
    match = ef.soliton_match(spec, S, args.n_s)
    payload = {"mode": "transform", "params": _derived_dict(dp), "S": S, "n_s": args.n_s,
               "ode_residual": res, "soliton_match": match}
    return payload, res <= 1e-7 and match["sup_error"] <= 1e-9, (("s", "phi"), prof.csv_rows())


def cmd_rayleigh(args):
    if args.d is not None and args.d != 2:
        raise UsageError("the cylinder minimiser is implemented for d = 2 only")
    if args.scan:
        rows = ray.breaking_scan(ray.default_scan_points(), args.seed, args.n_s, args.n_omega, args.max_iters)
        ok = all(r["agree"] is not False and r["E_full"] <= r["E_radial"] + 1e-6 for r in rows)
        table = [tuple(r[k] for k in ray.SCAN_HEADER) for r in rows]
        return {"rows": rows}, ok, (ray.SCAN_HEADER, table)
    a = -2.0 if args.a is None else args.a
    b = -1.5 if args.b is None else args.b
    dp, rep = ray.run_params(a, b, args.seed, args.n_s, args.n_omega, args.max_iters)
    flags = classify(dp)
    indeterminate = abs(dp.alpha - dp.alpha_fs) < ray.INDETERMINATE_BAND
    agree = None if indeterminate else flags.fs_breaking == rep.breaking_detected
    payload = {"params": _derived_dict(dp), "grid": {"n_s": args.n_s, "n_omega": args.n_omega},
               "report": rep, "classifier_breaking": flags.fs_breaking, "indeterminate": indeterminate,
               "agree": agree}
    ok = agree is not False and rep.E_full <= rep.E_radial + 1e-6 and rep.converged
    row = (a, b, dp.alpha, dp.alpha_fs, flags.fs_breaking, rep.deficit, rep.breaking_detected)
    return payload, ok, (ray.SCAN_HEADER, [row])


def cmd_all(args):
    results = acceptance.run_all(args.seed)
    for c in results:
        print(c.line(), file=sys.stderr)
    return {"seed": args.seed, "criteria": results}, all(c.passed for c in results), None


# parser -------------------------------------------------------------------


def _common(p, params=True):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    if params:
        p.add_argument("--a", type=float)
        p.add_argument("--b", type=float)
        p.add_argument("--d", type=int)


def build_parser():
    parser = argparse.ArgumentParser(prog="cknlab", description="Numerical checks for CKN extremals.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="derived exponents and regime flags")
    _common(p)
    p.add_argument("--strict", action="store_true", help="reject the endpoint b = 1 + a")
    p.add_argument("--abstract-window", action="store_true", help="use the dimension window (3/2, 5]")
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("regions", help="regime flags on an (a, b) grid")
    _common(p)
    for name in ("--a-min", "--a-max", "--b-min", "--b-max"):
        p.add_argument(name, type=float)
    p.add_argument("--resolution", type=int, default=41)
    p.set_defaults(func=cmd_regions)

    p = sub.add_parser("verify-identities", help="pointwise identities on random fields")
    _common(p, params=False)
    p.add_argument("--d", type=int)
    p.add_argument("--n", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--trials", type=int, default=1050)
    p.set_defaults(func=cmd_verify_identities)

    p = sub.add_parser("verify-extremal", help="extremal family checks")
    _common(p)
    p.add_argument("--sweep", type=int, default=20)
    p.set_defaults(func=cmd_verify_extremal)

    p = sub.add_parser("integrals", help="growth estimates along the extremal")
    _common(p)
    p.add_argument("--cone", choices=("full", "arc", "cap"), default="full")
    p.add_argument("--theta", type=float)
    p.add_argument("--R", type=float, nargs="+")
    p.add_argument("--q", type=float, nargs="+")
    p.add_argument("--table", default="volume", help="CSV table: volume, prop33 or a q value")
    p.set_defaults(func=cmd_integrals)

    p = sub.add_parser("spectrum", help="Neumann eigenvalues of cross-sections")
    _common(p, params=False)
    p.add_argument("--kind", choices=("arc", "cap", "sphere"), default="arc")
    p.add_argument("--theta", type=float)
    p.add_argument("--d", type=int)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("ef-profile", help="Emden-Fowler profile of the extremal, or shooting recovery")
    _common(p)
    p.add_argument("--Lambda", type=float)
    p.add_argument("--p", type=float)
    p.add_argument("--S", type=float)
    p.add_argument("--n-s", type=int, default=2000)
    p.set_defaults(func=cmd_ef_profile)

    p = sub.add_parser("rayleigh", help="radial versus free minimisation on the cylinder")
    _common(p)
    p.add_argument("--n-s", type=int, default=256)
    p.add_argument("--n-omega", type=int, default=64)
    p.add_argument("--max-iters", type=int, default=20000)
    p.add_argument("--scan", action="store_true", help="six-point sweep along a = -2")
    p.set_defaults(func=cmd_rayleigh)

    p = sub.add_parser("all", help="every acceptance criterion")
    _common(p, params=False)
    p.set_defaults(func=cmd_all)
    return parser


def run(argv=None, stdout=None, stderr=None):
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        payload, ok, table = args.func(args)
    except (UsageError, CKNError, ValueError) as exc:
        print(f"cknlab {args.command}: {exc}", file=stderr)
        return 2
    if args.format == "csv":
        if table is None:
            print(f"cknlab {args.command}: no CSV output for this command", file=stderr)
            return 2
        text = report.csv_text(*table)
    else:
        text = report.dumps(report.envelope(args.command, payload, ok))
    report.write_text(text, args.out, stdout)
    return 0 if ok else 1


def main():
    sys.exit(run())
