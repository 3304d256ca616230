"""Command-line front end: ``cmpz eval|table|stats|verify``.

Exit codes: 0 success, 1 a verification check failed, 2 invalid input or
unwritable output, 3 a work limit was hit.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from .asymptotic import verify_inverse_factorial, z_asymptotic
from .errors import DomainError, ResourceLimitError
from .exact import MAX_CUMULANT_ORDER, cumulants_exact, raw_moment_exact, z_exact
from .model import CmpParams
from .moments import (
    cumulants_asym,
    kurtosis_asym,
    poisson_expectation_deviations,
    raw_moment_asym,
    skewness_asym,
    verify_poisson_expectation_limit,
)
from .numerics import log_gamma
from .tables import PRESETS, compute_table

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_LIMIT = 0, 1, 2, 3


def _format_z(z):
    try:
        return repr(z.to_linear())
    except OverflowError:
        return z.scientific(17)


def _params(args):
    return CmpParams(args.lam, args.nu)


def cmd_eval(args, out):
    params = _params(args)
    if args.method == "exact":
        z, report = z_exact(params, args.rel_tol)
        lines = [
            ("Z", _format_z(z)),
            ("log10(Z)", repr(z.log10)),
            ("terms_used", report.terms_used),
            ("peak_index", report.peak_index),
            ("tail_bound_log", repr(report.tail_bound_log)),
        ]
    else:
        res = z_asymptotic(params, args.order)
        lines = [
            ("order", res.order_used),
            ("Z", _format_z(res.value)),
            ("log10(Z)", repr(res.value.log10)),
            ("terms_used", len(res.terms)),
            ("prefactor_log", repr(res.prefactor_log)),
        ] + [(f"term[{k}]", repr(t)) for k, t in enumerate(res.terms)]
    lines = [("lambda", args.lam), ("nu", args.nu), ("method", args.method)] + lines
    for key, value in lines:
        print(f"{key} = {value}", file=out)
    return EXIT_OK


def cmd_table(args, out):
    if args.preset == "custom":
        if not (args.lambdas and args.nus):
            raise DomainError("--preset custom needs --lambdas and --nus")
        lams, nus = _floats(args.lambdas), _floats(args.nus)
        orders = [int(v) for v in args.orders.split(",")] if args.orders else [1, 2, 3]
    else:
        lams, nus, orders = PRESETS[args.preset]
    table = compute_table(lams, nus, orders, args.rel_tol)
    if args.csv:
        try:
            with open(args.csv, "w", newline="") as fh:
                fh.write(table.to_csv(raw=args.raw))
        except OSError as exc:
            print(f"error: cannot write {args.csv}: {exc.strerror}", file=sys.stderr)
            return EXIT_INPUT
    out.write(table.render())
    return EXIT_OK


def _floats(text):
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise DomainError(f"expected comma-separated numbers, got {text!r}") from None


def _rel_gap(exact, asym):
    if exact is None or asym is None:
        return "-"
    if exact == 0:
        return "-" if asym == 0 else "inf"
    return f"{abs(asym - exact) / abs(exact):.3e}"


def cmd_stats(args, out):
    params = _params(args).require_admissible()
    n_max = args.n_max
    if not 1 <= n_max <= MAX_CUMULANT_ORDER:
        raise DomainError(f"--n-max must be in 1..{MAX_CUMULANT_ORDER}")
    want_exact = args.method in ("exact", "both")
    want_asym = args.method in ("asym", "both") and params.nu > 0
    rows = []
    exact_k = cumulants_exact(params, max(n_max, 4), args.rel_tol) if want_exact else None
    asym_k = cumulants_asym(params, max(n_max, 4)) if want_asym else None

    def pair(f_exact, f_asym):
        return (f_exact() if want_exact else None, f_asym() if want_asym else None)

    rows.append(("mean",) + pair(lambda: exact_k[1], lambda: asym_k[1]))
    rows.append(("variance",) + pair(lambda: exact_k[2], lambda: asym_k[2]))
    rows.append(("gamma1",) + pair(lambda: exact_k[3] / exact_k[2] ** 1.5, lambda: skewness_asym(params)))
    rows.append(("gamma2",) + pair(lambda: exact_k[4] / exact_k[2] ** 2, lambda: kurtosis_asym(params)))
    for n in range(1, n_max + 1):
        rows.append((f"kappa{n}",) + pair(lambda: exact_k[n], lambda: asym_k[n]))
    for n in range(1, n_max + 1):
        rows.append(
            (f"mu'{n}",)
            + pair(lambda: raw_moment_exact(params, n, args.rel_tol), lambda: raw_moment_asym(params, n))
        )

    def show(v, available):
        if v is None:
            return "unavailable" if not available else "-"
        return repr(v)

    asym_available = params.nu > 0
    table = [("quantity", "exact", "asymptotic", "rel_gap")]
    for name, e, a in rows:
        table.append((name, show(e, True), show(a, asym_available), _rel_gap(e, a)))
    widths = [max(len(r[i]) for r in table) for i in range(4)]
    for r in table:
        print("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip(), file=out)
    return EXIT_OK


def _check(out, ok, name, detail):
    print(f"{'PASS' if ok else 'FAIL'} {name} {detail}", file=out)
    return ok


def _rising(x, j):
    return math.prod(x + i for i in range(j))


def verify_coeffs(out):
    """Remainder after J terms must fall like 1/(x)_J, J = 1..8, at ν = 2."""
    nu, ts = 2.0, (25.0, 50.0)
    ok = True
    for J in range(1, 9):
        xs = [nu * t + (1 + nu) / 2 for t in ts]
        res = [verify_inverse_factorial(nu, t, J) for t in ts]
        slope = (math.log(res[1]) - math.log(res[0])) / (
            math.log(_rising(xs[1], J)) - math.log(_rising(xs[0], J))
        )
        ok &= _check(out, -1.1 <= slope <= -0.9, f"coeffs.J{J}", f"nu={nu} slope={slope:.4f}")
    return ok


def verify_limit(out):
    alphas = [10.0, 20.0, 40.0, 80.0]
    ok = True
    for nu in (0.5, 2.0):
        slope = verify_poisson_expectation_limit(nu, alphas)
        ok &= _check(out, slope <= -0.75, f"limit.nu{nu:g}", f"slope={slope:.4f}")
    dev = max(poisson_expectation_deviations(1.0, alphas))
    ok &= _check(out, dev <= 1e-12, "limit.nu1", f"max_deviation={dev:.3e}")
    return ok


def _gap_to_two_terms(lam, nu):
    # Σ_{j>=2} λ^j / (j!)^ν summed directly; Z - (1 + λ) in floating point
    # is below one ulp once ν is large
    terms, j = [], 2
    while True:
        terms.append(math.exp(j * math.log(lam) - nu * log_gamma(j + 1.0)))
        if terms[-1] <= 1e-18 * terms[0]:
            return math.fsum(terms)
        j += 1


def verify_special_cases(out):
    lams = np.logspace(-1, np.log10(50.0), 20)
    ok = True

    def worst(pairs):
        return max(abs(got / want - 1) for got, want in pairs)

    err = worst((z_exact(CmpParams(lam, 1.0))[0].to_linear(), math.exp(lam)) for lam in lams)
    ok &= _check(out, err <= 1e-12, "special.nu1", f"max_rel_err={err:.3e}")
    err = worst(
        (z_exact(CmpParams(lam, 0.0))[0].to_linear(), 1 / (1 - lam)) for lam in np.linspace(0.05, 0.95, 19)
    )
    ok &= _check(out, err <= 1e-12, "special.nu0", f"max_rel_err={err:.3e}")
    err = worst((z_exact(CmpParams(lam, 2.0))[0].to_linear(), float(np.i0(2 * math.sqrt(lam)))) for lam in lams)
    ok &= _check(out, err <= 1e-12, "special.nu2", f"max_rel_err={err:.3e}")
    for lam in (0.5, 3.0):
        nus = (50.0, 100.0, 200.0)
        gaps = [_gap_to_two_terms(lam, nu) for nu in nus]
        shrinking = all(g > 0 for g in gaps) and gaps[0] > gaps[1] > gaps[2]
        # and the engine agrees with 1 + λ + gap to rounding
        shrinking &= all(
            abs(z_exact(CmpParams(lam, nu))[0].to_linear() - (1 + lam + g)) <= 4e-16 * (1 + lam)
            for nu, g in zip(nus, gaps)
        )
        ok &= _check(out, shrinking, f"special.nu_large.lam{lam:g}", "gaps=" + ",".join(f"{g:.3e}" for g in gaps))
    return ok


SUITES = {"coeffs": verify_coeffs, "limit": verify_limit, "special-cases": verify_special_cases}


def cmd_verify(args, out):
    return EXIT_OK if SUITES[args.suite](out) else EXIT_FAILED


def build_parser():
    parser = argparse.ArgumentParser(prog="cmpz", description="Normalizing constant Z(lambda, nu) tools")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_params(p):
        p.add_argument("--lambda", dest="lam", required=True, help="rate parameter, > 0")
        p.add_argument("--nu", required=True, help="dispersion parameter, >= 0")

    def add_tol(p):
        p.add_argument("--rel-tol", type=float, default=1e-14)

    p = sub.add_parser("eval", help="evaluate Z")
    add_params(p)
    p.add_argument("--method", choices=("exact", "asym"), default="exact")
    p.add_argument("--order", type=int, default=3, help="terms kept by --method asym (1..8)")
    add_tol(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("table", help="percentage errors of the expansion over a grid")
    p.add_argument("--preset", choices=("table1", "table2", "custom"), default="table1")
    p.add_argument("--lambdas", help="custom grid, e.g. 1,2,3")
    p.add_argument("--nus", help="custom grid, e.g. 0.5,1.5")
    p.add_argument("--orders", help="custom orders, default 1,2,3")
    p.add_argument("--csv", help="also write the cells to this CSV file")
    p.add_argument("--raw", action="store_true", help="full-precision values in the CSV")
    add_tol(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("stats", help="moments and cumulants, exact and asymptotic")
    add_params(p)
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument("--method", choices=("exact", "asym", "both"), default="both")
    add_tol(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (DomainError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT


if __name__ == "__main__":
    sys.exit(main())
