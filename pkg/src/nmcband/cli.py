"""Command-line front end.

Subcommands: spectrum, radii, branch, stability-sweep, rayleigh,
oracle-suite.  CSV output uses a header row, comma separators, "\n"
line endings, UTF-8, and 17 significant digits per numeric cell so
every double round-trips exactly.  Exit codes: 0 success, 1 partial
(warnings / failed rows), 2 invalid input, 3 numerical failure.

NLD_THREADS caps the number of worker threads used for sweep rows;
rows are reassembled in grid order so output is deterministic either
way.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .errors import DomainError, NmcbandError
from .kernel import KernelParams
from .spectrum import (
    bifurcation_radii,
    find_r1,
    h_r,
    h_r_quadrature,
    mu_k,
    mu_k_quadrature,
    spectrum_row,
)

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_BAD_INPUT = 2
EXIT_NUMERICAL = 3


def _fmt(x):
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _emit(rows, header, args):
    """Write rows as CSV or JSON to --out or stdout."""
    if args.format == "json":
        payload = [dict(zip(header, r)) for r in rows]
        text = json.dumps(payload, indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for r in rows:
            writer.writerow([_fmt(c) for c in r])
        text = buf.getvalue()
    _write_text(text, args.out)


def _write_text(text, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _workers():
    raw = os.environ.get("NLD_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        n = min(4, os.cpu_count() or 1)
    return n


def cmd_spectrum(args):
    params = KernelParams(args.alpha)
    if args.radius <= 0:
        raise DomainError("--radius must be positive")
    row = spectrum_row(params, args.radius, args.k_max)
    out = []
    for k in range(args.k_max + 1):
        closed = row.eigenvalues[k]
        quad = mu_k_quadrature(params, args.radius, k)
        rel = abs(quad - closed) / max(abs(closed), 1e-300)
        out.append((k, closed, quad, rel))
    _emit(out, ["k", "mu_k_closed", "mu_k_quadrature", "rel_dev"], args)
    return EXIT_OK


def cmd_radii(args):
    params = KernelParams(args.alpha)
    radii = bifurcation_radii(params, args.m)
    rows = [
        (m, r, mu_k(params, r, m))
        for m, r in zip(range(1, args.m + 1), radii.radii)
    ]
    _emit(rows, ["m", "R_m", "mu_m_at_Rm"], args)
    return EXIT_OK


def cmd_branch(args):
    from .branch import continue_branch, symmetry_check
    from .nmc import nmc_eval

    params = KernelParams(args.alpha)
    r_m = find_r1(params) / args.m
    curve = continue_branch(
        params, args.m, args.a_max, args.steps, args.modes, tol=args.tol
    )
    theta = np.linspace(-math.pi, math.pi, 65)[:-1]
    points = []
    for p in curve.points:
        w = p.generatrix(r_m)
        vals = nmc_eval(params, w, theta)
        points.append(
            {
                "a": p.a,
                "gamma": p.gamma,
                "coeffs": list(p.v.coeffs),
                "residual_inf": p.residual_inf,
                "nmc_value": p.nmc_value,
                "nmc_flatness": float(np.max(vals) - np.min(vals)),
            }
        )
    doc = {
        "alpha": args.alpha,
        "m": args.m,
        "r_m": r_m,
        "points": points,
        "symmetry_check": symmetry_check(curve),
        "warnings": list(curve.warnings),
    }
    _write_text(json.dumps(doc, indent=2) + "\n", args.out)
    return EXIT_PARTIAL if curve.warnings else EXIT_OK


def _sweep_row(alpha):
    from .stability import sigma_integral_route, sigma_specfun_route

    params = KernelParams(alpha)
    r1 = find_r1(params)
    s_int = sigma_integral_route(params, r1)
    s_spec = sigma_specfun_route(params, r1)
    scaled = (1.0 - alpha) ** 2 * s_spec
    verdict = "unstable" if s_spec < 0.0 else "stable"
    return (alpha, r1, s_int, s_spec, scaled, verdict, "ok")


def cmd_stability_sweep(args):
    if not (0.0 < args.alpha_min < args.alpha_max < 1.0):
        raise DomainError("need 0 < --alpha-min < --alpha-max < 1")
    if args.points < 1:
        raise DomainError("--points must be >= 1")
    if args.points == 1:
        grid = [args.alpha_min]
    else:
        grid = list(np.linspace(args.alpha_min, args.alpha_max, args.points))
    rows = [None] * len(grid)

    def run(i):
        try:
            return _sweep_row(grid[i])
        except Exception as exc:
            nan = float("nan")
            return (grid[i], nan, nan, nan, nan, "error", f"{type(exc).__name__}: {exc}")

    with ThreadPoolExecutor(max_workers=_workers()) as pool:
        for i, row in enumerate(pool.map(run, range(len(grid)))):
            rows[i] = row
    _emit(
        rows,
        ["alpha", "R1", "sigma_integral", "sigma_specfun", "sigma_scaled", "verdict", "status"],
        args,
    )
    failed = any(r[5] == "error" for r in rows)
    return EXIT_PARTIAL if failed else EXIT_OK


def cmd_rayleigh(args):
    from .branch import continue_branch
    from .stability import rayleigh_compression, track_spectrum

    params = KernelParams(args.alpha)
    r_m = find_r1(params) / args.m
    curve = continue_branch(
        params, args.m, args.a_max, args.steps, args.modes, tol=args.tol
    )
    rows = []
    for p in curve.points:
        if p.a == 0.0:
            continue
        tracked = track_spectrum(params, p, k_track=(0, args.m), r_m=r_m)
        rq = rayleigh_compression(params, p, tracked)
        rows.append((p.a, tracked[0].mu, tracked[1].mu, rq))
    _emit(rows, ["a", "mu_zero", "mu_soft", "rayleigh"], args)
    return EXIT_PARTIAL if curve.warnings else EXIT_OK


def cmd_oracle_suite(args):
    from .specfun import f_nu, f_nu_quadrature, singular_cosine_integrals
    from .quadrature import pv_integrate, QuadratureSpec

    tol = args.tol
    rows = []

    def check(name, closed, quad):
        rel = abs(quad - closed) / max(abs(closed), 1e-300)
        rows.append((name, closed, quad, rel, "pass" if rel < tol else "FAIL"))

    alphas = [0.1, 0.3, 0.5, 0.7, 0.9]
    radii = [0.3, 1.0, 3.0]
    for alpha in alphas:
        params = KernelParams(alpha)
        i_c, j_c, c_c = singular_cosine_integrals(params)

        def quad_of(f, decay):
            return pv_integrate(f, QuadratureSpec(tail_order=decay))

        a = alpha
        check(
            f"I(alpha={alpha})",
            i_c,
            quad_of(lambda t: 8.0 * (np.sin(0.5 * t) / t) ** 4 * np.abs(t) ** (-a), 4 + a),
        )
        check(
            f"J(alpha={alpha})",
            j_c,
            quad_of(lambda t: 2.0 * (np.sin(t) / t) ** 2 * np.abs(t) ** (-a), 2 + a),
        )
        check(
            f"C(alpha={alpha})",
            c_c,
            quad_of(lambda t: 2.0 * (np.sin(0.5 * t) / t) ** 2 * np.abs(t) ** (-a), 2 + a),
        )
        nu = 2.0 + alpha
        for radius in radii:
            c = 2.0 * radius
            for xi in (0.0, 1.0, 16.0):
                closed = f_nu(nu, xi, c)
                quad = f_nu_quadrature(nu, xi, c)
                check(f"F(nu={nu:.1f},xi={xi:g},c={c:g})", closed, quad)
            check(
                f"h(alpha={alpha},R={radius:g})",
                h_r(params, radius),
                h_r_quadrature(params, radius),
            )
            for k in (0, 1, 2, 4, 8, 16):
                check(
                    f"mu(alpha={alpha},R={radius:g},k={k})",
                    mu_k(params, radius, k),
                    mu_k_quadrature(params, radius, k),
                )
    _emit(rows, ["case", "closed_form", "quadrature", "rel_dev", "status"], args)
    n_fail = sum(1 for r in rows if r[4] == "FAIL")
    if args.out or True:
        sys.stderr.write(f"oracle-suite: {len(rows) - n_fail}/{len(rows)} passed\n")
    return EXIT_PARTIAL if n_fail else EXIT_OK


def _add_common(p):
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="nmcband",
        description="periodic constant-NMC bands: spectra, bifurcation, stability",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="closed-form vs quadrature eigenvalues")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--k-max", dest="k_max", type=int, default=16)
    _add_common(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("radii", help="bifurcation radii R_m")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--m", type=int, default=10, help="largest mode index")
    _add_common(p)
    p.set_defaults(func=cmd_radii)

    p = sub.add_parser("branch", help="continue a bifurcated branch")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--a-max", dest="a_max", type=float, required=True)
    p.add_argument("--steps", type=int, default=4)
    p.add_argument("--modes", type=int, default=16)
    p.add_argument("--tol", type=float, default=1e-9)
    _add_common(p)
    p.set_defaults(func=cmd_branch)

    p = sub.add_parser("stability-sweep", help="sigma(alpha) over a grid")
    p.add_argument("--alpha-min", dest="alpha_min", type=float, required=True)
    p.add_argument("--alpha-max", dest="alpha_max", type=float, required=True)
    p.add_argument("--points", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_stability_sweep)

    p = sub.add_parser("rayleigh", help="compressed Rayleigh quotient along a branch")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--a-max", dest="a_max", type=float, required=True)
    p.add_argument("--steps", type=int, default=4)
    p.add_argument("--modes", type=int, default=12)
    p.add_argument("--tol", type=float, default=1e-9)
    _add_common(p)
    p.set_defaults(func=cmd_rayleigh)

    p = sub.add_parser("oracle-suite", help="closed-form vs quadrature battery")
    p.add_argument("--tol", type=float, default=1e-8)
    _add_common(p)
    p.set_defaults(func=cmd_oracle_suite)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad input already; normalize others
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except DomainError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_BAD_INPUT
    except NmcbandError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
