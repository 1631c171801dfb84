"""Command-line front end.

Exit codes: 0 success, 1 invalid input, 2 degenerate regime (atomic orbit),
3 invariant failure (``residuals``, ``cycles``).
"""

from __future__ import annotations

import argparse
import math
import sys
import warnings

import numpy as np

from . import attractor, checks, expansion, mobius, spectral
from .errors import AtomicOrbitWarning, FracmapError
from .functions import BUILTIN_NAMES, builtin_function
from .mobius import MapParams, MobiusMatrix
from .report import Report

EXIT_OK, EXIT_INVALID, EXIT_DEGENERATE, EXIT_FAILED = 0, 1, 2, 3

SCHEMAS = """\
output schemas (CSV: header row + rows, then '#'-prefixed footer/tables;
JSON: {"meta", "columns", "rows", "footer"[, "tables"]}):
  density    bin_center,empirical_density,analytic_density
             footer: ks_distance,sup_bin_error,N,burn_in,below,above,atomic_period
  orbit      n,direct,closed_form,deviation
             footer: max_deviation,final_direct,final_closed_form[,point_attractor]
  expand     x,f_re,f_im,recon_re,recon_im,recon_half_re,recon_half_im
             footer: n_max,n_half,l1_error,l1_error_half; table coefficients: n,re,im
  eigen      x,lorentzian,theta,sigma_re,sigma_im
             footer: phi,eigenvalue_re,eigenvalue_im,r_re,r_im,x0_disc,eigen_residual
  cycles     n,u,u_tan_formula,verified_period,max_offdiag
  normalize  u,k1,k2,regime   footer: max_conjugation_error
  residuals  check,value,tolerance,relation,passed
"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _add_common(p, window=True):
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default="-", help="output file (default: standard output)")
    if window:
        p.add_argument("--window", nargs=2, type=float, default=(-8.0, 8.0), metavar=("LO", "HI"))


def _elliptic(u: float, hint: str = "") -> MapParams:
    params = MapParams(u)
    if not params.elliptic:
        raise UsageError(f"U={u} is hyperbolic (|U| > 2); this command needs |U| < 2{hint}")
    return params


def run_density(args) -> tuple[Report, int]:
    params = _elliptic(args.u, "; use `orbit` to follow the point attractor")
    if args.n < 1 or args.burn_in < 0 or args.bins < 1:
        raise UsageError("--n must be >= 1, --burn-in >= 0, --bins >= 1")
    cfg = attractor.OrbitConfig(args.u, args.x0, args.n, args.burn_in)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", AtomicOrbitWarning)
        period = attractor.check_atomic(cfg)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    hist = attractor.histogram(attractor.orbit(cfg), tuple(args.window), args.bins)
    rep = attractor.compare_density(hist, params)
    report = Report(
        ["bin_center", "empirical_density", "analytic_density"],
        list(zip(hist.centers, hist.density(), rep.analytic)),
        meta={"command": "density", "u": args.u, "x0": args.x0, "lo": hist.lo, "hi": hist.hi, "bins": hist.bins},
        footer={
            "ks_distance": rep.ks_distance,
            "sup_bin_error": rep.sup_bin_error,
            "N": args.n,
            "burn_in": args.burn_in,
            "below": hist.below,
            "above": hist.above,
            "atomic_period": period if period is not None else 0,
        },
    )
    return report, EXIT_DEGENERATE if period is not None else EXIT_OK


def run_orbit(args) -> tuple[Report, int]:
    params = MapParams(args.u)
    if args.n < 0:
        raise UsageError("--n must be >= 0")
    x0 = mobius.as_point(args.x0)
    rows = []
    worst = 0.0
    direct = x0
    for n in range(args.n + 1):
        if n:
            direct = mobius.iterate_direct(params, direct, 1)
        closed = mobius.iterate_closed_form(params, x0, n)
        dev = direct.distance(closed)
        worst = max(worst, dev)
        rows.append((n, direct.value, closed.value, dev))
    footer = {"max_deviation": worst, "final_direct": rows[-1][1], "final_closed_form": rows[-1][2]}
    if not params.elliptic:
        footer["point_attractor"] = attractor.point_attractor(params)
    meta = {"command": "orbit", "u": args.u, "x0": args.x0, "regime": params.regime.value}
    return Report(["n", "direct", "closed_form", "deviation"], rows, meta, footer), EXIT_OK


def run_expand(args) -> tuple[Report, int]:
    params = _elliptic(args.u)
    if args.n_max < 0:
        raise UsageError("--n-max must be >= 0")
    f = builtin_function(args.fn, params)
    grid = expansion.make_grid(params, args.nodes)
    coeffs = expansion.compute_coefficients(params, f, args.n_max, grid)
    half = coeffs.truncated(args.n_max // 2)
    xs = np.linspace(args.window[0], args.window[1], args.points)
    fx = np.asarray(f(xs), dtype=complex)
    full = expansion.reconstruct(params, coeffs, xs)
    part = expansion.reconstruct(params, half, xs)
    rows = list(zip(xs, fx.real, fx.imag, full.real, full.imag, part.real, part.imag))
    window = tuple(args.window)
    report = Report(
        ["x", "f_re", "f_im", "recon_re", "recon_im", "recon_half_re", "recon_half_im"],
        rows,
        meta={"command": "expand", "u": args.u, "fn": args.fn, "nodes": args.nodes},
        footer={
            "n_max": args.n_max,
            "n_half": half.n_max,
            "l1_error": expansion.reconstruction_error(params, f, coeffs, window, args.points),
            "l1_error_half": expansion.reconstruction_error(params, f, half, window, args.points),
        },
        tables={"coefficients": (["n", "re", "im"], [(n, c.real, c.imag) for n, c in sorted(coeffs.coeffs.items())])},
    )
    return report, EXIT_OK


def run_eigen(args) -> tuple[Report, int]:
    params = _elliptic(args.u)
    sd = spectral.spectral_data(params)
    xs = np.linspace(args.window[0], args.window[1], args.points)
    at_jump = xs == sd.x0_disc
    theta = np.full(xs.shape, math.nan)
    theta[~at_jump] = spectral.eval_theta(params, xs[~at_jump])
    sig = spectral.eval_eigenfunction(params, args.n, xs)
    rows = list(zip(xs, spectral.eval_lorentzian(params, xs), theta, sig.real, sig.imag))
    lam = spectral.eigenvalue(params, args.n)
    sample = xs[(xs != 0.0) & ~at_jump]
    footer = {
        "phi": sd.phi,
        "eigenvalue_re": lam.real,
        "eigenvalue_im": lam.imag,
        "r_re": sd.r.real,
        "r_im": sd.r.imag,
        "x0_disc": sd.x0_disc,
        "eigen_residual": spectral.eigen_residual(params, args.n, sample),
    }
    meta = {"command": "eigen", "u": args.u, "n": args.n}
    return Report(["x", "lorentzian", "theta", "sigma_re", "sigma_im"], rows, meta, footer), EXIT_OK


def _period_range(text: str) -> range:
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return range(int(lo), int(hi) + 1)
        n = int(text)
        return range(n, n + 1)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or LO..HI, got {text!r}") from None


def run_cycles(args) -> tuple[Report, int]:
    rows = []
    status = EXIT_OK
    for n in args.n:
        params = mobius.cycle_parameter(n)
        S = MobiusMatrix.forward(params)
        power = MobiusMatrix.identity()
        verified = 0
        for k in range(1, n + 1):
            power = (S @ power).normalized()
            if power.is_scalar(1e-12):
                verified = k
                break
        offdiag = max(abs(power.m12), abs(power.m21))
        u_tan = math.sqrt(4.0 / (math.tan(math.pi / n) ** 2 + 1.0))
        rows.append((n, params.u, u_tan, verified, offdiag))
        if verified != n:
            status = EXIT_FAILED
    return Report(["n", "u", "u_tan_formula", "verified_period", "max_offdiag"], rows, {"command": "cycles"}), status


def run_normalize(args) -> tuple[Report, int]:
    m = MobiusMatrix(*args.matrix)
    params, (k1, k2) = mobius.normalize(m)
    rng = np.random.default_rng(checks.SEED)
    worst = 0.0
    for x0 in rng.uniform(-3, 3, 10):
        for n in range(0, 21):
            lhs = k1 * m.power(n)(x0).value + k2
            rhs = mobius.iterate_direct(params, k1 * x0 + k2, n).value
            if math.isfinite(lhs) and math.isfinite(rhs):
                worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
    report = Report(
        ["u", "k1", "k2", "regime"],
        [(params.u, k1, k2, params.regime.value)],
        meta={"command": "normalize", "matrix": " ".join(repr(float(v)) for v in args.matrix)},
        footer={"max_conjugation_error": worst},
    )
    return report, EXIT_OK


def run_residuals(args) -> tuple[Report, int]:
    params = MapParams(args.u)
    results = checks.run_battery(params)
    rows = [(r.name, r.value, r.tolerance, r.relation, r.passed) for r in results]
    failed = [r.name for r in results if not r.passed]
    for name in failed:
        print(f"FAILED: {name}", file=sys.stderr)
    report = Report(
        ["check", "value", "tolerance", "relation", "passed"],
        rows,
        meta={"command": "residuals", "u": args.u, "regime": params.regime.value},
        footer={"checks": len(results), "failed": len(failed)},
    )
    return report, EXIT_FAILED if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="fracmap",
        description="Transfer operator f -> f(U - 1/x)/x^2 and the map x -> 1/(U - x).",
        epilog=SCHEMAS,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("density", help="orbit histogram vs analytic Lorentzian density", epilog=SCHEMAS,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--u", type=float, required=True)
    p.add_argument("--x0", type=float, default=0.3)
    p.add_argument("--n", type=int, default=1_000_000, help="number of binned orbit points")
    p.add_argument("--burn-in", type=int, default=1000)
    p.add_argument("--bins", type=int, default=200)
    _add_common(p)
    p.set_defaults(func=run_density)

    p = sub.add_parser("orbit", help="direct vs closed-form trajectory", epilog=SCHEMAS,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--u", type=float, required=True)
    p.add_argument("--x0", type=float, default=0.3)
    p.add_argument("--n", type=int, default=100, help="number of steps")
    _add_common(p, window=False)
    p.set_defaults(func=run_orbit)

    p = sub.add_parser("expand", help="eigenfunction expansion of a built-in function", epilog=SCHEMAS,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--u", type=float, required=True)
    p.add_argument("--fn", required=True, help="one of: " + ", ".join(BUILTIN_NAMES))
    p.add_argument("--n-max", type=int, default=64)
    p.add_argument("--nodes", type=int, default=expansion.DEFAULT_NODES)
    p.add_argument("--points", type=int, default=2001)
    _add_common(p)
    p.set_defaults(func=run_expand)

    p = sub.add_parser("eigen", help="tabulate one eigenfunction", epilog=SCHEMAS,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--u", type=float, required=True)
    p.add_argument("--n", type=int, default=1, help="harmonic number")
    p.add_argument("--points", type=int, default=401)
    _add_common(p)
    p.set_defaults(func=run_eigen)

    p = sub.add_parser("cycles", help="parameters giving period-n cycles", epilog=SCHEMAS,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--n", type=_period_range, default=range(3, 13), help="N or LO..HI (default 3..12)")
    _add_common(p, window=False)
    p.set_defaults(func=run_cycles)

    p = sub.add_parser("normalize", help="reduce (a x + b)/(c x + d) to 1/(U - y)", epilog=SCHEMAS,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--matrix", nargs=4, type=float, required=True, metavar=("A", "B", "C", "D"))
    _add_common(p, window=False)
    p.set_defaults(func=run_normalize)

    p = sub.add_parser("residuals", help="run the invariant battery for one U", epilog=SCHEMAS,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--u", type=float, required=True)
    _add_common(p, window=False)
    p.set_defaults(func=run_residuals)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "window", None) is not None and not args.window[1] > args.window[0]:
        parser.exit(EXIT_INVALID, "fracmap: error: --window needs LO < HI\n")
    try:
        report, status = args.func(args)
    except (UsageError, FracmapError) as exc:
        print(f"fracmap {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    text = report.render(args.format)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
