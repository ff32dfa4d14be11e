"""Command-line front end.

Exit status: 0 success, 1 a check failed, 2 bad arguments, 3 numerical failure.
Every output starts with a metadata block (``#`` comment lines for CSV, a
``metadata`` object for JSON) holding the version and the full configuration;
nothing time-dependent is written, so identical runs give identical files.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
import warnings
from fractions import Fraction

import numpy as np

from . import __version__
from .curve import CurveModel, JacobiCurveModel, sample_density
from .equilibrium import equilibrium_residual, jacobi_residual
from .exact import raney_exact
from .params import ParameterError, as_fraction, from_family, make_params
from .quad import density_moment
from .rmt import compare_to_density, run_mc
from .wienerhopf import (
    WHFactorization,
    asymptotic_check,
    factor_minus,
    factor_plus,
    fourier_kernel_check,
    kernel_K,
    potential_coefficients,
    raney_moment_general,
    residue_A,
    strip_bounds,
)

EXIT_OK, EXIT_CHECK, EXIT_ARGS, EXIT_NUMERIC = 0, 1, 2, 3


class ArgumentFailure(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return as_fraction(text)
    except ParameterError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _floats(text: str):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _fmt_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return _fmt_rational(x)
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _jsonable(x):
    if isinstance(x, Fraction):
        return _fmt_rational(x)
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _metadata(args) -> dict:
    skip = {"func", "out"}
    meta = {"program": "raneylab", "version": __version__, "command": args.command}
    for k, v in sorted(vars(args).items()):
        if k not in skip and k != "command":
            meta[k] = v
    return _jsonable(meta)


def _emit(args, columns, rows, extra=None, trailer=None):
    """Write a table in the requested format to ``--out`` or stdout."""
    meta = _metadata(args)
    buf = io.StringIO()
    if args.format == "json":
        doc = {"metadata": meta, "rows": [dict(zip(columns, map(_jsonable, r))) for r in rows]}
        if extra:
            doc.update(_jsonable(extra))
        json.dump(doc, buf, indent=2, sort_keys=False)
        buf.write("\n")
    else:
        for k, v in meta.items():
            buf.write(f"# {k}={json.dumps(v)}\n")
        buf.write(",".join(columns) + "\n")
        for r in rows:
            buf.write(",".join(_fmt(v) for v in r) + "\n")
        if trailer:
            buf.write(f"# {trailer}\n")
    _write(args.out, buf.getvalue())


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _params_from_args(args):
    if args.p is not None and args.r is not None:
        return make_params(args.p, args.r)
    if args.theta is not None:
        return from_family(args.theta, args.q, args.m)
    raise ArgumentFailure("give either --p and --r, or --theta [--q --m]")


def cmd_moments(args) -> int:
    params = _params_from_args(args)
    if args.n < 0:
        raise ArgumentFailure("--n must be non-negative")
    mode = args.mode
    model = CurveModel.from_params(params) if mode == "quad" else None
    spec = None
    if mode == "wh":
        if not params.has_family:
            raise ArgumentFailure(f"{params} has no (theta, q, m) coordinates; wh mode needs r = m + 1/q")
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            spec = potential_coefficients(params.theta, params.q, params.m)
    rows = []
    worst = 0.0
    for n in range(args.n + 1):
        exact = raney_exact(params, n)
        if mode == "exact":
            value = float(exact)
        elif mode == "wh":
            value = raney_moment_general(spec, n)
        else:
            value = density_moment(model, n, args.tol)
        dev = abs(value - float(exact))
        rel = dev / abs(float(exact))
        worst = max(worst, rel)
        rows.append((n, exact, float(exact), mode, value, dev, rel))
    _emit(args, ["n", "exact", "float", "mode", "value", "abs_dev", "rel_dev"], rows)
    if args.check is not None and worst > args.check:
        return EXIT_CHECK
    return EXIT_OK


def cmd_density(args) -> int:
    params = _params_from_args(args)
    if args.points < 16:
        raise ArgumentFailure("--points must be at least 16")
    model = CurveModel.from_params(params)
    prof = sample_density(model, args.points)
    mass = prof.mass()
    rows = [(float(x), float(y)) for x, y in zip(prof.grid, prof.values)]
    _emit(args, ["x", "rho"], rows, extra={"L": prof.L, "mass": mass},
          trailer=f"L={prof.L!r} mass={mass!r}")
    return EXIT_OK


def cmd_equilibrium(args) -> int:
    ys = args.y
    if not ys or any(not 0.0 < y < 1.0 for y in ys):
        raise ArgumentFailure("--y values must lie strictly inside (0, 1)")
    theta, q, m = args.theta, args.q, args.m
    if theta is None:
        raise ArgumentFailure("--theta is required")
    if args.jacobi:
        if q != 1 or theta.denominator != 1:
            raise ArgumentFailure("--jacobi needs integer theta and q = 1")
        prof = sample_density(JacobiCurveModel(int(theta)), args.points)
        vals = [jacobi_residual(prof, theta, q, y) for y in ys]
    else:
        params = from_family(theta, q, m)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            spec = potential_coefficients(theta, q, m)
        prof = sample_density(CurveModel.from_params(params), args.points).scaled()
        vals = [equilibrium_residual(prof, theta, q, spec, y) for y in ys]
    rows = [(y, r, abs(r) <= args.tol) for y, r in zip(ys, vals)]
    _emit(args, ["y", "residual", "pass"], rows)
    return EXIT_OK if all(r[2] for r in rows) else EXIT_CHECK


def _wh_report(theta, q, seed, tol):
    wh = WHFactorization(float(theta), q)
    lo, hi = strip_bounds(wh)
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-5, 5, 20) + 1j * rng.uniform(0.5 * lo, hi, 20)
    fact = max(abs(kernel_K(wh, z) - factor_plus(wh, z) / factor_minus(wh, z)) / abs(kernel_K(wh, z))
               for z in pts)
    fourier = max(fourier_kernel_check(wh, complex(x, 0.5 * lo)) for x in (-2.0, 0.3, 3.0))
    ratios = asymptotic_check(wh, -math.pi / 4, [1e3])[0]
    asym = max(abs(r - 1) for r in ratios)
    A = residue_A(wh)
    A_expected = 1j / (wh.L * float(theta))
    report = {
        "theta": theta, "q": q,
        "c": wh.c, "c_expected": -math.log(wh.L),
        "factorization_max_rel_dev": fact,
        "fourier_max_abs_dev": fourier,
        "asymptotic_max_dev": asym,
        "residue": complex(A), "residue_expected": A_expected,
        "residue_abs_dev": abs(A - A_expected),
    }
    ok = (fact <= 1e-10 and fourier <= 1e-6 and asym <= 1e-2
          and report["residue_abs_dev"] <= tol and abs(wh.c + math.log(wh.L)) <= tol)
    return report, ok


def cmd_wh(args) -> int:
    if args.theta is None:
        raise ArgumentFailure("--theta is required")
    report, ok = _wh_report(args.theta, args.q, args.seed, args.tol)
    report["pass"] = ok
    doc = {"metadata": _metadata(args), "report": _jsonable(report)}
    _write(args.out, json.dumps(doc, indent=2) + "\n")
    return EXIT_OK if ok else EXIT_CHECK


def cmd_mc(args) -> int:
    if args.size < 2:
        raise ArgumentFailure("--size must be at least 2")
    if args.factors < 1:
        raise ArgumentFailure("--factors must be at least 1")
    if args.trials < 1:
        raise ArgumentFailure("--trials must be at least 1")
    run = run_mc(args.size, args.factors, args.trials, args.seed, workers=args.workers)
    rep = compare_to_density(run, nbins=args.bins, max_moment=4)
    meta = _metadata(args)
    lines = [f"# {k}={json.dumps(v)}" for k, v in meta.items()]
    lines.append("bin_left,bin_right,count,density_est,density_model")
    e = rep.bin_edges
    for i in range(len(rep.counts)):
        lines.append(f"{e[i]!r},{e[i + 1]!r},{int(rep.counts[i])},"
                     f"{float(rep.density_est[i])!r},{float(rep.density_model[i])!r}")
    report = rep.to_dict()
    moments_ok = all(m["rel_dev"] <= args.moment_tol for m in report["moments"])
    ks_ok = rep.ks < args.ks_tol
    report["pass"] = bool(moments_ok and ks_ok)
    doc = {"metadata": meta, "report": report}
    if args.out in (None, "-"):
        sys.stdout.write("\n".join(lines) + "\n")
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        _write(args.out + ".csv", "\n".join(lines) + "\n")
        _write(args.out + ".json", json.dumps(doc, indent=2) + "\n")
    if args.gate and not report["pass"]:
        return EXIT_CHECK
    return EXIT_OK


def cmd_coeffs(args) -> int:
    if args.theta is None:
        raise ArgumentFailure("--theta is required")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        spec = potential_coefficients(args.theta, args.q, args.m)
    L = spec.L
    rows = [(l, c, a * L) for l, (c, a) in enumerate(zip(spec.coefficients, spec.alphas))]
    extra = {"warnings": [str(w.message) for w in caught]} if caught else None
    _emit(args, ["l", "c_l", "alpha_l_L"], rows, extra=extra)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="raneylab", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"raneylab {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, fmt=True):
        p.add_argument("--out", default=None, help="output path (default stdout)")
        if fmt:
            p.add_argument("--format", choices=("csv", "json"), default="csv")

    def family(p):
        p.add_argument("--p", type=_rational)
        p.add_argument("--r", type=_rational)
        p.add_argument("--theta", type=_rational)
        p.add_argument("--q", type=int, default=1)
        p.add_argument("--m", type=int, default=0)

    p = sub.add_parser("moments", help="Raney moments: exact, Wiener-Hopf or quadrature")
    family(p)
    p.add_argument("--n", type=int, default=6, help="largest moment order")
    p.add_argument("--mode", choices=("exact", "wh", "quad"), default="exact")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--check", type=float, default=None,
                   help="fail (exit 1) when a relative deviation exceeds this")
    common(p)
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("density", help="sample the density from the algebraic curve")
    family(p)
    p.add_argument("--points", type=int, default=200)
    common(p)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("equilibrium", help="residuals of the equilibrium integral equation")
    p.add_argument("--theta", type=_rational)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--y", type=_floats, default=[0.25, 0.5, 0.75])
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--jacobi", action="store_true", help="field-free binomial-moment equation")
    common(p)
    p.set_defaults(func=cmd_equilibrium)

    p = sub.add_parser("wh", help="Wiener-Hopf factorisation checks (JSON)")
    p.add_argument("--theta", type=_rational)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-10)
    common(p, fmt=False)
    p.set_defaults(func=cmd_wh, format="json")

    p = sub.add_parser("mc", help="Monte Carlo over products of Ginibre matrices")
    p.add_argument("--size", "-N", type=int, default=100)
    p.add_argument("--factors", "-M", type=int, default=1)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--bins", type=int, default=50)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--moment-tol", type=float, default=0.02)
    p.add_argument("--ks-tol", type=float, default=0.02)
    p.add_argument("--gate", action="store_true", help="exit 1 when a tolerance is missed")
    p.add_argument("--out", default=None, help="output prefix for .csv and .json")
    p.set_defaults(func=cmd_mc, format="csv")

    p = sub.add_parser("coeffs", help="potential coefficients c_l and alpha_l L")
    p.add_argument("--theta", type=_rational)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--m", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_coeffs)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except (ArgumentFailure, ParameterError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except (ArithmeticError, OverflowError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
