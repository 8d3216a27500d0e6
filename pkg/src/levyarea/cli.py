"""Command-line front end.

Exit codes: 0 when every reported criterion passes, 1 when any fails, 2 on
usage or domain errors.  Tables are CSV (header row, 15 significant digits,
LF line endings); reports are JSON following ``report.schema.json``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from importlib import resources

import numpy as np

from . import areasim, bessel, charfn, levy, sampler, verify
from .errors import LevyAreaError

SCHEMA_VERSION = 1
SEED_ENV = "LEVYAREA_SEED"


class UsageError(Exception):
    pass


def _fmt(x):
    return f"{x:.15g}"


def _finite(x):
    x = float(x)
    return x if math.isfinite(x) else None


def write_csv(header, rows, out):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    text = buf.getvalue()
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def criterion(name, passed, value=None, threshold=None, deviations=None, details=None):
    c = {"name": name, "pass": bool(passed), "value": None if value is None else _finite(value), "threshold": threshold}
    if deviations is not None:
        c["deviations"] = [_finite(d) for d in deviations]
    if details is not None:
        c["details"] = details
    return c


def make_report(command, inputs, seed, criteria):
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": inputs,
        "seed": seed,
        "criteria": criteria,
        "pass": all(c["pass"] for c in criteria),
    }


def emit_report(report, path):
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def load_schema():
    return json.loads(resources.files("levyarea").joinpath("report.schema.json").read_text())


# ---------------------------------------------------------------------------
# Argument parsing helpers
# ---------------------------------------------------------------------------

def parse_tgrid(spec):
    """``"0.5,1,2"`` or ``"lo:hi:n"`` (n points, inclusive)."""
    try:
        if ":" in spec:
            lo, hi, n = spec.split(":")
            return [float(v) for v in np.linspace(float(lo), float(hi), int(n))]
        return [float(v) for v in spec.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {spec!r}; use 'a,b,c' or 'lo:hi:n'") from None


def parse_point(spec):
    try:
        x, y = (float(v) for v in spec.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad point {spec!r}; use 'x,y'") from None
    return (x, y)


def default_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={raw!r} is not an integer") from None


def _seed(args):
    return args.seed if args.seed is not None else default_seed()


def _need(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise UsageError(f"--{n} is required for this command")


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_zeros(args):
    zt = bessel.find_zeros(args.nu, args.k)
    write_csv(["k", "z_k"], [(k + 1, float(z)) for k, z in enumerate(zt.zeros)], args.out)
    return 0


def _eval_function(args):
    fid = args.function
    if fid in ("B", "b", "jratio", "jiratio"):
        _need(args, "nu")
        f = {"B": charfn.make_B, "b": charfn.make_b, "jratio": charfn.make_jratio_cf, "jiratio": charfn.make_jiratio_cf}[fid](args.nu)
        return lambda t: float(f(t).real)
    if fid == "levy":
        u = 1.0 if args.u is None else args.u
        a = args.a or (0.0, 0.0)
        areasim.levy_formula(0.0, u, a)
        return lambda t: areasim.levy_formula(t, u, a)
    if fid == "bianeyor":
        _need(args, "p")
        a = args.a or (0.0, 0.0)
        areasim.biane_yor_formula(0.0, args.p, a)
        return lambda t: areasim.biane_yor_formula(t, args.p, a)
    raise UsageError(f"unknown function {fid!r}")


def cmd_eval(args):
    f = _eval_function(args)
    write_csv(["t", "value"], [(float(t), f(t)) for t in args.t], args.out)
    return 0


def cmd_sample(args):
    seed = _seed(args)
    if args.law == "laplace":
        batch = sampler.batch_laplace(args.n, seed)
        phi = charfn.laplace_cf()
    elif args.law == "X":
        _need(args, "nu")
        batch = sampler.batch_X(args.nu, args.k, args.n, seed, args.compensate)
        phi = charfn.make_B(args.nu)
    else:
        _need(args, "nu")
        batch = sampler.batch_f(args.nu, args.n, seed)
        phi = charfn.make_jratio_cf(args.nu)
    if args.out:
        write_csv(["value"], [(float(v),) for v in batch.values], args.out)
    rep = verify.ecf_compare(batch, phi, args.t, threshold=args.threshold)
    crit = [criterion(f"ecf vs {phi.label}", rep.pass_, rep.max_deviation, args.threshold, rep.deviations, rep.as_dict())]
    inputs = {"law": args.law, "nu": args.nu, "k": args.k, "n": args.n, "compensate": args.compensate, "t": args.t, "algorithm": sampler.ALGORITHM}
    report = make_report("sample", inputs, seed, crit)
    emit_report(report, args.report)
    return 0 if report["pass"] else 1


def cmd_simulate(args):
    seed = _seed(args)
    stream = sampler.SeededStream(seed)
    a = args.a or (0.0, 0.0)
    if args.p is None:
        grid = areasim.GridSpec(args.steps, args.scheme, args.u)
        ens = areasim.simulate_bridge_area(args.u, a, grid, args.n, stream, block=args.block)
        phi = areasim.levy_cf(args.u, a)
    else:
        scheme = args.scheme if args.scheme else "uniform"
        grid = areasim.GridSpec(args.steps, scheme, 1.0)
        ens = areasim.simulate_vp_area(args.p, a, grid, args.n, stream, block=args.block)
        phi = areasim.biane_yor_cf(args.p, a)
    rows = areasim.empirical_ccf(ens, args.t)
    table = [(t, est.real, est.imag, se, float(phi(t).real)) for t, est, se in rows]
    write_csv(["t", "ecf_re", "ecf_im", "se", "analytic"], table, args.out)
    if args.areas_out:
        write_csv(["area"], [(float(v),) for v in ens.areas], args.areas_out)
    rep = verify.ecf_compare(ens, phi, args.t, threshold=args.threshold)
    inputs = {"p": args.p, "u": args.u, "a": list(a), "n": args.n, "steps": args.steps, "scheme": grid.scheme, "block": args.block, "t": args.t}
    crit = [criterion(f"ecf vs {phi.label}", rep.pass_, rep.max_deviation, args.threshold, rep.deviations, rep.as_dict())]
    report = make_report("simulate", inputs, seed, crit)
    if args.report:
        emit_report(report, args.report)
    return 0 if report["pass"] else 1


def _verify_vandantzig(args):
    nu = 0.5 if args.nu is None else args.nu
    args.points = args.points or 61
    grid = np.linspace(-args.tmax, args.tmax, args.points)
    tol = 1e-9 if args.tol is None else args.tol
    out = []
    r = charfn.van_dantzig_check(charfn.make_jiratio_cf(nu), "self", grid)
    out.append(criterion(f"self-reciprocal J_{nu:g}/I_{nu:g}", r.max_residual < tol, r.max_residual, tol, details={"excluded": [float(x) for x in r.excluded]}))
    r = charfn.van_dantzig_check(charfn.make_B(nu), charfn.make_jratio_cf(nu), grid)
    out.append(criterion(f"pair (B_{nu:g}, jratio_{nu:g})", r.max_residual < tol, r.max_residual, tol))
    return {"nu": nu, "tmax": args.tmax, "points": args.points}, out


def _sd_grid(args):
    args.points = args.points or 16
    return np.linspace(-4.0, 4.0, args.points)


def _verify_selfdec(args):
    _need(args, "nu")
    tol = verify.PD_TOL if args.tol is None else args.tol
    reps = verify.selfdecomposability_check(charfn.make_B(args.nu), args.c, _sd_grid(args), tol)
    return {"nu": args.nu, "c": args.c, "points": args.points}, [
        criterion(r.label, r.pass_, r.min_eigenvalue, -r.tolerance) for r in reps
    ]


def _verify_sselfdec(args):
    _need(args, "nu")
    tol = verify.PD_TOL if args.tol is None else args.tol
    reps = verify.s_selfdecomposability_check(charfn.make_b(args.nu), args.c, _sd_grid(args), tol)
    return {"nu": args.nu, "c": args.c, "points": args.points}, [
        criterion(r.label, r.pass_, r.min_eigenvalue, -r.tolerance) for r in reps
    ]


def _verify_ratio_series(args):
    _need(args, "nu")
    tol = 1e-7 if args.tol is None else args.tol
    args.k = args.k or 200
    out = []
    for t in args.t:
        res = levy.verify_ratio_series(args.nu, t, args.k)
        out.append(criterion(f"zero series vs Bessel ratio, t={t:g}", res < tol, res, tol))
        rel = abs(math.exp(levy.levy_exponent_B(args.nu, t, args.k)) / float(charfn.make_B(args.nu)(t).real) - 1.0)
        out.append(criterion(f"product vs series t={t:g}", rel < tol, rel, tol))
    return {"nu": args.nu, "k": args.k, "t": args.t}, out


def _verify_bdlp(args):
    _need(args, "nu")
    tol = 1e-6 if args.tol is None else args.tol
    B = charfn.make_B(args.nu)
    b = charfn.make_b(args.nu)
    out = []
    for t in args.t:
        fd = t * float(charfn.log_derivative(B, t))
        err = abs(math.log(float(b(t).real)) - fd)
        out.append(criterion(f"log b vs t (log B)' at t={t:g}", err < tol, err, tol))
    return {"nu": args.nu, "t": args.t}, out


def _verify_nonid(args):
    _need(args, "nu")
    lo, hi = args.interval
    w = verify.non_id_witness(charfn.make_jratio_cf(args.nu), (lo, hi))
    z1 = float(bessel.find_zeros(args.nu, 1).zeros[0])
    ok = w is not None and abs(w - z1) < 1e-6
    return {"nu": args.nu, "interval": [lo, hi]}, [
        criterion("real zero of jratio equals z_1", ok, None if w is None else abs(w - z1), 1e-6, details={"witness": w, "z1": z1})
    ]


def _verify_logmoment(args):
    _need(args, "nu")
    K = args.k or 20
    sums = levy.log_moment_sums(args.nu, 2 * K)
    zK = float(bessel.find_zeros(args.nu, K).zeros[K - 1])
    bound = math.exp(-zK)
    d1, d2 = sums.increment(K, 2 * K)
    return {"nu": args.nu, "k": K}, [
        criterion("S1 Cauchy: |S(2K)-S(K)| < exp(-z_K)", d1 < bound, d1, bound, details={"S1": sums.S1, "tail_bound": sums.tail_bound1}),
        criterion("S2 Cauchy: |S(2K)-S(K)| < exp(-z_K)", d2 < bound, d2, bound, details={"S2": sums.S2, "tail_bound": sums.tail_bound2}),
    ]


def _verify_halfint(args):
    tol = 1e-10 if args.tol is None else args.tol
    grid = args.t
    out = []
    for n in range(args.nmax + 1):
        B = charfn.make_B(n + 0.5)
        e3 = max(abs(charfn.half_integer_B(n, t) / float(B(t).real) - 1.0) for t in grid)
        e4 = max(abs(charfn.half_integer_B_operator(n, t) / float(B(t).real) - 1.0) for t in grid)
        out.append(criterion(f"closed form n={n}", e3 < tol, e3, tol))
        out.append(criterion(f"operator form n={n}", e4 < tol, e4, tol))
    return {"nmax": args.nmax, "t": grid}, out


VERIFY = {
    "vandantzig": _verify_vandantzig,
    "selfdec": _verify_selfdec,
    "sselfdec": _verify_sselfdec,
    "ratio": _verify_ratio_series,
    "bdlp": _verify_bdlp,
    "nonid": _verify_nonid,
    "logmoment": _verify_logmoment,
    "halfint": _verify_halfint,
}


def cmd_verify(args):
    inputs, crit = VERIFY[args.check](args)
    report = make_report(f"verify {args.check}", inputs, None, crit)
    emit_report(report, args.report)
    return 0 if report["pass"] else 1


def cmd_schema(args):
    sys.stdout.write(json.dumps(load_schema(), indent=2) + "\n")
    return 0


# ---------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="levyarea", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    z = sub.add_parser("zeros", help="tabulate zeros of z^-nu J_nu(z)")
    z.add_argument("--nu", type=float, required=True)
    z.add_argument("--k", type=int, default=10)
    z.add_argument("--out")
    z.set_defaults(func=cmd_zeros)

    e = sub.add_parser("eval", help="evaluate a characteristic function on a t-grid")
    e.add_argument("function", choices=["B", "b", "jratio", "jiratio", "levy", "bianeyor"])
    e.add_argument("--nu", type=float)
    e.add_argument("--p", type=float)
    e.add_argument("--u", type=float)
    e.add_argument("--a", type=parse_point)
    e.add_argument("--t", type=parse_tgrid, default=[0.0, 0.5, 1.0, 2.0])
    e.add_argument("--out")
    e.set_defaults(func=cmd_eval)

    s = sub.add_parser("sample", help="draw samples and compare their ECF with the analytic CF")
    s.add_argument("law", choices=["laplace", "X", "f"])
    s.add_argument("--nu", type=float)
    s.add_argument("--k", type=int, default=100)
    s.add_argument("--n", type=int, default=100_000)
    s.add_argument("--seed", type=int)
    s.add_argument("--compensate", action=argparse.BooleanOptionalAction, default=True)
    s.add_argument("--t", type=parse_tgrid, default=[0.5, 1.0, 2.0])
    s.add_argument("--threshold", type=float, default=4.0)
    s.add_argument("--out")
    s.add_argument("--report")
    s.set_defaults(func=cmd_sample)

    m = sub.add_parser("simulate", help="Monte Carlo conditioned stochastic areas")
    m.add_argument("what", choices=["area"])
    m.add_argument("--p", type=float, help="order of V^p; omit for the plain Levy area")
    m.add_argument("--u", type=float, default=1.0)
    m.add_argument("--a", type=parse_point)
    m.add_argument("--n", type=int, default=100_000)
    m.add_argument("--steps", type=int, default=4096)
    m.add_argument("--scheme", choices=["uniform", "geometric"], default="uniform")
    m.add_argument("--block", type=int, default=areasim.DEFAULT_BLOCK)
    m.add_argument("--seed", type=int)
    m.add_argument("--t", type=parse_tgrid, default=[0.5, 1.0, 2.0])
    m.add_argument("--threshold", type=float, default=4.0)
    m.add_argument("--out")
    m.add_argument("--areas-out")
    m.add_argument("--report")
    m.set_defaults(func=cmd_simulate)

    v = sub.add_parser("verify", help="numerical identity and class-membership checks")
    v.add_argument("check", choices=sorted(VERIFY))
    v.add_argument("--nu", type=float)
    v.add_argument("--c", type=float, nargs="+", default=[0.25, 0.5, 0.75])
    v.add_argument("--points", type=int, help="grid size (16 for PD checks, 61 for vandantzig)")
    v.add_argument("--tmax", type=float, default=3.0)
    v.add_argument("--t", type=parse_tgrid, default=[0.5, 1.0, 3.0])
    v.add_argument("--k", type=int, help="number of zeros (200 for ratio, 20 for logmoment)")
    v.add_argument("--nmax", type=int, default=4)
    v.add_argument("--interval", type=float, nargs=2, default=[0.5, 8.0])
    v.add_argument("--tol", type=float)
    v.add_argument("--report")
    v.set_defaults(func=cmd_verify)

    sc = sub.add_parser("schema", help="print the JSON report schema")
    sc.set_defaults(func=cmd_schema)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) if exc.code in (0, None) else 2
    try:
        return args.func(args)
    except (LevyAreaError, UsageError, ValueError) as exc:
        print(f"levyarea: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
