"""Command-line front end.

Subcommands: zeta, trace-term, apery, beukers, confluence, validate.  One
JSON record per result on standard output (or CSV with --format csv); exit
codes: 0 success, 2 domain/precondition error, 3 non-convergence, 64 usage.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time
from fractions import Fraction

from . import __version__, apery, trace_terms, zeta_values
from .errors import DomainError, NoConvergence, RabiZetaError
from .operator_oracle import BergmanNu, Ncho, OnePhoton, TwoPhoton

_EXIT_OK = 0
_EXIT_DOMAIN = 2
_EXIT_NOCONV = 3
_EXIT_USAGE = 64


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of calling sys.exit so run() can map
    usage problems to exit code 64."""

    def error(self, message):
        raise _UsageError(message)


def _fmt(x) -> str:
    """17-significant-digit rendering for floats; native for the rest."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        if math.isfinite(x):
            return "%.17g" % x
        return '"%s"' % x
    if isinstance(x, int):
        return str(x)
    raise TypeError(f"unsupported scalar {type(x)}")


def _json(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, str):
        out = obj.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{out}"'
    if isinstance(obj, (bool, int, float)):
        return _fmt(obj)
    if isinstance(obj, Fraction):
        return _json(str(obj))
    if isinstance(obj, complex):
        return _json({"re": obj.real, "im": obj.imag})
    if isinstance(obj, dict):
        items = ", ".join(f"{_json(str(k))}: {_json(v)}" for k, v in obj.items())
        return "{" + items + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_json(v) for v in obj) + "]"
    return _json(str(obj))


def _record(command, params, value, abs_error, method, truncations, runtime_ms,
            per_m_terms=None, rng_seed=None, extra=None):
    rec = {
        "command": command,
        "params": params,
        "value": {"re": complex(value).real, "im": complex(value).imag},
        "abs_error": float(abs_error),
        "method": method,
        "truncations": truncations or {},
        "runtime_ms": int(round(runtime_ms)),
        "library_version": __version__,
    }
    if per_m_terms is not None:
        rec["per_m_terms"] = [
            {"re": complex(t).real, "im": complex(t).imag} for t in per_m_terms
        ]
    if rng_seed is not None:
        rec["rng_seed"] = rng_seed
    if extra:
        rec.update(extra)
    return rec


def _emit(records, fmt):
    if fmt == "json":
        for rec in records:
            sys.stdout.write(_json(rec) + "\n")
        return
    cols = ["command", "value_re", "value_im", "abs_error", "method", "runtime_ms", "params"]
    sys.stdout.write(",".join(cols) + "\n")
    for rec in records:
        params = ";".join(f"{k}={v}" for k, v in rec.get("params", {}).items())
        row = [
            rec["command"],
            "%.17g" % rec["value"]["re"],
            "%.17g" % rec["value"]["im"],
            "%.17g" % rec["abs_error"],
            rec.get("method", ""),
            str(rec.get("runtime_ms", 0)),
            '"%s"' % params,
        ]
        sys.stdout.write(",".join(row) + "\n")


def _parse_complex(text: str) -> complex:
    parts = text.split(",")
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise _UsageError(f"complex values use RE or RE,IM syntax, got {text!r}")


def _lam_str(z: complex) -> str:
    z = complex(z)
    if z.imag == 0:
        return "%.17g" % z.real
    return "%.17g,%.17g" % (z.real, z.imag)


def _build_model(args):
    name = args.model.lower()
    if name in ("1pqrm", "onephoton", "flat"):
        return OnePhoton(args.g, args.delta, args.eps)
    if name in ("2pqrm", "twophoton"):
        return TwoPhoton(args.g, args.delta, args.eps)
    if name in ("bergman", "nu"):
        if args.nu is None:
            raise _UsageError("--nu is required for the bergman model")
        return BergmanNu(args.nu, args.g, args.delta, args.eps)
    if name == "ncho":
        if args.alpha is None or args.beta is None or args.eta is None:
            raise _UsageError("--alpha, --beta, --eta are required for the ncho model")
        return Ncho(args.alpha, args.beta, args.eta)
    raise _UsageError(f"unknown model {args.model!r}")


def _add_param_flags(p):
    p.add_argument("--lambda", dest="lam", type=_parse_complex, default=1.0 + 0.0j)
    p.add_argument("--g", type=float, default=0.0)
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--nu", type=float, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--eta", type=float, default=None)


def _make_parser():
    top = _Parser(prog="rabi-zeta")
    top.add_argument("--format", choices=("json", "csv"), default="json")
    top.add_argument("--threads", type=int, default=None)
    sub = top.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("zeta")
    p.add_argument("--model", required=True)
    p.add_argument("--n", type=int, required=True)
    _add_param_flags(p)
    p.add_argument("--method", default="series_operator",
                   choices=("series_integral", "series_operator", "eigen_oracle"))
    p.add_argument("--max-m", type=int, default=12)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--trunc-n", type=int, default=400)
    p.add_argument("--parity-difference", action="store_true")

    p = sub.add_parser("trace-term")
    p.add_argument("--family", required=True, choices=("flat", "plus", "minus", "nu"))
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--deriv", type=int, default=0)
    p.add_argument("--route", default="integral", choices=("integral", "operator", "series"))
    p.add_argument("--trunc-n", type=int, default=400)
    _add_param_flags(p)

    p = sub.add_parser("apery")
    p.add_argument("--family", required=True, choices=("flat", "plus", "minus", "classic"))
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--n-max", type=int, default=3)
    p.add_argument("--exact", action="store_true")
    _add_param_flags(p)

    p = sub.add_parser("beukers")
    p.add_argument("--n-max", type=int, default=8)

    p = sub.add_parser("confluence")
    p.add_argument("--nu-list", default="8,16,32,64")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--method", default="series_operator",
                   choices=("series_integral", "series_operator"))
    p.add_argument("--trunc-n", type=int, default=400)
    _add_param_flags(p)

    p = sub.add_parser("validate")
    p.add_argument("--suite", choices=("quick", "full"), default="quick")
    p.add_argument("--seed", type=int, default=20260823)
    return top


def _trace_family(args):
    if args.family == "flat":
        return trace_terms.FLAT
    if args.family == "plus":
        return trace_terms.PLUS
    if args.family == "minus":
        return trace_terms.MINUS
    if args.nu is None:
        raise _UsageError("--nu is required for the nu family")
    return trace_terms.Nu(args.nu)


def _cmd_zeta(args):
    model = _build_model(args)
    t0 = time.perf_counter()
    if args.parity_difference:
        res = zeta_values.parity_difference(
            model, args.n, args.lam, method=args.method, max_m=args.max_m,
            tol=args.tol, trunc_n=args.trunc_n,
        )
    else:
        req = zeta_values.ZetaRequest(
            model, args.n, args.lam, method=args.method, max_m=args.max_m,
            tol=args.tol, trunc_n=args.trunc_n,
        )
        res = zeta_values.zeta_value(req)
    runtime = 1000.0 * (time.perf_counter() - t0)
    params = {"model": args.model, "n": args.n, "lambda": _lam_str(args.lam),
              "g": args.g, "delta": args.delta, "eps": args.eps}
    if args.nu is not None:
        params["nu"] = args.nu
    if isinstance(model, Ncho):
        params.update({"alpha": args.alpha, "beta": args.beta, "eta": args.eta})
    return [
        _record("zeta", params, res.value, res.abs_error, args.method,
                res.metadata.get("truncations"), runtime, per_m_terms=res.per_m_terms,
                extra={"base_term": {"re": res.base_term.real, "im": res.base_term.imag}})
    ]


def _cmd_trace_term(args):
    family = _trace_family(args)
    t0 = time.perf_counter()
    if args.route == "series":
        if args.m != 1 or args.deriv != 0:
            raise _UsageError("the series route provides m=1, deriv=0 only")
        sv = trace_terms.r_1_series(family, args.lam, args.g, args.eps)
    elif args.route == "operator":
        sv = trace_terms._family_operator_value(
            family, args.lam, args.g, args.eps, args.m, args.deriv, args.trunc_n
        )
    else:
        sv = trace_terms.dn_r_m_integral(family, args.lam, args.g, args.eps, args.m, args.deriv)
    runtime = 1000.0 * (time.perf_counter() - t0)
    params = {"family": args.family, "m": args.m, "deriv": args.deriv,
              "lambda": _lam_str(args.lam), "g": args.g, "eps": args.eps}
    if args.nu is not None:
        params["nu"] = args.nu
    return [_record("trace-term", params, sv.value, sv.abs_error, args.route,
                    {"terms_used": sv.terms_used}, runtime)]


def _cmd_apery(args):
    t0 = time.perf_counter()
    if args.family == "classic":
        ex = apery.apery_classic(args.n_max)
        runtime = 1000.0 * (time.perf_counter() - t0)
        rec = _record("apery", {"family": "classic", "n_max": args.n_max},
                      0.0, 0.0, "exact", {}, runtime)
        rec["a_list"] = [str(a) for a in ex.a_list]
        rec["b_list"] = [str(b) for b in ex.b_list]
        return [rec]
    if args.n is None:
        raise _UsageError("--n is required for flat/plus/minus families")
    lam = args.lam if not args.exact else Fraction(str(args.lam.real if isinstance(args.lam, complex) else args.lam)).limit_denominator(10**9)
    eps = args.eps if not args.exact else Fraction(str(args.eps)).limit_denominator(10**9)
    if args.family == "flat":
        co = apery.apery_ab_flat(args.n, lam, eps)
    else:
        delta = 1 if args.family == "plus" else -1
        co = apery.apery_ab_delta(args.n, delta, lam, eps)
    runtime = 1000.0 * (time.perf_counter() - t0)
    params = {"family": args.family, "n": args.n, "lambda": _lam_str(args.lam), "eps": args.eps}
    rec = _record("apery", params, complex(co.a), 0.0, "exact" if args.exact else "float",
                  {}, runtime)
    rec["a"] = str(co.a) if args.exact else {"re": complex(co.a).real, "im": complex(co.a).imag}
    rec["b"] = str(co.b) if args.exact else {"re": complex(co.b).real, "im": complex(co.b).imag}
    return [rec]


def _cmd_beukers(args):
    records = []
    for n in range(args.n_max + 1):
        t0 = time.perf_counter()
        res = apery.beukers_residual(n)
        runtime = 1000.0 * (time.perf_counter() - t0)
        records.append(_record("beukers", {"n": n}, res, 0.0, "series", {}, runtime))
    return records


def _cmd_confluence(args, threads):
    nu_list = [float(x) for x in args.nu_list.split(",") if x]
    t0 = time.perf_counter()
    rows = zeta_values.confluence_scan(
        args.g, args.delta, args.eps, args.lam, args.n, nu_list,
        method=args.method, trunc_n=args.trunc_n, threads=threads,
    )
    runtime = 1000.0 * (time.perf_counter() - t0) / max(len(rows), 1)
    records = []
    for nu, value, deviation in rows:
        params = {"nu": nu, "n": args.n, "lambda": _lam_str(args.lam),
                  "g": args.g, "delta": args.delta, "eps": args.eps}
        records.append(_record("confluence", params, value, deviation, args.method,
                               {"trunc_n": args.trunc_n}, runtime,
                               extra={"deviation": deviation}))
    return records


def _validate_checks(suite, seed):
    """(name, residual, tolerance) rows for the route-agreement suite."""
    import numpy as np

    rng = np.random.Generator(np.random.Philox(seed))
    checks = []

    ex = apery.apery_classic(10)
    anchor = max(
        abs(ex.a_list[n] - v) for n, v in ((0, 1), (1, 3), (2, 19), (3, 147))
    )
    checks.append(("apery_classic_anchors", float(anchor), 0.0))
    checks.append(("beukers_residual_n4", apery.beukers_residual(4), 1e-9))

    lam = 1.5 + 0.6 * rng.random()
    eps = 0.1 + 0.2 * rng.random()
    j_s = apery.j_delta(6, 1, lam, eps, method="series")
    j_r = apery.j_delta(6, 1, lam, eps, method="recurrence")
    checks.append(("j_delta_series_vs_recurrence", abs(j_s.value - j_r.value), 1e-9))
    co = apery.apery_ab_flat(4, lam, eps)
    jf = apery.j_flat(4, lam, eps)
    checks.append(
        ("j_flat_vs_decomposition", abs(jf.value - apery.reconstruct_j_flat(co, lam, eps)), 1e-9)
    )

    fam_points = [(trace_terms.FLAT, 1.2, 0.2, 0.1), (trace_terms.MINUS, 1.0, 0.3, 0.15)]
    if suite == "full":
        fam_points += [
            (trace_terms.PLUS, 1.5, 0.3, 0.0),
            (trace_terms.Nu(0.5), 1.2, 0.25, 0.1),
            (trace_terms.Nu(1.5), 1.2, 0.25, 0.1),
        ]
    n_op = 400 if suite == "quick" else 1600
    for fam, lam0, g0, eps0 in fam_points:
        op = trace_terms._family_operator_value(fam, lam0, g0, eps0, 1, N=n_op)
        ig = trace_terms.r_m_integral(fam, lam0, g0, eps0, 1)
        checks.append(
            (f"r1_integral_vs_operator_{type(fam).__name__}", abs(ig.value - op.value),
             max(1e-6, 3 * op.abs_error))
        )

    trunc = 400 if suite == "quick" else 1600
    model = OnePhoton(0.2, 0.3, 0.1)
    a = zeta_values.zeta_value(
        zeta_values.ZetaRequest(model, 2, 1.0, method="series_operator", trunc_n=trunc)
    )
    b = zeta_values.zeta_value(
        zeta_values.ZetaRequest(model, 2, 1.0, method="series_integral", trunc_n=trunc)
    )
    checks.append(("zeta_integral_vs_operator_1pqrm", abs(a.value - b.value), 1e-7))
    eo = zeta_values.zeta_value(
        zeta_values.ZetaRequest(model, 2, 1.0, method="eigen_oracle", trunc_n=trunc)
    )
    checks.append(
        ("zeta_series_vs_eigen_1pqrm", abs(a.value - eo.value), max(1e-5, eo.abs_error))
    )
    if suite == "full":
        two = TwoPhoton(0.2, 0.3, 0.1)
        tv = zeta_values.zeta_value(zeta_values.ZetaRequest(two, 2, 1.0, trunc_n=trunc))
        parts = sum(
            zeta_values.zeta_value(
                zeta_values.ZetaRequest(BergmanNu(nu, 0.2, 0.3, 0.1), 2, 1.0, trunc_n=trunc)
            ).value
            for nu in (0.5, 1.5)
        )
        checks.append(("twophoton_bergman_decomposition", abs(tv.value - parts), 1e-9))
        rows = zeta_values.confluence_scan(0.2, 0.1, 0.05, 1.5, 2, [8, 16, 32, 64])
        devs = [r[2] for r in rows]
        mono = 0.0 if all(x > y for x, y in zip(devs, devs[1:])) else 1.0
        checks.append(("confluence_deviation_monotone", mono, 0.5))
    return checks


def _cmd_validate(args):
    records = []
    failures = 0
    for name, residual, tolerance in _validate_checks(args.suite, args.seed):
        ok = residual <= tolerance
        failures += 0 if ok else 1
        rec = _record("validate", {"check": name, "suite": args.suite},
                      residual, 0.0, "suite", {}, 0.0, rng_seed=args.seed)
        rec["tolerance"] = float(tolerance)
        rec["passed"] = bool(ok)
        records.append(rec)
    return records, failures


def run(argv=None) -> int:
    """Entry point; returns the process exit code."""
    parser = _make_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return _EXIT_USAGE
    threads = args.threads
    if threads is None:
        threads = int(os.environ.get("RABI_ZETA_THREADS", "1"))
    try:
        if args.subcommand == "zeta":
            records = _cmd_zeta(args)
        elif args.subcommand == "trace-term":
            records = _cmd_trace_term(args)
        elif args.subcommand == "apery":
            records = _cmd_apery(args)
        elif args.subcommand == "beukers":
            records = _cmd_beukers(args)
        elif args.subcommand == "confluence":
            records = _cmd_confluence(args, threads)
        else:
            records, failures = _cmd_validate(args)
            _emit(records, args.format)
            return _EXIT_OK if failures == 0 else _EXIT_DOMAIN
    except _UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return _EXIT_USAGE
    except NoConvergence as exc:
        sys.stderr.write(f"non-convergence: {exc}\n")
        return _EXIT_NOCONV
    except (DomainError, RabiZetaError) as exc:
        sys.stderr.write(f"domain error: {exc}\n")
        return _EXIT_DOMAIN
    _emit(records, args.format)
    return _EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
