"""Command-line front end: ``powerops <subcommand> ...``."""

import argparse
import json
import sys
from fractions import Fraction
from math import gcd, lcm

from . import modelfile
from .errors import (ModelError, NonUnitError, ParseError, PowerOpsError, PrecisionError,
                     ReconstructionError, RewriteBudgetExceeded, VerificationError)
from .rings import HRing, HSeries

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_MODEL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(args, text, payload):
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _load(args):
    return modelfile.load(args.model, M=args.p_prec)


def _ring(args, data):
    return HRing(data.p, args.h_prec, args.p_prec)


def _parse_h(args, data, text):
    from .parser import Context, parse_expression
    return parse_expression(text, Context("hseries", _ring(args, data)))


def _poly_divide(num, den):
    """Exact quotient of polynomial representatives, or None."""
    a = [Fraction(c) for c in num.coefficients()]
    b = [Fraction(c) for c in den.coefficients()]
    if not b or len(a) < len(b):
        return None
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    for i in range(len(q) - 1, -1, -1):
        q[i] = a[i + len(b) - 1] / b[-1]
        for j, c in enumerate(b):
            a[i + j] -= q[i] * c
    if any(a[:len(b) - 1]):
        return None
    return HSeries(num.ring.exact(), q)


def factored(value, x, text):
    """Write value as (quotient)*(text) when x divides it exactly."""
    if x.is_constant() or value.is_zero():
        return str(value)
    if value.ring.L is not None and value.degree() >= value.ring.L - 1:
        return str(value)
    q = _poly_divide(value, x)
    if q is None:
        return str(value)
    expr = "".join(text.split())
    coeffs = [Fraction(c) for c in q.coefficients() if c]
    content = Fraction(gcd(*(c.numerator for c in coeffs)), lcm(*(c.denominator for c in coeffs)))
    if coeffs[-1] < 0:
        content = -content
    prim = q * (1 / content)
    parts = [] if content == 1 else [f"({content})" if content.denominator != 1 or content < 0 else str(content)]
    if not prim.is_constant():
        parts.append(f"({prim})")
    parts.append(f"({expr})")
    return "*".join(parts)


# -- subcommands -------------------------------------------------------------

def cmd_derive_model(args):
    from .curves import CURVES, reconstruct_kappa_polynomial, specialize_to_E0
    from .power_ops import derive_psi_h

    if args.curve not in CURVES:
        raise UsageError(f"unknown curve {args.curve!r}; choose from {sorted(CURVES)}")
    model = CURVES[args.curve]()
    progress = None
    if args.verbose:
        progress = lambda done, total: print(f"  sampled {done}/{total}", file=sys.stderr)
    K = reconstruct_kappa_polynomial(model, args.prime, dps=args.dps, progress=progress)
    lines = [f"W(kappa) = {K}", f"reconstructed in {K.elapsed:.1f}s from {len(K.grid)} points"]
    payload = {"W": str(K), "coefficients": [str(c) for c in K.coeffs], "seconds": round(K.elapsed, 2)}
    if (args.curve, args.prime) != ("c4", 5):
        _emit(args, "\n".join(lines + ["(E^0 specialization is available for c4 at p = 5 only)"]), payload)
        return EXIT_OK
    wdata = specialize_to_E0(K, ring=HRing(args.prime, None, args.p_prec))
    data = derive_psi_h(wdata)
    text = modelfile.dumps(data)
    lines.append(f"w(alpha) = {wdata.polynomial_str()}")
    payload["w"] = [str(c) for c in wdata.w]
    if args.output:
        modelfile.save(data, args.output)
        lines.append(f"model written to {args.output}")
    else:
        lines.append(text.rstrip())
    _emit(args, "\n".join(lines), payload)
    return EXIT_OK


def cmd_psi(args):
    from .power_ops import apply_psi

    data = _load(args)
    x = _parse_h(args, data, args.expr)
    X = apply_psi(data, x)
    lines = [f"alpha^{k}: {c}" for k, c in enumerate(X.coords)]
    _emit(args, "\n".join(lines), {"expr": args.expr, "coordinates": [str(c) for c in X.coords]})
    return EXIT_OK


def cmd_hecke(args):
    from .hecke import t1, t2_checked, weighted_t1

    data = _load(args)
    x = _parse_h(args, data, args.expr)
    if args.op == "t1":
        v = t1(data, x)
    elif args.op == "t2":
        v = t2_checked(data, x)
    else:
        if args.weight is None:
            raise UsageError("--op weighted needs --weight K")
        v = weighted_t1(data, x, args.weight)
    text = factored(v, x, args.expr)
    _emit(args, text, {"op": args.op, "expr": args.expr, "value": str(v), "factored": text})
    return EXIT_OK


def cmd_log_op(args):
    from .hecke import ell

    data = _load(args)
    x = _parse_h(args, data, args.expr)
    v = ell(data, x)
    _emit(args, str(v), {"expr": args.expr, "value": str(v), "zero": v.is_zero(),
                         "precision": {"p": args.p_prec, "h": args.h_prec}})
    return EXIT_OK


def cmd_gamma(args):
    from .dyer_lashof import DyerLashofAlgebra
    from .parser import Context, parse_expression, parse_tokens

    data = _load(args)
    G = DyerLashofAlgebra(data)
    if args.check_center:
        t = G.t_gamma(1 if args.check_center == "t1" else 2)
        rows = []
        central = True
        others = [(f"Q{k}", G.gen(k)) for k in range(data.p + 1)]
        others.append(("h", G.element({(): G.ring.gen()})))
        for name, y in others:
            c = G.commutator(t, y)
            central = central and c.is_zero()
            rows.append((name, c))
        lines = [f"[{args.check_center}~, {name}] = {c}" for name, c in rows]
        lines.append(f"{args.check_center}~ is {'central' if central else 'not central'}")
        _emit(args, "\n".join(lines), {"element": args.check_center, "central": central,
                                       "commutators": {n: str(c) for n, c in rows}})
        return EXIT_OK
    if args.emit == "presentation":
        if args.format == "json":
            print(json.dumps(G.presentation(), indent=2))
        else:
            print(G.presentation_text())
        return EXIT_OK
    if not args.expr:
        raise UsageError("--emit rewrite needs --expr WORD")
    ctx = Context("gamma", None, algebra=G)
    try:
        nf = G.rewrite(parse_tokens(args.expr, ctx))
    except (ParseError, ValueError):
        nf = parse_expression(args.expr, ctx)
    _emit(args, str(nf), {"expr": args.expr, "normal_form": str(nf)})
    return EXIT_OK


def cmd_qseries(args):
    from . import modforms as mf

    L, p = args.trunc, args.prime
    D = mf.delta_qexp(L)
    if args.op == "delta":
        out = D
    elif args.op == "e2":
        out = mf.e2_qexp(L)
    elif args.op == "log-delta":
        out = mf.log_qexp(D)
    elif args.op == "hecke":
        out = mf.hecke_Tp(mf.LogQSeries.from_q(D, 12), p)
        lam = out.parts[0][1]
        if out.agrees(mf.LogQSeries.from_q(D * lam, 12)):
            text = f"T_{p} Delta = {lam} * Delta  (through q^{out.L})"
            _emit(args, text, {"op": "hecke", "prime": p, "eigenvalue": str(lam), "trunc": out.L})
            return EXIT_OK
    elif args.op == "serre":
        out = mf.serre_derivative(D, 12)
    else:
        out = mf.f_operator(mf.log_qexp(D), p)
    _emit(args, str(out), {"op": args.op, "prime": p, "series": _series_payload(out)})
    return EXIT_OK


def _series_payload(s):
    from .modforms import LogQSeries
    if isinstance(s, LogQSeries):
        return {"weight": s.weight, "parts": [_series_payload(h) for h in s.parts]}
    return {"trunc": s.L, "terms": [[m, str(c)] for m, c in s.items()]}


def cmd_verify(args):
    from .verify import format_table, run_checks

    indices = set(args.check) if args.check else None
    if not args.all and not indices:
        raise UsageError("verify needs --all or --check N")
    progress = None
    if args.format != "json":
        progress = lambda r: print(r.line(), flush=True)
    results = run_checks(indices, M=args.p_prec, L=args.h_prec, Lq=args.q_prec, progress=progress)
    ok = all(r.passed for r in results)
    if args.format == "json":
        print(json.dumps([r.as_dict() for r in results], indent=2))
    else:
        print(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    return EXIT_OK if ok else EXIT_FAIL


# -- argument parsing ----------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p-prec", type=int, default=12, metavar="M", help="p-adic precision (default 12)")
    common.add_argument("--h-prec", type=int, default=24, metavar="L", help="h-adic truncation (default 24)")
    common.add_argument("--q-prec", type=int, default=60, metavar="LQ", help="q-series truncation (default 60)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--model", default="c4_p5", help="model file, or a built-in name (c4_p5, p2_n3)")

    parser = argparse.ArgumentParser(prog="powerops", description="Power operations at height 2.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("derive-model", parents=[common], help="reconstruct W(kappa) and the E^0 model")
    p.add_argument("--curve", default="c4")
    p.add_argument("--prime", type=int, default=5)
    p.add_argument("--dps", type=int, default=60)
    p.add_argument("--output", "-o")
    p.add_argument("--verbose", "-v", action="store_true")
    p.set_defaults(func=cmd_derive_model)

    p = sub.add_parser("psi", parents=[common, model], help="the total power operation")
    p.add_argument("--expr", required=True)
    p.set_defaults(func=cmd_psi)

    p = sub.add_parser("hecke", parents=[common, model], help="topological Hecke operators")
    p.add_argument("--op", choices=("t1", "t2", "weighted"), required=True)
    p.add_argument("--weight", type=int)
    p.add_argument("--expr", required=True)
    p.set_defaults(func=cmd_hecke)

    p = sub.add_parser("log-op", parents=[common, model], help="the logarithmic operation")
    p.add_argument("--expr", required=True)
    p.set_defaults(func=cmd_log_op)

    p = sub.add_parser("gamma", parents=[common, model], help="the Dyer-Lashof algebra")
    p.add_argument("--emit", choices=("presentation", "rewrite"), default="presentation")
    p.add_argument("--expr")
    p.add_argument("--check-center", choices=("t1", "t2"))
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("qseries", parents=[common], help="q-expansions and their operators")
    p.add_argument("--op", choices=("delta", "e2", "log-delta", "hecke", "serre", "f1"), required=True)
    p.add_argument("--prime", type=int, default=5)
    p.add_argument("--trunc", type=int)
    p.set_defaults(func=cmd_qseries)

    p = sub.add_parser("verify", parents=[common], help="run the verification suite")
    p.add_argument("--all", action="store_true")
    p.add_argument("--check", type=int, action="append", metavar="N")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "trunc", None) is None and hasattr(args, "trunc"):
        args.trunc = args.q_prec
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"powerops: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"powerops: parse error:\n{exc.pointer()}", file=sys.stderr)
        return EXIT_USAGE
    except (ModelError, PrecisionError, NonUnitError, ReconstructionError, RewriteBudgetExceeded) as exc:
        print(f"powerops: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except VerificationError as exc:
        print(f"powerops: verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (FileNotFoundError, IsADirectoryError) as exc:
        print(f"powerops: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PowerOpsError as exc:
        print(f"powerops: {exc}", file=sys.stderr)
        return EXIT_MODEL


if __name__ == "__main__":
    sys.exit(main())
