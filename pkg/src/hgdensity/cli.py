"""Command-line entry point: ``hgdensity <subcommand> ...``.

Exit status is 0 on success, 1 on a mathematical domain error (bad prime,
non-split prime, degenerate parameters) and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .digits import QuadraticDigitStream, digit_window_statistics, format_expansion, rational_expansion
from .errors import HGError
from .numtheory import format_rational, parse_rational, parse_rational_list, primes_between
from .params import HypergeomParams, QuadraticHGParams
from .quadratic_density import bk_set, unbounded_witness_quadratic
from .rational_density import bounded_class_set, unbounded_witness
from .schwarz_search import SearchConfig, sweep
from .valuation import carry_count, coefficient_valuation, exact_valuation_oracle
from .verify import verify_quadratic, verify_rational


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except HGError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _rational_list(text: str) -> list[Fraction]:
    try:
        return parse_rational_list(text)
    except HGError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _nu(v) -> str:
    return "inf" if v == math.inf else str(v)


def _jnu(v):
    return "inf" if v == math.inf else v


def _frac_json(x: Fraction) -> dict:
    return {"num": x.numerator, "den": x.denominator}


def _emit_json(obj) -> None:
    print(json.dumps(obj, indent=2))


# --- parameter groups ------------------------------------------------------

def _add_rational_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=_rational_list, required=True, help="numerator parameters, comma separated")
    p.add_argument("--beta", type=_rational_list, default=[], help="denominator parameters, comma separated")


def _add_quadratic_params(p: argparse.ArgumentParser, need_c: bool = True) -> None:
    p.add_argument("--a", type=_rational, required=True)
    p.add_argument("--b", type=_rational, default=Fraction(1))
    if need_c:
        p.add_argument("--c", type=_rational, required=True)
    p.add_argument("--disc", type=_rational, required=True, help="D in a + b sqrt(D)")


def _add_json(p: argparse.ArgumentParser) -> None:
    p.add_argument("--json", action="store_true", help="machine-readable output")


def _rparams(ns) -> HypergeomParams:
    return HypergeomParams.of(ns.alpha, ns.beta)


def _qparams(ns) -> QuadraticHGParams:
    return QuadraticHGParams(ns.a, ns.b, ns.c, ns.disc)


def _params(ns, parser):
    """Rational parameters if ``--alpha`` was given, quadratic if ``--a``; never both."""
    if (ns.alpha is None) == (ns.a is None):
        parser.error("give either --alpha/--beta or --a/--c/--disc")
    if ns.alpha is not None:
        return HypergeomParams.of(ns.alpha, ns.beta or [])
    if ns.c is None or ns.disc is None:
        parser.error("quadratic parameters need --a, --c and --disc")
    return QuadraticHGParams(ns.a, ns.b, ns.c, ns.disc)


def _add_either_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=_rational_list)
    p.add_argument("--beta", type=_rational_list)
    p.add_argument("--a", type=_rational)
    p.add_argument("--b", type=_rational, default=Fraction(1))
    p.add_argument("--c", type=_rational)
    p.add_argument("--disc", type=_rational)


# --- subcommands -------------------------------------------------------------

def cmd_digits(ns, parser) -> int:
    if (ns.value is None) == (ns.a is None):
        parser.error("give either --value or --a/--disc")
    if ns.value is not None:
        exp = rational_expansion(ns.value, ns.p)
        if ns.json:
            _emit_json({"p": ns.p, "value": format_rational(ns.value),
                        "preperiod": list(exp.preperiod), "period": list(exp.period),
                        "digits": [exp.digit(j) for j in range(ns.count)]})
        else:
            print(format_expansion(exp))
        return 0
    if ns.disc is None:
        parser.error("--a needs --disc")
    stream = QuadraticDigitStream(ns.a, ns.b, ns.disc, ns.p, ns.embedding)
    ds = stream.digits(ns.count)
    if ns.json:
        _emit_json({"p": ns.p, "a": format_rational(ns.a), "b": format_rational(ns.b),
                    "D": format_rational(ns.disc), "embedding": ns.embedding, "digits": ds})
    else:
        print(",".join(map(str, ds)))
    return 0


def cmd_carries(ns, parser) -> int:
    if (ns.value is None) == (ns.a is None):
        parser.error("give either --value or --a/--disc")
    if ns.value is not None:
        src = rational_expansion(ns.value, ns.p)
    else:
        if ns.disc is None:
            parser.error("--a needs --disc")
        src = QuadraticDigitStream(ns.a, ns.b, ns.disc, ns.p, ns.embedding)
    n = carry_count(src, ns.k)
    if ns.json:
        _emit_json({"p": ns.p, "k": ns.k, "carries": _jnu(n)})
    else:
        print(_nu(n))
    return 0


def cmd_valuation(ns, parser) -> int:
    params = _params(ns, parser)
    fn = exact_valuation_oracle if ns.oracle else coefficient_valuation
    rows = [(k, fn(params, ns.p, k)) for k in range(ns.k_min, ns.k_max + 1)]
    if ns.json:
        _emit_json({"p": ns.p, "method": "oracle" if ns.oracle else "carries",
                    "rows": [{"k": k, "nu": _jnu(v)} for k, v in rows]})
    else:
        for k, v in rows:
            print(f"{k}\t{_nu(v)}")
    return 0


def _classes_text(classes) -> str:
    return ", ".join(map(str, classes)) if len(classes) else "(none)"


def cmd_density_rational(ns, parser) -> int:
    rep = bounded_class_set(_rparams(ns))
    if ns.json:
        _emit_json(rep.to_json())
        return 0
    print(f"series: {rep.params}")
    print(f"modulus = {rep.modulus}")
    print(f"bounded classes = {_classes_text(rep.bounded_classes)}")
    print(f"good prime threshold = {rep.good_prime_threshold}")
    if rep.terminating:
        print("terminating series: bounded at every prime")
    print(f"density = {format_rational(rep.density)}")
    return 0


def cmd_density_quadratic(ns, parser) -> int:
    rep = bk_set(_qparams(ns))
    if ns.json:
        _emit_json(rep.to_json())
        return 0
    print(f"series: {rep.params}")
    print(f"field discriminant = {rep.fundamental_discriminant}")
    print(f"trace case = {rep.trace_case}")
    print(f"modulus = {rep.modulus}")
    print(f"bounded classes = {_classes_text(rep.bounded_classes)}")
    for w in rep.warnings:
        print(f"warning: {w}")
    print(f"density = {format_rational(rep.density)} (exact under digit conjecture)")
    return 0


def cmd_search(ns, parser) -> int:
    if ns.json_path and not ns.out:
        parser.error("--json needs --out")
    cfg = SearchConfig(ns.max_height, ns.threshold, Path(ns.out) if ns.out else None,
                       Path(ns.json_path) if ns.json_path else None, ns.workers)
    records = sweep(cfg)
    if not ns.out:
        print("a,c,D_ac,half_fields")
        for r in records:
            print(f"{format_rational(r.a)},{format_rational(r.c)},{format_rational(r.d_ac)},"
                  + ";".join(map(str, r.half_fields)))
    else:
        print(f"{len(records)} records written to {ns.out}")
    return 0


def cmd_witness_rational(ns, parser) -> int:
    w = unbounded_witness(_rparams(ns), ns.p, ns.depth)
    if ns.json:
        _emit_json({"p": w.p, "depth": w.depth, "k": w.k, "digit_index": w.digit_index,
                    "period": w.period, "branch": w.branch, "valuation": w.valuation})
    else:
        print(f"k = {w.k}")
        print(f"nu_{w.p}(A_k) = {w.valuation}")
    return 0


def cmd_witness_quadratic(ns, parser) -> int:
    w = unbounded_witness_quadratic(_qparams(ns), ns.p, ns.r, ns.scan_limit)
    if w is None:
        if ns.json:
            _emit_json({"p": ns.p, "r": ns.r, "inconclusive": True})
        else:
            print(f"inconclusive: fewer than {ns.r} witnessing digits in the first {ns.scan_limit}")
        return 0
    if ns.json:
        _emit_json({"p": w.p, "r": w.r, "m": w.m, "indices": list(w.indices),
                    "valuation": w.valuation, "inconclusive": False})
    else:
        print(f"m = {w.m}")
        print(f"nu_{w.p}(A_m) = {w.valuation}")
    return 0


def cmd_digit_stats(ns, parser) -> int:
    stream = QuadraticDigitStream(ns.a, ns.b, ns.disc, ns.p, ns.embedding)
    st = digit_window_statistics(stream, ns.r, ns.s, ns.u, ns.v, ns.count)
    if ns.json:
        _emit_json({"p": ns.p, "ratio": _frac_json(st.ratio), "hits": len(st.hits),
                    "count": st.count, "expected": _frac_json(ns.v - ns.u)})
    else:
        print(f"hits = {len(st.hits)} of {st.count}")
        print(f"ratio = {format_rational(st.ratio)} ({float(st.ratio):.4f}; window width {float(ns.v - ns.u):.4f})")
    return 0


def _verify_out(ns, rows) -> int:
    if ns.json:
        body = json.dumps([r.to_json() for r in rows], indent=2)
    else:
        body = "\n".join(map(str, rows))
    if ns.out:
        Path(ns.out).write_text(body + "\n")
    if body:
        print(body)
    return 0 if all(r.ok for r in rows) else 1


def cmd_verify_rational(ns, parser) -> int:
    rows = verify_rational(_rparams(ns), primes_between(ns.p_min, ns.p_max), ns.k_limit, ns.depth)
    return _verify_out(ns, rows)


def cmd_verify_quadratic(ns, parser) -> int:
    rows = verify_quadratic(_qparams(ns), primes_between(ns.p_min, ns.p_max), ns.k_limit, ns.r, ns.scan_limit)
    return _verify_out(ns, rows)


# --- parser --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hgdensity", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("digits", "carries"):
        p = sub.add_parser(name, help=f"p-adic {name} of a rational or quadratic value")
        p.add_argument("--p", type=int, required=True)
        p.add_argument("--value", type=_rational, help="rational value")
        p.add_argument("--a", type=_rational, help="quadratic value a + b sqrt(D) - 1")
        p.add_argument("--b", type=_rational, default=Fraction(1))
        p.add_argument("--disc", type=_rational)
        p.add_argument("--embedding", type=int, choices=(1, -1), default=1)
        if name == "digits":
            p.add_argument("--count", type=int, default=16)
        else:
            p.add_argument("--k", type=int, required=True)
        _add_json(p)
        p.set_defaults(func=cmd_digits if name == "digits" else cmd_carries)

    p = sub.add_parser("valuation", help="nu_p(A_k) as TSV rows")
    _add_either_params(p)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--k-min", type=int, default=0)
    p.add_argument("--k-max", type=int, default=20)
    p.add_argument("--oracle", action="store_true", help="use the exact coefficient instead of carries")
    _add_json(p)
    p.set_defaults(func=cmd_valuation)

    p = sub.add_parser("density", help="bounded classes and their density")
    dsub = p.add_subparsers(dest="kind", required=True)
    q = dsub.add_parser("rational")
    _add_rational_params(q)
    _add_json(q)
    q.set_defaults(func=cmd_density_rational)
    q = dsub.add_parser("quadratic")
    _add_quadratic_params(q)
    _add_json(q)
    q.set_defaults(func=cmd_density_quadratic)

    p = sub.add_parser("search", help="sweep (a, c) for D(a; c) above a threshold")
    p.add_argument("--max-height", type=int, required=True)
    p.add_argument("--threshold", type=_rational, default=Fraction(1, 4))
    p.add_argument("--out", help="CSV output path")
    p.add_argument("--json", dest="json_path", help="JSON sidecar path (default: next to --out)")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("witness", help="index with a very negative valuation")
    wsub = p.add_subparsers(dest="kind", required=True)
    q = wsub.add_parser("rational")
    _add_rational_params(q)
    q.add_argument("--p", type=int, required=True)
    q.add_argument("--depth", type=int, default=1, help="target nu <= -(depth + 1)")
    _add_json(q)
    q.set_defaults(func=cmd_witness_rational)
    q = wsub.add_parser("quadratic")
    _add_quadratic_params(q)
    q.add_argument("--p", type=int, required=True)
    q.add_argument("--r", type=int, default=2, help="target nu <= -r")
    q.add_argument("--scan-limit", type=int, default=1000)
    _add_json(q)
    q.set_defaults(func=cmd_witness_quadratic)

    p = sub.add_parser("digit-stats", help="window hit ratio of quadratic digits")
    _add_quadratic_params(p, need_c=False)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--embedding", type=int, choices=(1, -1), default=1)
    p.add_argument("--r", type=int, default=1, help="stride")
    p.add_argument("--s", type=int, default=0, help="offset")
    p.add_argument("--u", type=_rational, default=Fraction(0))
    p.add_argument("--v", type=_rational, default=Fraction(1, 2))
    p.add_argument("--count", type=int, default=1000)
    _add_json(p)
    p.set_defaults(func=cmd_digit_stats)

    p = sub.add_parser("verify", help="check predictions against exact valuations")
    vsub = p.add_subparsers(dest="kind", required=True)
    for kind in ("rational", "quadratic"):
        q = vsub.add_parser(kind)
        if kind == "rational":
            _add_rational_params(q)
            q.add_argument("--depth", type=int, default=1)
            q.set_defaults(func=cmd_verify_rational)
        else:
            _add_quadratic_params(q)
            q.add_argument("--r", type=int, default=2)
            q.add_argument("--scan-limit", type=int, default=1000)
            q.set_defaults(func=cmd_verify_quadratic)
        q.add_argument("--p-min", type=int, default=2)
        q.add_argument("--p-max", type=int, default=200)
        q.add_argument("--k-limit", type=int, default=2000)
        q.add_argument("--out", help="also write the report here")
        _add_json(q)
    return parser


_NEGATIVE_VALUE = re.compile(r"^-\d+(/\d+)?(,-?\d+(/\d+)?)*$")


def _attach_negative_values(argv: Sequence[str]) -> list[str]:
    """Rewrite ``--flag -4/5`` as ``--flag=-4/5``; argparse would read ``-4/5`` as an option."""
    out: list[str] = []
    for tok in argv:
        if out and _NEGATIVE_VALUE.match(tok) and out[-1].startswith("--") and "=" not in out[-1]:
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    argv = _attach_negative_values(sys.argv[1:] if argv is None else list(argv))
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code is None else int(e.code)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return ns.func(ns, parser)
    except SystemExit as e:
        return int(e.code or 0)
    except HGError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
