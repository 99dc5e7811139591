"""Batch experiment runner: subcommands over all library modules, with
deterministic CSV/JSON outputs and reproducible configuration echoing.

Exit codes: 0 success, 1 validation error, 2 budget/precision exhaustion
(partial results are still written and flagged).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

from . import __version__
from .approxcount import (ApproxQuery, SetSpec, count_approximants,
                          enumerate_rationals, fit_exponent, loja_estimate,
                          rationals_in_interval, reproduce_example)
from .auxpoly import AuxParams, build_aux_polynomials, choose_parameters
from .errors import BudgetExceeded, DioapproxError, PrecisionExhausted
from .expr import Box, parse
from .heights import (IntPolynomial, RealAlgebraic, height_algebraic,
                      height_rational)
from .rootsum import (RootSumInstance, liouville_floor_check, min_sum,
                      prime_scan)

SCHEMA_VERSION = "v1"


# ---------------------------------------------------------------------------
# output plumbing
# ---------------------------------------------------------------------------

def _header_lines(config: dict) -> list:
    lines = [f"# dioapprox {__version__} schema {SCHEMA_VERSION}",
             f"# generated: {datetime.now(timezone.utc).isoformat()}"]
    for key in sorted(config):
        lines.append(f"# {key}: {config[key]}")
    return lines


def write_csv(path, config: dict, columns: list, rows: list):
    out = []
    out.extend(_header_lines(config))
    out.append(",".join(columns))
    for row in rows:
        out.append(",".join(str(v) for v in row))
    text = "\n".join(out) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def write_json(path, config: dict, payload):
    doc = {"schema": SCHEMA_VERSION, "version": __version__,
           "config": {k: str(v) for k, v in sorted(config.items())},
           "results": payload}
    text = json.dumps(doc, indent=2, default=str) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _parse_grid(text: str) -> list:
    """'a..b' doubles geometrically from a up to b; 'a,b,c' lists; 'a'."""
    if ".." in text:
        a, b = text.split("..")
        a, b = int(a), int(b)
        out = []
        t = a
        while t <= b:
            out.append(t)
            t *= 2
        if out and out[-1] != b:
            out.append(b)
        return out
    if "," in text:
        return [int(v) for v in text.split(",")]
    return [int(text)]


def _parse_modulus_spec(text: str):
    """int, comma list, or 'primes:a..b'."""
    if text.startswith("primes:"):
        from sympy import primerange
        a, b = text[len("primes:"):].split("..")
        return [int(p) for p in primerange(int(a), int(b) + 1)]
    if "," in text:
        return [int(v) for v in text.split(",")]
    return [int(text)]


def _parse_coeffs(text: str) -> list:
    return [Fraction(v.strip()) for v in text.split(",")]


def _load_config(path) -> dict:
    out = {}
    if not path:
        return out
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, value = line.partition("=")
        out[key.strip()] = value.strip()
    return out


def _merge(args, config: dict, key: str, default=None, cast=str):
    flag = getattr(args, key.replace("-", "_"), None)
    if flag is not None:
        return flag
    if key in config:
        return cast(config[key])
    return default


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_heights(args, config):
    results = []
    if args.rational:
        for text in args.rational.split(","):
            q = Fraction(text)
            h = height_rational(q)
            results.append({"input": text, "height": str(h.exact.as_fraction())})
    if args.minpoly:
        coeffs = [int(v) for v in args.minpoly.split(",")]
        lo, hi = (Fraction(v) for v in args.interval.split(","))
        ra = RealAlgebraic(IntPolynomial(coeffs), lo, hi)
        h = height_algebraic(ra, precision=args.precision or 64)
        results.append({
            "minpoly": list(IntPolynomial(coeffs).coeffs),
            "isolator": [str(lo), str(hi)],
            "height_lo": float(h.lo), "height_hi": float(h.hi),
            "exact": repr(h.exact) if h.exact else None,
        })
    write_json(args.json or "-", config, results)
    return 0


def _cmd_enumerate(args, config):
    T = args.T
    window = None
    if args.window:
        lo, hi = (Fraction(v) for v in args.window.split(","))
        window = Box([lo] * args.n, [hi] * args.n)
    rows = []
    for pt in enumerate_rationals(T, args.n, window):
        rows.append([f"{v.numerator}/{v.denominator}" for v in pt])
    cols = [f"x{i+1}" for i in range(args.n)]
    write_csv(args.out or "-", {**config, "count": len(rows)}, cols, rows)
    return 0


def _cmd_auxpoly(args, config):
    spec = SetSpec.parse_text(Path(args.spec).read_text())
    if args.choose:
        k, r, n, e, eps = args.choose.split(",")
        params = AuxParams.from_selection(int(k), int(r), int(n), int(e),
                                          Fraction(eps), args.T,
                                          Fraction(args.c_prime))
    else:
        params = AuxParams.unconstrained(spec.arity, spec.ambient_dim,
                                         args.e, args.d, args.b, args.T,
                                         Fraction(args.c_prime))
    polys = build_aux_polynomials(spec.phi, args.T, params, mode=args.mode,
                                  precision=args.precision or 64)
    rows = []
    for pl in polys:
        rows.append([pl.cube_index,
                     ":".join(str(c) for c in pl.coeffs),
                     repr(float(pl.sup_bound)),
                     repr(float(pl.sup_target)),
                     pl.mode, int(pl.coeff_bound_ok)])
    echo = {**config, "d": params.d, "b": params.b, "lambda": params.lam,
            "sigma": str(params.sigma), "cubes": len(polys)}
    write_csv(args.out or "-", echo,
              ["cube", "coeffs", "sup_bound", "sup_target", "mode", "q_ok"],
              rows)
    if args.json:
        write_json(args.json, echo, {
            "params": {"k": params.k, "n": params.n, "e": params.e,
                       "d": params.d, "b": params.b, "lambda": params.lam,
                       "T": str(params.T), "c_prime": str(params.c_prime)},
            "cube_count": len(polys),
            "all_sup_certified": all(pl.sup_bound <= pl.sup_target
                                     for pl in polys),
        })
    return 0


def _cmd_count(args, config):
    spec = SetSpec.parse_text(Path(args.spec).read_text())
    if args.lam is None:
        raise ValueError("--lambda (or config key 'lam') is required")
    lam = Fraction(args.lam)
    rows = []
    for T in _parse_grid(args.T):
        t0 = time.time()
        rec = count_approximants(spec, ApproxQuery(T, args.e, lam))
        secs = f"{time.time() - t0:.3f}" if args.timing else ""
        rows.append([T, lam, args.e, rec.n_approximants, rec.undecided, secs])
    write_csv(args.out or "-", config,
              ["T", "lambda", "e", "N", "undecided", "seconds"], rows)
    return 0


def _cmd_fit(args, config):
    slope, band = _fit_from_csv(args.input)
    write_json(args.json or "-", config, {"slope": slope, "band": band})
    return 0


def _fit_from_csv(path):
    from .approxcount import CountRecord
    records = []
    for line in Path(path).read_text().splitlines():
        if line.startswith("#") or not line.strip():
            continue
        parts = line.split(",")
        if parts[0] == "T":
            continue
        records.append(CountRecord(int(parts[0]), Fraction(parts[1]),
                                   int(parts[2]), int(parts[3])))
    return fit_exponent(records)


def _cmd_loja(args, config):
    f = parse(args.function)
    box = _box_from_text(args.box)
    zero = SetSpec.parse_text(Path(args.zero_spec).read_text())
    c_est, delta_est = loja_estimate(f, box, zero, args.samples,
                                     seed=args.seed or 0)
    write_json(args.json or "-", config,
               {"c_est": c_est, "delta_est": delta_est,
                "samples": args.samples})
    return 0


def _box_from_text(text):
    from .approxcount import _parse_box
    return _parse_box(text)


def _cmd_rootsum(args, config):
    coeffs = _parse_coeffs(args.coeffs)
    moduli = _parse_modulus_spec(args.N)
    rows = []
    code = 0
    scan_qualifying = None
    try:
        for N in moduli:
            t0 = time.time()
            inst = RootSumInstance(N, list(coeffs))
            res = min_sum(inst, budget=args.budget,
                          precision=args.precision or 80)
            secs = f"{time.time() - t0:.3f}" if args.timing else ""
            rows.append([N, inst.n, repr(float(res.value_lo)),
                         repr(float(res.value_hi)),
                         ":".join(str(k) for k in res.argmin),
                         res.zeros_found, secs])
    except (BudgetExceeded, PrecisionExhausted) as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = 2
        config = {**config, "partial": "true"}
    if args.scan_lambda is not None:
        qual, und, _ = prime_scan(coeffs, Fraction(args.scan_lambda),
                                  Fraction(args.scan_c or 1),
                                  max(moduli), budget=args.budget)
        scan_qualifying = {"qualifying": qual, "undecided": und}
    write_csv(args.out or "-", config,
              ["N", "n", "value_lo", "value_hi", "argmin", "zeros_found",
               "seconds"], rows)
    if args.json:
        payload = {"rows": len(rows)}
        if scan_qualifying is not None:
            payload["scan"] = scan_qualifying
        write_json(args.json, config, payload)
    return code


def _cmd_examples(args, config):
    lam = Fraction(args.lam) if args.lam is not None else Fraction(2)
    kwargs = {}
    if args.m is not None:
        kwargs["m"] = args.m
    if args.T_grid:
        kwargs["T_grid"] = _parse_grid(args.T_grid)
    report = reproduce_example(args.name, T=args.T or 100, lam=lam, **kwargs)
    records = report.pop("records", [])
    if args.out:
        rows = [[r.T, r.lam, r.e, r.n_approximants, r.undecided, ""]
                for r in records]
        write_csv(args.out, config,
                  ["T", "lambda", "e", "N", "undecided", "seconds"], rows)
    write_json(args.json or "-", config, report)
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _build_parser():
    top = argparse.ArgumentParser(prog="dioapprox",
                                  description=__doc__.splitlines()[0])
    top.add_argument("--config", help="flat key=value config file")
    top.add_argument("--seed", type=int, default=None)
    top.add_argument("--workers", type=int, default=1)
    top.add_argument("--precision", type=int, default=None,
                     help="working precision in bits")
    top.add_argument("--timing", action="store_true",
                     help="fill the seconds column (breaks byte determinism)")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("heights", help="heights of rationals/algebraics")
    p.add_argument("--rational", help="comma list a/b")
    p.add_argument("--minpoly", help="ascending integer coefficients")
    p.add_argument("--interval", help="lo,hi isolating interval")
    p.add_argument("--json")

    p = sub.add_parser("enumerate", help="bounded-height rational points")
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--window", help="lo,hi applied to every coordinate")
    p.add_argument("--out")

    p = sub.add_parser("auxpoly", help="auxiliary polynomial pipeline")
    p.add_argument("--spec", required=True)
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--d", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--e", type=int, default=1)
    p.add_argument("--choose", help="k,r,n,e,epsilon for Lemma-style selection")
    p.add_argument("--c-prime", default="1")
    p.add_argument("--mode", choices=["reduced", "exact"], default="reduced")
    p.add_argument("--out")
    p.add_argument("--json")

    p = sub.add_parser("count", help="count approximants over a T grid")
    p.add_argument("--spec", required=True)
    p.add_argument("--T", required=True, help="grid: a..b doubling, or list")
    p.add_argument("--lambda", dest="lam",
                   help="approximation exponent (flag or config key 'lam')")
    p.add_argument("--e", type=int, default=1)
    p.add_argument("--out")

    p = sub.add_parser("fit", help="fit log N against log T from a CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--json")

    p = sub.add_parser("loja", help="empirical Lojasiewicz exponents")
    p.add_argument("--function", required=True)
    p.add_argument("--box", required=True, help="[a,b] x [c,d]")
    p.add_argument("--zero-spec", required=True)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--json")

    p = sub.add_parser("rootsum", help="minimal sums of roots of unity")
    p.add_argument("--coeffs", required=True)
    p.add_argument("--N", required=True, help="int, list, or primes:a..b")
    p.add_argument("--budget", type=int, default=30_000_000)
    p.add_argument("--scan-lambda", default=None)
    p.add_argument("--scan-c", default=None)
    p.add_argument("--out")
    p.add_argument("--json")

    p = sub.add_parser("examples", help="scripted curve reproducers")
    p.add_argument("--name", required=True,
                   choices=["1.4", "1.5", "1.6", "1.7", "1.9"])
    p.add_argument("--T", type=int)
    p.add_argument("--lambda", dest="lam")
    p.add_argument("--m", type=int)
    p.add_argument("--T-grid")
    p.add_argument("--out")
    p.add_argument("--json")
    return top


_COMMANDS = {
    "heights": _cmd_heights,
    "enumerate": _cmd_enumerate,
    "auxpoly": _cmd_auxpoly,
    "count": _cmd_count,
    "fit": _cmd_fit,
    "loja": _cmd_loja,
    "rootsum": _cmd_rootsum,
    "examples": _cmd_examples,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args.config)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    # flags win over the config file
    for key, value in config.items():
        attr = key.replace("-", "_")
        if hasattr(args, attr) and getattr(args, attr) is None:
            setattr(args, attr, value)
    echo = {"command": args.command, "seed": args.seed or 0,
            "workers": args.workers}
    for key, value in sorted(vars(args).items()):
        if key in ("command", "config") or value is None:
            continue
        echo[key] = value
    try:
        return _COMMANDS[args.command](args, echo)
    except (BudgetExceeded, PrecisionExhausted) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DioapproxError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
