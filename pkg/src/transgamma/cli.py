"""Command-line front end.

Exit codes: 0 success, 2 bad input or domain error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import math
import sys
from importlib import resources
from typing import Iterable, Sequence

from . import coeffs, oracle
from .exceptions import DegenerateExpansionError, DomainError, ValidityError
from .expansions import (
    Regime,
    hybrid_q,
    q_outer,
    q_transition,
    q_uniform,
    transition_terms,
    uniform_terms,
)
from .inversion import negative_zero, quantile
from .special import SQRT2, erfc

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_VERIFY = 3

FIGURE_PRESETS = {1: (3.0, 0.1), 2: (3.0, 1.1), 3: (3.0, 1.321)}
GOLDEN_FAMILIES = ("b", "a", "C", "d")


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code


def fmt(v) -> str:
    """17 significant digits for floats; ints and strings pass through."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return fmt(v)
    if isinstance(v, Regime):
        return v.value
    return v


def emit(rows: Sequence[dict], fmt_name: str, out) -> None:
    """Write rows as CSV (header + comma-separated) or as a JSON array."""
    if fmt_name == "json":
        json.dump([{k: _json_value(v) for k, v in row.items()} for row in rows], out)
        out.write("\n")
        return
    if not rows:
        return
    writer = csv.writer(out, lineterminator="\n")
    fields = list(rows[0])
    writer.writerow(fields)
    for row in rows:
        writer.writerow([fmt(row.get(k)) for k in fields])


def parse_csv(text: str) -> list[dict[str, str]]:
    return list(csv.DictReader(io.StringIO(text)))


# --------------------------------------------------------------------------
# eval


def cmd_eval(args) -> list[dict]:
    a, x = args.a, args.x
    if not a > 0 or not x >= 0:
        raise DomainError("eval needs a > 0 and x >= 0")
    regime = args.regime
    if regime == "auto":
        rep = hybrid_q(a, x)
        q, n, err, reg = rep.value, rep.terms_used, rep.error_estimate, rep.regime
    elif regime == "reference":
        q, n, err, reg = float(oracle.oracle_q(a, x)), 0, 0.0, Regime.REFERENCE
    elif regime == "transition":
        rep = q_transition(a, (x - a) / math.sqrt(a), args.terms)
        q, n, err, reg = rep.value, rep.terms_used, rep.error_estimate, rep.regime
    elif regime == "uniform":
        if x == 0:
            raise DomainError("the uniform expansion needs x > 0")
        rep = q_uniform(a, x / a, args.terms)
        q, n, err, reg = rep.value, rep.terms_used, rep.error_estimate, rep.regime
    else:
        rep = q_outer(a, x, args.terms)
        q, n, err, reg = rep.value, rep.terms_used, rep.error_estimate, rep.regime
    return [{"a": a, "x": x, "Q": q, "regime": reg.value, "terms_used": n, "error_estimate": err}]


# --------------------------------------------------------------------------
# invert / zero


def cmd_invert(args) -> list[dict]:
    res = quantile(args.a, args.q, args.terms, verify=args.verify)
    row = {"a": args.a, "q": args.q, "x": res.x, "tau0": res.tau0, "terms_used": res.terms_used,
           "error_estimate": res.error_estimate}
    if args.verify:
        row["residual"] = res.residual
        tol = max(1e-8, 10.0 * res.q_error_estimate)
        row["tolerance"] = tol
        if not res.residual <= tol:
            raise _VerifyFailed([row])
    return [row]


def cmd_zero(args) -> list[dict]:
    res = negative_zero(args.a, args.terms)
    row = {"a": args.a, "x_minus": res.x_minus, "tau1": res.tau1, "terms_used": res.terms_used,
           "error_estimate": res.error_estimate}
    if args.verify:
        # |gamma*(a, x_-)| should not exceed the slope times the series error estimate
        h = max(res.error_estimate, 1e-8 * abs(res.x_minus))
        g0 = oracle.oracle_gammastar(args.a, res.x_minus)
        slope = abs(oracle.oracle_gammastar(args.a, res.x_minus + h) - oracle.oracle_gammastar(args.a, res.x_minus - h)) / (2 * h)
        tol = slope * 10.0 * max(res.error_estimate, 4e-16 * abs(res.x_minus))
        row["gammastar"] = oracle.format_digits(g0, 25)
        row["tolerance"] = oracle.format_digits(tol, 25)
        if not abs(g0) <= tol:
            raise _VerifyFailed([row])
    return [row]


class _VerifyFailed(Exception):
    def __init__(self, rows):
        super().__init__("verification failed")
        self.rows = rows


# --------------------------------------------------------------------------
# coeffs


def load_golden() -> dict[str, dict[int, str]]:
    """Golden coefficient lines keyed by family and index."""
    text = resources.files("transgamma").joinpath("data/tables.txt").read_text()
    out: dict[str, dict[int, str]] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        family, n, poly = coeffs.parse_poly_line(line)
        out.setdefault(family, {})[n] = coeffs.dump_poly_line(family, n, poly)
    return out


def check_tables(family: str, lines: Iterable[str]) -> list[str]:
    """Mismatching indices (as messages) between dumped lines and the golden copy."""
    golden = load_golden().get(family)
    if golden is None:
        raise CliError(f"no published table for family {family!r}; golden families are {', '.join(GOLDEN_FAMILIES)}")
    problems = []
    for line in lines:
        fam, n, poly = coeffs.parse_poly_line(line)
        canon = coeffs.dump_poly_line(fam, n, poly)
        if n in golden and golden[n] != canon:
            problems.append(f"{family}_{n}: generated {canon!r} != published {golden[n]!r}")
    return problems


def run_coeffs(args, out, err) -> int:
    if args.max < 0:
        raise CliError("--max must be non-negative")
    lines = coeffs.dump_family(args.family, args.max)
    for line in lines:
        out.write(line + "\n")
    if args.check == "tables":
        problems = check_tables(args.family, lines)
        for p in problems:
            err.write(p + "\n")
        if problems:
            return EXIT_VERIFY
    return EXIT_OK


# --------------------------------------------------------------------------
# figure


def figure_rows(a: float, tau: float, nmax: int) -> list[dict]:
    """Term and remainder magnitudes behind the comparison figures."""
    if not a > 0 or a + tau * math.sqrt(a) <= 0:
        raise DomainError("figure needs a > 0 and a + tau*sqrt(a) > 0")
    if nmax < 0:
        raise CliError("--nmax must be non-negative")
    x = a + tau * math.sqrt(a)
    q = oracle.oracle_q(a, x)
    t7 = transition_terms(a, tau, nmax + 1)
    t5 = uniform_terms(a, x / a, nmax // 2 + 1)
    partial = [0.5 * erfc(tau / SQRT2)]
    rows = []
    for n in range(nmax + 1):
        rem = abs(float(q - math.fsum(partial)))
        rows.append({
            "n": n,
            "term_eq7": abs(t7[n]),
            "term_eq5": abs(t5[n // 2]) if n % 2 == 0 else None,
            "remainder_eq7": rem,
        })
        partial.append(t7[n])
    return rows


def cmd_figure(args) -> list[dict]:
    if args.id is not None:
        if args.id not in FIGURE_PRESETS:
            raise CliError(f"unknown figure preset {args.id}; choose 1, 2 or 3")
        a, tau = FIGURE_PRESETS[args.id]
    elif args.a is not None and args.tau is not None:
        a, tau = args.a, args.tau
    else:
        raise CliError("figure needs --id or both --a and --tau")
    return figure_rows(a, tau, args.nmax)


# --------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="transgamma", description="Incomplete gamma function via transition-region expansions")
    sub = p.add_subparsers(dest="command", required=True)

    def with_format(sp):
        sp.add_argument("--format", choices=("csv", "json"), default="csv")

    e = sub.add_parser("eval", help="evaluate Q(a, x)")
    e.add_argument("--a", type=float, required=True)
    e.add_argument("--x", type=float, required=True)
    e.add_argument("--regime", choices=("auto", "transition", "uniform", "outer", "reference"), default="auto")
    e.add_argument("--terms", type=int, default=None)
    with_format(e)

    i = sub.add_parser("invert", help="solve Q(a, x) = q for x")
    i.add_argument("--a", type=float, required=True)
    i.add_argument("--q", type=float, required=True)
    i.add_argument("--terms", type=int, default=None)
    i.add_argument("--verify", action="store_true")
    with_format(i)

    z = sub.add_parser("zero", help="negative zero of gamma*(a, x) for a < 0")
    z.add_argument("--a", type=float, required=True)
    z.add_argument("--terms", type=int, default=None)
    z.add_argument("--verify", action="store_true")
    with_format(z)

    c = sub.add_parser("coeffs", help="dump exact coefficients")
    c.add_argument("--family", choices=sorted(list(coeffs.POLY_FAMILIES) + list(coeffs.TABLE_FAMILIES)), required=True)
    c.add_argument("--max", type=int, required=True)
    c.add_argument("--check", choices=("tables",), default=None)

    f = sub.add_parser("figure", help="term/remainder data for the comparison figures")
    f.add_argument("--id", type=int, default=None)
    f.add_argument("--a", type=float, default=None)
    f.add_argument("--tau", type=float, default=None)
    f.add_argument("--nmax", type=int, default=40)
    with_format(f)
    return p


_COMMANDS = {"eval": cmd_eval, "invert": cmd_invert, "zero": cmd_zero, "figure": cmd_figure}


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        # argparse prints usage and --help itself; keep it on the given streams
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        if args.command == "coeffs":
            return run_coeffs(args, out, err)
        rows = _COMMANDS[args.command](args)
        emit(rows, args.format, out)
        return EXIT_OK
    except _VerifyFailed as exc:
        emit(exc.rows, args.format, out)
        err.write("error: verification failed\n")
        return EXIT_VERIFY
    except CliError as exc:
        err.write(f"error: {exc}\n")
        return exc.code
    except (DomainError, ValidityError, DegenerateExpansionError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
