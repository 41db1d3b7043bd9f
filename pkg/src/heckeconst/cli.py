"""Exact q-expansions for Hecke triangle groups and their conjecture checks.

Exit codes: 0 when every gated check passes, 1 when at least one fails,
2 for usage, configuration or I/O errors.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
import urllib.request
from typing import List, Optional

from . import __version__, conjectures as C, hecke, kernels
from .cache import ENV_CACHE_DIR, CachedSource, default_cache_dir
from .errors import BFileError, ParameterError, StabilizationError
from .exactnum import catalan, catalan_ord2_one, format_rational
from .hecke import K, KBAR
from .polyfit import decompose, stabilized_fit
from .report import ReportDocument, emit_report
from .series import coefficient

log = logging.getLogger("heckeconst")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_FAMILY_ALIASES = {"K": K, "J": K, "Kbar": KBAR, "bar": KBAR, "j": KBAR}


class UsageError(Exception):
    pass


def _family(s: str) -> str:
    try:
        return _FAMILY_ALIASES[s]
    except KeyError:
        raise argparse.ArgumentTypeError(f"family must be one of {sorted(_FAMILY_ALIASES)}")


def _m_range(s: str):
    try:
        lo, hi = (int(x) for x in s.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError("expected FROM:TO, e.g. 3:20")
    if hi < lo:
        raise argparse.ArgumentTypeError("empty range")
    return range(lo, hi + 1)


# -- configuration ---------------------------------------------------------------


def resolve_config(args) -> dict:
    """flags > config file > environment (cache dir) > built-in defaults"""
    cfg = {"cache_dir": default_cache_dir(), "no_cache": False, "jobs": 1}
    if os.environ.get(ENV_CACHE_DIR):
        cfg["cache_dir"] = os.environ[ENV_CACHE_DIR]
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                file_cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}")
        unknown = set(file_cfg) - set(cfg)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(file_cfg)
    if args.cache_dir is not None:
        cfg["cache_dir"] = args.cache_dir
    if args.no_cache:
        cfg["no_cache"] = True
    if args.jobs is not None:
        cfg["jobs"] = args.jobs
    if not isinstance(cfg["jobs"], int) or cfg["jobs"] < 1:
        raise UsageError("jobs must be a positive integer")
    return cfg


def make_source(cfg: dict):
    if cfg["no_cache"]:
        return hecke.canonical_expansion
    return CachedSource(cfg["cache_dir"])


# -- output helpers ----------------------------------------------------------------


def _emit_rows(header: List[str], rows: List[list], fmt: str, meta: dict, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        doc = dict(meta)
        doc["rows"] = [dict(zip(header, r)) for r in rows]
        out.write(json.dumps(doc, indent=2) + "\n")
    elif fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    else:
        for key, val in meta.items():
            out.write(f"# {key}: {val}\n")
        widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)]
        for r in [header] + rows:
            out.write("  ".join(str(x).rjust(w) for x, w in zip(r, widths)) + "\n")


def _series_output(f, fmt: str, meta: dict, first: int, last: int) -> None:
    idx = list(range(first, last + 1))
    vals = [format_rational(coefficient(f, n)) for n in idx]
    if fmt == "json":
        doc = dict(meta, indices=idx, coefficients=vals)
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        _emit_rows(["n", "coefficient"], [[n, v] for n, v in zip(idx, vals)], fmt, meta)


# -- subcommands ---------------------------------------------------------------------


def cmd_expand(args, cfg) -> int:
    if args.terms < 1:
        raise UsageError("--terms must be >= 1")
    order = max(args.terms - 2, 1)
    exp = make_source(cfg)(args.m, order)
    meta = {"m": args.m, "family": args.family, "lower": -1}
    _series_output(exp.series(args.family), args.format, meta, -1, args.terms - 2)
    return EXIT_OK


def cmd_power(args, cfg) -> int:
    if args.terms < 1:
        raise UsageError("--terms must be >= 1")
    last = -args.k + args.terms - 1
    f = hecke.power_expansion(args.family, args.k, args.m, max(last, 0), make_source(cfg))
    meta = {"m": args.m, "k": args.k, "family": args.family, "lower": -args.k}
    _series_output(f, args.format, meta, -args.k, last)
    return EXIT_OK


def cmd_constants(args, cfg) -> int:
    src = make_source(cfg)
    rows = [[m, format_rational(hecke.constant_term(args.family, args.k, m, src))] for m in args.m_range]
    _emit_rows(["m", "constant_term"], rows, args.format, {"family": args.family, "k": args.k})
    return EXIT_OK


def cmd_interp(args, cfg) -> int:
    src = make_source(cfg)
    k, n = args.k, args.n
    if n < -k:
        raise UsageError("--n must be >= -k")

    def sample(m):
        return coefficient(hecke.power_expansion(KBAR, k, m, n, src), n)

    fit = stabilized_fit(sample, cap=args.cap)
    poly = fit.polynomial
    meta = {
        "family": args.family,
        "k": k,
        "n": n,
        "variable": "x",
        "stabilizedAt": fit.m_max,
        "degree": poly.degree,
        "nu": format_rational(decompose(poly).nu) if poly.coeffs else "0",
        "polynomial": str(poly),
    }
    if args.family == K:
        # unscaled coefficients are the rescaled ones divided by s^(n+k), s = 64 x^3
        meta["denominator"] = f"(64*x^3)^{n + k}"
    rows = [[i, format_rational(c)] for i, c in enumerate(poly.coeffs)]
    _emit_rows(["power", "coefficient"], rows, args.format, meta)
    return EXIT_OK


def _config_echo(ids) -> dict:
    echo = C.grid_echo()
    echo["ids"] = sorted(str(i) for i in ids) if ids else "all"
    return echo


def cmd_check(args, cfg) -> int:
    if args.grid != "default":
        raise UsageError("only the default grids are available (--grid default)")
    if not args.all and not args.id:
        raise UsageError("give --id ID (repeatable) or --all")
    ids = None if args.all else [C.ConjectureId(i) for i in args.id]
    records = C.run_all(make_source(cfg), cfg["jobs"], ids)
    doc = ReportDocument.build(records, _config_echo(ids))
    if args.report:
        emit_report(doc, args.format, args.report)
    s = doc.summary
    print(
        f"{s['total']} records: {s['passed']} passed, {s['failed']} failed, "
        f"{s['reportOnly']} report-only",
        file=sys.stderr if args.report == "-" else sys.stdout,
    )
    return EXIT_OK if doc.all_passed else EXIT_FAIL


def cmd_oeis_verify(args, cfg) -> int:
    if args.bfile:
        try:
            with open(args.bfile, encoding="utf-8") as fh:
                bfile = C.parse_bfile(fh.read())
        except OSError as exc:
            raise UsageError(f"cannot read b-file: {exc}")
    else:
        bfile = C.load_snapshot()
    seq = C.derive_A005148(args.kmax, make_source(cfg))
    records = C.verify_against_bfile(seq, bfile)
    doc = ReportDocument.build(records, {"kmax": args.kmax, "bfile": args.bfile or "bundled"})
    if args.report:
        emit_report(doc, args.format, args.report)
    else:
        for r in records:
            status = "report" if r.report_only else ("pass" if r.passed else "FAIL")
            print(f"a_{r.point.k} = {format_rational(r.computed)}  {status}")
    return EXIT_OK if doc.all_passed else EXIT_FAIL


def cmd_oeis_fetch(args, cfg) -> int:
    if args.sequence != "A005148":
        raise UsageError("only A005148 is supported")
    try:
        with urllib.request.urlopen(C.BFILE_URL, timeout=args.timeout) as resp:
            text = resp.read().decode("utf-8")
    except OSError as exc:
        raise UsageError(f"download failed: {exc}")
    C.parse_bfile(text)  # refuse to store something unparseable
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(text)
    print(f"wrote {args.output}")
    return EXIT_OK


def cmd_catalan(args, cfg) -> int:
    if args.n < (1 if args.ord2_one else 0):
        raise UsageError("n out of range")
    print(catalan_ord2_one(args.n) if args.ord2_one else catalan(args.n))
    return EXIT_OK


# -- parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache-dir", default=None, help=f"cache directory (env {ENV_CACHE_DIR})")
    common.add_argument("--no-cache", action="store_true", help="do not read or write the cache")
    common.add_argument("--config", default=None, help="JSON config file")
    common.add_argument("--jobs", type=int, default=None, help="worker processes for grid checks")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="heckeconst", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({kernels.BACKEND} kernels)")
    sub = p.add_subparsers(dest="command", required=True)

    def fmt(sp, choices=("json", "text", "csv"), default="text"):
        sp.add_argument("--format", choices=choices, default=default)

    sp = sub.add_parser("expand", parents=[common], help="coefficients of J_m or j_m")
    sp.add_argument("--m", type=int, required=True, help="group parameter, m >= 3")
    sp.add_argument("--terms", type=int, default=4, help="number of coefficients from X^-1")
    sp.add_argument("--family", type=_family, default=KBAR, help="K (canonical) or Kbar (rescaled)")
    fmt(sp)
    sp.set_defaults(func=cmd_expand)

    sp = sub.add_parser("power", parents=[common], help="coefficients of the k-th power")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--k", type=int, required=True, help="exponent, k >= 1")
    sp.add_argument("--terms", type=int, default=4, help="number of coefficients from X^-k")
    sp.add_argument("--family", type=_family, default=KBAR, help="K (canonical) or Kbar (rescaled)")
    fmt(sp)
    sp.set_defaults(func=cmd_power)

    sp = sub.add_parser("constants", parents=[common], help="constant terms over a range of m")
    sp.add_argument("--k", type=int, default=1, help="exponent, k >= 1")
    sp.add_argument("--m-range", type=_m_range, default=_m_range("3:12"), help="inclusive range lo:hi")
    sp.add_argument("--family", type=_family, default=KBAR, help="K (canonical) or Kbar (rescaled)")
    fmt(sp)
    sp.set_defaults(func=cmd_constants)

    sp = sub.add_parser("interp", parents=[common], help="polynomial in m through the X^n coefficients of the k-th power")
    sp.add_argument("--k", type=int, default=1, help="exponent, k >= 1")
    sp.add_argument("--n", type=int, default=0, help="coefficient index, n >= -k")
    sp.add_argument("--cap", type=int, default=120, help="largest window end tried before giving up")
    sp.add_argument("--family", type=_family, default=KBAR, help="K (canonical) or Kbar (rescaled)")
    fmt(sp)
    sp.set_defaults(func=cmd_interp)

    sp = sub.add_parser("check", parents=[common], help="check conjectures on their grids")
    sp.add_argument("--id", action="append", choices=[c.value for c in C.ConjectureId])
    sp.add_argument("--all", action="store_true", help="every conjecture plus the auxiliary checks")
    sp.add_argument("--grid", default="default", help="grid name (only 'default')")
    sp.add_argument("--report", default=None, help="report path ('-' for stdout)")
    fmt(sp, ("json", "csv"), "json")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("oeis-verify", parents=[common], help="derive A005148 terms and compare with a b-file")
    sp.add_argument("--kmax", type=int, default=4, help="derive a_1..a_kmax")
    sp.add_argument("--bfile", default=None, help="b-file path (default: bundled snapshot)")
    sp.add_argument("--report", default=None)
    fmt(sp, ("json", "csv"), "json")
    sp.set_defaults(func=cmd_oeis_verify)

    sp = sub.add_parser("oeis", parents=[common], help="network access to OEIS (off unless invoked)")
    osub = sp.add_subparsers(dest="oeis_command", required=True)
    fp = osub.add_parser("fetch", parents=[common], help="download a b-file")
    fp.add_argument("sequence")
    fp.add_argument("--output", required=True)
    fp.add_argument("--timeout", type=float, default=30.0)
    fp.set_defaults(func=cmd_oeis_fetch)

    sp = sub.add_parser("catalan", parents=[common], help="Catalan numbers")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--ord2-one", action="store_true", help="n-th Catalan number with 2-adic order 1")
    sp.set_defaults(func=cmd_catalan)
    return p


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = resolve_config(args)
        return args.func(args, cfg)
    except (UsageError, ParameterError, StabilizationError, BFileError, OSError) as exc:
        print(f"heckeconst: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
