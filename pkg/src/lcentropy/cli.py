"""Command-line front end: ``lcentropy <subcommand> ...``.

Exit codes: 0 success, 1 a verification or certification failed, 2 usage or
input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import applications as app
from . import two_piece as tp
from .density import MalformedDensityError, entropy_variance_gap, is_log_concave, renyi_entropy, stats
from .rearrangement import NotUnimodalError, decreasing_rearrangement
from .series import FAMILIES, certify_family
from .specs import SpecError, parse_density_spec, to_dict

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
TOL = 1e-9


class UsageError(Exception):
    pass


def seed_from_env(default: int = 0) -> int:
    raw = os.environ.get("LCENTROPY_SEED")
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise UsageError(f"LCENTROPY_SEED must be an integer, got {raw!r}") from exc


def _floats(text: str, n: int | None = None) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers: {text!r}") from exc
    if n is not None and len(vals) != n:
        raise argparse.ArgumentTypeError(f"expected {n} values, got {len(vals)}")
    return vals


def _grid(text: str) -> tuple[int, int, int]:
    vals = _floats(text, 3)
    if any(v < 1 or v != int(v) for v in vals):
        raise argparse.ArgumentTypeError("grid sizes must be positive integers")
    return tuple(int(v) for v in vals)


def _range(text: str) -> tuple[float, float]:
    lo, hi = _floats(text, 2)
    return lo, hi


def _density_report(d) -> dict:
    out = stats(d).to_json()
    out["gap"] = entropy_variance_gap(d)
    out["log_concave"] = is_log_concave(d)
    out["renyi"] = {k: renyi_entropy(d, a) for k, a in (("0", 0.0), ("2", 2.0), ("inf", math.inf))}
    return out


# ---------------------------------------------------------------------------
# subcommands: each returns (exit code, payload, csv rows or None)
# ---------------------------------------------------------------------------


def cmd_stats(args):
    d = parse_density_spec(args.spec, args.normalize)
    rep = _density_report(d)
    flat = {k: v for k, v in rep.items() if k != "renyi"}
    flat.update({f"h_{k}": v for k, v in rep["renyi"].items()})
    return EXIT_OK, rep, [list(flat), list(flat.values())]


def cmd_rearrange(args):
    d = parse_density_spec(args.spec, args.normalize)
    r = decreasing_rearrangement(d)
    rep = {"rearranged": to_dict(r), "before": _density_report(d), "after": _density_report(r)}
    if args.spec_only:
        rep = rep["rearranged"]
    return EXIT_OK, rep, None


def cmd_verify(args):
    region = tp.Box(tuple(args.a_range), tuple(args.x_range), tuple(args.y_range))
    report = tp.sweep(region, args.grid, refine=args.refine, chunks=args.threads)
    ident = tp.identity_check(args.identity_points, np.random.default_rng(seed_from_env()), region)
    rep = report.to_json()
    rep["identity_max_err"] = max(rep["identity_max_err"], ident.max_rel_err)
    rep["identity_inequality_holds"] = ident.inequality_holds
    rep["identity_points"] = ident.points
    ok = (rep["min_gap"] >= -TOL and rep["min_G"] >= -TOL and rep["identity_max_err"] <= TOL
          and ident.inequality_holds and rep["L_range"][0] >= -TOL and rep["L_range"][1] <= 2 + TOL)
    rep["ok"] = ok
    rows = None
    if args.csv:
        data = tp.sweep_rows(region, args.grid)
        rows = [["a", "x", "y", "gap", "G", "L"]] + [[repr(float(v)) for v in r] for r in data]
    return (EXIT_OK if ok else EXIT_FAIL), rep, rows


def cmd_certify(args):
    fams = FAMILIES if args.family == "all" else (args.family,)
    if args.threads > 1 and len(fams) > 1:
        with ProcessPoolExecutor(max_workers=args.threads) as pool:
            certs = list(pool.map(certify_family, fams))
    else:
        certs = [certify_family(f) for f in fams]
    rep = {c.family: c.to_json() for c in certs}
    ok = all(c.proven and all(c.checkpoints.values()) for c in certs)
    if args.report:
        with open(args.report, "w") as fh:
            json.dump(rep, fh, indent=2, sort_keys=True)
    summary = {c.family: {"status": c.status, "threshold": c.threshold,
                          "checkpoints_ok": all(c.checkpoints.values())} for c in certs}
    rows = [["family", "status", "threshold", "checkpoints_ok"]] + [
        [f, s["status"], s["threshold"], s["checkpoints_ok"]] for f, s in summary.items()
    ]
    return (EXIT_OK if ok else EXIT_FAIL), (rep if args.full else summary), rows


def cmd_constants(args):
    out = [app.epi_constants(a) for a in args.alpha]
    rows = [["alpha", "C_minus", "C_plus", "ratio"]] + [
        [repr(c.alpha), repr(c.C_minus), repr(c.C_plus), repr(c.ratio)] for c in out
    ]
    return EXIT_OK, [c.to_json() for c in out], rows


def cmd_capacity(args):
    d = parse_density_spec(args.noise, args.normalize)
    b = app.capacity_bounds(d, args.power)
    return EXIT_OK, b.to_json(), [list(b.to_json()), list(b.to_json().values())]


def cmd_epi(args):
    d1 = parse_density_spec(args.d1, args.normalize)
    d2 = parse_density_spec(args.d2, args.normalize)
    r = app.reverse_epi_check(d1, d2, args.resolution)
    rep = r.to_json()
    return (EXIT_OK if r.holds else EXIT_FAIL), rep, [list(rep), list(rep.values())]


def cmd_alpha_star(args):
    a = app.alpha_star()
    rep = {"alpha_star": a, "residual": app.log_ratio(a) - 0.5 * math.log(6)}
    return EXIT_OK, rep, [list(rep), list(rep.values())]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lcentropy", description="Entropy-variance toolkit for log-concave densities.")
    fmt = argparse.ArgumentParser(add_help=False)
    g = fmt.add_mutually_exclusive_group()
    g.add_argument("--json", action="store_true", help="JSON output (default)")
    g.add_argument("--csv", action="store_true", help="CSV output")
    fmt.add_argument("--out", help="write output here instead of stdout")
    fmt.add_argument("--normalize", action="store_true", help="renormalize input densities")
    fmt.add_argument("--threads", type=int, default=1)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("stats", parents=[fmt], help="moments, entropy, gap of a density spec")
    s.add_argument("spec")
    s.set_defaults(func=cmd_stats)

    s = sub.add_parser("rearrange", parents=[fmt], help="decreasing rearrangement of a density spec")
    s.add_argument("spec")
    s.add_argument("--spec-only", action="store_true", help="emit only the rearranged spec")
    s.set_defaults(func=cmd_rearrange)

    s = sub.add_parser("verify-theorem", parents=[fmt], help="grid sweep over the two-piece family")
    s.add_argument("--grid", type=_grid, default=(60, 60, 60))
    s.add_argument("--refine", type=int, default=0, help="coordinate-descent budget")
    s.add_argument("--a-range", type=_range, default=(1.0, 6.0))
    s.add_argument("--x-range", type=_range, default=(0.0, 5.0))
    s.add_argument("--y-range", type=_range, default=(-6.0, 0.0))
    s.add_argument("--identity-points", type=int, default=1000)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("certify", parents=[fmt], help="exact positivity certificates for P0..P4")
    s.add_argument("--family", choices=FAMILIES + ("all",), default="all")
    s.add_argument("--report", help="write the full certificate JSON here")
    s.add_argument("--full", action="store_true", help="print full certificates")
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("constants", parents=[fmt], help="C_-(alpha), C_+(alpha)")
    s.add_argument("--alpha", type=_floats, default=[2.0])
    s.set_defaults(func=cmd_constants, csv_default=True)

    s = sub.add_parser("capacity", parents=[fmt], help="capacity sandwich for an additive noise")
    s.add_argument("noise")
    s.add_argument("--power", type=float, required=True)
    s.set_defaults(func=cmd_capacity)

    s = sub.add_parser("epi", parents=[fmt], help="entropy power of a sum by grid convolution")
    s.add_argument("d1")
    s.add_argument("d2")
    s.add_argument("--resolution", type=int, default=4096)
    s.set_defaults(func=cmd_epi)

    s = sub.add_parser("alpha-star", parents=[fmt], help="root of log a/(a-1) = log(6)/2")
    s.set_defaults(func=cmd_alpha_star)
    return p


def _render(payload, rows, as_csv: bool) -> str:
    if as_csv and rows is not None:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        return buf.getvalue()
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


RANGE_FLAGS = ("--a-range", "--x-range", "--y-range")


def _attach_negative_ranges(argv: list[str]) -> list[str]:
    # argparse reads "-6,0" as an option; glue it to its flag instead
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in RANGE_FLAGS:
            nxt = next(it, None)
            if nxt is None:
                out.append(tok)
            elif re.match(r"-[\d.]", nxt):
                out.append(f"{tok}={nxt}")
            else:
                out.extend((tok, nxt))
        else:
            out.append(tok)
    return out


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = _attach_negative_ranges(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if args.threads < 1:
        print("lcentropy: --threads must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    as_csv = args.csv or (getattr(args, "csv_default", False) and not args.json)
    # verify-theorem --csv dumps the sweep; the summary still goes to stderr
    try:
        code, payload, rows = args.func(args)
    except (SpecError, MalformedDensityError, NotUnimodalError, UsageError, ValueError, TypeError) as exc:
        print(f"lcentropy {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = _render(payload, rows, as_csv)
    if args.command == "verify-theorem" and as_csv:
        print(json.dumps(payload, sort_keys=True), file=sys.stderr)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
