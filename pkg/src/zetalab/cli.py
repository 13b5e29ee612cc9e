"""Command-line entry point: evaluation, diagnostics, and experiment reports.

Subcommands
    eval      print zeta_n, xi_n, zhat_n and the prefactored zhat at one point
    residual  functional-equation residual over a strip grid (CSV report)
    zeros     scan a critical-line window, optionally crosscheck a table
    doubling  doubling-ratio experiment at a point or a table zero
    errscan   error-scaling scan with log-log slope fit

Exit codes: 0 success, 1 tolerance/assertion or computation failure,
2 usage/parse error.  Reports embed the full evaluation config; repeated runs
with identical flags produce byte-identical results sections (timestamps are
confined to the manifest).  CSL_THREADS caps internal parallelism.
"""

from __future__ import annotations

import argparse
import math
import re
import sys
from dataclasses import dataclass
from datetime import datetime, timezone

from .config import EvalConfig
from .errors import ZetaLabError
from .experiments import (
    DOUBLING_BUDGET,
    error_scaling_scan,
    exponent_gap,
    h_doubling,
    tail_count,
)
from .functional_equation import functional_equation_residual
from .reporting import (
    atomic_write_text,
    complex_pair,
    csv_text,
    format_float,
    json_compact,
    json_dumps,
    ordered_map,
)
from .series import zeta_hat_eta, zeta_hat_regularized, zeta_partial, eta_partial
from .zeros import (
    ScanWindow,
    crosscheck_zeros,
    load_zero_table,
    reference_table_path,
    scan_zeros,
)

_COMPLEX_RE = re.compile(
    r"""^\s*
        (?P<re>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
        (?:(?P<im>[+-](?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)i)?
        \s*$""",
    re.VERBOSE,
)


@dataclass(frozen=True)
class RunManifest:
    """What was run: command, validated CLI parameters, timestamp, config."""

    command: str
    parameters: dict
    timestamp: str
    config: EvalConfig

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "parameters": self.parameters,
            "timestamp": self.timestamp,
        }


def parse_complex(text: str) -> complex:
    """Parse the CLI complex literal 'a+bi' / 'a-bi' (decimal, no spaces)."""
    match = _COMPLEX_RE.match(text)
    if not match:
        raise argparse.ArgumentTypeError(
            f"invalid complex literal {text!r}; expected forms like 0.5+14.1i or 2+0i"
        )
    re_part = float(match.group("re"))
    im_part = float(match.group("im")) if match.group("im") else 0.0
    return complex(re_part, im_part)


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _add_config_flags(parser: argparse.ArgumentParser, accelerate_default: bool) -> None:
    group = parser.add_argument_group("evaluation config")
    group.add_argument("--n", type=_positive_int, default=10_000,
                       help="series truncation index (default %(default)s)")
    if accelerate_default:
        group.add_argument("--no-accelerate", dest="accelerate", action="store_false",
                           help="disable tail averaging (plain partial sums)")
    else:
        group.add_argument("--accelerate", dest="accelerate", action="store_true",
                           help="enable tail averaging of the alternating series")
    parser.set_defaults(accelerate=accelerate_default)
    group.add_argument("--accel-order", type=_positive_int, default=40,
                       help="tail-averaging depth (default %(default)s)")
    group.add_argument("--hl-constant", type=float, default=2.0,
                       help="validity constant C > 1 in |Im z| <= 2*pi*n/C (default %(default)s)")
    group.add_argument("--guard-radius", type=float, default=1e-6,
                       help="singularity guard radius (default %(default)s)")
    group.add_argument("--tolerance", type=float, default=1e-10,
                       help="refinement/residual tolerance (default %(default)s)")


def _config_from(args) -> EvalConfig:
    return EvalConfig(
        n_terms=args.n,
        accelerate=args.accelerate,
        accel_order=args.accel_order,
        hl_constant=args.hl_constant,
        guard_radius=args.guard_radius,
        tolerance=args.tolerance,
    )


def format_complex_flag(z: complex) -> str:
    """Render a complex value in the CLI literal form 'a+bi'."""
    return f"{format_float(z.real)}{'+' if z.imag >= 0 else '-'}{format_float(abs(z.imag))}i"


def _manifest(command: str, args, config: EvalConfig, keys: list[str]) -> RunManifest:
    parameters = {}
    for key in keys:
        value = getattr(args, key)
        if isinstance(value, complex):
            value = format_complex_flag(value)
        parameters[key] = "" if value is None else str(value)
    return RunManifest(
        command=command,
        parameters=parameters,
        timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        config=config,
    )


def _report(manifest: RunManifest, results: dict) -> dict:
    return {
        "manifest": manifest.as_dict(),
        "config": manifest.config.as_dict(),
        "results": results,
    }


def _series_value_dict(sv) -> dict:
    return {
        "value": complex_pair(sv.value),
        "n_used": sv.n_used,
        "mode": sv.mode,
        "est_error": sv.est_error,
    }


def _emit(text: str, out_path) -> None:
    if out_path:
        atomic_write_text(out_path, text)
    else:
        sys.stdout.write(text)


# ----------------------------------------------------------------- eval ----

def cmd_eval(args) -> int:
    config = _config_from(args)
    manifest = _manifest("eval", args, config, ["z", "n", "format"])
    z = args.z
    results: dict = {}
    failures: list[str] = []

    def attempt(name, fn):
        try:
            results[name] = fn()
        except (ZetaLabError, OverflowError) as exc:
            results[name] = {"error": type(exc).__name__, "detail": str(exc)}
            failures.append(type(exc).__name__)

    attempt("zeta_partial", lambda: complex_pair(zeta_partial(z, config.n_terms)))
    attempt("eta_partial", lambda: complex_pair(eta_partial(z, config.n_terms)))
    attempt("zeta_hat_regularized",
            lambda: complex_pair(zeta_hat_regularized(z, config.n_terms, config.guard_radius)))
    attempt("zeta_hat_eta", lambda: _series_value_dict(zeta_hat_eta(z, config)))

    if args.format == "text":
        lines = [f"z = {format_float(z.real)}{z.imag:+.17g}i  (n = {config.n_terms})"]
        for name, payload in results.items():
            if "error" in payload:
                lines.append(f"{name:>22}: error {payload['error']}")
            elif "value" in payload:
                v = payload["value"]
                lines.append(
                    f"{name:>22}: {format_float(v['re'])} {v['im']:+.17g}i"
                    f"  (est_error {format_float(payload['est_error'])})"
                )
            else:
                lines.append(f"{name:>22}: {format_float(payload['re'])} {payload['im']:+.17g}i")
        text = "\n".join(lines) + "\n"
    else:
        text = json_dumps(_report(manifest, results))
    _emit(text, args.out)
    if failures:
        print(f"error: {', '.join(sorted(set(failures)))}", file=sys.stderr)
        return 1
    return 0


# ------------------------------------------------------------- residual ----

def cmd_residual(args) -> int:
    if not (0.0 < args.rmin < args.rmax < 1.0):
        raise argparse.ArgumentTypeError("grid bounds must satisfy 0 < rmin < rmax < 1")
    config = _config_from(args)
    manifest = _manifest("residual", args, config,
                         ["rmin", "rmax", "rcount", "imin", "imax", "icount", "tol"])

    res = [args.rmin + i * (args.rmax - args.rmin) / (args.rcount - 1)
           for i in range(args.rcount)] if args.rcount > 1 else [args.rmin]
    ims = [args.imin + i * (args.imax - args.imin) / (args.icount - 1)
           for i in range(args.icount)] if args.icount > 1 else [args.imin]
    points = [complex(r, t) for r in res for t in ims]

    def evaluate(z):
        try:
            rep = functional_equation_residual(z, config)
            return (z, rep, None)
        except ZetaLabError as exc:
            return (z, None, type(exc).__name__)

    outcomes = ordered_map(evaluate, points)
    rows = []
    max_residual = 0.0
    skipped = 0
    for z, rep, err in outcomes:
        if rep is None:
            rows.append([float(z.real), float(z.imag), None, None, None, None, None, "skipped"])
            skipped += 1
            continue
        max_residual = max(max_residual, rep.residual)
        rows.append([
            float(z.real), float(z.imag), rep.residual,
            float(rep.lhs.real), float(rep.lhs.imag),
            float(rep.rhs.real), float(rep.rhs.imag), "ok",
        ])

    text = csv_text(
        ["re", "im", "residual", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "status"],
        rows,
        comments=[f"config: {json_compact(config.as_dict())}"],
    )
    atomic_write_text(args.out, text)
    passed = max_residual <= args.tol
    print(f"residual grid: {len(rows)} points ({skipped} skipped), "
          f"max residual {max_residual:.3e}, tolerance {args.tol:.1e} -> "
          f"{'PASS' if passed else 'FAIL'}  [{args.out}]")
    return 0 if passed else 1


# ---------------------------------------------------------------- zeros ----

def cmd_zeros(args) -> int:
    config = _config_from(args)
    manifest = _manifest("zeros", args, config,
                         ["tmin", "tmax", "step", "reference", "match_tol"])
    window = ScanWindow(args.tmin, args.tmax, args.step)
    records = scan_zeros(window, config)
    results: dict = {
        "window": {"t_min": window.t_min, "t_max": window.t_max, "step": window.step},
        "zeros": [
            {
                "index": r.index,
                "ordinate": r.ordinate,
                "residual_mag": r.residual_mag,
                "refined": r.refined,
            }
            for r in records
        ],
    }

    exit_code = 0
    summary = f"{len(records)} zeros in [{args.tmin}, {args.tmax}]"
    if args.reference:
        reference = load_zero_table(args.reference)
        report = crosscheck_zeros(records, reference, args.match_tol,
                                  window=(window.t_min, window.t_max))
        results["crosscheck"] = {
            "reference_path": str(args.reference),
            "tolerance": report.tolerance,
            "matched": [
                {
                    "found_index": m.found_index,
                    "reference_index": m.reference_index,
                    "found_ordinate": m.found_ordinate,
                    "reference_ordinate": m.reference_ordinate,
                    "delta": m.delta,
                }
                for m in report.matched
            ],
            "unmatched_found": [r.ordinate for r in report.unmatched_found],
            "unmatched_reference": report.unmatched_reference,
            "max_delta": report.max_delta,
        }
        mismatches = len(report.unmatched_found) + len(report.unmatched_reference)
        summary += (f"; crosscheck: {len(report.matched)} matched, "
                    f"{mismatches} unmatched, max delta {report.max_delta:.3e}")
        if mismatches:
            exit_code = 1

    _emit(json_dumps(_report(manifest, results)), args.out)
    print(summary, file=sys.stderr)
    return exit_code


# ------------------------------------------------------------- doubling ----

def cmd_doubling(args) -> int:
    if args.z is None and args.zero_index is None:
        raise argparse.ArgumentTypeError("provide either --z or --zero-index")
    if args.z is not None and args.zero_index is not None:
        raise argparse.ArgumentTypeError("--z and --zero-index are mutually exclusive")

    config = _config_from(args)
    manifest = _manifest("doubling", args, config,
                         ["z", "zero_index", "zero_table", "nbase", "m"])

    if args.zero_index is not None:
        table_path = args.zero_table or reference_table_path()
        table = load_zero_table(table_path)
        if args.zero_index > len(table):
            raise argparse.ArgumentTypeError(
                f"--zero-index {args.zero_index} exceeds table size {len(table)}")
        point = complex(0.5, table[args.zero_index - 1])
        provenance = f"zero {args.zero_index} from table {table_path}"
    else:
        point = args.z
        provenance = "explicit point"

    report = h_doubling(point, args.nbase, args.m)
    gap = exponent_gap(report.fitted_exponent, report.reference_exponent)
    tail = tail_count(args.m)
    zh_tail_ratio = report.zeta_hat_ratios[-1]
    results = {
        "point": complex_pair(report.point),
        "point_provenance": provenance,
        "n_base": report.n_base,
        "m_doublings": report.m_doublings,
        "ratios": [complex_pair(r) for r in report.ratios],
        "zeta_hat_ratios": [complex_pair(r) for r in report.zeta_hat_ratios],
        "moduli": report.moduli,
        "fitted_exponent": complex_pair(report.fitted_exponent),
        "reference_exponent": complex_pair(report.reference_exponent),
        "exponent_gap_mod_log2_period": complex_pair(gap),
        "tail_length": tail,
        "zeta_hat_tail_ratio": complex_pair(zh_tail_ratio),
        "candidate_halving_constants": {
            "two_pow_minus_z": complex_pair(2.0 ** (-report.point)),
            "two_pow_one_minus_z": complex_pair(2.0 ** (1.0 - report.point)),
        },
    }
    _emit(json_dumps(_report(manifest, results)), args.out)

    lines = [
        f"doubling at {point.real:+.6f}{point.imag:+.6f}i  "
        f"(n_base={args.nbase}, m={args.m}, tail={tail})",
        f"  fitted exponent (principal log2). {report.fitted_exponent.real:+.6f}"
        f"{report.fitted_exponent.imag:+.6f}i",
        f"  reference exponent 1-2z ........ {report.reference_exponent.real:+.6f}"
        f"{report.reference_exponent.imag:+.6f}i",
        f"  gap (imag reduced mod 2pi/ln2) . {gap.real:+.6f}{gap.imag:+.6f}i",
        f"  tail |H_2n/H_n| ................ "
        + ", ".join(f"{m:.6f}" for m in report.moduli[-tail:]),
        f"  measured zhat halving ratio .... {zh_tail_ratio.real:+.6f}"
        f"{zh_tail_ratio.imag:+.6f}i",
        f"    candidate 2^-z ............... {(2.0 ** -point).real:+.6f}"
        f"{(2.0 ** -point).imag:+.6f}i",
        f"    candidate 2^(1-z) ............ {(2.0 ** (1 - point)).real:+.6f}"
        f"{(2.0 ** (1 - point)).imag:+.6f}i",
    ]
    print("\n".join(lines), file=sys.stderr)
    return 0


# -------------------------------------------------------------- errscan ----

def cmd_errscan(args) -> int:
    if args.nmin >= args.nmax:
        raise argparse.ArgumentTypeError("--nmin must be below --nmax")
    config = _config_from(args)
    manifest = _manifest("errscan", args, config, ["z", "nmin", "nmax", "csv"])

    j_min = max(0, math.ceil(math.log2(args.nmin)))
    j_max = math.floor(math.log2(args.nmax))
    n_grid = [1 << j for j in range(j_min, j_max + 1)]
    if len(n_grid) < 2:
        raise argparse.ArgumentTypeError("n range too narrow: needs >= 2 powers of two")

    report = error_scaling_scan(args.z, n_grid, config)
    results = {
        "point": complex_pair(report.point),
        "n_grid": report.n_grid,
        "errors": report.errors,
        "domain_ok": report.domain_ok,
        "fitted_slope": report.fitted_slope,
        "reference_slope": report.reference_slope,
        "slope_deviation": report.fitted_slope - report.reference_slope,
    }
    _emit(json_dumps(_report(manifest, results)), args.out)

    if args.csv:
        rows = [[n, e, ok] for n, e, ok in zip(report.n_grid, report.errors, report.domain_ok)]
        text = csv_text(["n", "error", "domain_ok"], rows,
                        comments=[f"config: {json_compact(config.as_dict())}"])
        atomic_write_text(args.csv, text)

    print(f"errscan at {args.z}: fitted slope {report.fitted_slope:+.4f} "
          f"(reference {report.reference_slope:+.4f})", file=sys.stderr)
    return 0


# ----------------------------------------------------------------- main ----

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zetalab",
        description="Critical-strip zeta laboratory: series evaluation, "
                    "functional-equation diagnostics, zeros, and convergence experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate the series representations at one point")
    p_eval.add_argument("--z", type=parse_complex, required=True,
                        help="evaluation point, e.g. 0.5+14.134725i")
    p_eval.add_argument("--format", choices=("json", "text"), default="json")
    p_eval.add_argument("--out", default=None, help="write the report here instead of stdout")
    _add_config_flags(p_eval, accelerate_default=True)
    p_eval.set_defaults(handler=cmd_eval)

    p_res = sub.add_parser("residual", help="functional-equation residual over a strip grid")
    p_res.add_argument("--rmin", type=float, default=0.1)
    p_res.add_argument("--rmax", type=float, default=0.9)
    p_res.add_argument("--rcount", type=_positive_int, default=9)
    p_res.add_argument("--imin", type=float, default=0.0)
    p_res.add_argument("--imax", type=float, default=30.0)
    p_res.add_argument("--icount", type=_positive_int, default=13)
    p_res.add_argument("--tol", type=float, default=1e-8,
                       help="max-residual pass threshold (default %(default)s)")
    p_res.add_argument("--out", default="residual_report.csv")
    _add_config_flags(p_res, accelerate_default=True)
    p_res.set_defaults(handler=cmd_residual)

    p_zeros = sub.add_parser("zeros", help="scan a critical-line window for zeros")
    p_zeros.add_argument("--tmin", type=float, default=10.0)
    p_zeros.add_argument("--tmax", type=float, default=50.0)
    p_zeros.add_argument("--step", type=float, default=0.05)
    p_zeros.add_argument("--reference", default=None,
                         help="zero table to crosscheck (one ordinate per line)")
    p_zeros.add_argument("--match-tol", type=float, default=1e-6)
    p_zeros.add_argument("--out", default=None, help="write the report here instead of stdout")
    _add_config_flags(p_zeros, accelerate_default=True)
    p_zeros.set_defaults(handler=cmd_zeros)

    p_dbl = sub.add_parser("doubling", help="doubling-ratio experiment (plain sums)")
    p_dbl.add_argument("--z", type=parse_complex, default=None)
    p_dbl.add_argument("--zero-index", type=_positive_int, default=None,
                       help="1-based index into the zero table (default: packaged table)")
    p_dbl.add_argument("--zero-table", default=None)
    p_dbl.add_argument("--nbase", type=_positive_int, default=4096)
    p_dbl.add_argument("--m", type=_positive_int, default=5,
                       help="number of doublings (budget n_base*2^m <= %d)" % DOUBLING_BUDGET)
    p_dbl.add_argument("--out", default=None, help="write the report here instead of stdout")
    _add_config_flags(p_dbl, accelerate_default=False)
    p_dbl.set_defaults(handler=cmd_doubling)

    p_err = sub.add_parser("errscan", help="error-scaling scan (plain sums vs reference)")
    p_err.add_argument("--z", type=parse_complex, required=True)
    p_err.add_argument("--nmin", type=_positive_int, default=256)
    p_err.add_argument("--nmax", type=_positive_int, default=65536)
    p_err.add_argument("--csv", default=None, help="also write (n, error) pairs as CSV")
    p_err.add_argument("--out", default=None, help="write the report here instead of stdout")
    _add_config_flags(p_err, accelerate_default=False)
    p_err.set_defaults(handler=cmd_errscan)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; normalize other codes
        return int(exc.code) if exc.code else 0
    try:
        return args.handler(args)
    except argparse.ArgumentTypeError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        # ConfigError, ParseError, NonMonotonicError, WindowTooCoarse, BudgetError
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (ZetaLabError, OverflowError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
