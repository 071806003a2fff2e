"""Command-line front end.

Every subcommand writes a TSV whose ``#`` header echoes the full
configuration, so a table can be regenerated from its own header.
Exit status: 0 success, 1 user error, 2 internal error.
"""
from __future__ import annotations

import argparse
import sys
import traceback
from pathlib import Path

import numpy as np

from . import __version__
from .analytic import case_formula, case_id, coefficient_D, master_integral_quadrature
from .fbm import METHOD, FbmPairSpec, calibrate_scale, generate_pair
from .finance import leverage_curve
from .hurst import cross_exponent, default_windows
from .moving_average import WindowSpec
from .series import IngestSpec, load_series, mean_subtract_integrate
from .tsv import read_table, write_table
from .xcorr import (
    DEFAULT_MIN_COUNT,
    XcorrResult,
    arithmetic_windows,
    collapse_transform,
    cross_correlation,
    cross_correlation_fft,
    geometric_windows,
    lag_grid,
)

XCORR_COLUMNS = ("n", "tau", "tau_hat", "value", "count")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits 2 by default; usage errors are 1 here
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _int_range(text: str, name: str) -> tuple[int, ...]:
    try:
        parts = tuple(int(p) for p in text.split(":"))
    except ValueError:
        raise UsageError(f"bad {name} {text!r}: expected integers separated by ':'") from None
    return parts


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"bad number list {text!r}") from None


def _windows(args) -> list[WindowSpec]:
    theta = args.theta
    if args.n:
        return [WindowSpec(int(v), theta) for v in _float_list(args.n)]
    if args.n_range:
        parts = _int_range(args.n_range, "--n-range")
        if len(parts) != 3:
            raise UsageError("--n-range takes start:stop:step")
        return arithmetic_windows(*parts, theta=theta)
    if args.n_geometric:
        lo, hi, *rest = args.n_geometric.split(":")
        ratio = float(rest[0]) if rest else 1.3
        return geometric_windows(int(lo), int(hi), ratio, theta)
    return []


def _lags(text: str) -> np.ndarray:
    parts = _int_range(text, "--lags")
    if len(parts) == 1:
        return lag_grid(parts[0], parts[0])
    if len(parts) in (2, 3):
        return lag_grid(*parts)
    raise UsageError("--lags takes lo:hi[:step] or a single lag")


def _ingest(args) -> IngestSpec:
    delim = "\t" if args.delimiter in ("\\t", "tab") else args.delimiter
    return IngestSpec(
        column_index=args.column, delimiter=delim, skip_header=args.skip_header, axis_unit=args.axis_unit
    )


def _meta(args, **extra) -> dict:
    # the destination is not part of the computation, so identical runs give identical bytes
    config = {k: v for k, v in vars(args).items() if k not in ("func", "output")}
    return {"lrxcorr": __version__, "command": args.command, "config": config, **extra}


def _add_ingest(p):
    g = p.add_argument_group("input parsing")
    g.add_argument("--column", type=int, default=0, help="0-based value column")
    g.add_argument("--delimiter", default="\\t", help="field delimiter (default tab)")
    g.add_argument("--skip-header", type=int, default=0, help="leading rows to skip")
    g.add_argument("--axis-unit", default="samples", help="label of the sample axis")


def _add_windows(p, required=True):
    g = p.add_argument_group("windows (sample counts)")
    m = g.add_mutually_exclusive_group(required=required)
    m.add_argument("--n", help="comma-separated window sizes")
    m.add_argument("--n-range", help="arithmetic windows start:stop:step")
    m.add_argument("--n-geometric", help="geometric windows lo:hi[:ratio]")
    g.add_argument("--theta", type=float, default=0.0, help="window anchor in [0, 1] (0 = trailing)")


def _add_output(p):
    p.add_argument("-o", "--output", default="-", help="output TSV (default stdout)")


def cmd_xcorr(args) -> None:
    spec = _ingest(args)
    x = load_series(args.x, spec)
    y = load_series(args.y, spec)
    windows = _windows(args)
    lags = _lags(args.lags)
    if args.fft:
        parts = [cross_correlation_fft(x, y, w, lags=lags, min_count=args.min_count) for w in windows]
        res = XcorrResult(
            tuple(windows),
            lags,
            np.vstack([p.values for p in parts]),
            np.vstack([p.counts for p in parts]),
            args.min_count,
        )
    else:
        res = cross_correlation(x, y, windows, lags, args.min_count)
    write_table(args.output, XCORR_COLUMNS, res.rows(), _meta(args))


def cmd_collapse(args) -> None:
    meta, header, data = read_table(args.input)
    missing = [c for c in XCORR_COLUMNS if c not in header]
    if missing:
        raise UsageError(f"{args.input}: missing column(s) {', '.join(missing)}")
    col = {name: data[:, header.index(name)] for name in XCORR_COLUMNS}
    ns = np.unique(col["n"]).astype(int)
    lags = np.unique(col["tau"]).astype(int)
    values = np.full((ns.size, lags.size), np.nan)
    counts = np.zeros((ns.size, lags.size), dtype=int)
    i = np.searchsorted(ns, col["n"].astype(int))
    j = np.searchsorted(lags, col["tau"].astype(int))
    values[i, j] = col["value"]
    counts[i, j] = col["count"].astype(int)
    res = XcorrResult(tuple(WindowSpec(int(n)) for n in ns), lags, values, counts, min_count=0)
    out = collapse_transform(res, args.H1, args.H2)
    write_table(args.output, XCORR_COLUMNS, out.rows(), _meta(args, source=meta))


def cmd_hurst(args) -> None:
    spec = _ingest(args)
    x = load_series(args.input, spec)
    y = load_series(args.cross, spec) if args.cross else x
    windows = _windows(args) or default_windows(min(len(x), len(y)))
    fit, curve = cross_exponent(x, y, windows, args.min_count)
    notes = [
        f"exponent: {fit.exponent:.17g}",
        f"slope: {fit.slope:.17g}",
        f"intercept: {fit.intercept:.17g}",
        f"r_squared: {fit.r_squared:.17g}",
        f"n_range: {fit.n_range[0]} {fit.n_range[1]}",
    ]
    write_table(args.output, ("n", "value"), curve, _meta(args), notes)


def cmd_analytic(args) -> None:
    taus = _float_list(args.tau_hat)
    thetas = _float_list(args.thetas)
    rows = []
    for theta in thetas:
        for tau in taus:
            if tau < 0:
                cid = 0
                value = None
            else:
                cid = case_id(tau, theta)
                value = case_formula(cid, tau, theta, args.H1, args.H2, n=args.window)
            row = [tau, theta, args.H1, args.H2, cid]
            quad = None
            if args.oracle or value is None:
                s = args.H1 + args.H2
                quad = args.window**s * coefficient_D(s) * master_integral_quadrature(tau, theta, args.H1, args.H2)
            row.append(quad if value is None else value)
            if args.oracle:
                row.append(quad)
            rows.append(row)
    cols = ["tau_hat", "theta", "H1", "H2", "case_id", "value"]
    if args.oracle:
        cols.append("quadrature")
    notes = ["case_id 0: negative lag, value from quadrature"] if any(r[4] == 0 for r in rows) else []
    write_table(args.output, cols, rows, _meta(args), notes)


def cmd_fbm_gen(args) -> None:
    spec = FbmPairSpec(args.H1, args.H2, args.length, args.seed)
    pair = generate_pair(spec)
    scale = calibrate_scale(spec.H1, spec.H2, spec.length)
    meta = _meta(
        args,
        spec={"H1": spec.H1, "H2": spec.H2, "length": spec.length, "seed": spec.seed, "method": METHOD},
        calibration_scale=scale,
    )
    write_table(args.output, ("x", "y"), zip(pair.x.values, pair.y.values), meta)


def cmd_leverage(args) -> None:
    prices = load_series(args.input, _ingest(args))
    w = WindowSpec(args.n, args.theta)
    curve = leverage_curve(prices, args.horizon, args.vol_window, w, _lags(args.lags), args.min_count)
    write_table(
        args.output,
        ("tau", "L", "numerator", "count"),
        curve.rows(),
        _meta(args, denominator=curve.denominator),
    )


def cmd_genomic_prep(args) -> None:
    s = load_series(args.input, _ingest(args))
    out = mean_subtract_integrate(s)
    write_table(args.output, ("value",), ((v,) for v in out.values), _meta(args))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lrxcorr", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"lrxcorr {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("xcorr", help="detrended cross-correlation of two series")
    p.add_argument("x")
    p.add_argument("y")
    _add_ingest(p)
    _add_windows(p)
    p.add_argument("--lags", default="0", help="lag range lo:hi[:step] in samples")
    p.add_argument("--min-count", type=int, default=DEFAULT_MIN_COUNT)
    p.add_argument("--fft", action="store_true", help="use the FFT path")
    _add_output(p)
    p.set_defaults(func=cmd_xcorr)

    p = sub.add_parser("hurst", help="scaling exponent from C_xx(0; n) (or C_xy with --cross)")
    p.add_argument("input")
    p.add_argument("--cross", help="second series for a cross fit")
    _add_ingest(p)
    _add_windows(p, required=False)
    p.add_argument("--min-count", type=int, default=DEFAULT_MIN_COUNT)
    _add_output(p)
    p.set_defaults(func=cmd_hurst)

    p = sub.add_parser("analytic", help="closed-form asymptotics on a (tau_hat, theta) grid")
    p.add_argument("--H1", type=float, required=True)
    p.add_argument("--H2", type=float, required=True)
    p.add_argument("--tau-hat", default="0", help="comma-separated scaled lags")
    p.add_argument("--thetas", default="0", help="comma-separated window anchors")
    p.add_argument("--window", type=float, default=1.0, help="window size n (default 1)")
    p.add_argument("--oracle", action="store_true", help="add a quadrature column")
    _add_output(p)
    p.set_defaults(func=cmd_analytic)

    p = sub.add_parser("fbm-gen", help="pair of fBm paths driven by shared noise")
    p.add_argument("--H1", type=float, required=True)
    p.add_argument("--H2", type=float, required=True)
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    _add_output(p)
    p.set_defaults(func=cmd_fbm_gen)

    p = sub.add_parser("leverage", help="leverage function of a price series")
    p.add_argument("input")
    _add_ingest(p)
    p.add_argument("--horizon", type=int, default=1, help="return horizon t' in samples")
    p.add_argument("--vol-window", type=int, required=True, help="volatility window T in samples")
    p.add_argument("--n", type=int, required=True, help="detrending window")
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--lags", required=True, help="lag range lo:hi[:step]")
    p.add_argument("--min-count", type=int, default=DEFAULT_MIN_COUNT)
    _add_output(p)
    p.set_defaults(func=cmd_leverage)

    p = sub.add_parser("collapse", help="rescale an xcorr table by n^-(H1+H2)")
    p.add_argument("input")
    p.add_argument("--H1", type=float, required=True)
    p.add_argument("--H2", type=float, required=True)
    _add_output(p)
    p.set_defaults(func=cmd_collapse)

    p = sub.add_parser("genomic-prep", help="subtract the mean and integrate one column")
    p.add_argument("input")
    _add_ingest(p)
    _add_output(p)
    p.set_defaults(func=cmd_genomic_prep)
    return parser


def _origin(exc: BaseException) -> str:
    """Name of the innermost package module the exception passed through."""
    pkg = Path(__file__).parent
    name = "cli"
    for frame in traceback.extract_tb(exc.__traceback__):
        path = Path(frame.filename)
        if path.parent == pkg:
            name = path.stem
    return name


# options whose values may start with '-' (negative lags), which argparse
# would otherwise take for a flag
_SIGNED_OPTIONS = ("--lags", "--tau-hat")


def _join_signed(argv: list[str]) -> list[str]:
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in _SIGNED_OPTIONS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _join_signed(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # usage errors, --help and --version
        return exc.code if isinstance(exc.code, int) else 1
    try:
        args.func(args)
    except (UsageError, ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"lrxcorr {args.command}: {_origin(exc)}: {msg}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001
        print(f"lrxcorr {args.command}: internal error in {_origin(exc)}: {exc!r}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
