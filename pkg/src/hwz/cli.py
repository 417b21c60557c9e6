"""``hwz`` command line driver.

Exit codes: 0 success, 1 usage error, 2 I/O or format error, 3 verification
failure.
"""

import argparse
import csv
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import pipeline
from .errors import FormatError, HwzError, IoFailure
from .imgio import read_pgm, write_pgm
from .metrics import energy_retained, fmt_value, mse, psnr
from .ratecontrol import solve_for_cr, solve_for_psnr
from .thresholding import ThresholdPolicy
from .transform import TransformSpec, max_levels

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_VERIFY = 0, 1, 2, 3

CSV_COLUMNS = ["epsilon", "method", "cr", "mse", "psnr_db", "energy_retained_pct", "nnz"]


class UsageError(HwzError):
    pass


def thread_count():
    """Worker cap from ``HWZ_THREADS``; 0 or unset means one per CPU."""
    raw = os.environ.get("HWZ_THREADS", "").strip()
    try:
        n = int(raw) if raw else 0
    except ValueError:
        raise UsageError(f"HWZ_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise UsageError("HWZ_THREADS must be >= 0")
    return n or (os.cpu_count() or 1)


def make_spec(mode, levels, shape):
    if mode == "pyramid":
        padded = tuple(1 << (int(n) - 1).bit_length() for n in shape)
        return TransformSpec("pyramid", levels if levels is not None else max_levels(padded))
    return TransformSpec("standard")


def parse_eps(text):
    """``"15,20,25"`` or inclusive ``"lo:hi:step"`` -> sorted unique floats."""
    try:
        if ":" in text:
            lo, hi, step = (float(p) for p in text.split(":"))
            if not step > 0 or hi < lo:
                raise UsageError(f"bad epsilon range {text!r}")
            n = int(math.floor((hi - lo) / step + 1e-9)) + 1
            values = [lo + i * step for i in range(n)]
        else:
            values = [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise UsageError(f"cannot parse epsilon list {text!r}") from None
    if not values or any(not v >= 0 for v in values):
        raise UsageError("epsilons must be nonnegative")
    return sorted(set(values))


# -- commands ----------------------------------------------------------------


def run_compress(inp, out, mode="standard", levels=None, method="hard", epsilon=0.0,
                 target_cr=None, target_psnr=None, tol=0.5):
    """Compress ``inp`` (PGM) to ``out`` (HWZ1).  Returns the epsilon and report."""
    image = read_pgm(inp)
    spec = make_spec(mode, levels, image.shape)
    prep = pipeline.prepare(image, spec)
    unreachable = False
    if target_cr is not None or target_psnr is not None:
        if target_cr is not None:
            eps, solved = solve_for_cr(image, spec, target_cr)
        else:
            eps, solved = solve_for_psnr(image, spec, target_psnr, tol)
        policy = ThresholdPolicy("hard", eps)
        unreachable = solved.target_unreachable
    else:
        policy = ThresholdPolicy(method, epsilon)
    data, eps, report = pipeline.compress_image(prep, policy=policy)
    report.target_unreachable = unreachable
    try:
        with open(out, "wb") as f:
            f.write(data)
    except OSError as exc:
        raise IoFailure(f"cannot write {out}: {exc}") from exc
    return eps, report


def run_decompress(inp, out, binary=True):
    try:
        with open(inp, "rb") as f:
            data = f.read()
    except OSError as exc:
        raise IoFailure(f"cannot read {inp}: {exc}") from exc
    image, header = pipeline.decompress_bytes(data)
    write_pgm(image, out, binary=binary)
    return header


def run_metrics(ref, test):
    a, b = read_pgm(ref), read_pgm(test)
    return {
        "mse": mse(a, b),
        "psnr_db": psnr(a, b),
        "energy_retained_pct": energy_retained(a, b) if np.any(a) else float("nan"),
    }


def run_verify(inp, mode=None, levels=None):
    """Lossless round trip through the byte format.

    Returns a list of ``(label, passed)``; every pyramid depth is checked
    unless ``mode``/``levels`` narrow it down.
    """
    image = read_pgm(inp)
    padded = tuple(1 << (int(n) - 1).bit_length() for n in image.shape)
    specs = []
    if mode in (None, "standard"):
        specs.append(TransformSpec("standard"))
    if mode in (None, "pyramid"):
        depths = [levels] if levels is not None else range(1, max_levels(padded) + 1)
        specs.extend(TransformSpec("pyramid", d) for d in depths)
    results = []
    for spec in specs:
        data, _, _ = pipeline.compress_image(image, spec)
        back, _ = pipeline.decompress_bytes(data)
        label = spec.mode if spec.mode == "standard" else f"pyramid/{spec.levels}"
        results.append((label, back.shape == image.shape and np.array_equal(back, image)))
    return results


def run_analyze(inp, eps_values, out, mode="standard", levels=None):
    """Sweep hard and soft thresholding over ``eps_values`` plus the universal point."""
    image = read_pgm(inp)
    prep = pipeline.prepare(image, make_spec(mode, levels, image.shape))
    jobs = [ThresholdPolicy(m, e) for m in ("hard", "soft") for e in eps_values]
    jobs.append(ThresholdPolicy("universal"))

    def one(policy):
        thresholded, eps, report = pipeline.evaluate(prep, policy=policy)
        return [eps, policy.method, report.cr, report.mse, report.psnr_db,
                report.energy_retained_pct, report.nnz_thresholded]

    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        rows = list(pool.map(one, jobs))
    rows.sort(key=lambda r: (r[1], r[0]))
    try:
        with open(out, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(CSV_COLUMNS)
            w.writerows([fmt_value(v) if isinstance(v, float) else v for v in row] for row in rows)
    except OSError as exc:
        raise IoFailure(f"cannot write {out}: {exc}") from exc
    return rows


# -- argument parsing --------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_mode(p):
    p.add_argument("--mode", choices=("standard", "pyramid"), default=None)
    p.add_argument("--levels", type=int, default=None,
                   help="pyramid depth (default: deepest possible)")


def build_parser():
    parser = _Parser(prog="hwz", description="Haar wavelet image compression")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compress", help="PGM -> .hwz")
    p.add_argument("input")
    p.add_argument("output")
    _add_mode(p)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--hard", type=float, metavar="E")
    g.add_argument("--soft", type=float, metavar="E")
    g.add_argument("--universal", action="store_true")
    g.add_argument("--target-cr", type=float, metavar="X")
    g.add_argument("--target-psnr", type=float, metavar="Y")
    p.add_argument("--tol", type=float, default=0.5, help="PSNR tolerance in dB (default 0.5)")

    p = sub.add_parser("decompress", help=".hwz -> PGM")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--ascii", action="store_true", help="write P2 instead of P5")

    p = sub.add_parser("metrics", help="compare two PGM images")
    p.add_argument("reference")
    p.add_argument("test")
    p.add_argument("--csv", action="store_true")

    p = sub.add_parser("verify", help="check the lossless round trip")
    p.add_argument("input")
    _add_mode(p)

    p = sub.add_parser("analyze", help="threshold sweep to CSV")
    p.add_argument("input")
    p.add_argument("--eps", required=True, help="comma list or lo:hi:step")
    p.add_argument("--out", required=True)
    _add_mode(p)
    return parser


def _dispatch(args):
    if args.command == "compress":
        if args.levels is not None and args.mode != "pyramid":
            raise UsageError("--levels only applies to --mode pyramid")
        method, eps = "hard", 0.0
        if args.soft is not None:
            method, eps = "soft", args.soft
        elif args.hard is not None:
            eps = args.hard
        elif args.universal:
            method = "universal"
        eps_used, report = run_compress(
            args.input, args.output, args.mode or "standard", args.levels, method, eps,
            args.target_cr, args.target_psnr, args.tol,
        )
        print(f"epsilon={fmt_value(eps_used)} cr={fmt_value(report.cr)} "
              f"psnr_db={fmt_value(report.psnr_db)} nnz={report.nnz_thresholded}"
              + (" target_unreachable" if report.target_unreachable else ""))
        return EXIT_OK

    if args.command == "decompress":
        run_decompress(args.input, args.output, binary=not args.ascii)
        return EXIT_OK

    if args.command == "metrics":
        values = run_metrics(args.reference, args.test)
        if args.csv:
            w = csv.writer(sys.stdout)
            w.writerow(list(values))
            w.writerow([fmt_value(v) for v in values.values()])
        else:
            for k, v in values.items():
                print(f"{k}: {fmt_value(v)}")
        return EXIT_OK

    if args.command == "verify":
        results = run_verify(args.input, args.mode, args.levels)
        for label, ok in results:
            print(f"{'PASS' if ok else 'FAIL'} {label}")
        return EXIT_OK if all(ok for _, ok in results) else EXIT_VERIFY

    if args.command == "analyze":
        rows = run_analyze(args.input, parse_eps(args.eps), args.out, args.mode or "standard", args.levels)
        print(f"wrote {len(rows)} rows to {args.out}")
        return EXIT_OK
    raise UsageError(f"unknown command {args.command}")


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except (FormatError, OSError) as exc:
        print(f"hwz: {exc}", file=sys.stderr)
        return EXIT_IO
    except HwzError as exc:
        print(f"hwz: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
