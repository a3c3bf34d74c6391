"""
Command-line entry point.

    polymeinardus expand --family constant --n 4
    polymeinardus asymp --family power:s0=2 --z -0.2 --n 2000
    polymeinardus phase-map --family constant --resolution 400x400 --output constant.ppm

Results go to stdout (or --output); logs go to stderr.
"""

import argparse
import contextlib
import logging
import sys
from typing import IO, Iterator, Optional, Sequence

from pydantic import ValidationError

from app.config import logger
from app.errors import ConfigError, PolyMeinardusError
from app.schemas import RunConfig, Window
from app.services import asymptotics, export, phases, series, weights
from app.utils.helpers import parse_complex

DEFAULT_RESOLUTION = "400x400"


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--family", required=True, help="weight family, e.g. power:s0=2.0")
    parser.add_argument("--k-max", type=int, dest="k_max")
    parser.add_argument("--tie-tol", type=float, dest="tie_tol")
    parser.add_argument("--osc-tol", type=float, dest="osc_tol")
    parser.add_argument("--threads", type=int)
    parser.add_argument("--format", dest="output_format", choices=("csv", "json", "ppm"))
    parser.add_argument("--output", "-o", help="output path (default: stdout)")
    parser.add_argument("--verbose", "-v", action="store_true", help="log progress to stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polymeinardus",
        description="Weighted partition polynomials: exact values, asymptotics and phase diagrams.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="coefficients of Q_0..Q_n as CSV")
    _add_common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", choices=("auto", "product", "recurrence"), default="auto")

    p = sub.add_parser("eval", help="Q_n(z) as JSON lines")
    _add_common(p)
    p.add_argument("--z", required=True)
    p.add_argument("--n", type=int, nargs="+", required=True)
    p.add_argument("--method", choices=("recurrence", "contour"), default="recurrence")

    p = sub.add_parser("asymp", help="leading-order estimate of Q_n(z)")
    _add_common(p)
    p.add_argument("--z", required=True)
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("compare", help="exact against estimated Q_n(z) as CSV")
    _add_common(p)
    p.add_argument("--z", required=True)
    p.add_argument("--n", type=int, nargs="+", required=True)

    p = sub.add_parser("classify", help="phase of a single point")
    _add_common(p)
    p.add_argument("--z", required=True)

    p = sub.add_parser("phase-map", help="rasterized phase diagram (PPM, optional CSV)")
    _add_common(p)
    p.add_argument("--window", default="-0.99,0.99,-0.99,0.99", help="x_min,x_max,y_min,y_max")
    p.add_argument("--resolution", default=DEFAULT_RESOLUTION, help="WIDTHxHEIGHT")
    p.add_argument("--csv", dest="csv_path", help="also write x,y,h,k,boundary rows here")

    p = sub.add_parser("dirichlet", help="Dirichlet data D_{h,k}(0), A_{h,k}, b, c")
    _add_common(p)
    p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("meinardus", help="classical z = 1 asymptotic")
    _add_common(p)
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("crossover", help="negative-axis crossover x* between (1,1) and (1,2)")
    _add_common(p)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)

    return parser


def _run_config(args: argparse.Namespace) -> RunConfig:
    fields = {
        key: getattr(args, key)
        for key in ("family", "k_max", "tie_tol", "osc_tol", "threads", "output_format", "output")
        if getattr(args, key, None) is not None
    }
    try:
        return RunConfig(**fields)
    except ValidationError as e:
        raise ConfigError(_validation_message(e)) from e


def _validation_message(error: ValidationError) -> str:
    first = error.errors()[0]
    location = ".".join(str(part) for part in first.get("loc", ()))
    return f"{location}: {first['msg']}" if location else first["msg"]


def _parse_resolution(text: str) -> tuple[int, int]:
    width, sep, height = text.lower().partition("x")
    try:
        if not sep:
            raise ValueError
        return int(width), int(height)
    except ValueError as e:
        raise ConfigError(f"resolution must look like 400x400, got {text!r}") from e


@contextlib.contextmanager
def _text_output(path: Optional[str]) -> Iterator[IO[str]]:
    if path is None or path == "-":
        yield sys.stdout
        return
    with open(path, "w", newline="") as stream:
        yield stream


def cmd_expand(config: RunConfig, args: argparse.Namespace) -> None:
    seq = config.sequence()
    method = args.method
    if method == "auto":
        method = "product" if seq.integer_weights() else "recurrence"
    if method == "product":
        polys = series.expand_product(seq, args.n)
    else:
        polys = series.expand_exp_recurrence(seq, args.n)
    with _text_output(config.output) as out:
        export.write_expansion_csv(polys, out)


def cmd_eval(config: RunConfig, args: argparse.Namespace) -> None:
    seq = config.sequence()
    z = parse_complex(args.z)
    if args.method == "contour":
        values = {n: series.contour_extract(seq, z, n) for n in args.n}
    else:
        table = series.eval_exact_sequence(seq, z, max(args.n))
        values = {n: complex(table[n]) for n in args.n}
    with _text_output(config.output) as out:
        export.write_json_lines((export.eval_record(n, values[n]) for n in args.n), out)


def cmd_asymp(config: RunConfig, args: argparse.Namespace) -> None:
    seq = config.sequence()
    est = asymptotics.estimate(
        seq, parse_complex(args.z), args.n, config.k_max, config.tie_tol, config.osc_tol
    )
    with _text_output(config.output) as out:
        export.write_json_lines([export.asymp_record(seq, est)], out)


def cmd_compare(config: RunConfig, args: argparse.Namespace) -> None:
    seq = config.sequence()
    rows = asymptotics.compare(
        seq,
        parse_complex(args.z),
        args.n,
        config.k_max,
        config.tie_tol,
        config.osc_tol,
        config.threads,
    )
    with _text_output(config.output) as out:
        export.write_compare_csv(rows, out)


def cmd_classify(config: RunConfig, args: argparse.Namespace) -> None:
    seq = config.sequence()
    phase = phases.classify(seq, parse_complex(args.z), config.k_max, config.tie_tol)
    with _text_output(config.output) as out:
        export.write_json_lines([export.phase_record(seq, phase)], out)


def cmd_phase_map(config: RunConfig, args: argparse.Namespace) -> None:
    seq = config.sequence()
    try:
        window = Window.parse(args.window)
    except (ValueError, ValidationError) as e:
        raise ConfigError(f"invalid window {args.window!r}: {e}") from e
    resolution = _parse_resolution(args.resolution)
    output_format = config.output_format or "ppm"
    if output_format == "json":
        raise ConfigError("phase-map writes ppm or csv")
    if output_format == "ppm" and not config.output:
        raise ConfigError("phase-map needs --output for the PPM image")

    phase_map = phases.raster(
        seq, window, resolution, config.k_max, config.tie_tol, config.threads
    )
    if output_format == "ppm":
        export.write_ppm(phase_map, config.output)
    else:
        with _text_output(config.output) as out:
            export.write_phase_csv(phase_map, out)
    if args.csv_path:
        with _text_output(args.csv_path) as out:
            export.write_phase_csv(phase_map, out)

    for label, area in phases.phase_areas(phase_map).items():
        logger.info("Phase area", {"label": str(label), "fraction": area})


def cmd_dirichlet(config: RunConfig, args: argparse.Namespace) -> None:
    seq = config.sequence()
    data = weights.fourier_coeffs(seq, args.k)
    with _text_output(config.output) as out:
        export.write_json_lines([export.dirichlet_record(seq, data)], out)


def cmd_meinardus(config: RunConfig, args: argparse.Namespace) -> None:
    seq = config.sequence()
    result = asymptotics.meinardus_r(seq, args.n)
    with _text_output(config.output) as out:
        export.write_json_lines([export.meinardus_record(seq, result)], out)


def cmd_crossover(config: RunConfig, args: argparse.Namespace) -> None:
    seq = config.sequence()
    x_star = phases.crossover(seq)
    with _text_output(config.output) as out:
        export.write_json_lines([export.crossover_record(seq, x_star)], out)


def cmd_serve(args: argparse.Namespace) -> None:
    import uvicorn

    logger.info(f"Starting server on {args.host}:{args.port}")
    uvicorn.run("app.main:app", host=args.host, port=args.port)


COMMANDS = {
    "expand": cmd_expand,
    "eval": cmd_eval,
    "asymp": cmd_asymp,
    "compare": cmd_compare,
    "classify": cmd_classify,
    "phase-map": cmd_phase_map,
    "dirichlet": cmd_dirichlet,
    "meinardus": cmd_meinardus,
    "crossover": cmd_crossover,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        cmd_serve(args)
        return 0
    if args.verbose:
        logger.set_level(logging.INFO)

    try:
        config = _run_config(args)
        COMMANDS[args.command](config, args)
    except PolyMeinardusError as e:
        logger.debug("Command failed", {"command": args.command, "error": type(e).__name__})
        print(f"polymeinardus {args.command}: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"polymeinardus {args.command}: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
