"""
Command-line front end.

    surfdecomp validate SPEC
    surfdecomp decompose SPEC [--trace] [--dot FILE]
    surfdecomp stability SPEC [--dot FILE]
    surfdecomp generate (--genus G | --example NAME | --random [--seed S])
    surfdecomp simulate [--k K] [--r0 R] [--grid N] ... [--out-census F] [--out-svg F]

SPEC may be ``-`` for stdin.  JSON goes to stdout, diagnostics to stderr.
Exit codes: 0 ok, 1 invalid spec, 2 parse or I/O error, 3 bad arguments.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import dasim, generators
from .model import InvalidSpecError, SpecParseError, parse_spec, serialize_spec, validate_spec
from .stability import build_prec_graph, prec_graph_dot, stability_verdict
from .topology import decompose, pairing_graph_dot

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_PARSE_IO = 2
EXIT_ARGS = 3

log = logging.getLogger("surfdecomp")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ARGS, f"{self.prog}: error: {message}\n")


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _load(path: str):
    if path == "-":
        data = sys.stdin.buffer.read()
    else:
        data = Path(path).read_bytes()
    return parse_spec(data)


def _write(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def cmd_validate(args) -> int:
    report = validate_spec(_load(args.spec))
    _emit(report.to_dict())
    return EXIT_OK if report.valid else EXIT_INVALID


def cmd_decompose(args) -> int:
    spec = _load(args.spec)
    dec = decompose(spec)
    if args.dot:
        _write(args.dot, pairing_graph_dot(spec))
    _emit(dec.to_dict(include_trace=args.trace))
    return EXIT_OK


def cmd_stability(args) -> int:
    spec = _load(args.spec)
    verdict = stability_verdict(spec)
    if args.dot:
        _write(args.dot, prec_graph_dot(build_prec_graph(spec)))
    _emit(verdict.to_dict())
    return EXIT_OK


def cmd_generate(args) -> int:
    if args.genus is not None:
        if args.genus < 2:
            raise UsageError(f"--genus {args.genus}: the sphere and the torus admit no such diffeomorphism")
        spec = generators.generate_for_genus(args.genus)
    elif args.example is not None:
        spec = generators.EXAMPLES[args.example]()
    else:
        try:
            cfg = generators.GeneratorConfig(
                seed=args.seed,
                max_basic_sets=args.max_basic_sets,
                max_bunches_per_set=args.max_bunches,
                max_degree=args.max_degree,
                max_extra_components=args.max_extra,
            )
            spec = generators.random_valid_spec(cfg)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    sys.stdout.write(serialize_spec(spec).decode("utf-8"))
    return EXIT_OK


def cmd_simulate(args) -> int:
    if args.grid < 64:
        raise UsageError("--grid must be >= 64")
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    if args.transient < 100:
        raise UsageError("--transient must be >= 100")
    if not 0 < args.newton_tol <= 1e-6:
        raise UsageError("--newton-tol must lie in (0, 1e-6]")
    if args.iterates < 0 or args.arc_steps < 1:
        raise UsageError("--iterates must be >= 0 and --arc-steps >= 1")
    if not 0 <= args.seed < 2**64:
        raise UsageError("--seed must be a 64-bit unsigned integer")
    try:
        params = dasim.DAParams(r0=args.r0, k=args.k, bump=args.bump)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not params.creates_source:
        log.warning("stable eigenvalue + k = %.4f <= 1: no source is created", params.stable_eigenvalue + params.k)

    records = dasim.find_fixed_points(params, args.grid, args.newton_tol)
    census = {
        "params": {"linear_part": [list(r) for r in params.linear_part], "r0": params.r0,
                   "k": params.k, "bump": params.bump, "grid": args.grid},
        **dasim.census_dict(records),
    }
    if args.out_census:
        _write(args.out_census, json.dumps(census, indent=2) + "\n")
    if args.out_svg:
        from .plotting import render_phase_portrait

        cloud = dasim.approximate_attractor(params, args.samples, args.transient, args.seed)
        segments = [
            dasim.unstable_segment(fp, params, args.arc_steps, args.iterates)
            for fp in records if fp.kind is dasim.FixedPointKind.SADDLE
        ]
        render_phase_portrait(cloud, records, segments, args.out_svg,
                              title=f"DA map, k = {params.k:.4f}, r0 = {params.r0:g}")
    _emit(census)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="surfdecomp", description=__doc__.split("\n\n")[0].strip())
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="check a spec against rules V1-V8")
    p.add_argument("spec")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("decompose", help="connected-sum decomposition and genus")
    p.add_argument("spec")
    p.add_argument("--trace", action="store_true", help="include the surgery steps")
    p.add_argument("--dot", metavar="FILE", help="write the pairing graph as Graphviz DOT")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("stability", help="Omega- and structural-stability verdict")
    p.add_argument("spec")
    p.add_argument("--dot", metavar="FILE", help="write the precedence graph as Graphviz DOT")
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("generate", help="emit a canonical spec")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--genus", type=int)
    mode.add_argument("--example", choices=sorted(generators.EXAMPLES))
    mode.add_argument("--random", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-basic-sets", type=int, default=6)
    p.add_argument("--max-bunches", type=int, default=4)
    p.add_argument("--max-degree", type=int, default=6)
    p.add_argument("--max-extra", type=int, default=3, help="extra components beyond a spanning tree")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("simulate", help="DA map fixed-point census and phase portrait")
    p.add_argument("--k", type=float, default=None, help="push strength (default: stable eigenvalue + k = 1.6)")
    p.add_argument("--r0", type=float, default=dasim.DEFAULT_R0)
    p.add_argument("--bump", choices=sorted(dasim.BUMPS), default="lorentzian")
    p.add_argument("--grid", type=int, default=64)
    p.add_argument("--newton-tol", type=float, default=1e-12)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--transient", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iterates", type=int, default=10, help="unstable-manifold images drawn in the portrait")
    p.add_argument("--arc-steps", type=int, default=200)
    p.add_argument("--out-census", metavar="FILE")
    p.add_argument("--out-svg", metavar="FILE")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except InvalidSpecError as exc:
        log.error("%s", exc)
        _emit(exc.report.to_dict())
        return EXIT_INVALID
    except SpecParseError as exc:
        log.error("parse error: %s", exc)
        return EXIT_PARSE_IO
    except OSError as exc:
        log.error("I/O error: %s", exc)
        return EXIT_PARSE_IO
    except UsageError as exc:
        log.error("%s", exc)
        return EXIT_ARGS


if __name__ == "__main__":
    sys.exit(main())
