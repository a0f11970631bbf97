#!/usr/bin/env python3

"""
Command line front end: validate tree specs, query distances and Gromov
products, project points, write transfer certificates, run verification
suites and render the disk picture.

Exit codes: 0 success or pass, 1 verification failure or failing
certificate, 2 usage, parse or validation error.
"""

import argparse
import json
import sys
import jsonschema
from beartype.typing import List, Optional
from treetransfer.dyadic import DyadicParseError
from treetransfer.tree_model import (InvalidAddress, InvalidSpec, validate,
                                     load_tree_spec)
from treetransfer.geometry import OutOfRange, InvalidPoint
from treetransfer.boundary import (InvalidRay, load_ext_point, dist_bar,
                                   gromov_ext)
from treetransfer import transfer
from treetransfer.sampling import SampleConfig
from treetransfer.verify import NoBoundary, SUITES, run_suite
from treetransfer.render import RenderConfig, render_svg
from treetransfer.support.config import Config, ConfigurationError
from treetransfer.support.validators import (InvalidParameter,
                                             validate_dyadic, validate_int)
from treetransfer.shared_conf import setup_base_config, validate_config
from treetransfer.log import vprint

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

_INPUT_ERRORS = (DyadicParseError, InvalidAddress, InvalidSpec, OutOfRange,
                 InvalidPoint, InvalidRay, NoBoundary, InvalidParameter,
                 ConfigurationError, jsonschema.ValidationError,
                 json.JSONDecodeError, OSError, ValueError)


def _emit(text: str, output: Optional[str]):
    if output:
        with open(output, 'w', encoding='utf-8') as f:
            f.write(text + '\n')
        vprint(f"Wrote {output}")
    else:
        print(text)


def _print_value(value):
    print(str(value))
    print(value.to_decimal_string())


def cmd_validate(args, config) -> int:
    """
    Print the validation report of a spec; exit 1 when it has violations.
    """
    report = validate(load_tree_spec(args.spec))
    print(json.dumps(report.to_json_dict(), indent=4, sort_keys=True))
    return EXIT_OK if report.valid else EXIT_FAILURE


def cmd_dist(args, config) -> int:
    """
    Print the distance between two points of the compactification, exactly
    and as a decimal.
    """
    spec = load_tree_spec(args.spec)
    spec.require_valid()
    _print_value(dist_bar(spec, load_ext_point(args.a),
                          load_ext_point(args.b)))
    return EXIT_OK


def cmd_gromov(args, config) -> int:
    spec = load_tree_spec(args.spec)
    spec.require_valid()
    _print_value(gromov_ext(spec, load_ext_point(args.a),
                            load_ext_point(args.b)))
    return EXIT_OK


def cmd_project(args, config) -> int:
    """
    Print the projection of a point onto the ball of radius sigma, given
    directly or as sigma_N for a tolerance.
    """
    spec = load_tree_spec(args.spec)
    spec.require_valid()
    if args.sigma is not None:
        radius = validate_dyadic(args.sigma, 'sigma')
    else:
        radius = transfer.sigma(
            transfer.compute_N(transfer.parse_delta(args.delta)))
    image = transfer.project(spec, load_ext_point(args.a), radius)
    print(json.dumps(image.to_json_dict(), sort_keys=True))
    return EXIT_OK


def cmd_certify(args, config) -> int:
    """
    Write the transfer certificate; exit 0 iff its verdict is pass.
    """
    spec = load_tree_spec(args.spec)
    delta = transfer.parse_delta(args.delta)
    certificate = transfer.certify(spec, delta,
                                   SampleConfig.from_config(config),
                                   workers=config.workers)
    _emit(transfer.certificate_to_json(certificate, args.omit_samples),
          args.output)
    return EXIT_OK if certificate.passed else EXIT_FAILURE


def cmd_verify(args, config) -> int:
    """
    Run a suite and print its report; exit 0 iff it passes.
    """
    spec = load_tree_spec(args.spec)
    eps = validate_dyadic(args.eps, 'eps') if args.eps is not None else None
    delta = transfer.parse_delta(args.delta) if args.delta is not None \
        else None
    report = run_suite(args.suite, spec, SampleConfig.from_config(config),
                       workers=config.workers, eps=eps, delta=delta)
    _emit(report.to_json(), args.output)
    return EXIT_OK if report.passed else EXIT_FAILURE


def cmd_render(args, config) -> int:
    spec = load_tree_spec(args.spec)
    highlight = None
    if args.highlight:
        highlight = tuple(load_ext_point(point) for point in args.highlight)
    render_config = RenderConfig(max_depth=config.max_depth,
                                 size=validate_int(args.size, 'size'),
                                 highlight=highlight)
    _emit(render_svg(spec, render_config), args.output)
    return EXIT_OK


def build_parser(config: Config) -> argparse.ArgumentParser:
    """
    The argument parser; every command also accepts the configuration
    parameters (--seed, --count, ...).
    """
    common = argparse.ArgumentParser(add_help=False)
    setup_base_config(config, common)
    parser = argparse.ArgumentParser(
        prog='treetransfer',
        description="Exact geometry of compactified trees and their "
        "1-transfer certificates.")
    commands = parser.add_subparsers(dest='command', required=True)

    def command(name, function, help):
        sub = commands.add_parser(name, parents=[common], help=help)
        sub.set_defaults(function=function)
        return sub

    def spec_argument(sub):
        sub.add_argument('spec', help="Tree spec: JSON file or inline JSON")

    def pair_arguments(sub):
        spec_argument(sub)
        sub.add_argument('a', help="Point or ray: JSON file or inline JSON")
        sub.add_argument('b', help="Point or ray: JSON file or inline JSON")

    sub = command('validate', cmd_validate, "Check a tree spec")
    spec_argument(sub)
    pair_arguments(command('dist', cmd_dist, "Distance between two points"))
    pair_arguments(command('gromov', cmd_gromov,
                           "Gromov product of two points at x0"))
    sub = command('project', cmd_project,
                  "Project a point onto a ball around x0")
    spec_argument(sub)
    sub.add_argument('a', help="Point or ray: JSON file or inline JSON")
    radius = sub.add_mutually_exclusive_group(required=True)
    radius.add_argument('--sigma', help="Ball radius 'm/2^k' in [0, 1)")
    radius.add_argument('--delta', help="Tolerance; the radius is sigma_N")
    sub = command('certify', cmd_certify,
                  "Write a 1-transfer certificate for a tolerance")
    spec_argument(sub)
    sub.add_argument('--delta', required=True,
                     help="Tolerance in (0, 1], 'm/2^k' or 'p/q'")
    sub.add_argument('--output', help="Write the certificate here")
    sub.add_argument('--omit-samples', action='store_true',
                     help="Leave the sample list out of the certificate")
    sub = command('verify', cmd_verify, "Run a verification suite")
    sub.add_argument('suite', choices=SUITES)
    spec_argument(sub)
    sub.add_argument('--eps', help="Net mesh for the net suite")
    sub.add_argument('--delta', help="Tolerance for the transfer suite")
    sub.add_argument('--output', help="Write the report here")
    sub = command('render', cmd_render, "Draw the tree as SVG")
    spec_argument(sub)
    sub.add_argument('--size', default='800', help="Image size in pixels")
    sub.add_argument('--highlight', nargs=2, metavar=('A', 'B'),
                     help="Two points whose geodesics and branch point are "
                     "marked")
    sub.add_argument('--output', help="Write the SVG here")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run one command and return its exit code.
    """
    config = Config(name='treetransfer')
    parser = build_parser(config)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        validate_config(config, args)
        return args.function(args, config)
    except _INPUT_ERRORS as exc:
        print(f"treetransfer {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
