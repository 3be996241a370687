"""
`hfgen radial`: 2D delta potential with the logarithmic boundary condition
"""
import argparse

from hfgen.commands.common import (
    add_common_arguments,
    add_radial_arguments,
    common_fields,
    execute,
    parse_forms,
    parse_pairs,
)


def register(subparsers):
    parser = subparsers.add_parser("radial", help="2D delta potential, s-wave")
    parser.add_argument("--kappa", type=float, help="bound-state scale kappa > 0")
    parser.add_argument("--kappa2", type=float, help="second kappa for the integrated form")
    parser.add_argument("--pairs", help='off-diagonal pairs, e.g. "0:1"')
    parser.add_argument("--forms", default="differential", help="comma list of differential, integrated, offdiag")
    add_radial_arguments(parser)
    add_common_arguments(parser, "radial.csv")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    fields = common_fields(args)
    fields.update(
        model="radial",
        parameter=args.kappa,
        parameter2=args.kappa2,
        modes=[0],
        pairs=parse_pairs(args.pairs) if args.pairs else None,
        forms=parse_forms(args.forms),
    )
    return execute(fields, args.config)
