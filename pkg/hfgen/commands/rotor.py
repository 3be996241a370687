"""
`hfgen rotor`: flux-threaded rotor in either gauge
"""
import argparse

from hfgen.commands.common import add_common_arguments, common_fields, execute, parse_forms, parse_modes, parse_pairs


def register(subparsers):
    parser = subparsers.add_parser("rotor", help="flux-threaded planar rotor")
    parser.add_argument("--gauge", choices=["a", "b"], required=True, help="flux in the operator (a) or the domain (b)")
    parser.add_argument("--epsilon", type=float, help="flux parameter")
    parser.add_argument("--epsilon2", type=float, help="second flux value for the integrated form")
    parser.add_argument("--modes", default="0", help='mode list, e.g. "-2..2" or "0,1,3"')
    parser.add_argument("--pairs", help='off-diagonal pairs, e.g. "0:1,1:2"')
    parser.add_argument("--forms", default="differential", help="comma list of differential, integrated, offdiag")
    parser.add_argument("--analytic", action="store_true", help="closed-form route for integrated/offdiag")
    add_common_arguments(parser, "rotor.csv")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    fields = common_fields(args)
    fields.update(
        model=f"rotor-{args.gauge}",
        parameter=args.epsilon,
        parameter2=args.epsilon2,
        modes=parse_modes(args.modes),
        pairs=parse_pairs(args.pairs) if args.pairs else None,
        forms=parse_forms(args.forms),
        analytic=args.analytic or None,
    )
    return execute(fields, args.config)
