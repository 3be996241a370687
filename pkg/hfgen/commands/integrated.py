"""
`hfgen integrated`: (E1 − E2)⟨Ψ2|Ψ1⟩ = ⟨Ψ2|(H1 − H2)Ψ1⟩ + Δ(λ1, λ2)
"""
import argparse

from hfgen.commands.common import (
    add_common_arguments,
    add_radial_arguments,
    common_fields,
    execute,
    parse_modes,
)
from hfgen.models.experiment import ExperimentModel, Form


def register(subparsers):
    parser = subparsers.add_parser("integrated", help="integrated form between two parameter values")
    parser.add_argument("--model", choices=[m.value for m in ExperimentModel], required=True)
    parser.add_argument("--lambda1", type=float, help="first parameter value")
    parser.add_argument("--lambda2", type=float, help="second parameter value")
    parser.add_argument("--modes", default="0", help='mode list, e.g. "0,1"')
    parser.add_argument("--analytic", action="store_true", help="closed-form rotor route")
    add_radial_arguments(parser)
    add_common_arguments(parser, "integrated.csv")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    fields = common_fields(args)
    fields.update(
        model=args.model,
        parameter=args.lambda1,
        parameter2=args.lambda2,
        modes=parse_modes(args.modes),
        forms=[Form.INTEGRATED],
        analytic=args.analytic or None,
    )
    return execute(fields, args.config)
