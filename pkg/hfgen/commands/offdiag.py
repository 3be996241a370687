"""
`hfgen offdiag`: (E_m − E_n)⟨Ψ_n|∂Ψ_m⟩ = ⟨Ψ_n|∂H Ψ_m⟩ + Δ_nm
"""
import argparse

from hfgen.commands.common import (
    add_common_arguments,
    add_radial_arguments,
    common_fields,
    execute,
    parse_pairs,
)
from hfgen.models.experiment import ExperimentModel, Form


def register(subparsers):
    parser = subparsers.add_parser("offdiag", help="off-diagonal form for mode pairs")
    parser.add_argument("--model", choices=[m.value for m in ExperimentModel], required=True)
    parser.add_argument("--lambda", dest="lam", type=float, help="parameter value")
    parser.add_argument("--pairs", default="0:1", help='mode pairs, e.g. "0:1,0:2,1:2"')
    parser.add_argument("--analytic", action="store_true", help="closed-form rotor route")
    add_radial_arguments(parser)
    add_common_arguments(parser, "offdiag.csv")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    fields = common_fields(args)
    fields.update(
        model=args.model,
        parameter=args.lam,
        pairs=parse_pairs(args.pairs),
        forms=[Form.OFFDIAG],
        analytic=args.analytic or None,
    )
    return execute(fields, args.config)
