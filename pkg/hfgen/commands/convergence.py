"""
`hfgen convergence`: grid-doubling study of eigenvalue and Δ errors
"""
import argparse
import logging

from hfgen.commands.common import (
    add_common_arguments,
    add_radial_arguments,
    build_config,
    common_fields,
    parse_modes,
    report,
)
from hfgen.models.experiment import ExperimentModel
from hfgen.tasks.experiment_tasks import run_convergence_study

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser("convergence", help="observed order under grid doubling")
    parser.add_argument("--model", choices=[m.value for m in ExperimentModel], required=True)
    parser.add_argument("--lambda", dest="lam", type=float, help="parameter value")
    parser.add_argument("--modes", default="0", help='mode list, e.g. "0,1"')
    parser.add_argument("--levels", type=int, help="number of doubling levels (>= 3)")
    add_radial_arguments(parser)
    add_common_arguments(parser, "convergence.csv")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    fields = common_fields(args)
    fields.update(
        model=args.model,
        parameter=args.lam,
        modes=parse_modes(args.modes),
        levels=args.levels,
    )
    config = build_config(fields, args.config)
    logger.info("convergence config: %s", config.model_dump_json())
    return report(run_convergence_study(config))
