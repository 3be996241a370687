"""
hfgen command-line entry point
"""
import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from hfgen import __version__
from hfgen.commands import SUBCOMMANDS
from hfgen.config import get_settings
from hfgen.core.errors import ConfigError, HFGenError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

# list-valued flags whose values may start with "-" ("-2..2", "-1:0")
LIST_OPTIONS = ("--modes", "--pairs")


def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    parser = argparse.ArgumentParser(
        prog="hfgen",
        description="Verify the generalized Hellmann-Feynman identity on the rotor and radial models.",
    )
    parser.add_argument("--version", action="version", version=f"{settings.APP_NAME} {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in SUBCOMMANDS:
        command.register(subparsers)
    return parser


def configure_logging(verbose: bool = False):
    settings = get_settings()
    level = logging.DEBUG if verbose or settings.DEBUG else settings.log_level_value
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def join_list_values(argv: List[str]) -> List[str]:
    """Rewrite `--modes -2..2` as `--modes=-2..2` so argparse keeps the value."""
    joined: List[str] = []
    tokens = iter(argv)
    for token in tokens:
        if token in LIST_OPTIONS:
            value = next(tokens, None)
            if value is None:
                joined.append(token)
            elif value.startswith("-") and not value.startswith("--"):
                joined.append(f"{token}={value}")
            else:
                joined.extend([token, value])
        else:
            joined.append(token)
    return joined


def _describe_validation(error: ValidationError) -> str:
    parts = []
    for item in error.errors():
        location = ".".join(str(p) for p in item.get("loc", ())) or "config"
        parts.append(f"{location}: {item.get('msg')}")
    return "; ".join(parts)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(join_list_values(argv))
    configure_logging(args.verbose)

    try:
        return args.handler(args)
    except ValidationError as e:
        print(f"❌ invalid configuration: {_describe_validation(e)}")
        return EXIT_CONFIG
    except ConfigError as e:
        print(f"❌ invalid configuration: {e}")
        return EXIT_CONFIG
    except HFGenError as e:
        logger.debug("numerical failure", exc_info=True)
        print(f"❌ numerical failure: {e}")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
