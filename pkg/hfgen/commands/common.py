"""
Shared flag parsing and config assembly for the subcommands
"""
import argparse
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from hfgen.config import get_settings
from hfgen.core.errors import ConfigError
from hfgen.models.experiment import ExperimentConfig, Form
from hfgen.tasks.experiment_tasks import ExperimentResult, run_experiment, summarize

logger = logging.getLogger(__name__)


def parse_modes(spec: str) -> List[int]:
    """"-2..2" -> [-2, -1, 0, 1, 2]; "0,1,3" -> [0, 1, 3]; both may be mixed."""
    modes: List[int] = []
    try:
        for part in spec.split(","):
            part = part.strip()
            if not part:
                continue
            if ".." in part:
                low, high = part.split("..", 1)
                low, high = int(low), int(high)
                if high < low:
                    raise ConfigError(f"empty mode range {part!r}")
                modes.extend(range(low, high + 1))
            else:
                modes.append(int(part))
    except ValueError:
        raise ConfigError(f"cannot parse mode list {spec!r}")
    if not modes:
        raise ConfigError("mode list is empty")
    return sorted(set(modes))


def parse_pairs(spec: str) -> List[Tuple[int, int]]:
    """"0:1,1:2" -> [(0, 1), (1, 2)]."""
    pairs = []
    try:
        for part in spec.split(","):
            part = part.strip()
            if not part:
                continue
            n, m = part.split(":")
            pairs.append((int(n), int(m)))
    except ValueError:
        raise ConfigError(f"cannot parse pair list {spec!r}; expected n:m,n:m")
    if not pairs:
        raise ConfigError("pair list is empty")
    return pairs


def parse_forms(spec: str) -> List[Form]:
    try:
        return [Form(part.strip()) for part in spec.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"unknown form in {spec!r}; expected differential, integrated, offdiag")


def add_common_arguments(parser: argparse.ArgumentParser, default_out: str):
    parser.add_argument("--sweep", nargs=3, metavar=("START", "STOP", "COUNT"), help="linear parameter sweep")
    parser.add_argument("--grid", type=int, help="grid size N")
    parser.add_argument("--fd-step", type=float, help="finite-difference step")
    parser.add_argument("--hbar", type=float, help="reduced Planck constant for output scaling")
    parser.add_argument("--mass", type=float, help="mass for output scaling")
    parser.add_argument("--workers", type=int, help="concurrent sweep points")
    parser.add_argument("--tolerance", type=float, help="override the PASS tolerance")
    parser.add_argument("--out", default=default_out, help="CSV output path")
    parser.add_argument("--config", help="JSON file whose keys override the flags")


def add_radial_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--r-min", type=float, help="innermost radius")
    parser.add_argument("--r-max", type=float, help="outermost radius")


def parse_sweep(values: Optional[List[str]]) -> Optional[Dict[str, Any]]:
    if values is None:
        return None
    try:
        return {"start": float(values[0]), "stop": float(values[1]), "count": int(values[2])}
    except ValueError:
        raise ConfigError(f"cannot parse sweep {' '.join(values)!r}")


def resolve_output(path: str) -> str:
    out = Path(path)
    if not out.is_absolute():
        out = Path(get_settings().OUTPUT_DIR) / out
    return str(out)


def common_fields(args: argparse.Namespace) -> Dict[str, Any]:
    return {
        "sweep": parse_sweep(args.sweep),
        "grid_size": args.grid,
        "fd_step": args.fd_step,
        "hbar": args.hbar,
        "mass": args.mass,
        "workers": args.workers,
        "tolerance": args.tolerance,
        "output_path": resolve_output(args.out),
        "r_min": getattr(args, "r_min", None),
        "r_max": getattr(args, "r_max", None),
    }


def load_config_file(path: Optional[str]) -> Dict[str, Any]:
    if not path:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read config file {path}: {e}")
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    return data


def build_config(fields: Dict[str, Any], config_path: Optional[str] = None) -> ExperimentConfig:
    """Flags without a value fall back to settings; the JSON file overrides flags."""
    merged = {key: value for key, value in fields.items() if value is not None}
    overrides = load_config_file(config_path)
    if "sweep" in overrides or "parameter" in overrides:
        merged.pop("sweep", None)
        merged.pop("parameter", None)
    merged.update(overrides)
    return ExperimentConfig.model_validate(merged)


def report(result: ExperimentResult) -> int:
    for line in summarize(result):
        print(line)
    print(f"⏱️  finished in {result.elapsed:.2f}s")
    return 0


def execute(fields: Dict[str, Any], config_path: Optional[str]) -> int:
    config = build_config(fields, config_path)
    logger.info("experiment config: %s", config.model_dump_json())
    return report(run_experiment(config))
