"""
Experiment task handlers: parameter sweeps, convergence studies, CSV output
"""
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional

from hfgen.config import get_settings
from hfgen.core.csv_writer import write_report_csv
from hfgen.core.eigensolver import solve_modes
from hfgen.core.grid import default_radial_grid
from hfgen.core.hf_engine import (
    anomaly_matrix_route,
    check_generalized_hf_modes,
    integrated_form,
    off_diagonal_form,
)
from hfgen.core.operators import (
    HermitianOperatorFamily,
    ModelId,
    build_radial,
    build_rotor_gauge_a,
    build_rotor_gauge_b,
)
from hfgen.models.experiment import ExperimentConfig, ExperimentModel, Form
from hfgen.models.radial import radial_anomaly_exact, radial_energy_derivative_exact, radial_energy_exact
from hfgen.models.report import ConvergenceRow, HFReport
from hfgen.models.rotor import RotorModel, rotor_anomaly_exact, rotor_energy

logger = logging.getLogger(__name__)


@dataclass
class FormResult:
    form: Form
    reports: list
    path: Optional[Path] = None
    passed: Optional[bool] = None
    worst: float = 0.0


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    forms: List[FormResult] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> Optional[bool]:
        verdicts = [f.passed for f in self.forms if f.passed is not None]
        if not verdicts:
            return None
        return all(verdicts)


def build_family(config: ExperimentConfig, lam: float) -> HermitianOperatorFamily:
    n_points = config.resolved_grid_size
    if config.model is ExperimentModel.ROTOR_A:
        return build_rotor_gauge_a(n_points, lam, config.hbar, config.mass)
    if config.model is ExperimentModel.ROTOR_B:
        return build_rotor_gauge_b(n_points, lam, config.hbar, config.mass)
    grid = default_radial_grid(lam, n_points=n_points, r_min=config.r_min, r_max=config.r_max)
    return build_radial(grid, lam, config.hbar, config.mass)


def exact_derivative_and_anomaly(model_id: ModelId, lam: float, n: int):
    """Analytic (dE/dλ, Δ) in units ħ = m = 1."""
    if model_id is ModelId.RADIAL_LOG:
        return radial_energy_derivative_exact(lam), radial_anomaly_exact(lam)
    anomaly = rotor_anomaly_exact(n, lam) if model_id is ModelId.ROTOR_GAUGE_B else 0.0
    return lam - n, anomaly


def exact_energy(model_id: ModelId, lam: float, n: int) -> float:
    if model_id is ModelId.RADIAL_LOG:
        return radial_energy_exact(lam)
    return rotor_energy(n, lam)


def differential_tolerance(config: ExperimentConfig) -> float:
    if config.tolerance is not None:
        return config.tolerance
    settings = get_settings()
    if config.model is ExperimentModel.RADIAL:
        return settings.PASS_TOL_RADIAL
    return settings.PASS_TOL_ROTOR


def report_passes(report: HFReport, tolerance: float) -> bool:
    """Generalized residual plus agreement of dE/dλ and Δ with the closed forms."""
    model_id = ModelId(report.model)
    exact_slope, exact_anomaly = exact_derivative_and_anomaly(model_id, report.lam, report.n)
    return (
        report.passes(tolerance)
        and abs(report.dE_dlambda - exact_slope) <= tolerance * max(1.0, abs(exact_slope))
        and abs(report.delta_matrix_route - exact_anomaly) <= tolerance * max(1.0, abs(exact_anomaly))
    )


def _map_points(config: ExperimentConfig, job: Callable[[float], list]) -> list:
    points = config.points
    if config.workers > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            chunks = list(pool.map(job, points))
    else:
        chunks = [job(lam) for lam in points]
    return [report for chunk in chunks for report in chunk]


def run_differential(config: ExperimentConfig) -> FormResult:
    def job(lam: float) -> list:
        family = build_family(config, lam)
        return check_generalized_hf_modes(family, lam, config.modes, config.fd_step)

    reports = sorted(_map_points(config, job), key=lambda r: (r.lam, r.n))
    tolerance = differential_tolerance(config)
    passed = all(report_passes(r, tolerance) for r in reports)
    worst = max((r.residual_generalized for r in reports), default=0.0)
    return FormResult(Form.DIFFERENTIAL, reports, passed=passed, worst=worst)


def _analytic_model(config: ExperimentConfig) -> RotorModel:
    return RotorModel(config.model.gauge)


def run_integrated(config: ExperimentConfig) -> FormResult:
    def job(lam: float) -> list:
        target = _analytic_model(config) if config.analytic else build_family(config, lam)
        return [integrated_form(target, lam, config.parameter2, n) for n in config.modes]

    reports = sorted(_map_points(config, job), key=lambda r: (r.lambda1, r.n))
    settings = get_settings()
    if config.tolerance is not None:
        tolerance = config.tolerance
    elif config.analytic:
        tolerance = settings.PASS_TOL_INTEGRATED
    else:
        tolerance = differential_tolerance(config)
    passed = all(r.passes(tolerance) for r in reports)
    worst = max((r.residual for r in reports), default=0.0)
    return FormResult(Form.INTEGRATED, reports, passed=passed, worst=worst)


def run_offdiag(config: ExperimentConfig) -> FormResult:
    def job(lam: float) -> list:
        target = _analytic_model(config) if config.analytic else build_family(config, lam)
        return [off_diagonal_form(target, lam, n, m, config.fd_step) for n, m in config.pairs]

    reports = sorted(_map_points(config, job), key=lambda r: (r.lam, r.n, r.m))
    settings = get_settings()
    if config.tolerance is not None:
        tolerance = config.tolerance
    elif config.analytic:
        tolerance = settings.PASS_TOL_OFFDIAG
    else:
        tolerance = differential_tolerance(config)
    passed = all(r.passes(tolerance) for r in reports)
    if config.analytic and config.model is ExperimentModel.ROTOR_B:
        passed = passed and all(
            abs(r.delta_nm - (r.lam - 0.5 * (r.n + r.m))) <= tolerance for r in reports
        )
    worst = max((r.residual for r in reports), default=0.0)
    return FormResult(Form.OFFDIAG, reports, passed=passed, worst=worst)


RUNNERS: Dict[Form, Callable[[ExperimentConfig], FormResult]] = {
    Form.DIFFERENTIAL: run_differential,
    Form.INTEGRATED: run_integrated,
    Form.OFFDIAG: run_offdiag,
}


def output_path_for(config: ExperimentConfig, form: Form) -> Path:
    """First requested form writes to output_path, the others get a form suffix."""
    path = Path(config.output_path)
    if form is config.forms[0]:
        return path
    return path.with_name(f"{path.stem}_{form.value}{path.suffix}")


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run every requested form, write one CSV per form."""
    start = time.time()
    result = ExperimentResult(config)
    for form in config.forms:
        logger.info("running %s form for %s at %d point(s)", form.value, config.model.value, len(config.points))
        outcome = RUNNERS[form](config)
        outcome.reports = [r.scaled(config.units) for r in outcome.reports]
        outcome.path = write_report_csv(output_path_for(config, form), form.value, outcome.reports)
        result.forms.append(outcome)
    result.elapsed = time.time() - start
    return result


def _order(previous: Optional[float], current: float) -> Optional[float]:
    if previous is None or previous <= 0.0 or current <= 0.0:
        return None
    return math.log2(previous / current)


def run_convergence(
    config: ExperimentConfig, base_grid: Optional[int] = None, levels: Optional[int] = None
) -> List[ConvergenceRow]:
    """
    Grid-doubling study: eigenvalue and matrix-route Δ errors against the
    closed forms, with the observed order log2(e_{k-1}/e_k) per level.
    """
    base_grid = base_grid or config.grid_size or get_settings().CONVERGENCE_BASE_GRID
    levels = levels or config.levels
    model_id = config.model.model_id
    rows: List[ConvergenceRow] = []
    for lam in config.points:
        previous: Dict[int, tuple] = {}
        for level in range(levels):
            n_points = base_grid * 2 ** level
            if config.model is ExperimentModel.RADIAL:
                grid = default_radial_grid(lam, n_points=n_points, r_min=config.r_min, r_max=config.r_max)
                family = build_radial(grid, lam)
                h = float(grid.log_points[1] - grid.log_points[0])
            else:
                family = build_family(config.model_copy(update={"grid_size": n_points}), lam)
                h = family.grid.step
            pairs = solve_modes(family, lam, config.modes)
            for n in config.modes:
                energy_error = abs(pairs[n].energy - exact_energy(model_id, lam, n))
                _, exact_anomaly = exact_derivative_and_anomaly(model_id, lam, n)
                delta_error = abs(anomaly_matrix_route(family, lam, n, pair=pairs[n]) - exact_anomaly)
                last = previous.get(n, (None, None))
                rows.append(
                    ConvergenceRow(
                        model=model_id.value,
                        lam=lam,
                        n=n,
                        level=level,
                        grid_size=n_points,
                        h=h,
                        energy_error=energy_error,
                        energy_order=_order(last[0], energy_error),
                        delta_error=delta_error,
                        delta_order=_order(last[1], delta_error),
                    )
                )
                previous[n] = (energy_error, delta_error)
                logger.debug("level %d N=%d n=%d: dE=%.3e dDelta=%.3e", level, n_points, n, energy_error, delta_error)
    rows.sort(key=lambda r: (r.lam, r.n, r.level))
    return rows


def run_convergence_study(config: ExperimentConfig, base_grid: Optional[int] = None) -> ExperimentResult:
    start = time.time()
    rows = [r.scaled(config.units) for r in run_convergence(config, base_grid)]
    path = write_report_csv(Path(config.output_path), "convergence", rows)
    result = ExperimentResult(config, [FormResult(Form.DIFFERENTIAL, rows, path=path)])
    result.elapsed = time.time() - start
    return result


def summarize(result: ExperimentResult) -> List[str]:
    """One status line per form."""
    lines = []
    for outcome in result.forms:
        if outcome.passed is None:
            lines.append(f"📄 {outcome.form.value}: {len(outcome.reports)} rows -> {outcome.path}")
            continue
        mark = "✅ PASS" if outcome.passed else "❌ FAIL"
        lines.append(
            f"{mark} {result.config.model.value} {outcome.form.value}: "
            f"{len(outcome.reports)} rows, worst residual {outcome.worst:.3e} -> {outcome.path}"
        )
    return lines
