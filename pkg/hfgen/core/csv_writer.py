"""
Deterministic CSV output for report rows.
"""
import csv
import logging
import math
from pathlib import Path
from typing import Iterable, List

from hfgen.config import get_settings
from hfgen.models.report import ConvergenceRow, HFReport, IntegratedReport, OffDiagReport

logger = logging.getLogger(__name__)

DIFFERENTIAL_COLUMNS = [
    "model", "lambda", "n", "E", "dE_dlambda", "expectation_formal", "delta_matrix",
    "delta_boundary", "residual_naive", "residual_generalized", "residual_relative", "grid_size",
    "fd_step",
]
INTEGRATED_COLUMNS = [
    "model", "route", "lambda1", "lambda2", "n", "lhs_re", "lhs_im", "matrix_term_re",
    "matrix_term_im", "delta_term_re", "delta_term_im", "residual", "residual_relative", "grid_size",
]
OFFDIAG_COLUMNS = [
    "model", "route", "lambda", "n", "m", "lhs_re", "lhs_im", "expectation_formal_re",
    "expectation_formal_im", "delta_nm_re", "delta_nm_im", "residual", "residual_relative", "grid_size",
    "fd_step",
]
CONVERGENCE_COLUMNS = [
    "model", "lambda", "n", "level", "grid_size", "h", "energy_error", "energy_order",
    "delta_error", "delta_order",
]

COLUMNS = {
    "differential": DIFFERENTIAL_COLUMNS,
    "integrated": INTEGRATED_COLUMNS,
    "offdiag": OFFDIAG_COLUMNS,
    "convergence": CONVERGENCE_COLUMNS,
}


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return format(value, ".17g")
    if hasattr(value, "value"):
        return str(value.value)
    return str(value)


def _split(prefix: str, value: complex) -> dict:
    value = complex(value)
    return {f"{prefix}_re": value.real, f"{prefix}_im": value.imag}


def report_row(report) -> dict:
    if isinstance(report, HFReport):
        return {
            "model": report.model,
            "lambda": report.lam,
            "n": report.n,
            "E": report.energy,
            "dE_dlambda": report.dE_dlambda,
            "expectation_formal": report.expectation_formal,
            "delta_matrix": report.delta_matrix_route,
            "delta_boundary": report.delta_boundary_route,
            "residual_naive": report.residual_naive,
            "residual_generalized": report.residual_generalized,
            "residual_relative": report.residual_relative,
            "grid_size": report.grid_size,
            "fd_step": report.fd_step,
        }
    if isinstance(report, IntegratedReport):
        row = {
            "model": report.model,
            "route": report.route,
            "lambda1": report.lambda1,
            "lambda2": report.lambda2,
            "n": report.n,
            "residual": report.residual,
            "residual_relative": report.residual_relative,
            "grid_size": report.grid_size,
        }
        row.update(_split("lhs", report.lhs))
        row.update(_split("matrix_term", report.matrix_term))
        row.update(_split("delta_term", report.delta_term))
        return row
    if isinstance(report, OffDiagReport):
        row = {
            "model": report.model,
            "route": report.route,
            "lambda": report.lam,
            "n": report.n,
            "m": report.m,
            "residual": report.residual,
            "residual_relative": report.residual_relative,
            "grid_size": report.grid_size,
            "fd_step": report.fd_step,
        }
        row.update(_split("lhs", report.lhs))
        row.update(_split("expectation_formal", report.expectation_formal))
        row.update(_split("delta_nm", report.delta_nm))
        return row
    if isinstance(report, ConvergenceRow):
        return {
            "model": report.model,
            "lambda": report.lam,
            "n": report.n,
            "level": report.level,
            "grid_size": report.grid_size,
            "h": report.h,
            "energy_error": report.energy_error,
            "energy_order": report.energy_order,
            "delta_error": report.delta_error,
            "delta_order": report.delta_order,
        }
    raise TypeError(f"no CSV layout for {type(report).__name__}")


def schema_line(form: str) -> str:
    return f"# hfgen-csv v{get_settings().CSV_SCHEMA_VERSION} form={form}"


def write_report_csv(path, form: str, reports: Iterable) -> Path:
    """Write reports as CSV: schema marker line, header row, one row per report."""
    columns: List[str] = COLUMNS[form]
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as handle:
        handle.write(schema_line(form) + "\n")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(columns)
        count = 0
        for report in reports:
            row = report_row(report)
            writer.writerow([format_value(row.get(column)) for column in columns])
            count += 1
    logger.info("wrote %d %s rows to %s", count, form, path)
    return path
