"""
Models Package
"""
from hfgen.models.bessel import bessel_i0, bessel_i1, bessel_k0, bessel_k1, BesselUnderflowWarning
from hfgen.models.rotor import (
    ModeFunction,
    RotorModel,
    RotorReference,
    rotor_anomaly_exact,
    rotor_boundary_anomaly,
    rotor_energy,
)
from hfgen.models.radial import (
    RadialReference,
    beta_from_kappa,
    dilated_beta,
    dilation_relation_residual,
    kappa_from_beta,
    log_boundary_coefficients,
    radial_anomaly_exact,
    radial_boundary_anomaly,
    radial_energy_exact,
    radial_ground_state,
)
from hfgen.models.report import ConvergenceRow, HFReport, IntegratedReport, OffDiagReport, Route
from hfgen.models.experiment import ExperimentConfig, ExperimentModel, Form, Sweep

__all__ = [
    "bessel_i0",
    "bessel_i1",
    "bessel_k0",
    "bessel_k1",
    "BesselUnderflowWarning",
    "ModeFunction",
    "RotorModel",
    "RotorReference",
    "rotor_anomaly_exact",
    "rotor_boundary_anomaly",
    "rotor_energy",
    "RadialReference",
    "beta_from_kappa",
    "dilated_beta",
    "dilation_relation_residual",
    "kappa_from_beta",
    "log_boundary_coefficients",
    "radial_anomaly_exact",
    "radial_boundary_anomaly",
    "radial_energy_exact",
    "radial_ground_state",
    "ConvergenceRow",
    "HFReport",
    "IntegratedReport",
    "OffDiagReport",
    "Route",
    "ExperimentConfig",
    "ExperimentModel",
    "Form",
    "Sweep",
]
