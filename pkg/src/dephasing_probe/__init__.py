"""Dephasing-qubit probe of quantum reservoirs.

An impurity qubit dephasing against a bosonic reservoir acquires a decay
factor Gamma(t) and, when the two qubit levels couple to the modes with
unequal strengths, a reservoir-dependent phase factor Phi(t).  This package
computes both channels for explicit mode lists and for an atomic BEC
continuum, the quantum Fisher information they carry about reservoir
parameters (here the condensate scattering length), the measurement that
saturates it, and the resulting signal-to-noise dynamics, with brute-force
oracles validating every closed form.
"""

__version__ = "0.1.0"

from . import backend
from .config import ConfigError, Scenario, scenario_from_dict, validate_config
from .dynamics import (EncodingTrajectory, QubitState, bec_trajectory,
                       discrete_trajectory, evolve_state, gamma_bec,
                       gamma_bec_stationary, gamma_discrete, phi_bec,
                       phi_discrete)
from .metrology import (EncodingDerivatives, EstimationReport, EtaStarEstimate,
                        encoding_derivatives, estimate_at, estimation_report,
                        eta, eta_star, derivative_wrt_param,
                        fisher_of_measurement, optimal_angle, qfi_dephasing,
                        qfi_from_bloch, qsnr, relative_error)
from .oracle import (FockConfig, classical_fisher_outcomes, fock_evolve,
                     fock_evolve_thermal, oracle_suite, qfi_numeric)
from .quadrature import (QuadratureError, QuadratureResult, integrate_adaptive,
                         integrate_oscillatory)
from .reservoirs import (BecReservoirModel, DerivedBecQuantities, DiscreteMode,
                         DiscreteReservoir, ModelValidationError,
                         bogoliubov_dispersion, build_bec_model,
                         continuum_kernels, discretize_bec, paper_parameter_map)

__all__ = [
    "__version__",
    "backend",
    "ConfigError", "Scenario", "scenario_from_dict", "validate_config",
    "EncodingTrajectory", "QubitState", "bec_trajectory", "discrete_trajectory",
    "evolve_state", "gamma_bec", "gamma_bec_stationary", "gamma_discrete",
    "phi_bec", "phi_discrete",
    "EncodingDerivatives", "EstimationReport", "EtaStarEstimate",
    "encoding_derivatives", "estimate_at", "estimation_report", "eta",
    "eta_star", "derivative_wrt_param", "fisher_of_measurement",
    "optimal_angle", "qfi_dephasing", "qfi_from_bloch", "qsnr",
    "relative_error",
    "FockConfig", "classical_fisher_outcomes", "fock_evolve",
    "fock_evolve_thermal", "oracle_suite", "qfi_numeric",
    "QuadratureError", "QuadratureResult", "integrate_adaptive",
    "integrate_oscillatory",
    "BecReservoirModel", "DerivedBecQuantities", "DiscreteMode",
    "DiscreteReservoir", "ModelValidationError", "bogoliubov_dispersion",
    "build_bec_model", "continuum_kernels", "discretize_bec",
    "paper_parameter_map",
]
