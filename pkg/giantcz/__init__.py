"""giantcz: CZ gates between giant atoms coupled to a coupled-cavity array."""

from .errors import (
    CalibrationError,
    ConfigurationError,
    ConvergenceError,
    GiantCZError,
    NumericalIntegrityError,
)
from .hilbert import AtomSpec, CouplingPoint, LatticeSpec, SystemSpec, enumerate_basis, index_of
from .interference import df_general, df_three_point, df_two_point, dispersion
from .operators import build_effective_hamiltonian, build_hamiltonian
from .propagator import StateVector, TimeGrid, evolve, propagation_norm_report
from .protocol import GateConfig, SolverConfig, calibrate_omega2, preset, run_cz, run_dynamics, sweep_g
from .tomography import average_fidelity, build_choi, process_fidelity, reduce

__version__ = "1.0.0"

__all__ = [
    "AtomSpec",
    "CalibrationError",
    "ConfigurationError",
    "ConvergenceError",
    "CouplingPoint",
    "GateConfig",
    "GiantCZError",
    "LatticeSpec",
    "NumericalIntegrityError",
    "SolverConfig",
    "StateVector",
    "SystemSpec",
    "TimeGrid",
    "average_fidelity",
    "build_choi",
    "build_effective_hamiltonian",
    "build_hamiltonian",
    "calibrate_omega2",
    "df_general",
    "df_three_point",
    "df_two_point",
    "dispersion",
    "enumerate_basis",
    "evolve",
    "index_of",
    "preset",
    "process_fidelity",
    "propagation_norm_report",
    "reduce",
    "run_cz",
    "run_dynamics",
    "sweep_g",
]
