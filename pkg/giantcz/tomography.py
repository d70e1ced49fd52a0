"""Observables, reduced density matrices, Choi matrices and gate fidelities.

Every 4x4 matrix uses the computational order (|11>, |10>, |01>, |00>) and
every 16x16 Choi matrix is indexed by (input, output) pairs in that order and
normalized by 1/4, so trace-preserving channels have unit trace.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Mapping, Optional, Tuple, Union

import numpy as np
from scipy import optimize

from .constants import (
    CHOI_TOLERANCE,
    COMPUTATIONAL_LABELS,
    DENSITY_TOLERANCE,
    NORM_DRIFT_GATE,
    PSD_CLIP_TOLERANCE,
    QUBIT_DIMENSION,
)
from .errors import ConfigurationError, NumericalIntegrityError, SectorMismatchError
from .hilbert import AtomsOnly, bath_dimension
from .propagator import StateVector
from .validators import validate_finite

logger = logging.getLogger(__name__)

D = QUBIT_DIMENSION
CZ_UNITARY = np.diag([-1.0, 1.0, 1.0, 1.0]).astype(complex)
IDENTITY_UNITARY = np.eye(D, dtype=complex)

ArrayOrChoi = Union["ChoiMatrix", np.ndarray]


@dataclass(eq=False)
class ReducedDensityMatrix:
    """Two-qubit state after tracing out the cavities; trace < 1 signals leakage."""

    matrix: np.ndarray
    time: float = 0.0

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    @property
    def trace_deficit(self) -> float:
        return 1.0 - self.trace

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(0.5 * (self.matrix + self.matrix.conj().T))

    def is_physical(self, tol: float = DENSITY_TOLERANCE) -> bool:
        hermitian = np.max(np.abs(self.matrix - self.matrix.conj().T)) <= tol
        return bool(hermitian and self.eigenvalues().min() >= -tol and self.trace <= 1 + tol)

@dataclass(eq=False)
class ChoiMatrix:
    matrix: np.ndarray
    time: float = 0.0

    def __post_init__(self) -> None:
        self.matrix = np.asarray(self.matrix, dtype=complex)
        if self.matrix.shape != (D * D, D * D):
            raise SectorMismatchError(f"Choi matrix must be 16x16, got {self.matrix.shape}")

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    @property
    def trace_deficit(self) -> float:
        return 1.0 - self.trace

    @property
    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)

    def block(self, m: int, n: int) -> np.ndarray:
        """Channel output for input |m><n| (times 1/4)."""
        return self.matrix[D * m : D * (m + 1), D * n : D * (n + 1)]

    def validate(self, tol: float = CHOI_TOLERANCE) -> "ChoiMatrix":
        """Check Hermiticity, positivity and trace bound.

        Raises:
            NumericalIntegrityError: If any check fails beyond ``tol``
        """
        defect = float(np.max(np.abs(self.matrix - self.matrix.conj().T)))
        if defect > tol:
            raise NumericalIntegrityError(f"Choi matrix is not Hermitian (defect {defect:.3g})")
        smallest = float(np.linalg.eigvalsh(0.5 * (self.matrix + self.matrix.conj().T)).min())
        if smallest < -tol:
            raise NumericalIntegrityError(f"Choi matrix has eigenvalue {smallest:.3g} < 0")
        if self.trace > 1 + tol:
            raise NumericalIntegrityError(f"Choi matrix trace {self.trace:.12g} exceeds 1")
        return self


@dataclass
class GateResult:
    """Best gate point of a run; ``average_fidelity`` follows from the process fidelity."""

    gate_time: float
    process_fidelity: float
    local_phases: Tuple[float, float] = (0.0, 0.0)
    trace_deficit: float = 0.0
    average_fidelity: float = field(init=False)

    def __post_init__(self) -> None:
        self.average_fidelity = average_fidelity(self.process_fidelity)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["local_phases"] = list(self.local_phases)
        return data


# Populations ----------------------------------------------------------------


def _require_two_excitations(psi: StateVector) -> None:
    if psi.sector != 2:
        raise SectorMismatchError(
            f"this population is defined on the two-excitation sector, got sector {psi.sector}"
        )


def population(psi: StateVector, n1: int, n2: int) -> float:
    """|<n1 n2, vac|psi>|^2."""
    return float(abs(psi.amplitude(AtomsOnly(n1, n2))) ** 2)


def population_20(psi: StateVector) -> float:
    """Population of |20>|vac>.

    Raises:
        SectorMismatchError: If ``psi`` is not a two-excitation state
    """
    _require_two_excitations(psi)
    return population(psi, 2, 0)


def population_11(psi: StateVector) -> float:
    _require_two_excitations(psi)
    return population(psi, 1, 1)


def population_02(psi: StateVector) -> float:
    _require_two_excitations(psi)
    return population(psi, 0, 2)


# Reduced states ---------------------------------------------------------------


def m_matrix(psi: StateVector) -> np.ndarray:
    """Amplitudes arranged as a (computational atom state) x (bath configuration) matrix.

    Components whose atoms sit outside the computational subspace (|20>, |02>)
    are dropped. Bath columns are shared between sectors, so M-matrices of
    different sectors can be multiplied together.
    """
    basis = psi.basis
    rows = basis.computational_rows
    keep = rows >= 0
    result = np.zeros((D, bath_dimension(basis.num_sites)), dtype=complex)
    result[rows[keep], basis.bath_columns[keep]] = psi.amplitudes[keep]
    return result


def reduce(psi: StateVector) -> ReducedDensityMatrix:
    """Trace out the bath: rho = M M^dagger."""
    m = m_matrix(psi)
    return ReducedDensityMatrix(matrix=m @ m.conj().T, time=psi.time)


def leaked_population(psi: StateVector) -> float:
    """Norm carried by components outside the M-matrix (|20>, |02>)."""
    rows = psi.basis.computational_rows
    return float(np.sum(np.abs(psi.amplitudes[rows < 0]) ** 2))


# Channels -------------------------------------------------------------------


def build_choi(evolved: Mapping[str, StateVector]) -> ChoiMatrix:
    """Choi matrix of the gate from the evolved computational inputs.

    Args:
        evolved: Evolved states keyed by input label "11", "10", "01", "00";
            each started from the corresponding atom state with the cavities empty

    Returns:
        ChoiMatrix with entries E(|m><n|)[a, b] / 4 computed from M_m M_n^dagger

    Raises:
        ConfigurationError: If an input label is missing
        NumericalIntegrityError: If the states refer to different times
    """
    missing = [label for label in COMPUTATIONAL_LABELS if label not in evolved]
    if missing:
        raise ConfigurationError(f"missing evolved input state(s): {', '.join(missing)}")

    states = [evolved[label] for label in COMPUTATIONAL_LABELS]
    times = {s.time for s in states}
    if max(times) - min(times) > 1e-12 * max(1.0, abs(max(times))):
        raise NumericalIntegrityError(
            f"evolved input states refer to different times: {sorted(times)}"
        )
    sites = {s.basis.num_sites for s in states}
    if len(sites) != 1:
        raise SectorMismatchError(f"evolved states come from different lattices: {sorted(sites)}")

    stacked = np.stack([m_matrix(s) for s in states])
    blocks = np.einsum("mac,nbc->manb", stacked, stacked.conj()) / D
    return ChoiMatrix(matrix=blocks.reshape(D * D, D * D), time=states[0].time)


def unitary_choi(unitary: np.ndarray) -> ChoiMatrix:
    """Choi matrix of rho -> U rho U^dagger."""
    unitary = np.asarray(unitary, dtype=complex)
    blocks = np.einsum("am,bn->manb", unitary, unitary.conj()) / D
    return ChoiMatrix(matrix=blocks.reshape(D * D, D * D))


def cz_choi() -> ChoiMatrix:
    return unitary_choi(CZ_UNITARY)


def local_phase_unitary(phi1: float, phi2: float) -> np.ndarray:
    """Z(phi1) x Z(phi2) in the (11, 10, 01, 00) order."""
    return np.diag(
        [np.exp(1j * (phi1 + phi2)), np.exp(1j * phi1), np.exp(1j * phi2), 1.0]
    ).astype(complex)


def apply_output_unitary(choi: ChoiMatrix, unitary: np.ndarray) -> ChoiMatrix:
    """Choi matrix of the channel followed by ``unitary``."""
    lift = np.kron(np.eye(D), unitary)
    return ChoiMatrix(matrix=lift @ choi.matrix @ lift.conj().T, time=choi.time)


def _psd_sqrt(matrix: np.ndarray, name: str) -> np.ndarray:
    hermitian = 0.5 * (matrix + matrix.conj().T)
    values, vectors = np.linalg.eigh(hermitian)
    if values.min() < -PSD_CLIP_TOLERANCE:
        raise NumericalIntegrityError(
            f"{name} is not positive semidefinite (eigenvalue {values.min():.3g})"
        )
    roots = np.sqrt(np.clip(values, 0.0, None))
    return (vectors * roots) @ vectors.conj().T


def _as_array(choi: ArrayOrChoi) -> np.ndarray:
    return choi.matrix if isinstance(choi, ChoiMatrix) else np.asarray(choi, dtype=complex)


def process_fidelity(choi: ArrayOrChoi, ideal: Optional[ArrayOrChoi] = None) -> float:
    """Uhlmann fidelity (Tr sqrt(sqrt(A) B sqrt(A)))^2 between two Choi matrices.

    Args:
        choi: Choi matrix of the simulated channel
        ideal: Choi matrix of the target; ideal CZ when omitted

    Returns:
        Process fidelity in [0, 1]

    Raises:
        NumericalIntegrityError: If either matrix has an eigenvalue below -1e-10
    """
    a = _as_array(choi)
    b = _as_array(cz_choi() if ideal is None else ideal)
    root_a = _psd_sqrt(a, "Choi matrix")
    _psd_sqrt(b, "ideal Choi matrix")
    inner = root_a @ (0.5 * (b + b.conj().T)) @ root_a
    values = np.clip(np.linalg.eigvalsh(0.5 * (inner + inner.conj().T)), 0.0, None)
    fidelity = float(np.sum(np.sqrt(values)) ** 2)
    return min(max(fidelity, 0.0), 1.0)


def _wrap_phase(phase: float) -> float:
    """Map to (-pi, pi]."""
    return -((-phase + math.pi) % (2 * math.pi) - math.pi)


def _plus_state_output(choi: ChoiMatrix) -> np.ndarray:
    # E(|++><++|) = (1/4) sum_mn E(|m><n|) = sum_mn Choi block (m, n)
    blocks = choi.matrix.reshape(D, D, D, D)
    return blocks.sum(axis=(0, 2))


def correct_local_phases(
    choi: ChoiMatrix, target: np.ndarray = CZ_UNITARY
) -> Tuple[ChoiMatrix, float, float]:
    """Find single-qubit Z phases that bring the channel closest to ``target``.

    The output is conjugated by ``Z(phi1) x Z(phi2)``; the phases are seeded from
    the coherences <10|rho|00> and <01|rho|00> of the |++> output and refined by
    Nelder-Mead on the process fidelity.

    Args:
        choi: Channel to correct
        target: Ideal gate unitary (CZ by default)

    Returns:
        Tuple of (corrected Choi matrix, phi1, phi2), phases wrapped to (-pi, pi]
    """
    target = np.asarray(target, dtype=complex)
    # Pure target Choi vector |Omega> = (I x U) |Phi+> / 2, entries U[a, m] / 2 at (m, a)
    omega = (target.T / 2.0).reshape(D * D)
    phi = choi.matrix

    def fidelity(phases: np.ndarray) -> float:
        diag = np.diag(local_phase_unitary(phases[0], phases[1]))
        w = np.tile(diag.conj(), D) * omega
        return float(np.vdot(w, phi @ w).real)

    rho = _plus_state_output(choi)
    plus = np.full(D, 0.5, dtype=complex)
    ideal_out = np.outer(target @ plus, (target @ plus).conj())
    seed = np.array(
        [
            np.angle(ideal_out[1, 3]) - np.angle(rho[1, 3]) if abs(rho[1, 3]) > 0 else 0.0,
            np.angle(ideal_out[2, 3]) - np.angle(rho[2, 3]) if abs(rho[2, 3]) > 0 else 0.0,
        ]
    )

    best_x = seed
    best_value = fidelity(seed)
    for shift in ((0.0, 0.0), (math.pi, 0.0), (0.0, math.pi), (math.pi, math.pi)):
        start = seed + np.array(shift)
        found = optimize.minimize(
            lambda x: -fidelity(x),
            start,
            method="Nelder-Mead",
            options={"xatol": 1e-10, "fatol": 1e-15, "maxiter": 4000},
        )
        if -found.fun > best_value + 1e-15:
            best_x, best_value = found.x, -found.fun

    phi1, phi2 = _wrap_phase(float(best_x[0])), _wrap_phase(float(best_x[1]))
    corrected = apply_output_unitary(choi, local_phase_unitary(phi1, phi2))
    logger.debug("Local phase correction: phi1=%.6f phi2=%.6f F=%.10f", phi1, phi2, best_value)
    return corrected, phi1, phi2


def average_fidelity(process: float) -> float:
    """Average gate fidelity (d F + 1) / (d + 1) for two qubits.

    Examples:
        >>> round(average_fidelity(0.942), 4)
        0.9536
    """
    validate_finite(process, "process fidelity")
    return (D * process + 1.0) / (D + 1.0)


def gate_point(
    evolved: Mapping[str, StateVector], target: np.ndarray = CZ_UNITARY
) -> Tuple[float, float, float, float]:
    """Process fidelity after local-phase correction for one time slice.

    Returns:
        Tuple of (process fidelity, phi1, phi2, trace deficit)
    """
    choi = build_choi(evolved).validate(NORM_DRIFT_GATE)
    corrected, phi1, phi2 = correct_local_phases(choi, target)
    fidelity = process_fidelity(corrected, unitary_choi(target))
    return fidelity, phi1, phi2, choi.trace_deficit
