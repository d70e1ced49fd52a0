"""Time evolution with a restarted Krylov (Arnoldi) exponential-times-vector scheme.

Each grid interval is advanced by projecting ``exp(-i H dt) psi`` onto a small
Krylov subspace; when the a-posteriori error estimate is above the tolerance
the interval is split in halves, recursively.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, List, Mapping, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy import linalg, sparse

from .constants import DEFAULT_DT, DEFAULT_KRYLOV_DIM, DEFAULT_TOLERANCE, MAX_SUBSTEP_HALVINGS
from .errors import ConfigurationError, ConvergenceError, SectorMismatchError
from .hilbert import Basis, BasisState
from .operators import SparseOperator
from .validators import validate_int, validate_positive

logger = logging.getLogger(__name__)

BREAKDOWN_TOLERANCE = 1e-13


@dataclass(eq=False)
class StateVector:
    """Complex amplitudes over a basis, stamped with the time they refer to."""

    basis: Basis
    amplitudes: np.ndarray
    time: float = 0.0

    def __post_init__(self) -> None:
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (len(self.basis),):
            raise SectorMismatchError(
                f"amplitude vector of shape {self.amplitudes.shape} does not match "
                f"sector-{self.basis.sector} basis of size {len(self.basis)}"
            )

    @classmethod
    def basis_state(cls, basis: Basis, state: BasisState, time: float = 0.0) -> "StateVector":
        amplitudes = np.zeros(len(basis), dtype=complex)
        amplitudes[basis.index_of(state)] = 1.0
        return cls(basis=basis, amplitudes=amplitudes, time=time)

    @classmethod
    def superposition(
        cls, basis: Basis, components: Mapping[BasisState, complex], normalize: bool = True
    ) -> "StateVector":
        amplitudes = np.zeros(len(basis), dtype=complex)
        for state, value in components.items():
            amplitudes[basis.index_of(state)] += value
        if normalize:
            norm = np.linalg.norm(amplitudes)
            if norm == 0:
                raise ConfigurationError("cannot normalize a zero superposition")
            amplitudes /= norm
        return cls(basis=basis, amplitudes=amplitudes)

    @property
    def sector(self) -> int:
        return self.basis.sector

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def amplitude(self, state: BasisState) -> complex:
        return complex(self.amplitudes[self.basis.index_of(state)])

    def copy(self) -> "StateVector":
        return StateVector(basis=self.basis, amplitudes=self.amplitudes.copy(), time=self.time)


@dataclass(frozen=True)
class TimeGrid:
    """Uniform sampling grid on [0, t_max] in units of 1/J."""

    t_max: float
    num_points: int
    times: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        validate_positive(self.t_max, "t_max")
        validate_int(self.num_points, "num_points", minimum=2)
        object.__setattr__(self, "times", np.linspace(0.0, float(self.t_max), self.num_points))

    @classmethod
    def from_spacing(cls, t_max: float, dt: float = DEFAULT_DT) -> "TimeGrid":
        """Grid with spacing as close as possible to ``dt`` that ends exactly at ``t_max``.

        Examples:
            >>> TimeGrid.from_spacing(150.0, 0.1).num_points
            1501
        """
        validate_positive(t_max, "t_max")
        validate_positive(dt, "dt")
        return cls(t_max=t_max, num_points=max(2, int(round(t_max / dt)) + 1))

    @property
    def spacing(self) -> float:
        return float(self.t_max) / (self.num_points - 1)


# Krylov step --------------------------------------------------------------


def krylov_expm_step(
    generator: sparse.spmatrix,
    vector: np.ndarray,
    tau: float,
    tol: float = DEFAULT_TOLERANCE,
    krylov_dim: int = DEFAULT_KRYLOV_DIM,
) -> Tuple[np.ndarray, bool, float]:
    """Approximate ``expm(tau * generator) @ vector`` in a Krylov subspace.

    Args:
        generator: Sparse matrix A (``-1j * H`` for Schroedinger evolution)
        vector: Starting vector
        tau: Step length
        tol: Relative error target, compared against ``err / ||vector||``
        krylov_dim: Maximum subspace dimension

    Returns:
        Tuple of (result, converged, error estimate)
    """
    beta = float(np.linalg.norm(vector))
    if beta == 0.0:
        return np.zeros_like(vector), True, 0.0

    n = vector.shape[0]
    m_max = min(krylov_dim, n)
    basis = np.zeros((m_max + 1, n), dtype=complex)
    hessenberg = np.zeros((m_max + 1, m_max), dtype=complex)
    basis[0] = vector / beta

    result = vector
    error = np.inf
    for j in range(m_max):
        w = generator @ basis[j]
        # Modified Gram-Schmidt
        for i in range(j + 1):
            h = np.vdot(basis[i], w)
            hessenberg[i, j] = h
            w = w - h * basis[i]
        h_next = float(np.linalg.norm(w))
        hessenberg[j + 1, j] = h_next
        m = j + 1

        small = linalg.expm(tau * hessenberg[:m, :m])
        result = beta * (basis[:m].T @ small[:, 0])

        scale = max(1.0, float(np.max(np.abs(hessenberg[: m + 1, :m]))))
        if h_next <= BREAKDOWN_TOLERANCE * scale:
            # Invariant subspace reached: the projection is exact.
            return result, True, 0.0

        error = beta * h_next * float(abs(small[m - 1, 0]))
        if error <= tol * beta:
            return result, True, error
        if m == n:
            return result, True, 0.0
        basis[j + 1] = w / h_next

    return result, False, error


def _advance(
    generator: sparse.spmatrix,
    vector: np.ndarray,
    t0: float,
    t1: float,
    tol: float,
    krylov_dim: int,
    depth: int = 0,
) -> np.ndarray:
    result, converged, error = krylov_expm_step(generator, vector, t1 - t0, tol, krylov_dim)
    if converged:
        return result
    if depth >= MAX_SUBSTEP_HALVINGS:
        raise ConvergenceError(
            f"Krylov step did not reach tolerance {tol:g} on interval "
            f"[{t0:.6g}, {t1:.6g}] (estimate {error:.3g} after {depth} halvings)"
        )
    middle = 0.5 * (t0 + t1)
    logger.debug("Halving substep [%.6g, %.6g] (estimate %.3g)", t0, t1, error)
    vector = _advance(generator, vector, t0, middle, tol, krylov_dim, depth + 1)
    return _advance(generator, vector, middle, t1, tol, krylov_dim, depth + 1)


def _check_compatible(hamiltonian: SparseOperator, psi0: StateVector) -> None:
    if psi0.dimension != hamiltonian.dimension or psi0.sector != hamiltonian.sector:
        raise SectorMismatchError(
            f"state (sector {psi0.sector}, dim {psi0.dimension}) does not match operator "
            f"(sector {hamiltonian.sector}, dim {hamiltonian.dimension})"
        )


def iter_evolve(
    hamiltonian: SparseOperator,
    psi0: StateVector,
    grid: TimeGrid,
    tol: float = DEFAULT_TOLERANCE,
    krylov_dim: int = DEFAULT_KRYLOV_DIM,
) -> Iterator[StateVector]:
    """Yield the evolved state at every grid time, starting with an exact copy of ``psi0``.

    Generators advance lazily, so several propagations can be stepped in
    lockstep without storing whole trajectories.

    Raises:
        SectorMismatchError: If the state does not live on the operator's basis
        ConvergenceError: If an interval cannot reach the tolerance
    """
    validate_positive(tol, "tolerance")
    validate_int(krylov_dim, "krylov_dim", minimum=2)
    _check_compatible(hamiltonian, psi0)

    generator = (-1j * hamiltonian.matrix).tocsr()
    times = grid.times
    current = psi0.amplitudes.copy()
    yield StateVector(basis=psi0.basis, amplitudes=current.copy(), time=float(times[0]))

    for t0, t1 in zip(times[:-1], times[1:]):
        current = _advance(generator, current, float(t0), float(t1), tol, krylov_dim)
        yield StateVector(basis=psi0.basis, amplitudes=current.copy(), time=float(t1))


def evolve(
    hamiltonian: SparseOperator,
    psi0: StateVector,
    grid: TimeGrid,
    tol: float = DEFAULT_TOLERANCE,
    krylov_dim: int = DEFAULT_KRYLOV_DIM,
) -> List[StateVector]:
    """Evolve ``psi0`` under ``hamiltonian`` and return the states at all grid times.

    Args:
        hamiltonian: Hermitian or no-jump effective Hamiltonian
        psi0: Initial state at t = 0
        grid: Sampling times
        tol: Per-substep relative error target
        krylov_dim: Maximum Krylov subspace dimension

    Returns:
        One StateVector per grid time; the first is a copy of ``psi0``
    """
    logger.info(
        "Propagating sector-%d state (dim=%d) to t=%.6g over %d points",
        psi0.sector,
        psi0.dimension,
        grid.t_max,
        grid.num_points,
    )
    return list(iter_evolve(hamiltonian, psi0, grid, tol, krylov_dim))


ExpectedNorm = Union[float, Sequence[float], np.ndarray, Callable[[float], float], None]


def propagation_norm_report(states: Sequence[StateVector], expected: ExpectedNorm = None) -> float:
    """Worst deviation of ``||psi(t)||^2`` from the expected norm along a trajectory.

    Args:
        states: Trajectory as returned by ``evolve``
        expected: Reference norm; a constant, one value per state, or a function of
            time. Defaults to the norm of the first state (Hermitian evolution).

    Returns:
        max_t | ||psi(t)||^2 - expected(t) |
    """
    if not states:
        return 0.0
    norms = np.array([s.norm_squared for s in states])
    times = np.array([s.time for s in states])
    if expected is None:
        reference = np.full_like(norms, norms[0])
    elif callable(expected):
        reference = np.array([expected(t) for t in times], dtype=float)
    else:
        reference = np.broadcast_to(np.asarray(expected, dtype=float), norms.shape)
    return float(np.max(np.abs(norms - reference)))


def trajectory_frame(
    states: Iterable[StateVector], observables: Mapping[str, Callable[[StateVector], float]]
) -> pd.DataFrame:
    """Sample observables along a trajectory into a DataFrame with a leading ``t`` column."""
    records = []
    for state in states:
        record = {"t": state.time}
        record.update({name: float(func(state)) for name, func in observables.items()})
        records.append(record)
    return pd.DataFrame(records, columns=["t", *observables])
