"""Projected sparse Hamiltonians of the two-giant-atom + cavity-array system.

All energies are in units of the hopping J; the cavity band center is removed
by the rotating frame, so atomic frequencies are detunings from it.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterator, List, Sequence, Tuple

import numpy as np
from scipy import sparse

from .constants import HERMITIAN_TOLERANCE, MAX_ATOM_LEVEL
from .errors import ConfigurationError
from .hilbert import Basis, BasisState, SystemSpec, enumerate_basis, make_state

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SparseOperator:
    """Complex sparse matrix over one basis.

    Attributes:
        matrix: CSR matrix, shape (len(basis), len(basis))
        basis: Basis the rows and columns refer to
        hermitian: True when the operator is Hermitian by construction
    """

    matrix: sparse.csr_matrix
    basis: Basis
    hermitian: bool = True

    def __post_init__(self) -> None:
        n = len(self.basis)
        if self.matrix.shape != (n, n):
            raise ConfigurationError(
                f"operator shape {self.matrix.shape} does not match basis size {n}"
            )

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def sector(self) -> int:
        return self.basis.sector

    @property
    def nnz(self) -> int:
        return int(self.matrix.nnz)

    def hermiticity_defect(self) -> float:
        """Largest |H_ij - conj(H_ji)| over stored entries."""
        if self.matrix.nnz == 0:
            return 0.0
        diff = self.matrix - self.matrix.conj().T
        return float(np.max(np.abs(diff.data))) if diff.nnz else 0.0

    def is_hermitian(self, tol: float = HERMITIAN_TOLERANCE) -> bool:
        return self.hermiticity_defect() <= tol

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()

    def coordinate_lines(self) -> Iterator[str]:
        """Yield ``row col re im`` lines sorted by (row, col), 0-based indices."""
        coo = self.matrix.tocoo()
        order = np.lexsort((coo.col, coo.row))
        for idx in order:
            value = coo.data[idx]
            yield f"{coo.row[idx]} {coo.col[idx]} {value.real:.17g} {value.imag:.17g}"


# Assembly -----------------------------------------------------------------


def _atom_energy(level: int, omega: float, anharmonicity: float) -> float:
    if level == 0:
        return 0.0
    if level == 1:
        return omega
    return 2.0 * omega + anharmonicity


def _neighbors(site: int, num_sites: int) -> Tuple[int, ...]:
    # Open boundary conditions
    return tuple(t for t in (site - 1, site + 1) if 0 <= t < num_sites)


def _replace_photon(photons: Sequence[int], remove: int | None, add: int | None) -> List[int]:
    out = list(photons)
    if remove is not None:
        out.remove(remove)
    if add is not None:
        out.append(add)
    return out


def assemble_operator(spec: SystemSpec, basis: Basis | Sequence[BasisState]) -> sparse.csr_matrix:
    """Apply the Hamiltonian term by term to every ket of ``basis``.

    Works on any set of states closed under the Hamiltonian, including a merged
    basis spanning several sectors.

    Args:
        spec: System specification
        basis: Basis (or plain sequence of basis states)

    Returns:
        CSR matrix in the order of ``basis``
    """
    states = list(basis)
    index: Dict[BasisState, int] = {s: i for i, s in enumerate(states)}
    num_sites = spec.num_sites
    hopping = spec.lattice.hopping

    rows: List[int] = []
    cols: List[int] = []
    data: List[complex] = []

    def push(target: BasisState, source: int, amplitude: float) -> None:
        try:
            row = index[target]
        except KeyError:
            raise ConfigurationError(
                f"basis is not closed under the Hamiltonian: {target.label()} is missing"
            ) from None
        rows.append(row)
        cols.append(source)
        data.append(amplitude)

    for col, state in enumerate(states):
        levels = state.atoms
        photons = state.photons
        occupation = Counter(photons)

        diagonal = sum(
            _atom_energy(level, atom.omega, atom.anharmonicity)
            for level, atom in zip(levels, spec.atoms)
        )
        if diagonal != 0.0:
            rows.append(col)
            cols.append(col)
            data.append(diagonal)

        # Cavity hopping -J (a_t^dag a_s + h.c.)
        for site, occ in occupation.items():
            for target_site in _neighbors(site, num_sites):
                new_photons = _replace_photon(photons, remove=site, add=target_site)
                amplitude = -hopping * math.sqrt(occ) * math.sqrt(occupation[target_site] + 1)
                push(make_state(levels[0], levels[1], new_photons), col, amplitude)

        # Atom-photon exchange at each coupling point
        for m, atom in enumerate(spec.atoms):
            level = levels[m]
            for point in atom.points:
                x = point.site
                if level > 0:
                    new_levels = list(levels)
                    new_levels[m] = level - 1
                    amplitude = point.strength * math.sqrt(level) * math.sqrt(occupation[x] + 1)
                    push(
                        make_state(new_levels[0], new_levels[1], _replace_photon(photons, None, x)),
                        col,
                        amplitude,
                    )
                if level < MAX_ATOM_LEVEL and occupation[x] > 0:
                    new_levels = list(levels)
                    new_levels[m] = level + 1
                    amplitude = point.strength * math.sqrt(level + 1) * math.sqrt(occupation[x])
                    push(
                        make_state(new_levels[0], new_levels[1], _replace_photon(photons, x, None)),
                        col,
                        amplitude,
                    )

    dim = len(states)
    matrix = sparse.coo_matrix(
        (np.asarray(data, dtype=complex), (np.asarray(rows), np.asarray(cols))),
        shape=(dim, dim),
    ).tocsr()
    matrix.sum_duplicates()
    matrix.eliminate_zeros()
    return matrix


def decay_diagonal(spec: SystemSpec, basis: Basis | Sequence[BasisState]) -> np.ndarray:
    """Imaginary diagonal of the no-jump Hamiltonian, -i/2 (sum of rates per quantum)."""
    cavity = spec.lattice.cavity_decay
    rates = np.array(
        [
            sum(level * atom.decay for level, atom in zip(state.atoms, spec.atoms))
            + cavity * len(state.photons)
            for state in basis
        ],
        dtype=float,
    )
    return -0.5j * rates


def build_hamiltonian(spec: SystemSpec, sector: int) -> SparseOperator:
    """Build the Hermitian Hamiltonian projected onto one excitation sector.

    Args:
        spec: System specification
        sector: Excitation number (0, 1 or 2)

    Returns:
        SparseOperator with the Hermitian flag set

    Raises:
        UnsupportedSectorError: If the sector is larger than 2
    """
    basis = enumerate_basis(spec, sector)
    matrix = assemble_operator(spec, basis)
    logger.debug("Built sector-%d Hamiltonian: dim=%d nnz=%d", sector, len(basis), matrix.nnz)
    return SparseOperator(matrix=matrix, basis=basis, hermitian=True)


def build_effective_hamiltonian(spec: SystemSpec, sector: int) -> SparseOperator:
    """Hamiltonian plus the no-jump decay terms.

    Each atomic quantum contributes ``-i*Gamma_q/2`` (so the second level decays
    at twice the rate of the first) and each photon contributes ``-i*Gamma_c/2``.
    Rates are validated non-negative when the specs are constructed.
    """
    hamiltonian = build_hamiltonian(spec, sector)
    has_decay = spec.lattice.cavity_decay > 0 or any(atom.decay > 0 for atom in spec.atoms)
    if not has_decay:
        return hamiltonian

    diagonal = decay_diagonal(spec, hamiltonian.basis)
    matrix = (hamiltonian.matrix + sparse.diags(diagonal, format="csr")).tocsr()
    logger.debug(
        "Added decay: qubit=%s cavity=%g",
        [atom.decay for atom in spec.atoms],
        spec.lattice.cavity_decay,
    )
    return SparseOperator(matrix=matrix, basis=hamiltonian.basis, hermitian=False)
