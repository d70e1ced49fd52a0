"""Physical configuration types and fixed-excitation basis enumeration.

Sites are 0-based internally. Every user-facing label (``BasisState.label``,
error messages) uses 1-based sites.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterator, List, Sequence, Tuple, Union

import numpy as np

from .constants import COMPUTATIONAL_ATOMS, MAX_ATOM_LEVEL
from .errors import BasisStateNotFoundError, ConfigurationError
from .validators import (
    validate_distinct_sites,
    validate_finite,
    validate_int,
    validate_non_negative,
    validate_positive,
    validate_sector,
    validate_site,
)


@dataclass(frozen=True)
class LatticeSpec:
    num_sites: int
    hopping: float = 1.0
    band_center: float = 0.0
    cavity_decay: float = 0.0

    def __post_init__(self) -> None:
        validate_int(self.num_sites, "num_sites", minimum=2)
        validate_positive(self.hopping, "hopping")
        validate_finite(self.band_center, "band_center")
        validate_non_negative(self.cavity_decay, "cavity_decay")


@dataclass(frozen=True)
class CouplingPoint:
    site: int
    strength: float

    def __post_init__(self) -> None:
        validate_int(self.site, "coupling point site")
        validate_finite(self.strength, "coupling strength")


@dataclass(frozen=True)
class AtomSpec:
    omega: float
    anharmonicity: float
    points: Tuple[CouplingPoint, ...]
    decay: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", tuple(self.points))
        validate_finite(self.omega, "omega")
        validate_finite(self.anharmonicity, "anharmonicity")
        validate_non_negative(self.decay, "atom decay")
        if not self.points:
            raise ConfigurationError("an atom needs at least one coupling point")
        validate_distinct_sites((p.site for p in self.points), "atom")

    @property
    def sites(self) -> Tuple[int, ...]:
        return tuple(p.site for p in self.points)


@dataclass(frozen=True)
class SystemSpec:
    lattice: LatticeSpec
    atoms: Tuple[AtomSpec, AtomSpec]

    def __post_init__(self) -> None:
        object.__setattr__(self, "atoms", tuple(self.atoms))
        if len(self.atoms) != 2:
            raise ConfigurationError(f"exactly two atoms are required, got {len(self.atoms)}")
        for number, atom in enumerate(self.atoms, start=1):
            for point in atom.points:
                validate_site(point.site, self.lattice.num_sites, owner=f"atom {number}")

    @property
    def num_sites(self) -> int:
        return self.lattice.num_sites


# Basis states -------------------------------------------------------------


@dataclass(frozen=True)
class AtomsOnly:
    """|n1 n2> with the bath in vacuum."""

    n1: int
    n2: int

    @property
    def atoms(self) -> Tuple[int, int]:
        return (self.n1, self.n2)

    @property
    def photons(self) -> Tuple[int, ...]:
        return ()

    @property
    def excitations(self) -> int:
        return self.n1 + self.n2

    def label(self) -> str:
        return f"|{self.n1}{self.n2}>|vac>"


@dataclass(frozen=True)
class OnePhoton:
    """|a1 a2> with one photon in cavity ``site``."""

    a1: int
    a2: int
    site: int

    @property
    def atoms(self) -> Tuple[int, int]:
        return (self.a1, self.a2)

    @property
    def photons(self) -> Tuple[int, ...]:
        return (self.site,)

    @property
    def excitations(self) -> int:
        return self.a1 + self.a2 + 1

    def label(self) -> str:
        return f"|{self.a1}{self.a2}>|{self.site + 1}>"


@dataclass(frozen=True)
class TwoPhoton:
    """|00> with photons in cavities j and k, stored canonically with j <= k."""

    j: int
    k: int

    def __post_init__(self) -> None:
        if self.j > self.k:
            j, k = self.k, self.j
            object.__setattr__(self, "j", j)
            object.__setattr__(self, "k", k)

    @property
    def atoms(self) -> Tuple[int, int]:
        return (0, 0)

    @property
    def photons(self) -> Tuple[int, ...]:
        return (self.j, self.k)

    @property
    def excitations(self) -> int:
        return 2

    def label(self) -> str:
        return f"|00>|{self.j + 1},{self.k + 1}>"


BasisState = Union[AtomsOnly, OnePhoton, TwoPhoton]


def make_state(n1: int, n2: int, photons: Sequence[int]) -> BasisState:
    """Build the basis state for given atomic levels and photon sites."""
    if not (0 <= n1 <= MAX_ATOM_LEVEL and 0 <= n2 <= MAX_ATOM_LEVEL):
        raise ConfigurationError(f"atomic levels ({n1}, {n2}) exceed the three-level model")
    if len(photons) == 0:
        return AtomsOnly(n1, n2)
    if len(photons) == 1:
        return OnePhoton(n1, n2, photons[0])
    if len(photons) == 2 and n1 == 0 and n2 == 0:
        return TwoPhoton(photons[0], photons[1])
    raise ConfigurationError(
        f"no basis state with atoms ({n1}, {n2}) and {len(photons)} photons"
    )


def bath_dimension(num_sites: int) -> int:
    """Number of bath configurations with at most two photons."""
    return 1 + num_sites + num_sites * (num_sites + 1) // 2


def bath_index(photons: Sequence[int], num_sites: int) -> int:
    """Column of a bath configuration: vacuum, then |j>, then |jk> with j <= k."""
    if len(photons) == 0:
        return 0
    if len(photons) == 1:
        return 1 + photons[0]
    j, k = sorted(photons)
    return 1 + num_sites + j * num_sites - j * (j - 1) // 2 + (k - j)


class Basis(Sequence[BasisState]):
    """Ordered basis of one excitation sector with O(1) reverse lookup."""

    def __init__(self, sector: int, num_sites: int, states: Sequence[BasisState]) -> None:
        self.sector = sector
        self.num_sites = num_sites
        self._states: Tuple[BasisState, ...] = tuple(states)
        self._index: Dict[BasisState, int] = {s: i for i, s in enumerate(self._states)}

        # Position of each amplitude inside the 4 x bath M-matrix; -1 marks
        # atomic states outside the computational subspace (|20>, |02>).
        rows = np.full(len(self._states), -1, dtype=np.intp)
        cols = np.zeros(len(self._states), dtype=np.intp)
        for i, state in enumerate(self._states):
            if state.atoms in COMPUTATIONAL_ATOMS:
                rows[i] = COMPUTATIONAL_ATOMS.index(state.atoms)
            cols[i] = bath_index(state.photons, num_sites)
        self.computational_rows = rows
        self.bath_columns = cols

    def __len__(self) -> int:
        return len(self._states)

    def __getitem__(self, index):  # type: ignore[override]
        return self._states[index]

    def __iter__(self) -> Iterator[BasisState]:
        return iter(self._states)

    def __contains__(self, state: object) -> bool:
        return state in self._index

    def __repr__(self) -> str:
        return f"Basis(sector={self.sector}, num_sites={self.num_sites}, size={len(self)})"

    def index_of(self, state: BasisState) -> int:
        try:
            return self._index[state]
        except (KeyError, TypeError):
            label = state.label() if hasattr(state, "label") else repr(state)
            raise BasisStateNotFoundError(
                f"state {label} is not part of the sector-{self.sector} basis"
            ) from None


def expected_dimension(num_sites: int, sector: int) -> int:
    """Closed-form sector size."""
    validate_sector(sector)
    if sector == 0:
        return 1
    if sector == 1:
        return 2 + num_sites
    return 3 + 2 * num_sites + num_sites * (num_sites + 1) // 2


def enumerate_basis(spec: SystemSpec | int, sector: int) -> Basis:
    """Enumerate the basis of a fixed excitation sector.

    Ordering for sector 2: |20>, |11>, |02>, then |10>|j> for j ascending,
    |01>|j> for j ascending, and finally |00>|jk> in lexicographic order with
    j <= k. Sector 1 is |10>, |01>, |00>|j>; sector 0 is the vacuum.

    Args:
        spec: System specification (or just the number of sites)
        sector: Total excitation number, 0, 1 or 2

    Raises:
        UnsupportedSectorError: If the sector is larger than 2
    """
    validate_sector(sector)
    num_sites = spec if isinstance(spec, int) else spec.num_sites
    sites = range(num_sites)

    states: List[BasisState]
    if sector == 0:
        states = [AtomsOnly(0, 0)]
    elif sector == 1:
        states = [AtomsOnly(1, 0), AtomsOnly(0, 1)]
        states += [OnePhoton(0, 0, j) for j in sites]
    else:
        states = [AtomsOnly(2, 0), AtomsOnly(1, 1), AtomsOnly(0, 2)]
        states += [OnePhoton(1, 0, j) for j in sites]
        states += [OnePhoton(0, 1, j) for j in sites]
        states += [TwoPhoton(j, k) for j in sites for k in range(j, num_sites)]

    return Basis(sector, num_sites, states)


def index_of(state: BasisState, basis: Basis) -> int:
    """Index of ``state`` in ``basis``.

    Raises:
        BasisStateNotFoundError: If the state does not belong to the basis
    """
    return basis.index_of(state)
