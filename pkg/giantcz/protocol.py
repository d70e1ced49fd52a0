"""CZ gate recipes: geometry presets, Lamb-shift calibration, dynamics and fidelity runs.

The gate drives |11> into |20> and back through the decoherence-free exchange
of the two giant atoms. Atom 1 sits at a decoherence-free frequency, atom 2
at ``omega1 + alpha1`` (shifted slightly by the Lamb shift), so that |11> and
|20> are resonant while both atoms stay dark to the band.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import optimize

from .constants import (
    ALPHA2_DEFAULT_OFFSET,
    CALIBRATION_XATOL,
    COMPUTATIONAL_LABELS,
    DEFAULT_DT,
    DEFAULT_KRYLOV_DIM,
    DEFAULT_NUM_SITES,
    DEFAULT_PLACEMENT,
    DEFAULT_SEARCH_HALFWIDTH,
    DEFAULT_TOLERANCE,
    DYNAMICS_COLUMNS,
    FIDELITY_COLUMNS,
    GROUP_VELOCITY_FACTOR,
    HORIZON_EXCHANGE_COEFFICIENT,
    HORIZON_G_REFERENCE,
    HORIZON_MARGIN,
    HORIZON_MIN,
    HORIZON_ROUNDING,
    MAX_SEARCH_HALFWIDTH,
    PLACEMENTS,
    PRESETS,
    REVIVAL_DEPTH,
    REVIVAL_HYSTERESIS,
    REVIVAL_RETURN_FRACTION,
    SWEEP_COLUMNS,
)
from .errors import CalibrationError, ConfigurationError, GiantCZError
from .hilbert import AtomsOnly, AtomSpec, CouplingPoint, LatticeSpec, SystemSpec, enumerate_basis
from .interference import DfSolution, df_general, df_three_point, df_two_point
from .operators import SparseOperator, build_effective_hamiltonian
from .propagator import StateVector, TimeGrid, iter_evolve
from .tomography import GateResult, gate_point, population_02, population_11, population_20
from .validators import (
    validate_finite,
    validate_int,
    validate_non_negative,
    validate_positive,
)

logger = logging.getLogger(__name__)

GEOMETRIES = ("two_point", "three_point", "custom")
PRESET_DF_TOLERANCE = 0.005


@dataclass(frozen=True)
class SolverConfig:
    tolerance: float = DEFAULT_TOLERANCE
    dt: float = DEFAULT_DT
    t_max: Optional[float] = None
    krylov_dim: int = DEFAULT_KRYLOV_DIM
    threads: Optional[int] = None

    def __post_init__(self) -> None:
        validate_positive(self.tolerance, "tolerance")
        validate_positive(self.dt, "dt")
        if self.t_max is not None:
            validate_positive(self.t_max, "t_max")
        validate_int(self.krylov_dim, "krylov_dim", minimum=2)
        if self.threads is not None:
            validate_int(self.threads, "threads", minimum=1)

    def grid(self, g: float) -> TimeGrid:
        t_max = self.t_max if self.t_max is not None else horizon(g)
        return TimeGrid.from_spacing(t_max, self.dt)


@dataclass(frozen=True)
class Geometry:
    """Absolute coupling-point sites of both atoms (0-based)."""

    atom1: Tuple[CouplingPoint, ...]
    atom2: Tuple[CouplingPoint, ...]

    @property
    def sites(self) -> Tuple[int, ...]:
        return tuple(p.site for p in (*self.atom1, *self.atom2))

    def edge_distance(self, num_sites: int) -> int:
        """Sites between the atom block and the nearest chain end."""
        return min(min(self.sites), num_sites - 1 - max(self.sites))


@dataclass(frozen=True)
class GateConfig:
    """Physical parameters of one CZ gate, energies in units of J.

    Both atoms share the coupling profile; atom 2's points are shifted by the
    placement offset and the whole block is centered in the chain.
    """

    geometry: str = "three_point"
    dx: int = 2
    zeta: float = 0.0
    g: float = 0.1
    omega1: float = 0.0
    omega2: float = 0.0
    alpha1: float = 0.0
    alpha2: Optional[float] = None
    num_sites: int = DEFAULT_NUM_SITES
    qubit_decay: float = 0.0
    cavity_decay: float = 0.0
    placement: str = DEFAULT_PLACEMENT
    atom2_offset: Optional[int] = None
    points: Tuple[Tuple[int, float], ...] = ()
    name: Optional[str] = None

    def __post_init__(self) -> None:
        if self.geometry not in GEOMETRIES:
            raise ConfigurationError(
                f"unknown geometry '{self.geometry}', expected one of {', '.join(GEOMETRIES)}"
            )
        if self.placement not in PLACEMENTS:
            raise ConfigurationError(
                f"unknown placement '{self.placement}', expected one of {', '.join(PLACEMENTS)}"
            )
        validate_int(self.dx, "dx", minimum=1)
        validate_non_negative(self.zeta, "zeta")
        validate_non_negative(self.g, "g")
        for name in ("omega1", "omega2", "alpha1"):
            validate_finite(getattr(self, name), name)
        if self.alpha2 is None:
            object.__setattr__(self, "alpha2", self.alpha1 + ALPHA2_DEFAULT_OFFSET)
        validate_finite(self.alpha2, "alpha2")
        validate_int(self.num_sites, "num_sites", minimum=2)
        validate_non_negative(self.qubit_decay, "qubit_decay")
        validate_non_negative(self.cavity_decay, "cavity_decay")
        object.__setattr__(self, "points", tuple((int(o), float(s)) for o, s in self.points))
        if self.geometry == "custom":
            if len(self.points) < 2:
                raise ConfigurationError("custom geometry needs at least two points")
            if min(o for o, _ in self.points) != 0:
                raise ConfigurationError("custom point offsets must start at 0")
            if len({o for o, _ in self.points}) != len(self.points):
                raise ConfigurationError("custom point offsets must be distinct")
        if self.atom2_offset is not None:
            validate_int(self.atom2_offset, "atom2_offset")
        # Fail early when the block does not fit
        self.layout()

    # Geometry ------------------------------------------------------------

    def profile(self) -> List[Tuple[int, float]]:
        """Coupling offsets and strengths relative to g."""
        if self.geometry == "two_point":
            return [(0, 1.0), (self.dx, 1.0)]
        if self.geometry == "three_point":
            return [(0, 1.0), (self.dx, self.zeta), (2 * self.dx, 1.0)]
        return sorted(self.points)

    @property
    def span(self) -> int:
        return max(offset for offset, _ in self.profile())

    @property
    def spacing(self) -> int:
        return 1 if self.geometry == "custom" else self.dx

    def resolved_offset(self) -> int:
        if self.atom2_offset is not None:
            return self.atom2_offset
        if self.placement == "separate":
            return self.span + self.spacing
        return 1

    def layout(self) -> Geometry:
        """Center the two-atom block in the chain.

        Raises:
            ConfigurationError: If the block does not fit or the atoms share a site
        """
        offset = self.resolved_offset()
        low = min(0, offset)
        high = max(self.span, offset + self.span)
        start = (self.num_sites - 1 - (high - low)) // 2 - low
        if start + low < 0 or start + high > self.num_sites - 1:
            raise ConfigurationError(
                f"atom block of extent {high - low + 1} does not fit into {self.num_sites} sites"
            )
        profile = self.profile()
        atom1 = tuple(CouplingPoint(start + o, self.g * s) for o, s in profile)
        atom2 = tuple(CouplingPoint(start + offset + o, self.g * s) for o, s in profile)
        shared = {p.site for p in atom1} & {p.site for p in atom2}
        if shared:
            raise ConfigurationError(
                f"atom 2 offset {offset} puts both atoms on site(s) "
                f"{', '.join(str(s + 1) for s in sorted(shared))}"
            )
        return Geometry(atom1=atom1, atom2=atom2)

    def system_spec(self) -> SystemSpec:
        geometry = self.layout()
        lattice = LatticeSpec(num_sites=self.num_sites, cavity_decay=self.cavity_decay)
        atoms = (
            AtomSpec(self.omega1, self.alpha1, geometry.atom1, decay=self.qubit_decay),
            AtomSpec(self.omega2, float(self.alpha2), geometry.atom2, decay=self.qubit_decay),  # type: ignore[arg-type]
        )
        return SystemSpec(lattice=lattice, atoms=atoms)

    def df_solutions(self) -> List[DfSolution]:
        if self.geometry == "two_point":
            return df_two_point(self.dx)
        if self.geometry == "three_point":
            return df_three_point(self.dx, self.zeta)
        return df_general([CouplingPoint(o, s) for o, s in self.profile()])

    @property
    def resonance(self) -> float:
        """Bare |11> <-> |20> resonance for atom 2, omega1 + alpha1."""
        return self.omega1 + self.alpha1

    def with_changes(self, **changes: object) -> "GateConfig":
        return replace(self, **changes)  # type: ignore[arg-type]


# Presets and rules ---------------------------------------------------------------


def preset(preset_id: str, num_sites: int = DEFAULT_NUM_SITES) -> GateConfig:
    """Gate configuration of a published parameter set.

    Args:
        preset_id: One of 2d, 2e, 3c, 3d, 3e, 4a, 4b
        num_sites: Chain length

    Raises:
        ConfigurationError: If the id is unknown
    """
    key = str(preset_id).lower()
    if key not in PRESETS:
        raise ConfigurationError(
            f"unknown preset '{preset_id}', expected one of {', '.join(PRESETS)}"
        )
    values = PRESETS[key]
    return GateConfig(
        geometry=str(values["geometry"]),
        dx=int(values["dx"]),
        zeta=float(values["zeta"]),
        g=float(values["g"]),
        omega1=float(values["omega1"]),
        omega2=float(values["omega2"]),
        alpha1=float(values["alpha1"]),
        alpha2=float(values["alpha2"]),
        num_sites=num_sites,
        name=key,
    )


def preset_horizon(preset_id: str) -> float:
    return float(PRESETS[str(preset_id).lower()]["t_max"])


def satisfies_df_condition(config: GateConfig, tol: float = PRESET_DF_TOLERANCE) -> bool:
    """True when omega1 and omega1 + alpha1 both sit on decoherence-free frequencies."""
    frequencies = [s.frequency for s in config.df_solutions()]
    if not frequencies:
        return False

    def near(value: float) -> bool:
        return min(abs(value - f) for f in frequencies) <= tol

    return near(config.omega1) and near(config.resonance)


def horizon(g: float) -> float:
    """Simulation length: 150/J for g >= 0.1 J, else long enough for the slower exchange.

    Examples:
        >>> horizon(0.1), horizon(0.05)
        (150.0, 400.0)
    """
    if g >= HORIZON_G_REFERENCE or g <= 0:
        return HORIZON_MIN
    needed = HORIZON_MARGIN * HORIZON_EXCHANGE_COEFFICIENT / g**2
    return max(HORIZON_MIN, math.ceil(needed / HORIZON_ROUNDING) * HORIZON_ROUNDING)


def df_condition_guard(config: GateConfig) -> bool:
    """Warn when the atoms are not parked on decoherence-free frequencies."""
    if satisfies_df_condition(config):
        return True
    logger.warning(
        "omega1=%.4f and omega1+alpha1=%.4f are not both decoherence-free for this layout; "
        "the atoms will radiate into the chain",
        config.omega1,
        config.resonance,
    )
    return False


def edge_reflection_guard(config: GateConfig, t_max: float) -> bool:
    """Warn when photons emitted at t=0 can return from the chain ends before ``t_max``."""
    distance = config.layout().edge_distance(config.num_sites)
    reach = GROUP_VELOCITY_FACTOR * t_max
    if 2 * distance < reach:
        logger.warning(
            "Edge reflections: round trip to the chain end (%d sites) is shorter than "
            "the light cone 2J*t_max=%.1f; late-time results include boundary echoes",
            2 * distance,
            reach,
        )
        return False
    return True


def gate_time_ns(tau: float, hopping_MHz: float) -> float:
    """Convert a gate time in units of 1/J to nanoseconds for J/2pi given in MHz.

    Examples:
        >>> round(gate_time_ns(297.0, 200.0), 1)
        236.3
    """
    validate_positive(hopping_MHz, "hopping_MHz")
    return tau / (2.0 * math.pi * hopping_MHz * 1e6) * 1e9


# Peak detection -----------------------------------------------------------------------


def parabolic_peak(times: Sequence[float], values: Sequence[float], index: int) -> Tuple[float, float]:
    """Vertex of the parabola through the sample at ``index`` and its two neighbors."""
    if index <= 0 or index >= len(values) - 1:
        return float(times[index]), float(values[index])
    t0, t1, t2 = (float(t) for t in times[index - 1 : index + 2])
    y0, y1, y2 = (float(v) for v in values[index - 1 : index + 2])
    denominator = y0 - 2.0 * y1 + y2
    if denominator == 0.0:
        return t1, y1
    shift = 0.5 * (y0 - y2) / denominator
    shift = min(max(shift, -1.0), 1.0)
    step = 0.5 * (t2 - t0)
    return t1 + shift * step, y1 - 0.25 * (y0 - y2) * shift


@dataclass
class RevivalTracker:
    """Follow n11(t) online: the exchange dip, then the first maximum after it.

    The dip must fall below ``depth`` and the signal must climb back by
    ``return_fraction`` of the drop before the dip counts. The revival counts once
    the signal falls back by ``return_fraction`` of the dip-to-peak swing. Both
    swings are at least ``hysteresis``, so ripples on the way are ignored.
    """

    hysteresis: float = REVIVAL_HYSTERESIS
    depth: float = REVIVAL_DEPTH
    return_fraction: float = REVIVAL_RETURN_FRACTION
    times: List[float] = field(default_factory=list)
    values: List[float] = field(default_factory=list)
    dip_index: Optional[int] = None
    revival_index: Optional[int] = None
    _candidate: int = 0

    def update(self, t: float, value: float) -> bool:
        """Record a sample; returns True once the revival is confirmed."""
        self.times.append(t)
        self.values.append(value)
        i = len(self.values) - 1
        best = self.values[self._candidate]
        if self.dip_index is None:
            if value < best:
                self._candidate = i
                return False
            swing = max(self.hysteresis, self.return_fraction * (self.values[0] - best))
            if best < self.depth and value - best > swing:
                self.dip_index = self._candidate
                self._candidate = i
            return False
        if self.revival_index is None:
            if value > best:
                self._candidate = i
                return False
            swing = max(self.hysteresis, self.return_fraction * (best - self.values[self.dip_index]))
            if best - value > swing:
                self.revival_index = self._candidate
                return True
        return self.revival_index is not None

    def finish(self) -> None:
        """Accept the running maximum when the horizon ends after a confirmed dip."""
        if self.dip_index is not None and self.revival_index is None:
            self.revival_index = self._candidate

    @property
    def found(self) -> bool:
        return self.revival_index is not None

    def dip(self) -> Tuple[float, float]:
        if self.dip_index is None:
            raise CalibrationError("no population dip recorded")
        t, v = parabolic_peak(self.times, [-x for x in self.values], self.dip_index)
        return t, -v

    def revival(self) -> Tuple[float, float]:
        if self.revival_index is None:
            raise CalibrationError("no revival recorded")
        return parabolic_peak(self.times, self.values, self.revival_index)

    def contrast(self) -> float:
        return self.revival()[1] - self.dip()[1] if self.found else 0.0


# Runs ----------------------------------------------------------------------------------


def _initial_state(hamiltonian: SparseOperator, label: str) -> StateVector:
    return StateVector.basis_state(hamiltonian.basis, AtomsOnly(int(label[0]), int(label[1])))


def run_dynamics(config: GateConfig, solver: SolverConfig = SolverConfig()) -> pd.DataFrame:
    """Populations of |11>, |20>, |02> and the norm, starting from |11> with empty cavities.

    Returns:
        DataFrame with columns t_J, n11, n20, n02, norm
    """
    grid = solver.grid(config.g)
    df_condition_guard(config)
    edge_reflection_guard(config, grid.t_max)
    hamiltonian = build_effective_hamiltonian(config.system_spec(), 2)
    psi0 = _initial_state(hamiltonian, "11")
    logger.info(
        "Running dynamics for %s: dim=%d, t_max=%.1f",
        config.name or "custom config",
        hamiltonian.dimension,
        grid.t_max,
    )
    rows = [
        (psi.time, population_11(psi), population_20(psi), population_02(psi), psi.norm_squared)
        for psi in iter_evolve(hamiltonian, psi0, grid, solver.tolerance, solver.krylov_dim)
    ]
    return pd.DataFrame(rows, columns=DYNAMICS_COLUMNS)


def revival_score(
    config: GateConfig, omega2: float, solver: SolverConfig = SolverConfig()
) -> Tuple[float, Optional[float]]:
    """Revival contrast n11(revival) - n11(dip) for a trial omega2.

    Propagation stops as soon as the revival is confirmed.

    Returns:
        Tuple of (contrast, revival time); (0.0, None) without a revival
    """
    trial = config.with_changes(omega2=float(omega2))
    hamiltonian = build_effective_hamiltonian(trial.system_spec(), 2)
    psi0 = _initial_state(hamiltonian, "11")
    tracker = RevivalTracker()
    for psi in iter_evolve(hamiltonian, psi0, solver.grid(config.g), solver.tolerance, solver.krylov_dim):
        if tracker.update(psi.time, population_11(psi)):
            break
    tracker.finish()
    if not tracker.found:
        logger.debug("omega2=%.6f: no revival inside the horizon", omega2)
        return 0.0, None
    score = tracker.contrast()
    logger.debug("omega2=%.6f: contrast=%.6f at t=%.2f", omega2, score, tracker.revival()[0])
    return score, tracker.revival()[0]


def calibrate_omega2(
    config: GateConfig,
    search_halfwidth: float = DEFAULT_SEARCH_HALFWIDTH,
    solver: SolverConfig = SolverConfig(),
    coarse_points: int = 11,
) -> float:
    """Find the Lamb-shifted omega2 that gives the cleanest |11> -> |20> -> |11> cycle.

    A coarse scan over ``omega1 + alpha1 +- search_halfwidth`` brackets the best
    revival contrast, then a bounded Brent search refines it.

    Args:
        config: Gate configuration (its omega2 is ignored)
        search_halfwidth: Half-width of the search window, at most 0.1 J
        solver: Propagation settings
        coarse_points: Samples of the bracketing scan

    Returns:
        Calibrated omega2 in units of J

    Raises:
        CalibrationError: If no trial frequency shows a revival inside the horizon
    """
    validate_positive(search_halfwidth, "search_halfwidth")
    if search_halfwidth > MAX_SEARCH_HALFWIDTH:
        raise ConfigurationError(
            f"search_halfwidth must be <= {MAX_SEARCH_HALFWIDTH}, got {search_halfwidth}"
        )
    validate_int(coarse_points, "coarse_points", minimum=3)

    center = config.resonance
    trial = np.linspace(center - search_halfwidth, center + search_halfwidth, coarse_points)
    scores = np.array([revival_score(config, w, solver)[0] for w in trial])
    if not np.any(scores > 0):
        raise CalibrationError(
            f"no |11> revival for omega2 in [{trial[0]:.4f}, {trial[-1]:.4f}] "
            f"within t_max={solver.grid(config.g).t_max:.1f}"
        )

    best = int(np.argmax(scores))
    low = trial[max(best - 1, 0)]
    high = trial[min(best + 1, coarse_points - 1)]
    found = optimize.minimize_scalar(
        lambda w: -revival_score(config, w, solver)[0],
        bounds=(low, high),
        method="bounded",
        options={"xatol": CALIBRATION_XATOL},
    )
    omega2 = float(found.x) if -found.fun >= scores[best] else float(trial[best])
    logger.info(
        "Calibrated omega2=%.5f (resonance %.5f, shift %+.5f, contrast %.4f)",
        omega2,
        center,
        omega2 - center,
        max(-found.fun, scores[best]),
    )
    return omega2


def _lockstep(
    generators: Dict[str, Iterator[StateVector]], steps: int, threads: Optional[int]
) -> Iterator[Dict[str, StateVector]]:
    labels = list(generators)
    with ThreadPoolExecutor(max_workers=threads) as executor:
        for _ in range(steps):
            states = list(executor.map(next, [generators[label] for label in labels]))
            yield dict(zip(labels, states))


def run_cz(config: GateConfig, solver: SolverConfig = SolverConfig()) -> Tuple[pd.DataFrame, GateResult]:
    """Process fidelity of the CZ gate along the evolution and its best point.

    The four computational inputs are propagated in parallel (|11> in the
    two-excitation sector, |10> and |01> in the one-excitation sector, |00>
    trivially), and a phase-corrected Choi matrix is built at every sample.

    Returns:
        Tuple of (DataFrame with columns t, process_fidelity, average_fidelity,
        phi1, phi2, trace_deficit; GateResult at the refined fidelity maximum)
    """
    grid = solver.grid(config.g)
    df_condition_guard(config)
    edge_reflection_guard(config, grid.t_max)
    spec = config.system_spec()
    hamiltonians = {
        2: build_effective_hamiltonian(spec, 2),
        1: build_effective_hamiltonian(spec, 1),
        0: build_effective_hamiltonian(spec, 0),
    }
    generators = {}
    for label in COMPUTATIONAL_LABELS:
        hamiltonian = hamiltonians[int(label[0]) + int(label[1])]
        generators[label] = iter_evolve(
            hamiltonian, _initial_state(hamiltonian, label), grid, solver.tolerance, solver.krylov_dim
        )

    logger.info(
        "Running CZ fidelity for %s: g=%.4g, t_max=%.1f, %d samples",
        config.name or "custom config",
        config.g,
        grid.t_max,
        grid.num_points,
    )
    rows = []
    for evolved in _lockstep(generators, grid.num_points, solver.threads):
        fidelity, phi1, phi2, deficit = gate_point(evolved)
        rows.append((evolved["11"].time, fidelity, phi1, phi2, deficit))

    times = np.array([r[0] for r in rows])
    fidelities = np.array([r[1] for r in rows])
    best = int(np.argmax(fidelities))
    tau, peak = parabolic_peak(times, fidelities, best)
    peak = min(peak, 1.0)
    result = GateResult(
        gate_time=tau,
        process_fidelity=peak,
        local_phases=(rows[best][2], rows[best][3]),
        trace_deficit=rows[best][4],
    )

    frame = pd.DataFrame(
        {
            "t": times,
            "process_fidelity": fidelities,
            "average_fidelity": (4.0 * fidelities + 1.0) / 5.0,
            "phi1": [r[2] for r in rows],
            "phi2": [r[3] for r in rows],
            "trace_deficit": [r[4] for r in rows],
        },
        columns=FIDELITY_COLUMNS,
    )
    logger.info(
        "F_process_max=%.4f (F_avg=%.4f) at tJ=%.1f",
        result.process_fidelity,
        result.average_fidelity,
        result.gate_time,
    )
    return frame, result


def _sweep_point(
    config: GateConfig,
    g: float,
    qubit_decay: float,
    cavity_decay: float,
    solver: SolverConfig,
    calibrate: bool,
    search_halfwidth: float,
) -> Dict[str, object]:
    point = config.with_changes(g=g, qubit_decay=qubit_decay, cavity_decay=cavity_decay)
    try:
        omega2 = calibrate_omega2(point, search_halfwidth, solver) if calibrate else point.omega2
        _, result = run_cz(point.with_changes(omega2=omega2), solver)
    except GiantCZError as exc:
        logger.warning("Sweep point g=%.4g failed: %s", g, exc)
        return {"g_over_J": g, "error": str(exc)}
    return {
        "g_over_J": g,
        "fidelity_process": result.process_fidelity,
        "fidelity_average": result.average_fidelity,
        "tau_J": result.gate_time,
        "omega2_calibrated": omega2,
        "phi1": result.local_phases[0],
        "phi2": result.local_phases[1],
        "error": "",
    }


def sweep_g(
    config: GateConfig,
    g_values: Sequence[float],
    qubit_decay: float = 0.0,
    cavity_decay: float = 0.0,
    solver: SolverConfig = SolverConfig(),
    calibrate: bool = True,
    search_halfwidth: float = DEFAULT_SEARCH_HALFWIDTH,
) -> pd.DataFrame:
    """Best CZ fidelity and gate time as a function of the coupling strength.

    Each g gets its own horizon (unless ``solver.t_max`` is fixed), its own
    omega2 calibration and a full ``run_cz`` with the decay rates applied.
    Failed points are logged and recorded with NaN values and an error message.

    Returns:
        DataFrame with the sweep columns plus ``error``
    """
    values = [validate_positive(g, "g") for g in g_values]
    if values != sorted(values):
        raise ConfigurationError("g values must be sorted in ascending order")
    validate_non_negative(qubit_decay, "qubit_decay")
    validate_non_negative(cavity_decay, "cavity_decay")

    logger.info("Sweeping %d coupling strengths: %s", len(values), values)
    with ThreadPoolExecutor(max_workers=solver.threads) as executor:
        rows = list(
            executor.map(
                lambda g: _sweep_point(
                    config, g, qubit_decay, cavity_decay, solver, calibrate, search_halfwidth
                ),
                values,
            )
        )
    return pd.DataFrame(rows, columns=[*SWEEP_COLUMNS, "error"])


def calibrate_placement(
    config: GateConfig,
    candidates: Sequence[str] = PLACEMENTS,
    solver: SolverConfig = SolverConfig(),
) -> Tuple[str, int, float]:
    """Pick the atom-2 placement whose exchange at the configured omega2 is cleanest.

    Returns:
        Tuple of (placement name, atom 2 offset, revival contrast)
    """
    results = []
    for name in candidates:
        candidate = config.with_changes(placement=name, atom2_offset=None)
        score, revival_time = revival_score(candidate, candidate.omega2, solver)
        logger.info(
            "Placement %-12s offset=%+d contrast=%.4f revival=%s",
            name,
            candidate.resolved_offset(),
            score,
            "none" if revival_time is None else f"{revival_time:.1f}",
        )
        results.append((name, candidate.resolved_offset(), score))
    if not results:
        raise ConfigurationError("no placement candidates given")
    return max(results, key=lambda item: item[2])
