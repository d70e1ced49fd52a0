"""Band dispersion and decoherence-free frequencies of giant-atom coupling geometries.

A giant atom stops emitting into the band at wavenumbers where the phasor sum
``sum_j g_j exp(i k x_j)`` over its coupling points vanishes. Closed forms
cover two equal points and the symmetric three-point layout; ``df_general``
handles any geometry numerically.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass
from typing import Any, Callable, Dict, Iterable, List, Sequence

import numpy as np
import pandas as pd
from scipy import optimize

from .constants import (
    BAND_EDGE_TOLERANCE,
    DF_COLUMNS,
    DF_GRID_SAMPLES,
    DF_REFINE_TOLERANCE,
    DF_RESIDUAL_TOLERANCE,
    ZETA_MERGE,
)
from .errors import ConfigurationError
from .hilbert import CouplingPoint
from .validators import validate_finite, validate_int, validate_non_negative, validate_positive

logger = logging.getLogger(__name__)

_DEDUP_TOLERANCE = 1e-7


@dataclass(frozen=True)
class DfSolution:
    """One decoherence-free point of the band.

    Attributes:
        wavenumber: k_DF in (0, pi), or exactly 0 / pi for band-edge roots
        frequency: omega_DF = -2J cos(k_DF), units of J
        branch: 2*pi shift index n of the root family it came from
        band_edge: True for roots at k = 0 or k = pi
    """

    wavenumber: float
    frequency: float
    branch: int = 0
    band_edge: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def dispersion(k: float | np.ndarray, hopping: float = 1.0) -> float | np.ndarray:
    """Cosine band of the cavity array in the rotating frame.

    Examples:
        >>> round(dispersion(math.pi / 2), 12)
        -0.0
        >>> dispersion(0.0)
        -2.0
    """
    if isinstance(k, np.ndarray):
        return -2.0 * hopping * np.cos(k)
    return -2.0 * hopping * math.cos(k)


def phasor_sum(points: Sequence[CouplingPoint], k: float | np.ndarray) -> complex | np.ndarray:
    """Net coupling amplitude ``sum_j g_j exp(i k x_j)``."""
    sites = np.array([p.site for p in points], dtype=float)
    strengths = np.array([p.strength for p in points], dtype=float)
    phases = np.exp(1j * np.multiply.outer(np.asarray(k, dtype=float), sites))
    result = phases @ strengths
    return complex(result) if np.ndim(result) == 0 else result


def _is_band_edge(k: float) -> bool:
    return k <= BAND_EDGE_TOLERANCE or k >= math.pi - BAND_EDGE_TOLERANCE


def _make_solution(k: float, branch: int, hopping: float) -> DfSolution:
    edge = _is_band_edge(k)
    if edge:
        k = 0.0 if k < 1.0 else math.pi
    return DfSolution(wavenumber=k, frequency=float(dispersion(k, hopping)), branch=branch, band_edge=edge)


def _unique(solutions: Iterable[DfSolution], include_band_edges: bool) -> List[DfSolution]:
    out: List[DfSolution] = []
    for solution in sorted(solutions, key=lambda s: s.wavenumber):
        if solution.band_edge and not include_band_edges:
            continue
        if out and abs(solution.wavenumber - out[-1].wavenumber) <= _DEDUP_TOLERANCE:
            continue
        out.append(solution)
    return out


def df_two_point(dx: int, hopping: float = 1.0, include_band_edges: bool = False) -> List[DfSolution]:
    """Decoherence-free points of two equal coupling points ``dx`` sites apart.

    Solves ``1 + exp(i k dx) = 0``, i.e. ``k = (pi + 2 n pi) / dx``.

    Args:
        dx: Separation of the coupling points in lattice sites
        hopping: J
        include_band_edges: Also return roots sitting at k = pi (flagged)

    Returns:
        Solutions sorted by wavenumber

    Examples:
        >>> [round(s.frequency, 5) for s in df_two_point(4)]
        [-1.41421, 1.41421]
    """
    validate_int(dx, "dx", minimum=1)
    validate_positive(hopping, "hopping")
    solutions = []
    n = 0
    while (math.pi + 2 * n * math.pi) / dx <= math.pi + BAND_EDGE_TOLERANCE:
        solutions.append(_make_solution((math.pi + 2 * n * math.pi) / dx, n, hopping))
        n += 1
    return _unique(solutions, include_band_edges)


def df_three_point(
    dx: int, zeta: float, hopping: float = 1.0, include_band_edges: bool = False
) -> List[DfSolution]:
    """Decoherence-free points of the symmetric three-point layout (g, zeta*g, g).

    Solves ``1 + zeta exp(i k dx) + exp(2 i k dx) = 0``. Its two roots in
    ``exp(i k dx)`` are conjugate, so ``k dx = +-arccos(-zeta/2) + 2 n pi``.
    The pair merges at ``omega = 0`` for ``zeta = 2`` and leaves the unit circle
    beyond, in which case no solution exists.

    Examples:
        >>> [round(s.frequency, 6) for s in df_three_point(2, 1.0)]
        [-1.0, 1.0]
    """
    validate_int(dx, "dx", minimum=1)
    validate_non_negative(zeta, "zeta")
    validate_positive(hopping, "hopping")

    if zeta > ZETA_MERGE + 1e-12:
        logger.warning("zeta=%g > %g: no decoherence-free frequency inside the band", zeta, ZETA_MERGE)
        return []
    if abs(zeta - ZETA_MERGE) <= 1e-12:
        logger.warning("zeta=%g: the two decoherence-free frequencies merge at omega=0", zeta)

    theta = math.acos(max(-1.0, -zeta / 2.0))
    limit = math.pi * dx + BAND_EDGE_TOLERANCE
    solutions = []
    for n in range(dx + 1):
        for phase in (theta + 2 * n * math.pi, -theta + 2 * n * math.pi):
            if -BAND_EDGE_TOLERANCE <= phase <= limit:
                solutions.append(_make_solution(phase / dx, n, hopping))
    return _unique(solutions, include_band_edges)


def _refine_sign_changes(
    func: Callable[[float], float], grid: np.ndarray, values: np.ndarray, scale: float
) -> List[float]:
    roots: List[float] = []
    if np.max(np.abs(values)) <= DF_REFINE_TOLERANCE * scale:
        return roots
    roots.extend(grid[values == 0.0].tolist())
    changes = np.nonzero(values[:-1] * values[1:] < 0)[0]
    for i in changes:
        roots.append(optimize.brentq(func, grid[i], grid[i + 1], xtol=DF_REFINE_TOLERANCE))
    return roots


def df_general(
    points: Sequence[CouplingPoint],
    hopping: float = 1.0,
    include_band_edges: bool = False,
    samples: int = DF_GRID_SAMPLES,
) -> List[DfSolution]:
    """Find every k in (0, pi) where the coupling points interfere destructively.

    The phasor sum is taken relative to the center of the layout, which makes
    it real for mirror-symmetric profiles. Candidates come from sign changes
    of its real and imaginary parts on a uniform grid (refined with Brent's
    method) and from local minima of its modulus (which catches double roots
    that touch zero without crossing). A candidate is kept when the residual
    is below ``1e-10 * sum|g_j|``.

    Args:
        points: At least two coupling points
        hopping: J
        include_band_edges: Also return roots at k = 0 or pi (flagged)
        samples: Grid intervals on [0, pi]

    Returns:
        Solutions sorted by wavenumber; empty when there is no root in the band

    Raises:
        ConfigurationError: If fewer than two points are given
    """
    if len(points) < 2:
        raise ConfigurationError(f"df_general needs at least two coupling points, got {len(points)}")
    for point in points:
        validate_finite(point.strength, "coupling strength")
    validate_int(samples, "samples", minimum=16)

    scale = float(sum(abs(p.strength) for p in points))
    if scale == 0.0:
        raise ConfigurationError("all coupling strengths are zero")
    center = 0.5 * (min(p.site for p in points) + max(p.site for p in points))
    offsets = np.array([p.site - center for p in points], dtype=float)
    strengths = np.array([p.strength for p in points], dtype=float)

    def amplitude(k: float) -> complex:
        return complex(np.dot(strengths, np.exp(1j * k * offsets)))

    grid = np.linspace(0.0, math.pi, samples + 1)
    values = np.exp(1j * np.outer(grid, offsets)) @ strengths

    candidates = _refine_sign_changes(lambda k: amplitude(k).real, grid, values.real, scale)
    candidates += _refine_sign_changes(lambda k: amplitude(k).imag, grid, values.imag, scale)

    modulus = np.abs(values)
    minima = np.nonzero((modulus[1:-1] <= modulus[:-2]) & (modulus[1:-1] <= modulus[2:]))[0] + 1
    for i in minima:
        if modulus[i] > 1e-3 * scale:
            continue
        found = optimize.minimize_scalar(
            lambda k: abs(amplitude(k)),
            bounds=(grid[i - 1], grid[i + 1]),
            method="bounded",
            options={"xatol": DF_REFINE_TOLERANCE},
        )
        candidates.append(float(found.x))
    # Band edges are grid endpoints and never bracketed by a sign change
    candidates += [0.0, math.pi]

    solutions = [
        _make_solution(k, 0, hopping)
        for k in candidates
        if abs(amplitude(k)) <= DF_RESIDUAL_TOLERANCE * scale
    ]
    result = _unique(solutions, include_band_edges)
    logger.debug("df_general: %d candidate(s), %d solution(s)", len(candidates), len(result))
    return result


def three_point_layout(dx: int, zeta: float, g: float = 1.0, start: int = 0) -> List[CouplingPoint]:
    """Coupling points (g, zeta*g, g) at (start, start+dx, start+2dx)."""
    return [
        CouplingPoint(start, g),
        CouplingPoint(start + dx, zeta * g),
        CouplingPoint(start + 2 * dx, g),
    ]


def two_point_layout(dx: int, g: float = 1.0, start: int = 0) -> List[CouplingPoint]:
    return [CouplingPoint(start, g), CouplingPoint(start + dx, g)]


def solutions_frame(solutions: Sequence[DfSolution]) -> pd.DataFrame:
    """Table of solutions with the ``df`` output columns."""
    return pd.DataFrame(
        [(s.wavenumber, s.frequency, s.band_edge) for s in solutions],
        columns=DF_COLUMNS,
    )


def df_zeta_scan(dx: int, zetas: Iterable[float], hopping: float = 1.0) -> pd.DataFrame:
    """Decoherence-free points of the three-point layout as a function of zeta.

    Returns:
        DataFrame with columns zeta, k_DF, omega_DF_over_J (one row per root)
    """
    rows = []
    for zeta in zetas:
        for solution in df_three_point(dx, float(zeta), hopping):
            rows.append((float(zeta), solution.wavenumber, solution.frequency))
    return pd.DataFrame(rows, columns=["zeta", "k_DF", "omega_DF_over_J"])


def dispersion_table(num_points: int = 201, hopping: float = 1.0) -> pd.DataFrame:
    validate_int(num_points, "num_points", minimum=2)
    k = np.linspace(0.0, math.pi, num_points)
    return pd.DataFrame({"k": k, "omega_over_J": dispersion(k, hopping)})
