"""Validation helpers shared by the configuration and domain types."""

from __future__ import annotations

import math
import re
from pathlib import Path
from typing import Any, Iterable, Mapping

from .constants import CONFIG_SUFFIXES, MAX_SECTOR
from .errors import ConfigurationError, UnsupportedSectorError


def sanitize_filename_component(component: Any) -> str:
    """Sanitize a filename component to prevent path traversal.

    Args:
        component: The value to sanitize

    Returns:
        Sanitized string safe for use in filenames

    Examples:
        >>> sanitize_filename_component("3e")
        '3e'
        >>> sanitize_filename_component("../../../etc/passwd")
        'etcpasswd'
    """
    if not isinstance(component, str):
        component = str(component)

    sanitized = re.sub(r"[\.\/\\]", "", component)
    sanitized = re.sub(r'[<>:"|?*\s]', "", sanitized)
    sanitized = sanitized[:50]

    return sanitized if sanitized else "run"


def validate_finite(value: float, name: str) -> float:
    """Reject NaN and infinities."""
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ConfigurationError(f"{name} must be a real number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigurationError(f"{name} must be finite, got {value!r}")
    return float(value)


def validate_positive(value: float, name: str) -> float:
    value = validate_finite(value, name)
    if value <= 0:
        raise ConfigurationError(f"{name} must be > 0, got {value}")
    return value


def validate_non_negative(value: float, name: str) -> float:
    value = validate_finite(value, name)
    if value < 0:
        raise ConfigurationError(f"{name} must be >= 0, got {value}")
    return value


def validate_int(value: Any, name: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigurationError(f"{name} must be an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigurationError(f"{name} must be >= {minimum}, got {value}")
    return value


def validate_site(site: int, num_sites: int, owner: str = "coupling point") -> int:
    """Check that a (0-based) site index lies inside the lattice."""
    validate_int(site, f"{owner} site")
    if not 0 <= site < num_sites:
        raise ConfigurationError(
            f"{owner} site {site + 1} lies outside the lattice of {num_sites} sites"
        )
    return site


def validate_distinct_sites(sites: Iterable[int], owner: str) -> None:
    seen: set[int] = set()
    for site in sites:
        if site in seen:
            raise ConfigurationError(f"{owner} couples twice to site {site + 1}")
        seen.add(site)


def validate_sector(sector: Any) -> int:
    """Validate an excitation sector number.

    Raises:
        UnsupportedSectorError: If the sector exceeds the three-level atom model
    """
    validate_int(sector, "sector", minimum=0)
    if sector > MAX_SECTOR:
        raise UnsupportedSectorError(
            f"sector {sector} is not supported: three-level atoms cap sectors at {MAX_SECTOR}"
        )
    return int(sector)


def validate_known_keys(document: Mapping[str, Any], allowed: Iterable[str], section: str) -> None:
    """Reject keys that the configuration schema does not define.

    Examples:
        >>> validate_known_keys({"dx": 2}, ["dx", "zeta"], "gate")
    """
    if not isinstance(document, Mapping):
        raise ConfigurationError(f"section '{section}' must be a mapping, got {type(document).__name__}")
    unknown = sorted(set(document) - set(allowed))
    if unknown:
        raise ConfigurationError(f"unknown key(s) in '{section}': {', '.join(map(str, unknown))}")


def validate_file_path(file_path: Path | str) -> Path:
    """Validate that a configuration file path is safe and readable.

    Args:
        file_path: Path to validate

    Returns:
        The path as a ``Path``

    Raises:
        ConfigurationError: If path is invalid or unsafe
    """
    path = Path(file_path)

    if ".." in path.parts:
        raise ConfigurationError("Path traversal detected in file path")

    if not path.exists():
        raise ConfigurationError(f"File does not exist: {path}")

    if not path.is_file():
        raise ConfigurationError(f"Path is not a file: {path}")

    if path.suffix.lower() not in CONFIG_SUFFIXES:
        raise ConfigurationError(
            f"Configuration must be YAML ({', '.join(CONFIG_SUFFIXES)}), got: {path.suffix}"
        )

    return path
