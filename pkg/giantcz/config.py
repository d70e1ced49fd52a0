"""Run configuration: YAML documents, presets and environment overrides."""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple

import yaml

from .constants import (
    DEFAULT_NUM_SITES,
    DEFAULT_OUTPUT_DIR,
    DEFAULT_SEARCH_HALFWIDTH,
    DEFAULT_SWEEP_G,
    ENV_OUTPUT_DIR,
    ENV_THREADS,
    DEFAULT_CAVITY_DECAY,
    DEFAULT_QUBIT_DECAY,
    SCHEMA_VERSION,
)
from .errors import ConfigurationError
from .protocol import GateConfig, SolverConfig, preset, preset_horizon
from .validators import (
    sanitize_filename_component,
    validate_file_path,
    validate_known_keys,
    validate_non_negative,
    validate_positive,
)

logger = logging.getLogger(__name__)

TOP_LEVEL_KEYS = ("schema_version", "preset", "gate", "system", "solver", "output", "sweep")
GATE_KEYS = {
    "geometry": "geometry",
    "dx": "dx",
    "zeta": "zeta",
    "points": "points",
    "g_over_J": "g",
    "omega1_over_J": "omega1",
    "omega2_over_J": "omega2",
    "alpha1_over_J": "alpha1",
    "alpha2_over_J": "alpha2",
    "placement": "placement",
    "atom2_offset": "atom2_offset",
}
SYSTEM_KEYS = ("num_sites", "qubit_decay_over_J", "cavity_decay_over_J", "hopping_MHz")
SOLVER_KEYS = {
    "tolerance": "tolerance",
    "dt_J": "dt",
    "t_max_J": "t_max",
    "krylov_dim": "krylov_dim",
    "threads": "threads",
}
OUTPUT_KEYS = ("directory", "prefix", "json", "gnuplot")
SWEEP_KEYS = (
    "g_list_over_J",
    "qubit_decay_over_J",
    "cavity_decay_over_J",
    "calibrate",
    "search_halfwidth_over_J",
)


def resolve_threads(value: Optional[int] = None) -> Optional[int]:
    """Worker-thread count: explicit value, else ``GIANTCZ_THREADS``, else library default."""
    if value is not None:
        return value
    raw = os.getenv(ENV_THREADS)
    if not raw:
        return None
    try:
        threads = int(raw)
    except ValueError:
        raise ConfigurationError(f"{ENV_THREADS} must be an integer, got {raw!r}") from None
    if threads < 1:
        raise ConfigurationError(f"{ENV_THREADS} must be >= 1, got {threads}")
    return threads


def default_output_dir() -> Path:
    return Path(os.getenv(ENV_OUTPUT_DIR, DEFAULT_OUTPUT_DIR))


@dataclass
class OutputConfig:
    directory: Path = field(default_factory=default_output_dir)
    prefix: Optional[str] = None
    json: bool = False
    gnuplot: bool = True

    def resolved_prefix(self, fallback: str) -> str:
        return sanitize_filename_component(self.prefix or fallback)


@dataclass
class SweepConfig:
    g_values: Tuple[float, ...] = DEFAULT_SWEEP_G
    qubit_decay: float = DEFAULT_QUBIT_DECAY
    cavity_decay: float = DEFAULT_CAVITY_DECAY
    calibrate: bool = True
    search_halfwidth: float = DEFAULT_SEARCH_HALFWIDTH

    def __post_init__(self) -> None:
        self.g_values = tuple(validate_positive(g, "g_list_over_J entry") for g in self.g_values)
        if not self.g_values:
            raise ConfigurationError("g_list_over_J must not be empty")
        validate_non_negative(self.qubit_decay, "sweep qubit_decay_over_J")
        validate_non_negative(self.cavity_decay, "sweep cavity_decay_over_J")
        validate_positive(self.search_halfwidth, "search_halfwidth_over_J")


@dataclass
class RunConfig:
    gate: GateConfig
    solver: SolverConfig = field(default_factory=SolverConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    sweep: SweepConfig = field(default_factory=SweepConfig)
    hopping_MHz: Optional[float] = None
    source: Optional[Path] = None

    @property
    def label(self) -> str:
        if self.gate.name:
            return self.gate.name
        if self.source is not None:
            return self.source.stem
        return "run"

    @property
    def prefix(self) -> str:
        return self.output.resolved_prefix(self.label)


def _section(document: Mapping[str, Any], name: str, allowed: Any) -> Dict[str, Any]:
    value = document.get(name)
    if value is None:
        return {}
    validate_known_keys(value, allowed, name)
    return dict(value)


def _as_bool(value: Any, name: str) -> bool:
    if not isinstance(value, bool):
        raise ConfigurationError(f"{name} must be true or false, got {value!r}")
    return value


def build_run_config(document: Mapping[str, Any], source: Optional[Path] = None) -> RunConfig:
    """Turn a parsed configuration document into a RunConfig.

    Args:
        document: Mapping as produced by ``yaml.safe_load``
        source: Originating file, used for default output names

    Raises:
        ConfigurationError: On unknown keys, wrong types or invalid values
    """
    validate_known_keys(document, TOP_LEVEL_KEYS, "document")
    version = document.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigurationError(f"unsupported schema_version {version!r}, expected {SCHEMA_VERSION}")

    gate_doc = _section(document, "gate", GATE_KEYS)
    system_doc = _section(document, "system", SYSTEM_KEYS)
    solver_doc = _section(document, "solver", SOLVER_KEYS)
    output_doc = _section(document, "output", OUTPUT_KEYS)
    sweep_doc = _section(document, "sweep", SWEEP_KEYS)

    gate_fields: Dict[str, Any] = {GATE_KEYS[key]: value for key, value in gate_doc.items()}
    if "points" in gate_fields:
        try:
            gate_fields["points"] = tuple((int(o), float(s)) for o, s in gate_fields["points"] or ())
        except (TypeError, ValueError):
            raise ConfigurationError("gate.points must be a list of [offset, strength] pairs") from None
    if "num_sites" in system_doc:
        gate_fields["num_sites"] = system_doc["num_sites"]
    if "qubit_decay_over_J" in system_doc:
        gate_fields["qubit_decay"] = system_doc["qubit_decay_over_J"]
    if "cavity_decay_over_J" in system_doc:
        gate_fields["cavity_decay"] = system_doc["cavity_decay_over_J"]

    preset_id = document.get("preset")
    try:
        if preset_id is not None:
            base = preset(str(preset_id), num_sites=gate_fields.pop("num_sites", DEFAULT_NUM_SITES))
            gate = base.with_changes(**gate_fields)
        else:
            gate = GateConfig(**gate_fields)
    except TypeError as exc:
        raise ConfigurationError(f"invalid gate configuration: {exc}") from None

    solver_fields = {SOLVER_KEYS[key]: value for key, value in solver_doc.items()}
    if solver_fields.get("t_max") is None and preset_id is not None and "g" not in gate_fields:
        solver_fields["t_max"] = preset_horizon(str(preset_id))
    solver_fields["threads"] = resolve_threads(solver_fields.get("threads"))
    solver = SolverConfig(**solver_fields)

    output = OutputConfig(
        directory=Path(output_doc["directory"]) if output_doc.get("directory") else default_output_dir(),
        prefix=output_doc.get("prefix"),
        json=_as_bool(output_doc.get("json", False), "output.json"),
        gnuplot=_as_bool(output_doc.get("gnuplot", True), "output.gnuplot"),
    )

    sweep = SweepConfig(
        g_values=tuple(sweep_doc.get("g_list_over_J", DEFAULT_SWEEP_G)),
        qubit_decay=sweep_doc.get("qubit_decay_over_J", DEFAULT_QUBIT_DECAY),
        cavity_decay=sweep_doc.get("cavity_decay_over_J", DEFAULT_CAVITY_DECAY),
        calibrate=_as_bool(sweep_doc.get("calibrate", True), "sweep.calibrate"),
        search_halfwidth=sweep_doc.get("search_halfwidth_over_J", DEFAULT_SEARCH_HALFWIDTH),
    )

    hopping_MHz = system_doc.get("hopping_MHz")
    if hopping_MHz is not None:
        validate_positive(hopping_MHz, "hopping_MHz")

    return RunConfig(
        gate=gate,
        solver=solver,
        output=output,
        sweep=sweep,
        hopping_MHz=hopping_MHz,
        source=source,
    )


def load_config(path: Path | str) -> RunConfig:
    """Load and validate a YAML run configuration.

    Args:
        path: Path to a ``.yaml`` / ``.yml`` file

    Returns:
        RunConfig

    Raises:
        ConfigurationError: If the file is missing, unreadable or invalid
    """
    file_path = validate_file_path(path)
    try:
        with open(file_path, "r", encoding="utf-8") as handle:
            document = yaml.safe_load(handle)
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"cannot parse {file_path}: {exc}") from None
    except OSError as exc:
        raise ConfigurationError(f"cannot read {file_path}: {exc}") from None

    if document is None:
        document = {}
    if not isinstance(document, Mapping):
        raise ConfigurationError(f"{file_path} must contain a mapping at the top level")

    config = build_run_config(document, source=file_path)
    logger.debug("Loaded configuration %s: %s", file_path, config.gate)
    return config


def config_from_preset(preset_id: str) -> RunConfig:
    """RunConfig for a preset with default solver, output and sweep settings."""
    return build_run_config({"preset": preset_id})
