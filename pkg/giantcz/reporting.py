"""Result files: CSV tables, JSON documents, gnuplot scripts and text summaries."""

from __future__ import annotations

import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

import numpy as np
import pandas as pd

from .constants import (
    CSV_EXTENSION,
    CSV_FLOAT_FORMAT,
    GNUPLOT_EXTENSION,
    JSON_EXTENSION,
    SCHEMA_VERSION,
    TEXT_EXTENSION,
)
from .operators import SparseOperator
from .protocol import gate_time_ns
from .tomography import GateResult
from .validators import sanitize_filename_component

logger = logging.getLogger(__name__)


def build_filename(directory: Path, prefix: str, kind: str, suffix: str) -> Path:
    """``<directory>/<prefix>_<kind><suffix>`` with sanitized components.

    Examples:
        >>> build_filename(Path("results"), "3e", "dynamics", ".csv").as_posix()
        'results/3e_dynamics.csv'
    """
    name = f"{sanitize_filename_component(prefix)}_{sanitize_filename_component(kind)}{suffix}"
    return Path(directory) / name


def _prepare(path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def save_table(df: pd.DataFrame, directory: Path, prefix: str, kind: str) -> Path:
    """Write a DataFrame as CSV: header first, '.' decimal point, overwriting."""
    output_path = _prepare(build_filename(directory, prefix, kind, CSV_EXTENSION))
    df.to_csv(output_path, index=False, float_format=CSV_FLOAT_FORMAT, mode="w")
    logger.info("Wrote %s (%d rows)", output_path, len(df))
    return output_path


def _jsonable(value: Any) -> Any:
    if isinstance(value, Mapping):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def build_document(kind: str, payload: Mapping[str, Any]) -> Dict[str, Any]:
    """Single JSON document with the schema version up front."""
    document: Dict[str, Any] = {"schema_version": SCHEMA_VERSION, "kind": kind}
    document.update(_jsonable(payload))
    return document


def frame_records(df: pd.DataFrame) -> list:
    return [_jsonable(record) for record in df.to_dict(orient="records")]


def dumps_document(kind: str, payload: Mapping[str, Any]) -> str:
    return json.dumps(build_document(kind, payload), indent=2, sort_keys=False)


def save_json(kind: str, payload: Mapping[str, Any], directory: Path, prefix: str) -> Path:
    output_path = _prepare(build_filename(directory, prefix, kind, JSON_EXTENSION))
    output_path.write_text(dumps_document(kind, payload) + "\n", encoding="utf-8")
    logger.info("Wrote %s", output_path)
    return output_path


def save_gnuplot(script: str, directory: Path, prefix: str, kind: str) -> Path:
    output_path = _prepare(build_filename(directory, prefix, kind, GNUPLOT_EXTENSION))
    output_path.write_text(script, encoding="utf-8")
    return output_path


def save_hamiltonian_dump(
    operator: SparseOperator, directory: Path, prefix: str, kind: str
) -> Path:
    """Coordinate text dump, one ``row col re im`` entry per line."""
    output_path = _prepare(build_filename(directory, prefix, kind, TEXT_EXTENSION))
    with open(output_path, "w", encoding="utf-8") as handle:
        handle.write(
            f"# sector={operator.sector} dimension={operator.dimension} "
            f"nnz={operator.nnz} hermitian={operator.hermitian}\n"
        )
        for line in operator.coordinate_lines():
            handle.write(line + "\n")
    logger.info("Wrote %s (%d entries)", output_path, operator.nnz)
    return output_path


def format_table(df: pd.DataFrame) -> str:
    """Plain-text table for the terminal."""
    if df.empty:
        return "(no rows)"
    return df.to_string(index=False, float_format=lambda x: f"{x:.6f}")


def fidelity_summary(result: GateResult, hopping_MHz: Optional[float] = None) -> str:
    """One-line summary of a fidelity run.

    Examples:
        >>> fidelity_summary(GateResult(gate_time=74.0, process_fidelity=0.942))
        'F_process_max=0.9420 F_average=0.9536 at tJ=74.0 (phi1=+0.0000, phi2=+0.0000, trace_deficit=0.0000)'
    """
    phi1, phi2 = result.local_phases
    text = (
        f"F_process_max={result.process_fidelity:.4f} F_average={result.average_fidelity:.4f} "
        f"at tJ={result.gate_time:.1f} (phi1={phi1:+.4f}, phi2={phi2:+.4f}, "
        f"trace_deficit={result.trace_deficit:.4f})"
    )
    if hopping_MHz:
        text += f" tau={gate_time_ns(result.gate_time, hopping_MHz):.1f} ns"
    return text
