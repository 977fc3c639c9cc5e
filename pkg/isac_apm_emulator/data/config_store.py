"""
Config bundles and tolerance tables.

A config bundle holds everything loaded into the hardware for one snapshot:
the APM weight matrices and the RTS unit CIR sequences.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Union

from ..core.constants import CONFIG_SCHEMA_VERSION
from ..core.errors import InvalidArgumentError, ReportSchemaError
from ..models.emulation import ApmConfig, RtsUnitConfig
from ..services.reporting import check_tolerances, default_tolerances
from ..utils.logger import get_logger
from .atomic import atomic_write_json

logger = get_logger(__name__)


def config_filename(label: str) -> str:
    """File name of the bundle for a snapshot."""
    return f"config_{label}.json"


def bundle_to_dict(
    scenario_name: str,
    label: str,
    apm: ApmConfig,
    units: list[RtsUnitConfig],
) -> dict:
    """Serialize one snapshot's configuration."""
    return {
        "schema_version": CONFIG_SCHEMA_VERSION,
        "scenario": scenario_name,
        "label": label,
        "apm": apm.to_dict(),
        "rts_units": [u.to_dict() for u in units],
    }


def write_config_bundle(
    out_dir: Union[str, Path],
    scenario_name: str,
    label: str,
    apm: ApmConfig,
    units: list[RtsUnitConfig],
) -> Path:
    """Write a snapshot's bundle into ``out_dir``."""
    path = atomic_write_json(
        Path(out_dir) / config_filename(label), bundle_to_dict(scenario_name, label, apm, units)
    )
    logger.info(f"Wrote config bundle {path} ({len(units)} RTS unit(s))")
    return path


def read_config_bundle(path: Union[str, Path]) -> tuple[ApmConfig, list[RtsUnitConfig]]:
    """Read a bundle written by write_config_bundle."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if data.get("schema_version") != CONFIG_SCHEMA_VERSION:
        raise ReportSchemaError(
            f"{path}: unsupported config schema_version {data.get('schema_version')!r}"
        )
    apm = ApmConfig.from_dict(data["apm"])
    units = [RtsUnitConfig.from_dict(u) for u in data["rts_units"]]
    return apm, units


def load_tolerances(path: Union[str, Path]) -> dict[str, float]:
    """
    Load a tolerance table and fill in defaults for missing parameters.

    The file is a JSON object mapping parameter name to absolute tolerance.
    """
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise InvalidArgumentError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from None
    if not isinstance(data, dict):
        raise InvalidArgumentError(f"{path}: tolerance file must hold a JSON object")
    tolerances = default_tolerances()
    tolerances.update(check_tolerances(data))
    return tolerances
