"""
Scenario store - loads and saves scenario files and exposes the scenarios
bundled with the package.

Scenario files are JSON: indent 2, keys in the documented order, trailing
newline. Saving a loaded scenario reproduces the file byte for byte.
"""

from __future__ import annotations

import hashlib
import json
from importlib import resources
from pathlib import Path
from typing import Optional, Union

from ..core.errors import ScenarioParseError
from ..models.scenario import SensingScenario
from ..utils.logger import get_logger
from .atomic import atomic_write_text, dump_json

logger = get_logger(__name__)

BUNDLED_PACKAGE = "isac_apm_emulator.scenarios"
SCENARIO_SUFFIX = ".json"


def parse_scenario(text: str, source: str = "<scenario>") -> SensingScenario:
    """
    Parse scenario text.

    Syntax errors carry line and column; schema errors carry the key path.

    Args:
        text: JSON document
        source: Name used in diagnostics

    Returns:
        The scenario
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioParseError(e.msg, path=source, line=e.lineno, column=e.colno) from None
    try:
        return SensingScenario.from_dict(data)
    except ScenarioParseError as e:
        raise ScenarioParseError(e.detail, path=source, key_path=e.key_path) from None


def scenario_to_text(scenario: SensingScenario) -> str:
    """Canonical file text of a scenario."""
    return dump_json(scenario.to_dict())


def load_scenario(path: Union[str, Path]) -> SensingScenario:
    """Load a scenario file (OSError propagates with the path)."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    scenario = parse_scenario(text, str(path))
    logger.info(f"Loaded scenario {scenario} from {path}")
    return scenario


def save_scenario(scenario: SensingScenario, path: Union[str, Path]) -> Path:
    """Write a scenario file atomically."""
    out = atomic_write_text(Path(path), scenario_to_text(scenario))
    logger.info(f"Saved scenario '{scenario.name}' to {out}")
    return out


def scenario_digest(text: str) -> str:
    """SHA-256 of scenario text, recorded as report provenance."""
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


# =============================================================================
# Bundled scenarios
# =============================================================================

def list_bundled_scenarios() -> list[str]:
    """Names of the scenarios shipped with the package."""
    root = resources.files(BUNDLED_PACKAGE)
    return sorted(
        entry.name[: -len(SCENARIO_SUFFIX)]
        for entry in root.iterdir()
        if entry.name.endswith(SCENARIO_SUFFIX)
    )


def bundled_scenario_text(name: str) -> str:
    """Text of a bundled scenario by name (with or without suffix)."""
    stem = name[: -len(SCENARIO_SUFFIX)] if name.endswith(SCENARIO_SUFFIX) else name
    if stem not in list_bundled_scenarios():
        raise FileNotFoundError(f"no bundled scenario named '{name}'")
    return resources.files(BUNDLED_PACKAGE).joinpath(stem + SCENARIO_SUFFIX).read_text(encoding="utf-8")


def load_bundled_scenario(name: str) -> SensingScenario:
    """Load a bundled scenario by name."""
    return parse_scenario(bundled_scenario_text(name), f"bundled:{name}")


def resolve_scenario(reference: Union[str, Path]) -> tuple[SensingScenario, str]:
    """
    Load a scenario from a path, falling back to a bundled name.

    Returns:
        (scenario, source text) - the text feeds the provenance digest
    """
    path = Path(reference)
    if path.exists():
        text = path.read_text(encoding="utf-8")
        return parse_scenario(text, str(path)), text
    name = str(reference)
    try:
        text = bundled_scenario_text(name)
    except FileNotFoundError:
        raise FileNotFoundError(f"scenario file not found: {path}") from None
    return parse_scenario(text, f"bundled:{name}"), text


def export_bundled_scenario(name: str, out_dir: Union[str, Path], filename: Optional[str] = None) -> Path:
    """Copy a bundled scenario into ``out_dir``."""
    text = bundled_scenario_text(name)
    stem = name[: -len(SCENARIO_SUFFIX)] if name.endswith(SCENARIO_SUFFIX) else name
    return atomic_write_text(Path(out_dir) / (filename or stem + SCENARIO_SUFFIX), text)
