"""
Changelog - Version history and changes.

The first key is the current version; it is echoed into every run report.
"""

from typing import Final

# Changelog entries: version -> list of changes
# Add new versions at the TOP of this dict
CHANGELOG: Final[dict[str, list[str]]] = {
    "0.1.0": [
        "ADTR and SATR configuration compiler (APM weights + RTS unit CIR sequences)",
        "CFR synthesis engine with ISACCFR1 dataset files",
        "Range-velocity maps, PADP/PAS beamforming and near-field joint range-angle estimation",
        "compile / synthesize / estimate / run / report command-line verbs",
    ],
}


def release_notes(version: str) -> list[str]:
    """
    Return the changes listed for a version.

    Args:
        version: Version string like "0.1.0"

    Returns:
        List of change descriptions (empty for unknown versions)
    """
    return list(CHANGELOG.get(version, []))
