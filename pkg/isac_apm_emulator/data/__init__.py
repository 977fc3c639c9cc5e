"""
Data persistence and storage.

Handles:
- Scenario files (JSON) and bundled scenarios
- CFR datasets (ISACCFR1 binary)
- Config bundles and tolerance tables
- Run reports and detection lists
- Heatmap export (CSV, PGM)
"""

from .config_store import load_tolerances, read_config_bundle, write_config_bundle
from .dataset_io import dataset_file_size, read_dataset, write_dataset
from .heatmap_export import write_heatmap_csv, write_pgm
from .report_store import load_report, save_detections, save_report
from .scenario_store import (
    list_bundled_scenarios,
    load_bundled_scenario,
    load_scenario,
    resolve_scenario,
    save_scenario,
)

__all__ = [
    "load_scenario",
    "save_scenario",
    "resolve_scenario",
    "list_bundled_scenarios",
    "load_bundled_scenario",
    "read_dataset",
    "write_dataset",
    "dataset_file_size",
    "write_config_bundle",
    "read_config_bundle",
    "load_tolerances",
    "save_report",
    "load_report",
    "save_detections",
    "write_heatmap_csv",
    "write_pgm",
]
