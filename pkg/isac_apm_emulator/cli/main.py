"""
Command-line front end.

Verbs:
    compile      scenario -> APM weights + RTS unit configs per snapshot
    synthesize   scenario -> ISACCFR1 datasets per snapshot
    estimate     dataset + scenario -> detections and heatmaps
    run          scenario -> compile, synthesize, estimate, compare, report
    report       saved report -> aligned text table
    scenarios    list or export the bundled scenarios

Exit codes are defined in core/constants.py (EXIT_*).
"""

from __future__ import annotations

import argparse
import logging
import sys
from contextlib import ExitStack
from pathlib import Path
from typing import Callable, Optional, Union

from tqdm import tqdm

from ..core.changelog import release_notes
from ..core.constants import (
    DATASET_SUFFIX,
    EXIT_FORMAT_ERROR,
    EXIT_IO_ERROR,
    EXIT_MODE_MISMATCH,
    EXIT_OK,
    EXIT_SCENARIO_ERROR,
    EXIT_TOLERANCE_FAILURE,
    EXIT_USAGE,
    FULL_SCALE_N_FREQ,
    FULL_SCALE_N_TIME,
    REPORT_FILENAME,
    VERSION,
    Events,
    Wavefront,
    WindowKind,
)
from ..core.errors import (
    DatasetFormatError,
    InvalidArgumentError,
    ModeMismatchError,
    ReportSchemaError,
    ScenarioParseError,
    ScenarioValidationError,
)
from ..core.event_bus import event_bus
from ..data.config_store import load_tolerances, write_config_bundle
from ..data.dataset_io import read_dataset, write_dataset
from ..data.heatmap_export import write_heatmap_csv, write_pgm
from ..data.report_store import detections_filename, load_report, save_detections, save_report
from ..data.scenario_store import (
    export_bundled_scenario,
    list_bundled_scenarios,
    load_bundled_scenario,
    resolve_scenario,
    scenario_digest,
)
from ..models.estimates import EstimationSettings
from ..models.scenario import SensingScenario
from ..services.pipeline import (
    AdtrEstimate,
    SatrEstimate,
    SnapshotResult,
    estimate_dataset,
    run_scenario,
    synthesize_snapshot,
)
from ..services.reporting import render_report
from ..services.validation import validate_scenario
from ..systems.compiler import compile_snapshot, scenario_geometry
from ..utils.logger import get_logger, setup_file_logging, setup_logging

logger = get_logger(__name__)


# =============================================================================
# Argument parsing
# =============================================================================

def _scenario_options() -> argparse.ArgumentParser:
    """Flags shared by every verb that loads a scenario."""
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument(
        "--scenario", required=True,
        help="scenario file, or the name of a bundled scenario",
    )
    parent.add_argument("--out", type=Path, default=Path("."), help="output directory")
    parent.add_argument("--nt", type=int, help="override N_t (CIR samples per snapshot)")
    parent.add_argument("--nf", type=int, help="override N_f (frequency points)")
    parent.add_argument(
        "--full-scale", action="store_true",
        help=f"use the full measurement sizes (N_t={FULL_SCALE_N_TIME}, N_f={FULL_SCALE_N_FREQ})",
    )
    parent.add_argument("--phase-bits", type=int, help="APM phase quantization bits")
    parent.add_argument("--amp-step-db", type=float, help="APM amplitude step in dB")
    parent.add_argument("--ideal", action="store_true", help="disable APM quantization")
    parent.add_argument("--noise-snr-db", type=float, help="add white noise at this SNR")
    parent.add_argument("--seed", type=int, help="noise seed")
    parent.add_argument("--workers", type=int, help="synthesis worker threads")
    return parent


def _estimation_options() -> argparse.ArgumentParser:
    """Flags shared by the verbs that run the estimation chain."""
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--pad", type=int, help="zero-padding factor on both FFT axes")
    parent.add_argument(
        "--window", choices=[w.value for w in WindowKind],
        default=WindowKind.HANNING.value, help="taper before each transform",
    )
    parent.add_argument("--port", type=int, default=0, help="ADTR port of the range-velocity map")
    parent.add_argument(
        "--estimator-wavefront", choices=[w.value for w in Wavefront],
        default=Wavefront.NEAR.value, help="SATR matched-filter wavefront model",
    )
    return parent


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser for every verb."""
    parser = argparse.ArgumentParser(
        prog="isac-emulator",
        description="Conductive multi-target emulation simulator for ISAC base stations.",
    )
    parser.add_argument("--version", action="store_true", help="print version and release notes")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="warnings only, no progress")

    scenario_opts = _scenario_options()
    estimation_opts = _estimation_options()
    verbs = parser.add_subparsers(dest="verb", metavar="VERB")

    verbs.add_parser(
        "compile", parents=[scenario_opts],
        help="write APM/RTS configuration bundles per snapshot",
    )
    verbs.add_parser(
        "synthesize", parents=[scenario_opts],
        help="write one CFR dataset per snapshot",
    )
    estimate = verbs.add_parser(
        "estimate", parents=[scenario_opts, estimation_opts],
        help="estimate targets from a CFR dataset",
    )
    estimate.add_argument("--dataset", type=Path, required=True, help="ISACCFR1 dataset file")
    run = verbs.add_parser(
        "run", parents=[scenario_opts, estimation_opts],
        help="compile, synthesize, estimate and compare against the scenario",
    )
    run.add_argument("--tolerances", type=Path, help="JSON tolerance table")
    report = verbs.add_parser("report", help="render a saved run report")
    report.add_argument("report_path", type=Path, help="report JSON file")
    scenarios = verbs.add_parser("scenarios", help="list or export bundled scenarios")
    scenarios.add_argument("--export", metavar="NAME", help="copy a bundled scenario")
    scenarios.add_argument("--out", type=Path, default=Path("."), help="export directory")
    return parser


# =============================================================================
# Shared helpers
# =============================================================================

class _ProgressDisplay:
    """Renders pipeline events on stderr: tqdm bars for synthesis, one line per stage."""

    def __init__(self, enabled: bool):
        self.enabled = enabled
        self._bars: dict[str, tqdm] = {}
        self._subscriptions = ExitStack()

    def __enter__(self) -> _ProgressDisplay:
        if self.enabled:
            for event, handler in (
                (Events.SYNTHESIS_PROGRESS, self.on_progress),
                (Events.STAGE_STARTED, self.on_stage),
                (Events.SNAPSHOT_ESTIMATED, self.on_estimated),
                (Events.DATASET_WRITTEN, self.on_written),
            ):
                self._subscriptions.enter_context(event_bus.listening(event, handler))
        return self

    def __exit__(self, *exc: object) -> None:
        self._subscriptions.close()
        for bar in self._bars.values():
            bar.close()
        self._bars.clear()

    def on_progress(self, label: str, done: int, total: int) -> None:
        bar = self._bars.get(label)
        if bar is None:
            bar = tqdm(
                total=total, desc=f"synthesize {label}", unit="chunk", file=sys.stderr, leave=False
            )
            self._bars[label] = bar
        bar.update(done - bar.n)
        if done >= total:
            bar.close()
            del self._bars[label]

    def on_stage(self, stage: str, label: str) -> None:
        tqdm.write(f"{label}: {stage}", file=sys.stderr)

    def on_estimated(self, label: str, detections: int) -> None:
        tqdm.write(f"{label}: {detections} detection(s)", file=sys.stderr)

    def on_written(self, path: Path, label: str) -> None:
        tqdm.write(f"{label}: wrote {path}", file=sys.stderr)


def _load_scenario(args: argparse.Namespace) -> tuple[SensingScenario, str]:
    """Resolve, override and validate the scenario named on the command line."""
    scenario, text = resolve_scenario(args.scenario)
    n_time, n_freq = args.nt, args.nf
    if args.full_scale:
        n_time = n_time or FULL_SCALE_N_TIME
        n_freq = n_freq or FULL_SCALE_N_FREQ
    scenario = scenario.with_overrides(
        n_time=n_time,
        n_freq=n_freq,
        phase_bits=args.phase_bits,
        amp_step_db=args.amp_step_db,
        ideal=True if args.ideal else None,
        snr_db=args.noise_snr_db,
        seed=args.seed,
    )
    violations = validate_scenario(scenario)
    if violations:
        raise ScenarioValidationError(violations)
    logger.info(f"Loaded scenario {scenario}")
    return scenario, text


def _estimation_settings(args: argparse.Namespace) -> EstimationSettings:
    if args.pad is None:
        return EstimationSettings(window=WindowKind(args.window))
    return EstimationSettings(window=WindowKind(args.window), pad_time=args.pad, pad_freq=args.pad)


def _prepare_out(out_dir: Path) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    setup_file_logging(out_dir)
    return out_dir


def _write_estimate(
    out_dir: Path,
    label: str,
    mode: str,
    estimate: Union[AdtrEstimate, SatrEstimate],
) -> None:
    """Write the detection list and the heatmaps of one snapshot."""
    if isinstance(estimate, AdtrEstimate):
        save_detections(
            out_dir / detections_filename(label), label, mode, estimate.targets,
            truncated=estimate.detections.truncated,
        )
        rv = estimate.rv_map
        write_heatmap_csv(
            out_dir / f"rv_{label}.csv", rv.power_db, "velocity_mps", rv.velocity_mps,
            "range_m", rv.range_m, title=f"range-velocity map {label} port {rv.port}",
            peaks=list(estimate.detections),
        )
        write_pgm(out_dir / f"rv_{label}.pgm", rv.power_db)
        for i, pas in enumerate(estimate.slices):
            write_heatmap_csv(
                out_dir / f"pas_{label}_{i}.csv", pas.power_db, "elevation_deg", pas.elevation_deg,
                "azimuth_deg", pas.azimuth_deg,
                title=f"power angular spectrum {label} at {pas.delay_s * 1e9:.1f} ns",
                peaks=[pas.peak],
            )
            write_pgm(out_dir / f"pas_{label}_{i}.pgm", pas.power_db)
    else:
        save_detections(out_dir / detections_filename(label), label, mode, estimate.targets)
        joint = estimate.joint_map
        write_heatmap_csv(
            out_dir / f"joint_{label}.csv", joint.power_db, "range_m", joint.range_m,
            "angle_deg", joint.angle_deg,
            title=f"joint range-angle map {label} ({joint.wavefront.value} field)",
            peaks=[joint.peak],
        )
        write_pgm(out_dir / f"joint_{label}.pgm", joint.power_db)


def _print_targets(label: str, estimate: Union[AdtrEstimate, SatrEstimate]) -> None:
    print(f"{label}: {len(estimate.targets)} target(s)")
    for i, target in enumerate(estimate.targets):
        fields = "  ".join(f"{k}={v:.3f}" for k, v in target.to_dict().items())
        print(f"  [{i}] {fields}")


# =============================================================================
# Verbs
# =============================================================================

def cmd_compile(args: argparse.Namespace) -> int:
    """Write one configuration bundle per snapshot."""
    scenario, _ = _load_scenario(args)
    out_dir = _prepare_out(args.out)
    geometry = scenario_geometry(scenario)
    for snapshot in scenario.snapshots:
        apm, units = compile_snapshot(scenario, snapshot, geometry)
        path = write_config_bundle(out_dir, scenario.name, snapshot.label, apm, units)
        summary = apm.resource_summary()
        print(
            f"{path}: {summary['rts_units']} RTS unit(s), {summary['type_a_ports']} Type-A / "
            f"{summary['type_b_ports']} Type-B ports, {summary['active_links']} active links"
        )
    return EXIT_OK


def cmd_synthesize(args: argparse.Namespace) -> int:
    """Write one dataset per snapshot."""
    scenario, _ = _load_scenario(args)
    out_dir = _prepare_out(args.out)
    geometry = scenario_geometry(scenario)
    with _ProgressDisplay(enabled=not args.quiet):
        for snapshot in scenario.snapshots:
            _, _, dataset = synthesize_snapshot(scenario, snapshot, geometry, args.workers)
            path = write_dataset(dataset, out_dir / f"cfr_{snapshot.label}{DATASET_SUFFIX}")
            event_bus.publish(Events.DATASET_WRITTEN, path=path, label=snapshot.label)
            print(path)
    return EXIT_OK


def cmd_estimate(args: argparse.Namespace) -> int:
    """Estimate targets from a dataset and write detections and heatmaps."""
    scenario, _ = _load_scenario(args)
    dataset = read_dataset(args.dataset)
    out_dir = _prepare_out(args.out)
    with _ProgressDisplay(enabled=not args.quiet):
        estimate = estimate_dataset(
            dataset,
            scenario,
            _estimation_settings(args),
            port=args.port,
            wavefront=Wavefront(args.estimator_wavefront),
        )
    _write_estimate(out_dir, dataset.label, dataset.mode.value, estimate)
    _print_targets(dataset.label, estimate)
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    """End-to-end run with a tolerance report."""
    scenario, text = _load_scenario(args)
    tolerances = load_tolerances(args.tolerances) if args.tolerances else None
    out_dir = _prepare_out(args.out)

    def on_snapshot(result: SnapshotResult) -> None:
        _write_estimate(out_dir, result.snapshot.label, scenario.mode.value, result.estimate)

    with _ProgressDisplay(enabled=not args.quiet):
        result = run_scenario(
            scenario,
            settings=_estimation_settings(args),
            tolerances=tolerances,
            provenance={"scenario_digest": scenario_digest(text), "scenario_source": str(args.scenario)},
            workers=args.workers,
            on_snapshot=on_snapshot,
            keep_results=False,
        )
    save_report(result.report, out_dir / REPORT_FILENAME)
    sys.stdout.write(render_report(result.report))
    return EXIT_OK if result.report.all_passed else EXIT_TOLERANCE_FAILURE


def cmd_report(args: argparse.Namespace) -> int:
    """Render a saved report."""
    sys.stdout.write(render_report(load_report(args.report_path)))
    return EXIT_OK


def cmd_scenarios(args: argparse.Namespace) -> int:
    """List the bundled scenarios or export one."""
    if args.export:
        print(export_bundled_scenario(args.export, args.out))
        return EXIT_OK
    for name in list_bundled_scenarios():
        print(f"{name}: {load_bundled_scenario(name)}")
    return EXIT_OK


COMMANDS: dict[str, Callable[[argparse.Namespace], int]] = {
    "compile": cmd_compile,
    "synthesize": cmd_synthesize,
    "estimate": cmd_estimate,
    "run": cmd_run,
    "report": cmd_report,
    "scenarios": cmd_scenarios,
}


# =============================================================================
# Entry point
# =============================================================================

def _print_version() -> None:
    print(f"isac-emulator {VERSION}")
    for change in release_notes(VERSION):
        print(f"  - {change}")


def main(argv: Optional[list[str]] = None) -> int:
    """
    Run the command line.

    Args:
        argv: Arguments without the program name (defaults to sys.argv[1:])

    Returns:
        Process exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    if args.version:
        _print_version()
        return EXIT_OK
    if args.verb is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE

    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    setup_logging(level)

    try:
        return COMMANDS[args.verb](args)
    except ScenarioValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SCENARIO_ERROR
    except ScenarioParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SCENARIO_ERROR
    except (DatasetFormatError, ReportSchemaError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FORMAT_ERROR
    except ModeMismatchError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_MODE_MISMATCH
    except InvalidArgumentError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        where = f" ({e.filename})" if getattr(e, "filename", None) else ""
        print(f"error: {e.strerror or e}{where}", file=sys.stderr)
        return EXIT_IO_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
