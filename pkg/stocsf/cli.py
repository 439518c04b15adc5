"""Command-line entry point: single runs, ensembles and convergence studies."""
import asyncio
import csv
import logging
import sys
from pathlib import Path

import numpy as np

from .classes.curve import write_curve_csv
from .classes.order_estimate import write_order_csv
from .classes.trajectory import TrajectoryWriter, write_diagnostics_csv
from .config_flow import INITIAL_CIRCLE, STUDY_CIRCLE, STUDY_ORDER, RunSettings, build_initial_state, parse_config
from .const import (
    CIRCLE_REFERENCE_FILE,
    CURVES_DIR,
    DIAGNOSTICS_FILE,
    ENSEMBLE_MEMBERS_FILE,
    ENSEMBLE_SUMMARY_FILE,
    EXIT_BLOWUP,
    EXIT_ERROR,
    EXIT_OK,
    ORDER_FILE,
    REFERENCE_REFINEMENT,
    TRAJECTORY_FILE,
)
from .coordinator import run_flow
from .ensemble import async_run_ensemble, write_members_csv, write_summary_json
from .exceptions import BlowUpSignal, ConfigError, StocsfError
from .geometry import reconstruct_curve
from .noise import sample_path
from .oracles import circle_sde_reference, estimate_strong_order

_LOGGER = logging.getLogger(__name__)


def _output_dir(settings: RunSettings) -> Path:
    path = Path(settings.output_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def run_command(settings: RunSettings) -> int:
    """Run one path and write trajectory, diagnostics and optionally curves."""
    config = settings.config
    initial = build_initial_state(settings.initial, config.N)
    path = sample_path(config.seed, config.dt, config.n_steps)
    out = _output_dir(settings)
    with TrajectoryWriter(out / TRAJECTORY_FILE) as writer:
        record = run_flow(initial, config, path, settings.snapshot_every, writer)
    write_diagnostics_csv(record, out / DIAGNOSTICS_FILE)
    if settings.write_curves:
        curves = out / CURVES_DIR
        curves.mkdir(exist_ok=True)
        for index, snapshot in enumerate(record.snapshots):
            curve = reconstruct_curve(snapshot.state, (0.0, 0.0), 0.0, 4 * config.N)
            write_curve_csv(curve, curves / f"snapshot_{index:05d}.csv")
    _LOGGER.info("Wrote %s snapshots to %s", len(record.snapshots), out)

    if record.stop_reason is not None:
        _LOGGER.info("Stopped at t=%.6g: %s", record.t_stop, record.stop_reason)
        return EXIT_BLOWUP
    return EXIT_OK


def ensemble_command(settings: RunSettings, count: int) -> int:
    """Run count members with seeds seed+0..count-1 and write member and summary files; exits 2 if any member stopped."""
    config = settings.config
    initial = build_initial_state(settings.initial, config.N)
    out = _output_dir(settings)
    outcomes, summary = asyncio.run(
        async_run_ensemble(
            initial,
            config,
            count,
            snapshot_every=settings.snapshot_every,
            member_dir=str(out / "members"),
            workers=settings.workers,
        )
    )
    write_members_csv(outcomes, out / ENSEMBLE_MEMBERS_FILE)
    write_summary_json(summary, out / ENSEMBLE_SUMMARY_FILE)
    return EXIT_BLOWUP if summary["stopped"] else EXIT_OK


def order_study_command(settings: RunSettings) -> int:
    config = settings.config
    initial = build_initial_state(settings.initial, config.N)
    estimate = estimate_strong_order(
        initial, config, settings.seed_list, settings.refinements, workers=settings.workers or 1
    )
    write_order_csv(estimate, _output_dir(settings) / ORDER_FILE)
    _LOGGER.info("Fitted strong order %.3f", estimate.fitted_order)
    return EXIT_OK


def circle_study_command(settings: RunSettings) -> int:
    """Full PDE against the 1-D radius SDE on one shared path."""
    if settings.initial.kind != INITIAL_CIRCLE:
        raise ConfigError("study", "circle needs a circle:R0 initial condition")
    config = settings.config
    (radius,) = settings.initial.params
    initial = build_initial_state(settings.initial, config.N)
    path = sample_path(config.seed, config.dt / REFERENCE_REFINEMENT, config.n_steps * REFERENCE_REFINEMENT)
    record = run_flow(initial, config, path, settings.snapshot_every)
    try:
        reference = circle_sde_reference(radius, config.sigma, path, config.dt, config.t_end)
    except BlowUpSignal as signal:
        _LOGGER.info("Circle reference stopped at t=%.6g: %s", signal.t, signal.reason)
        return EXIT_BLOWUP

    with open(_output_dir(settings) / CIRCLE_REFERENCE_FILE, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["t", "L", "L_reference", "relative_error", "f_spread"])
        for snap in record.snapshots:
            step = int(round((snap.t - initial.t) / config.dt))
            L_ref = reference.L[step]
            writer.writerow([
                repr(snap.t),
                repr(snap.L),
                repr(float(L_ref)),
                repr(float(abs(snap.L - L_ref) / L_ref)),
                repr(float(np.ptp(snap.f))),
            ])
    return EXIT_BLOWUP if record.stop_reason is not None else EXIT_OK


def dispatch(settings: RunSettings) -> int:
    if settings.study == STUDY_ORDER:
        return order_study_command(settings)
    if settings.study == STUDY_CIRCLE:
        return circle_study_command(settings)
    if settings.ensemble is not None:
        return ensemble_command(settings, settings.ensemble)
    return run_command(settings)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    logging.basicConfig(
        level=logging.DEBUG if "--verbose" in argv else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        settings = parse_config(argv)
    except SystemExit as exit_request:
        # argparse exits 2 on bad usage, which would read as a blow-up stop
        return EXIT_OK if exit_request.code in (0, None) else EXIT_ERROR
    except StocsfError as err:
        _LOGGER.error("%s", err)
        return EXIT_ERROR
    try:
        return dispatch(settings)
    except StocsfError as err:
        _LOGGER.error("%s", err)
        return EXIT_ERROR
    except OSError as err:
        _LOGGER.error("I/O failure: %s", err)
        return EXIT_ERROR
