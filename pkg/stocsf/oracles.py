"""Reference solutions and estimators used to validate the flow simulator."""
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .classes.brownian_path import BrownianPath
from .classes.curvature_state import CurvatureState
from .classes.flow_config import FlowConfig
from .classes.order_estimate import OrderEstimate, fit_order
from .classes.trajectory import TrajectoryRecord
from .const import DEFAULT_REFERENCE_LEVELS, REFERENCE_REFINEMENT
from .constants.stop_reasons import (
    REASON_CURVATURE_BLOWUP,
    REASON_LENGTH_COLLAPSE,
    REASON_LENGTH_EXPLOSION,
)
from .exceptions import BlowUpSignal, InvalidInputError
from .geometry import enclosed_area, isoperimetric_ratio, reconstructed_polygon
from .noise import path_for_steps, sample_path

_LOGGER = logging.getLogger(__name__)

AREA_LAW_LABEL = "external oracle (classical curve shortening area law)"


def detect_blowup(state: CurvatureState, config: FlowConfig) -> str | None:
    """Stopping reason for a state outside the configured thresholds, or None."""
    if np.max(np.abs(state.f)) > config.blowup_f_max:
        return REASON_CURVATURE_BLOWUP
    if state.L <= config.L_min:
        return REASON_LENGTH_COLLAPSE
    if state.L >= config.L_max:
        return REASON_LENGTH_EXPLOSION
    return None


def length_from_integral(L0: float, f_sq_time_integral: float, W_t: float, sigma: float) -> float:
    """L0 exp(-int_0^t int f^2 dr dtau - 2 sigma pi W_t)."""
    return float(L0 * np.exp(-f_sq_time_integral - 2.0 * sigma * np.pi * W_t))


def exact_length(L0: float, times, f_sq_values, W_t: float, t: float, sigma: float) -> float:
    """
    Closed-form length driven by a recorded history of int f^2 dr.

    The time integral is a trapezoid over the history up to t; the history must cover [0, t].
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(f_sq_values, dtype=float)
    if len(times) != len(values) or len(times) == 0:
        raise InvalidInputError("Time and f^2 histories must be nonempty and of equal length")
    if t < times[0] or t > times[-1] * (1.0 + 1e-12):
        raise InvalidInputError(f"History [{times[0]}, {times[-1]}] does not cover t={t}")
    inside = times < t
    grid = np.append(times[inside], t)
    samples = np.append(values[inside], np.interp(t, times, values))
    integral = float(np.sum(0.5 * (samples[1:] + samples[:-1]) * np.diff(grid)))
    return length_from_integral(L0, integral, W_t, sigma)


@dataclass(frozen=True, eq=False)
class CircleReference:
    times: np.ndarray
    f: np.ndarray
    L: np.ndarray


def circle_sde_reference(R0: float, sigma: float, path: BrownianPath, dt: float, t_end: float) -> CircleReference:
    """
    Euler-Maruyama for the radius of a circle,
    dR = (-1/R + 2 sigma^2 pi^2 R) dt - 2 pi sigma R dW,
    at dt / 100 on the given path, sampled back on the grid of step dt.
    """
    if not R0 > 0:
        raise InvalidInputError(f"R0 must be positive, got {R0}")
    n_steps = int(np.floor(t_end / dt * (1.0 + 1e-12)))
    fine_dt = dt / REFERENCE_REFINEMENT
    fine = path_for_steps(path, fine_dt, n_steps * REFERENCE_REFINEMENT)
    increments = np.diff(fine.W).tolist()

    growth = 2.0 * sigma * sigma * np.pi * np.pi
    noise = 2.0 * np.pi * sigma
    radii = np.empty(n_steps + 1)
    radii[0] = R = float(R0)
    for step in range(n_steps):
        for dW in increments[step * REFERENCE_REFINEMENT:(step + 1) * REFERENCE_REFINEMENT]:
            R = R + (growth * R - 1.0 / R) * fine_dt - noise * R * dW
            if not R > 0:
                raise BlowUpSignal(REASON_LENGTH_COLLAPSE, (step + 1) * dt)
        radii[step + 1] = R
    times = np.arange(n_steps + 1) * dt
    return CircleReference(times=times, f=1.0 / radii, L=2.0 * np.pi * radii)


@dataclass(frozen=True, eq=False)
class AreaLawSeries:
    times: np.ndarray
    areas: np.ndarray
    residuals: np.ndarray
    isoperimetric: np.ndarray
    label: str = AREA_LAW_LABEL


def deterministic_area_law(trajectory: TrajectoryRecord) -> AreaLawSeries:
    """
    Compare the enclosed area of each reconstructed snapshot against A(0) - 2 pi t,
    the area law of classical curve shortening.
    """
    if trajectory.config.get("sigma", 0.0) != 0.0:
        raise InvalidInputError("The area law only holds for noise-free runs (sigma = 0)")
    if not trajectory.snapshots:
        raise InvalidInputError("Trajectory has no snapshots")
    times = trajectory.times
    areas = np.array([enclosed_area(reconstructed_polygon(snap.state)) for snap in trajectory.snapshots])
    expected = areas[0] - 2.0 * np.pi * (times - times[0])
    ratios = np.array([isoperimetric_ratio(area, snap.L) for area, snap in zip(areas, trajectory.snapshots)])
    return AreaLawSeries(times=times, areas=areas, residuals=np.abs(areas - expected), isoperimetric=ratios)


def _pathwise_error(coarse: TrajectoryRecord, reference: TrajectoryRecord) -> float:
    ref_by_time = {snap.t: snap for snap in reference.snapshots}
    worst = 0.0
    for snap in coarse.snapshots:
        ref = ref_by_time.get(snap.t)
        if ref is None:
            continue
        worst = max(worst, abs(snap.L - ref.L) + float(np.max(np.abs(snap.f - ref.f))))
    return worst


def _seed_errors(args) -> list | None:
    """Errors of every level for one seed, or None when any run stopped early."""
    from .coordinator import run_flow

    initial, config, seed, dts, reference_dt = args
    n_steps = config.n_steps
    finest = round(config.dt / reference_dt)
    path = sample_path(seed, reference_dt, n_steps * finest)

    reference = run_flow(initial, replace(config, dt=reference_dt, seed=seed), path, snapshot_every=finest)
    if reference.stopped_early:
        return None
    errors = []
    for dt in dts:
        coarse = run_flow(initial, replace(config, dt=dt, seed=seed), path, snapshot_every=round(config.dt / dt))
        if coarse.stopped_early:
            return None
        errors.append(_pathwise_error(coarse, reference))
        _LOGGER.debug("seed=%s dt=%s error=%.3e", seed, dt, errors[-1])
    return errors


def estimate_strong_order(
    initial: CurvatureState,
    config: FlowConfig,
    seeds,
    refinements: int,
    reference_levels: int = DEFAULT_REFERENCE_LEVELS,
    workers: int = 1,
) -> OrderEstimate:
    """
    Pathwise error of dt, dt/2, ..., dt/2^(refinements-1) against a reference run at
    dt/2^(refinements-1+reference_levels), all on coarsened views of one Brownian path per
    seed. Errors are sup over the coarse grid of |dL| + max|df|, averaged over seeds.
    Seeds whose runs stop early are excluded and reported.
    """
    if refinements < 3:
        raise InvalidInputError(f"refinements must be at least 3, got {refinements}")
    if reference_levels < 1:
        raise InvalidInputError(f"reference_levels must be at least 1, got {reference_levels}")
    seeds = list(seeds)
    if not seeds:
        raise InvalidInputError("At least one seed is needed")

    dts = [config.dt / 2 ** level for level in range(refinements)]
    reference_dt = config.dt / 2 ** (refinements - 1 + reference_levels)
    jobs = [(initial, config, seed, dts, reference_dt) for seed in seeds]

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(_seed_errors, jobs))
    else:
        results = [_seed_errors(job) for job in jobs]

    used = [seed for seed, result in zip(seeds, results) if result is not None]
    excluded = [seed for seed, result in zip(seeds, results) if result is None]
    if excluded:
        _LOGGER.warning("Excluded seeds %s from the order estimate: run stopped before t_end", excluded)
    if not used:
        raise InvalidInputError("Every seed stopped before t_end; no order estimate possible")

    errors = np.mean([result for result in results if result is not None], axis=0)
    estimate = OrderEstimate(
        dts=dts,
        errors=[float(error) for error in errors],
        fitted_order=fit_order(dts, errors),
        reference_dt=reference_dt,
        seeds_used=used,
        excluded_seeds=excluded,
    )
    _LOGGER.info("Fitted strong order %.3f over dts %s (%s seeds)", estimate.fitted_order, dts, len(used))
    return estimate
