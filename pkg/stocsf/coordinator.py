"""Stepping loop that turns an initial state, a config and a Brownian path into a trajectory."""
import logging
import math
import time as time_lib
from datetime import datetime, timezone

from .classes.brownian_path import BrownianPath
from .classes.curvature_state import CurvatureState
from .classes.flow_config import FlowConfig
from .classes.trajectory import Diagnostics, Snapshot, TrajectoryRecord, TrajectoryWriter
from .const import INTEGRATION_TITLE, MAX_SNAPSHOTS, SCHEME_DETERMINISTIC
from .constants.scheme_types import scheme_description
from .constants.stop_reasons import STOP_REASONS
from .dynamics import check_step_size, step
from .exceptions import BlowUpSignal, InvalidInputError
from .geometry import closure_defect, seam_jump, turning_number
from .noise import path_for_steps
from .oracles import detect_blowup, length_from_integral
from .utils import noise_algorithm, package_version, periodic_mean

_LOGGER = logging.getLogger(__name__)


def default_snapshot_every(n_steps: int) -> int:
    """Cadence keeping a run at or below MAX_SNAPSHOTS snapshots, initial and final included."""
    return max(1, math.ceil(n_steps / (MAX_SNAPSHOTS - 2)))


class FlowCoordinator:
    """Class to manage advancing one flow run and recording its snapshots."""

    def __init__(
        self,
        initial: CurvatureState,
        config: FlowConfig,
        path: BrownianPath,
        snapshot_every: int | None = None,
        writer: TrajectoryWriter | None = None,
    ):
        """Initialize the coordinator; an open writer receives each snapshot as it is recorded."""
        if initial.N != config.N:
            raise InvalidInputError(f"Initial state has N={initial.N}, config expects N={config.N}")
        if snapshot_every is not None and snapshot_every < 1:
            raise InvalidInputError(f"snapshot_every must be positive, got {snapshot_every}")
        self.initial = initial
        self.config = config
        self.n_steps = config.n_steps
        self.path = path_for_steps(path, config.dt, self.n_steps)
        self.snapshot_every = snapshot_every or default_snapshot_every(self.n_steps)
        self.writer = writer
        self._steps_taken = 0
        self._snapshots_recorded = 0
        self._elapsed = 0.0
        self._stop_reason = None

    def _diagnostics(self, state: CurvatureState, f_sq: float, f_sq_time_integral: float, W_t: float) -> Diagnostics:
        exact = length_from_integral(self.initial.L, f_sq_time_integral, W_t, self.config.sigma)
        return Diagnostics(
            turning_number=turning_number(state),
            f_sq_integral=f_sq,
            closure_defect=closure_defect(state),
            exact_length_residual=abs(state.L - exact) / exact,
            sup_f=state.sup_f,
            seam_jump=seam_jump(state),
            W=W_t,
        )

    def _record(self, record: TrajectoryRecord, state: CurvatureState, f_sq: float, integral: float, W_t: float):
        snapshot = Snapshot(state.t, state.L, state.f, self._diagnostics(state, f_sq, integral, W_t))
        record.add_snapshot(snapshot)
        if self.writer is not None:
            self.writer.write_snapshot(snapshot)
        self._snapshots_recorded += 1
        _LOGGER.debug("Snapshot t=%.6g L=%.6g sup|f|=%.4g", state.t, state.L, state.sup_f)

    def run(self) -> TrajectoryRecord:
        """Advance until t_end or until the blow-up detector fires."""
        config = self.config
        if config.scheme == SCHEME_DETERMINISTIC and config.sigma > 0:
            _LOGGER.warning("sigma=%s is ignored by the deterministic scheme", config.sigma)
        check_step_size(config, self.initial.L)

        started = datetime.now(timezone.utc)
        clock = time_lib.monotonic()
        record = TrajectoryRecord(
            config=config.to_dict(),
            seed=self.path.seed,
            noise_algorithm=noise_algorithm(),
            version=package_version(),
        )
        if self.writer is not None:
            self.writer.write_header(record)
        _LOGGER.info(
            "%s: %s steps of %s with %s, sigma=%s, N=%s",
            INTEGRATION_TITLE, self.n_steps, config.dt, scheme_description(config.scheme)["description"], config.sigma, config.N,
        )

        increments = self.path.increments
        state = self.initial
        t0 = self.initial.t
        f_sq = periodic_mean(state.f * state.f)
        integral = 0.0
        last_recorded = 0
        self._record(record, state, f_sq, integral, 0.0)
        reason = detect_blowup(state, config)
        if reason is not None:
            record.stop_reason, record.t_stop = reason, state.t

        for index in range(self.n_steps if reason is None else 0):
            try:
                advanced = step(state, config, increments[index])
            except BlowUpSignal as signal:
                record.stop_reason, record.t_stop = signal.reason, signal.t
                break
            number = index + 1
            state = CurvatureState(advanced.f, advanced.L, t0 + number * config.dt)
            new_f_sq = periodic_mean(state.f * state.f)
            integral += 0.5 * config.dt * (f_sq + new_f_sq)
            f_sq = new_f_sq
            self._steps_taken = number

            reason = detect_blowup(state, config)
            if reason is not None or number % self.snapshot_every == 0 or number == self.n_steps:
                self._record(record, state, f_sq, integral, self.path.value_at_step(number))
                last_recorded = number
            if reason is not None:
                record.stop_reason, record.t_stop = reason, state.t
                break

        if record.stop_reason is not None and last_recorded != self._steps_taken:
            self._record(record, state, f_sq, integral, self.path.value_at_step(self._steps_taken))

        self._elapsed = time_lib.monotonic() - clock
        self._stop_reason = record.stop_reason
        record.metadata = {
            "started": started.isoformat(),
            "elapsed_seconds": self._elapsed,
            "steps": self._steps_taken,
            "version": package_version(),
        }
        if self.writer is not None:
            self.writer.write_footer(record)
        if record.stop_reason is not None:
            _LOGGER.info("Run stopped at t=%.6g: %s (%s)", record.t_stop, record.stop_reason, STOP_REASONS[record.stop_reason])
        else:
            _LOGGER.info("Run completed at t=%.6g, L=%.6g", state.t, state.L)
        return record

    def get_stats(self) -> dict:
        """Get run statistics for monitoring and debugging."""
        return {
            "steps_taken": self._steps_taken,
            "steps_planned": self.n_steps,
            "snapshots_recorded": self._snapshots_recorded,
            "stop_reason": self._stop_reason,
            "elapsed_seconds": self._elapsed,
            "steps_per_second": self._steps_taken / self._elapsed if self._elapsed > 0 else 0,
        }


def run_flow(
    initial: CurvatureState,
    config: FlowConfig,
    path: BrownianPath,
    snapshot_every: int | None = None,
    writer: TrajectoryWriter | None = None,
) -> TrajectoryRecord:
    """Run one flow with the configured scheme; see FlowCoordinator.run."""
    return FlowCoordinator(initial, config, path, snapshot_every, writer).run()
