"""Concurrent ensembles of independent flow runs."""
import asyncio
import csv
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .classes.curvature_state import CurvatureState
from .classes.flow_config import FlowConfig
from .classes.trajectory import TrajectoryWriter
from .const import ENSEMBLE_SUMMARY_POINTS
from .coordinator import run_flow
from .exceptions import InvalidInputError
from .noise import member_seed, sample_path

_LOGGER = logging.getLogger(__name__)

MEMBER_COLUMNS = ["member", "seed", "t_stop", "L", "sup_f", "reason"]


@dataclass(frozen=True, eq=False)
class MemberOutcome:
    member: int
    seed: int
    t_stop: float
    L: float
    sup_f: float
    reason: str | None
    times: np.ndarray
    log_length_ratios: np.ndarray


def default_ensemble_snapshot_every(n_steps: int) -> int:
    return max(1, math.ceil(n_steps / ENSEMBLE_SUMMARY_POINTS))


def run_member(initial: CurvatureState, config: FlowConfig, member: int, snapshot_every: int, member_dir: str | None) -> MemberOutcome:
    """Run ensemble member `member` on its own Brownian path; module level so it pickles."""
    seed = member_seed(config.seed, member)
    member_config = replace(config, seed=seed)
    path = sample_path(seed, config.dt, config.n_steps)
    if member_dir is None:
        record = run_flow(initial, member_config, path, snapshot_every)
    else:
        with TrajectoryWriter(Path(member_dir) / f"member_{member:05d}.jsonl") as writer:
            record = run_flow(initial, member_config, path, snapshot_every, writer)
    final = record.final
    return MemberOutcome(
        member=member,
        seed=seed,
        t_stop=record.t_stop if record.t_stop is not None else final.t,
        L=final.L,
        sup_f=final.diagnostics.sup_f,
        reason=record.stop_reason,
        times=record.times,
        log_length_ratios=np.log(record.lengths / initial.L),
    )


def summarize(outcomes: list, initial: CurvatureState, config: FlowConfig) -> dict:
    """
    Mean and variance of log(L/L0) over the members alive at each snapshot time.

    For f = 0 ensembles log(L/L0) = -2 sigma pi W_t exactly, so the reference mean is 0 and
    the reference variance 4 sigma^2 pi^2 t.
    """
    longest = max(outcomes, key=lambda outcome: len(outcome.times))
    times = longest.times
    index = {t: position for position, t in enumerate(times)}
    columns = [[] for _ in times]
    for outcome in outcomes:
        for t, value in zip(outcome.times, outcome.log_length_ratios):
            if t in index:
                columns[index[t]].append(value)

    summary = {
        "count": len(outcomes),
        "base_seed": config.seed,
        "sigma": config.sigma,
        "scheme": config.scheme,
        "dt": config.dt,
        "L0": initial.L,
        "times": [float(t) for t in times],
        "alive": [len(values) for values in columns],
        "mean_log_length_ratio": [float(np.mean(values)) for values in columns],
        "var_log_length_ratio": [float(np.var(values, ddof=1)) if len(values) > 1 else 0.0 for values in columns],
        "stopped": sum(1 for outcome in outcomes if outcome.reason is not None),
    }
    if not np.any(initial.f):
        summary["reference_mean_log_length_ratio"] = [0.0 for _ in times]
        summary["reference_var_log_length_ratio"] = [
            float(4.0 * config.sigma ** 2 * np.pi ** 2 * (t - times[0])) for t in times
        ]
    return summary


async def async_run_ensemble(
    initial: CurvatureState,
    config: FlowConfig,
    count: int,
    snapshot_every: int | None = None,
    member_dir: str | None = None,
    workers: int | None = None,
) -> tuple[list, dict]:
    """Run count members concurrently in worker processes; returns (outcomes, summary)."""
    if count < 1:
        raise InvalidInputError(f"Ensemble count must be at least 1, got {count}")
    every = snapshot_every or default_ensemble_snapshot_every(config.n_steps)
    if member_dir is not None:
        Path(member_dir).mkdir(parents=True, exist_ok=True)

    _LOGGER.info("Starting ensemble of %s members from seed %s", count, config.seed)
    loop = asyncio.get_running_loop()
    with ProcessPoolExecutor(max_workers=workers) as executor:
        futures = [
            loop.run_in_executor(executor, run_member, initial, config, member, every, member_dir)
            for member in range(count)
        ]
        outcomes = await asyncio.gather(*futures)
    _LOGGER.info("Ensemble finished: %s of %s members stopped early", sum(o.reason is not None for o in outcomes), count)
    return list(outcomes), summarize(list(outcomes), initial, config)


def write_members_csv(outcomes: list, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(MEMBER_COLUMNS)
        for outcome in outcomes:
            writer.writerow([
                outcome.member,
                outcome.seed,
                repr(float(outcome.t_stop)),
                repr(float(outcome.L)),
                repr(float(outcome.sup_f)),
                outcome.reason or "",
            ])


def write_summary_json(summary: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(summary, handle, indent=2)
