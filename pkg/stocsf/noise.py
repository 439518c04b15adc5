"""Seeded Brownian increments and their refinement-consistent coarse views."""
import logging

import numpy as np

from .classes.brownian_path import BrownianPath
from .const import UINT64_MASK
from .exceptions import InvalidInputError

_LOGGER = logging.getLogger(__name__)


def _generator(seed: int) -> np.random.Generator:
    # Philox is counter based, so the stream for a seed does not depend on platform or build
    return np.random.Generator(np.random.Philox(int(seed) & UINT64_MASK))


def sample_path(seed: int, base_dt: float, count: int) -> BrownianPath:
    """
    Draw count independent Normal(0, base_dt) increments.

    The triple (seed, base_dt, count) fixes the result bit for bit.
    """
    if not base_dt > 0:
        raise InvalidInputError(f"base_dt must be positive, got {base_dt}")
    if int(count) != count or count < 1:
        raise InvalidInputError(f"count must be a positive integer, got {count}")
    increments = _generator(seed).standard_normal(int(count)) * np.sqrt(base_dt)
    W = np.empty(int(count) + 1)
    W[0] = 0.0
    np.cumsum(increments, out=W[1:])
    _LOGGER.debug("Sampled Brownian path seed=%s base_dt=%s count=%s", seed, base_dt, count)
    return BrownianPath(seed=int(seed), base_dt=float(base_dt), W=W)


def coarsen(path: BrownianPath, factor: int) -> BrownianPath:
    """Keep every factor-th grid value of W; coarse increments are block sums of fine ones."""
    if int(factor) != factor or factor < 1:
        raise InvalidInputError(f"Coarsening factor must be a positive integer, got {factor}")
    factor = int(factor)
    if path.count % factor:
        raise InvalidInputError(f"Coarsening factor {factor} does not divide {path.count} increments")
    return BrownianPath(seed=path.seed, base_dt=path.base_dt * factor, W=path.W[::factor])


def truncate(path: BrownianPath, count: int) -> BrownianPath:
    """First count increments of the path."""
    if count < 1 or count > path.count:
        raise InvalidInputError(f"Cannot take {count} increments from a path of {path.count}")
    return BrownianPath(seed=path.seed, base_dt=path.base_dt, W=path.W[:count + 1])


def refinement_factor(path: BrownianPath, dt: float) -> int:
    """Number of base steps per step of size dt; dt must be a whole multiple of base_dt."""
    factor = int(round(dt / path.base_dt))
    if factor < 1 or abs(factor * path.base_dt - dt) > 1e-9 * dt:
        raise InvalidInputError(f"dt={dt} is not a whole multiple of the path step {path.base_dt}")
    return factor


def path_for_steps(path: BrownianPath, dt: float, n_steps: int) -> BrownianPath:
    """View of the path on the grid of step dt covering n_steps steps."""
    factor = refinement_factor(path, dt)
    needed = n_steps * factor
    if needed > path.count:
        raise InvalidInputError(
            f"Brownian path covers t={path.duration:.6g} in {path.count} increments, {needed} needed for {n_steps} steps of {dt}"
        )
    return coarsen(truncate(path, needed), factor)


def member_seed(seed: int, index: int) -> int:
    """Seed of ensemble member index."""
    return seed + index
