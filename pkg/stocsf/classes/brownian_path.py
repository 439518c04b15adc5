"""Seeded Brownian path shared by every scheme and refinement level."""
import struct
from dataclasses import dataclass

import numpy as np

from ..const import BMPATH_HEADER_FORMAT, BMPATH_HEADER_SIZE, BMPATH_MAGIC
from ..exceptions import InvalidInputError


@dataclass(frozen=True, eq=False)
class BrownianPath:
    """
    Brownian motion sampled on the grid t_j = j * base_dt.

    W holds the path values at grid times with W[0] = 0; increments are their differences.
    Keeping W as the canonical data makes coarsening a pure subsample, so a coarse path
    agrees with its fine parent at shared times bit for bit.
    """

    seed: int
    base_dt: float
    W: np.ndarray

    def __post_init__(self):
        if not self.base_dt > 0:
            raise InvalidInputError(f"base_dt must be positive, got {self.base_dt}")
        values = np.array(self.W, dtype=float)
        if values.ndim != 1 or len(values) < 2:
            raise InvalidInputError("Brownian path needs at least one increment")
        if values[0] != 0.0:
            raise InvalidInputError("Brownian path must start at W(0) = 0")
        values.setflags(write=False)
        object.__setattr__(self, "W", values)
        object.__setattr__(self, "base_dt", float(self.base_dt))

    @property
    def count(self) -> int:
        return len(self.W) - 1

    @property
    def increments(self) -> np.ndarray:
        return np.diff(self.W)

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self.W)) * self.base_dt

    @property
    def duration(self) -> float:
        return self.count * self.base_dt

    def value_at_step(self, step: int) -> float:
        return float(self.W[step])

    def same_as(self, other: "BrownianPath") -> bool:
        return (
            self.seed == other.seed
            and self.base_dt == other.base_dt
            and np.array_equal(self.W, other.W)
        )


def dump_path(path: BrownianPath, target) -> None:
    """Write the increments as a BMPATH01 binary file."""
    header = struct.pack(BMPATH_HEADER_FORMAT, BMPATH_MAGIC, int(path.seed), path.count)
    with open(target, "wb") as handle:
        handle.write(header)
        handle.write(path.increments.astype("<f8").tobytes())


def load_path(source, base_dt: float) -> BrownianPath:
    """
    Read a BMPATH01 file.

    The header does not carry base_dt, so the caller supplies it. W is rebuilt as the
    cumulative sum of the stored increments, which can differ from the generating path in
    the last bits.
    """
    with open(source, "rb") as handle:
        payload = handle.read()
    if len(payload) < BMPATH_HEADER_SIZE:
        raise InvalidInputError(f"{source}: truncated Brownian path header")
    magic, seed, count = struct.unpack(BMPATH_HEADER_FORMAT, payload[:BMPATH_HEADER_SIZE])
    if magic != BMPATH_MAGIC:
        raise InvalidInputError(f"{source}: bad magic {magic!r}")
    body = payload[BMPATH_HEADER_SIZE:]
    if len(body) != 8 * count:
        raise InvalidInputError(f"{source}: expected {count} increments, found {len(body) // 8}")
    increments = np.frombuffer(body, dtype="<f8").astype(float)
    W = np.concatenate(([0.0], np.cumsum(increments)))
    return BrownianPath(seed=seed, base_dt=base_dt, W=W)
