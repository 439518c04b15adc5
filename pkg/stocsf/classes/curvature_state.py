"""Curvature profile on the rescaled unit torus together with length and time."""
import json
from dataclasses import dataclass, replace

import numpy as np

from ..const import MIN_GRID
from ..exceptions import InvalidInputError


@dataclass(frozen=True, eq=False)
class CurvatureState:
    """Samples f_j = k(r_j L) on r_j = j/N, the curve length L and the time t."""

    f: np.ndarray
    L: float
    t: float = 0.0

    def __post_init__(self):
        f = np.array(self.f, dtype=float)
        if f.ndim != 1 or len(f) < MIN_GRID:
            raise InvalidInputError(f"Curvature grid needs at least {MIN_GRID} samples, got shape {f.shape}")
        if not self.L > 0:
            raise InvalidInputError(f"Length must be positive, got {self.L}")
        if not self.t >= 0:
            raise InvalidInputError(f"Time must be nonnegative, got {self.t}")
        f.setflags(write=False)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "L", float(self.L))
        object.__setattr__(self, "t", float(self.t))

    @property
    def N(self) -> int:
        return len(self.f)

    @property
    def dr(self) -> float:
        return 1.0 / len(self.f)

    @property
    def sup_f(self) -> float:
        return float(np.max(np.abs(self.f)))

    def with_length(self, length: float) -> "CurvatureState":
        return replace(self, L=length)

    def to_dict(self) -> dict:
        return {"t": self.t, "L": self.L, "f": [float(value) for value in self.f]}

    @classmethod
    def from_dict(cls, data: dict) -> "CurvatureState":
        return cls(f=np.array(data["f"], dtype=float), L=data["L"], t=data.get("t", 0.0))

    def same_as(self, other: "CurvatureState") -> bool:
        return self.t == other.t and self.L == other.L and np.array_equal(self.f, other.f)


def constant_state(value: float, length: float, n: int, t: float = 0.0) -> CurvatureState:
    """State with f identically equal to value."""
    return CurvatureState(np.full(n, float(value)), length, t)


def write_state_json(state: CurvatureState, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(state.to_dict(), handle)


def read_state_json(path) -> CurvatureState:
    with open(path, encoding="utf-8") as handle:
        return CurvatureState.from_dict(json.load(handle))
