"""Drift and diffusion fields of the rescaled (f, L) system."""
from dataclasses import dataclass

import numpy as np

from ..exceptions import NumericalStateError


@dataclass(frozen=True, eq=False)
class CoefficientFields:
    """
    df = drift_f dt + diff_f dW and dL = drift_L dt + diff_L dW, read in the
    convention (Itô or Stratonovich) of whoever produced the fields.
    """

    drift_f: np.ndarray
    drift_L: float
    diff_f: np.ndarray
    diff_L: float

    def __post_init__(self):
        drift_f = np.asarray(self.drift_f, dtype=float)
        diff_f = np.asarray(self.diff_f, dtype=float)
        if drift_f.shape != diff_f.shape or drift_f.ndim != 1:
            raise NumericalStateError(f"Coefficient arrays disagree: {drift_f.shape} vs {diff_f.shape}")
        if not (
            np.all(np.isfinite(drift_f))
            and np.all(np.isfinite(diff_f))
            and np.isfinite(self.drift_L)
            and np.isfinite(self.diff_L)
        ):
            raise NumericalStateError("Nonfinite coefficient values")
        object.__setattr__(self, "drift_f", drift_f)
        object.__setattr__(self, "diff_f", diff_f)
        object.__setattr__(self, "drift_L", float(self.drift_L))
        object.__setattr__(self, "diff_L", float(self.diff_L))

    def average(self, other: "CoefficientFields") -> "CoefficientFields":
        return CoefficientFields(
            0.5 * (self.drift_f + other.drift_f),
            0.5 * (self.drift_L + other.drift_L),
            0.5 * (self.diff_f + other.diff_f),
            0.5 * (self.diff_L + other.diff_L),
        )
