"""Result of a strong-convergence study."""
import csv
from dataclasses import dataclass, field

import numpy as np

from ..exceptions import InvalidInputError


@dataclass(frozen=True)
class OrderEstimate:
    dts: list
    errors: list
    fitted_order: float
    reference_dt: float = 0.0
    seeds_used: list = field(default_factory=list)
    excluded_seeds: list = field(default_factory=list)

    def __post_init__(self):
        if len(self.dts) != len(self.errors) or len(self.dts) < 3:
            raise InvalidInputError("An order estimate needs at least 3 (dt, error) pairs")
        if any(later >= earlier for earlier, later in zip(self.dts, self.dts[1:])):
            raise InvalidInputError("Step sizes must be strictly decreasing")


def fit_order(dts, errors) -> float:
    """Least-squares slope of log(error) against log(dt)."""
    slope, _ = np.polyfit(np.log(np.asarray(dts, dtype=float)), np.log(np.asarray(errors, dtype=float)), 1)
    return float(slope)


def write_order_csv(estimate: OrderEstimate, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["dt", "error"])
        for dt, error in zip(estimate.dts, estimate.errors):
            writer.writerow([repr(float(dt)), repr(float(error))])
