"""Closed or open planar polyline."""
import csv
from dataclasses import dataclass

import numpy as np

from ..exceptions import InvalidInputError


@dataclass(frozen=True, eq=False)
class Curve:
    """A planar polyline.

    Closed curves list each vertex once; the closing edge from the last point back to the
    first is implied. Orientation is not enforced here (operations that need a
    counterclockwise curve check it themselves).
    """

    points: np.ndarray
    closed: bool = True

    def __post_init__(self):
        points = np.array(self.points, dtype=float)
        if points.ndim != 2 or points.shape[1] != 2:
            raise InvalidInputError(f"Curve points must have shape (n, 2), got {points.shape}")
        if self.closed and len(points) < 3:
            raise InvalidInputError(f"Closed curve needs at least 3 points, got {len(points)}")
        if len(points) < 2:
            raise InvalidInputError("Curve needs at least 2 points")
        if not np.all(np.isfinite(points)):
            raise InvalidInputError("Curve points must be finite")
        edges = self._edges(points, self.closed)
        if np.any(np.hypot(edges[:, 0], edges[:, 1]) == 0.0):
            raise InvalidInputError("Consecutive curve points must be distinct")
        points.setflags(write=False)
        object.__setattr__(self, "points", points)

    @staticmethod
    def _edges(points: np.ndarray, closed: bool) -> np.ndarray:
        if closed:
            return np.roll(points, -1, axis=0) - points
        return np.diff(points, axis=0)

    @property
    def edges(self) -> np.ndarray:
        return self._edges(self.points, self.closed)

    @property
    def edge_lengths(self) -> np.ndarray:
        edges = self.edges
        return np.hypot(edges[:, 0], edges[:, 1])

    @property
    def length(self) -> float:
        return float(np.sum(self.edge_lengths))

    def __len__(self) -> int:
        return len(self.points)

    def reversed(self) -> "Curve":
        return Curve(self.points[::-1].copy(), self.closed)

    def translated(self, offset) -> "Curve":
        return Curve(self.points + np.asarray(offset, dtype=float), self.closed)


def read_curve_csv(path) -> Curve:
    """Read a closed curve from CSV with header "x,y"."""
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None or [name.strip() for name in reader.fieldnames] != ["x", "y"]:
            raise InvalidInputError(f"{path}: expected header 'x,y', got {reader.fieldnames}")
        rows = [(float(row["x"]), float(row["y"])) for row in reader]
    return Curve(np.array(rows), closed=True)


def write_curve_csv(curve: Curve, path) -> None:
    """Write a curve as CSV with header "x,y", one point per row."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["x", "y"])
        for x, y in curve.points:
            writer.writerow([repr(float(x)), repr(float(y))])
