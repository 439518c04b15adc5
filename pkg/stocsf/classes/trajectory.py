"""Snapshots of a flow run and their on-disk formats."""
import csv
import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from .curvature_state import CurvatureState
from ..exceptions import InvalidInputError

RECORD_HEADER = "header"
RECORD_SNAPSHOT = "snapshot"
RECORD_FOOTER = "footer"


@dataclass(frozen=True)
class Diagnostics:
    turning_number: float
    f_sq_integral: float
    closure_defect: float
    exact_length_residual: float
    sup_f: float
    seam_jump: float
    W: float

    def __post_init__(self):
        for item in fields(self):
            object.__setattr__(self, item.name, float(getattr(self, item.name)))


DIAGNOSTIC_COLUMNS = [item.name for item in fields(Diagnostics)]


@dataclass(frozen=True, eq=False)
class Snapshot:
    t: float
    L: float
    f: np.ndarray
    diagnostics: Diagnostics

    def __post_init__(self):
        object.__setattr__(self, "t", float(self.t))
        object.__setattr__(self, "L", float(self.L))
        object.__setattr__(self, "f", np.array(self.f, dtype=float))

    @property
    def state(self) -> CurvatureState:
        return CurvatureState(self.f, self.L, self.t)

    def to_dict(self) -> dict:
        return {
            "type": RECORD_SNAPSHOT,
            "t": self.t,
            "L": self.L,
            "f": [float(value) for value in self.f],
            "diagnostics": asdict(self.diagnostics),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Snapshot":
        return cls(
            t=data["t"],
            L=data["L"],
            f=np.array(data["f"], dtype=float),
            diagnostics=Diagnostics(**data["diagnostics"]),
        )


@dataclass(eq=False)
class TrajectoryRecord:
    """Time-ordered snapshots of one run, its configuration and why it stopped."""

    config: dict
    seed: int
    snapshots: list = field(default_factory=list)
    stop_reason: str | None = None
    t_stop: float | None = None
    noise_algorithm: str = ""
    version: str = ""
    metadata: dict = field(default_factory=dict)

    def add_snapshot(self, snapshot: Snapshot):
        if self.snapshots and not snapshot.t > self.snapshots[-1].t:
            raise InvalidInputError(
                f"Snapshot times must increase: {snapshot.t} after {self.snapshots[-1].t}"
            )
        self.snapshots.append(snapshot)

    @property
    def times(self) -> np.ndarray:
        return np.array([snap.t for snap in self.snapshots])

    @property
    def lengths(self) -> np.ndarray:
        return np.array([snap.L for snap in self.snapshots])

    @property
    def final(self) -> Snapshot:
        return self.snapshots[-1]

    @property
    def stopped_early(self) -> bool:
        return self.stop_reason is not None

    def diagnostic_series(self, name: str) -> np.ndarray:
        return np.array([getattr(snap.diagnostics, name) for snap in self.snapshots])

    def same_as(self, other: "TrajectoryRecord", ignore_metadata: bool = False) -> bool:
        if not ignore_metadata and self.metadata != other.metadata:
            return False
        if (
            self.config != other.config
            or self.seed != other.seed
            or self.stop_reason != other.stop_reason
            or self.t_stop != other.t_stop
            or self.noise_algorithm != other.noise_algorithm
            or self.version != other.version
            or len(self.snapshots) != len(other.snapshots)
        ):
            return False
        return all(
            a.t == b.t and a.L == b.L and np.array_equal(a.f, b.f) and a.diagnostics == b.diagnostics
            for a, b in zip(self.snapshots, other.snapshots)
        )


def metadata_path(trajectory_path) -> Path:
    path = Path(trajectory_path)
    return path.with_name(f"{path.stem}.meta.json")


class TrajectoryWriter:
    """
    Append a trajectory to a JSON Lines file while the run produces it.

    Each snapshot line is flushed as soon as it is written, so an interrupted run leaves a
    readable file without a footer. The metadata sidecar is written with the footer.
    """

    def __init__(self, path):
        self.path = Path(path)
        self._handle = None

    def __enter__(self) -> "TrajectoryWriter":
        self._handle = open(self.path, "w", encoding="utf-8")
        return self

    def __exit__(self, exc_type, exc, tb):
        self._handle.close()
        self._handle = None

    def _write_line(self, data: dict):
        self._handle.write(json.dumps(data) + "\n")
        self._handle.flush()

    def write_header(self, record: TrajectoryRecord):
        self._write_line(
            {
                "type": RECORD_HEADER,
                "config": record.config,
                "seed": record.seed,
                "noise_algorithm": record.noise_algorithm,
                "version": record.version,
            }
        )

    def write_snapshot(self, snapshot: Snapshot):
        self._write_line(snapshot.to_dict())

    def write_footer(self, record: TrajectoryRecord):
        self._write_line({"type": RECORD_FOOTER, "stop_reason": record.stop_reason, "t_stop": record.t_stop})
        if record.metadata:
            with open(metadata_path(self.path), "w", encoding="utf-8") as handle:
                json.dump(record.metadata, handle, indent=2)


def write_trajectory(record: TrajectoryRecord, path) -> None:
    """
    Write a finished record as JSON Lines: a header, one line per snapshot, a footer.

    Wall-clock metadata goes to a sidecar file so the trajectory itself depends only on
    the inputs.
    """
    with TrajectoryWriter(path) as writer:
        writer.write_header(record)
        for snapshot in record.snapshots:
            writer.write_snapshot(snapshot)
        writer.write_footer(record)


def load_trajectory(path) -> TrajectoryRecord:
    record = None
    with open(path, encoding="utf-8") as handle:
        for number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            data = json.loads(line)
            kind = data.get("type")
            if kind == RECORD_HEADER:
                record = TrajectoryRecord(
                    config=data["config"],
                    seed=data["seed"],
                    noise_algorithm=data.get("noise_algorithm", ""),
                    version=data.get("version", ""),
                )
            elif record is None:
                raise InvalidInputError(f"{path}:{number}: trajectory does not start with a header")
            elif kind == RECORD_SNAPSHOT:
                record.add_snapshot(Snapshot.from_dict(data))
            elif kind == RECORD_FOOTER:
                record.stop_reason = data["stop_reason"]
                record.t_stop = data["t_stop"]
            else:
                raise InvalidInputError(f"{path}:{number}: unknown record type {kind!r}")
    if record is None:
        raise InvalidInputError(f"{path}: empty trajectory file")
    sidecar = metadata_path(path)
    if sidecar.exists():
        with open(sidecar, encoding="utf-8") as handle:
            record.metadata = json.load(handle)
    return record


def write_diagnostics_csv(record: TrajectoryRecord, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["t", "L"] + DIAGNOSTIC_COLUMNS)
        for snap in record.snapshots:
            values = asdict(snap.diagnostics)
            writer.writerow([repr(float(snap.t)), repr(float(snap.L))] + [repr(float(values[name])) for name in DIAGNOSTIC_COLUMNS])
