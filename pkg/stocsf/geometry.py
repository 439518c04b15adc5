"""Conversions between planar curves and (curvature, length) data, plus curve diagnostics."""
import logging

import numpy as np

from .classes.curvature_state import CurvatureState
from .classes.curve import Curve
from .const import MIN_LENGTH, RECONSTRUCTION_OVERSAMPLING
from .exceptions import InvalidInputError
from .utils import grid_coordinates, periodic_mean

_LOGGER = logging.getLogger(__name__)

_HAUSDORFF_CHUNK = 64


def _wrap_angle(angle: float) -> float:
    return (angle + np.pi) % (2.0 * np.pi) - np.pi


def enclosed_area(curve: Curve) -> float:
    """Signed shoelace area, positive for counterclockwise curves."""
    if not curve.closed:
        raise InvalidInputError("Enclosed area is only defined for closed curves")
    x = curve.points[:, 0]
    y = curve.points[:, 1]
    return float(0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def curvature_from_curve(curve: Curve, N: int) -> CurvatureState:
    """
    Sample the turning-angle density of a closed counterclockwise polygon at N equally
    spaced arclength stations.

    Edge directions are unwrapped and attached to edge midpoints; the resulting angle
    function of arclength is extended periodically (gaining 2*pi per turn) and linearly
    interpolated. f_j is the angle gained across [s_j - h/2, s_j + h/2] divided by h = L/N,
    so L * mean(f) telescopes to the exact total turning of the polygon.
    """
    if not curve.closed:
        raise InvalidInputError("curvature_from_curve needs a closed curve")
    if len(curve) < 3:
        raise InvalidInputError("curvature_from_curve needs at least 3 points")
    area = enclosed_area(curve)
    if area <= 0:
        raise InvalidInputError(f"Curve must be counterclockwise (signed area {area:.6g})")

    edges = curve.edges
    lengths = curve.edge_lengths
    L = float(np.sum(lengths))
    if L < MIN_LENGTH:
        raise InvalidInputError(f"Curve length {L:.3g} is below {MIN_LENGTH}")

    angles = np.unwrap(np.arctan2(edges[:, 1], edges[:, 0]))
    per_turn = angles[-1] - angles[0] + _wrap_angle(angles[0] - angles[-1])
    midpoints = np.cumsum(lengths) - 0.5 * lengths

    s_ext = np.concatenate((midpoints - L, midpoints, midpoints + L))
    theta_ext = np.concatenate((angles - per_turn, angles, angles + per_turn))

    h = L / N
    stations = np.arange(N) * h
    f = (np.interp(stations + 0.5 * h, s_ext, theta_ext) - np.interp(stations - 0.5 * h, s_ext, theta_ext)) / h
    return CurvatureState(f, L, 0.0)


def _reconstruct_points(state: CurvatureState, start_point, start_angle: float, M: int) -> np.ndarray:
    r = np.arange(M + 1) / M
    k = np.interp(r, grid_coordinates(state.N), state.f, period=1.0)
    ds = state.L / M

    theta = np.empty(M + 1)
    theta[0] = start_angle
    theta[1:] = start_angle + np.cumsum(0.5 * (k[:-1] + k[1:])) * ds

    points = np.empty((M + 1, 2))
    points[0] = start_point
    for axis, component in enumerate((np.cos(theta), np.sin(theta))):
        points[1:, axis] = start_point[axis] + np.cumsum(0.5 * (component[:-1] + component[1:])) * ds
    return points


def reconstruct_curve(state: CurvatureState, start_point=(0.0, 0.0), start_angle: float = 0.0, M: int | None = None) -> Curve:
    """
    Integrate theta(s) = theta0 + int k and gamma(s) = gamma0 + int (cos theta, sin theta)
    with the composite trapezoid rule at M + 1 stations on [0, L].

    The result is an open polyline; closure is never forced.
    """
    M = state.N if M is None else M
    if M < state.N:
        raise InvalidInputError(f"Output resolution M={M} is below the grid size N={state.N}")
    start = np.asarray(start_point, dtype=float)
    return Curve(_reconstruct_points(state, start, start_angle, M), closed=False)


def turning_number(state: CurvatureState) -> float:
    """(1/2pi) times the integral of k over the curve, via the rectangle rule on f."""
    return state.L * periodic_mean(state.f) / (2.0 * np.pi)


def closure_defect(state: CurvatureState) -> float:
    """Endpoint gap of the reconstructed curve at 4N stations, relative to L."""
    points = _reconstruct_points(state, np.zeros(2), 0.0, RECONSTRUCTION_OVERSAMPLING * state.N)
    return float(np.hypot(*(points[-1] - points[0])) / state.L)


def seam_jump(state: CurvatureState) -> float:
    """
    Mismatch of f across r = 0.

    Both sides are linearly extrapolated to r = -h/2 from their own two nearest samples,
    so a smooth periodic profile gives O(h^2) and a genuine jump survives.
    """
    f = state.f
    from_right = 1.5 * f[0] - 0.5 * f[1]
    from_left = 1.5 * f[-1] - 0.5 * f[-2]
    return float(abs(from_right - from_left))


def isoperimetric_ratio(area: float, length: float) -> float:
    return 4.0 * np.pi * area / (length * length)


def _segments(curve: Curve) -> tuple[np.ndarray, np.ndarray]:
    if curve.closed:
        return curve.points, np.roll(curve.points, -1, axis=0)
    return curve.points[:-1], curve.points[1:]


def _directed_hausdorff(points: np.ndarray, curve: Curve) -> float:
    starts, ends = _segments(curve)
    direction = ends - starts
    norm_sq = np.sum(direction * direction, axis=1)
    worst = 0.0
    for begin in range(0, len(points), _HAUSDORFF_CHUNK):
        chunk = points[begin:begin + _HAUSDORFF_CHUNK]
        rel = chunk[:, None, :] - starts[None, :, :]
        proj = np.clip(np.sum(rel * direction[None, :, :], axis=2) / norm_sq[None, :], 0.0, 1.0)
        offset = rel - proj[:, :, None] * direction[None, :, :]
        nearest = np.sqrt(np.min(np.sum(offset * offset, axis=2), axis=1))
        worst = max(worst, float(np.max(nearest)))
    return worst


def hausdorff_distance(first: Curve, second: Curve) -> float:
    """Symmetric Hausdorff distance between polylines, vertex to nearest segment."""
    return max(_directed_hausdorff(first.points, second), _directed_hausdorff(second.points, first))


def circle_curve(radius: float, n: int, center=(0.0, 0.0)) -> Curve:
    """Regular counterclockwise n-gon inscribed in a circle, first vertex at angle 0."""
    phase = 2.0 * np.pi * np.arange(n) / n
    return Curve(np.column_stack((center[0] + radius * np.cos(phase), center[1] + radius * np.sin(phase))))


def ellipse_curve(a: float, b: float, n: int) -> Curve:
    """Counterclockwise ellipse sampled uniformly in the parameter, starting at (a, 0)."""
    if a <= 0 or b <= 0:
        raise InvalidInputError(f"Ellipse semi-axes must be positive, got ({a}, {b})")
    phase = 2.0 * np.pi * np.arange(n) / n
    return Curve(np.column_stack((a * np.cos(phase), b * np.sin(phase))))


def ensure_counterclockwise(curve: Curve) -> Curve:
    """Return the curve oriented counterclockwise, reversing it with a warning if needed."""
    if enclosed_area(curve) < 0:
        _LOGGER.warning("Input curve is clockwise, reversing point order")
        return curve.reversed()
    return curve


def reconstructed_polygon(state: CurvatureState, M: int | None = None) -> Curve:
    """Closed polygon through the reconstructed stations, dropping the (nearly) repeated endpoint."""
    M = RECONSTRUCTION_OVERSAMPLING * state.N if M is None else M
    points = _reconstruct_points(state, np.zeros(2), 0.0, M)
    return Curve(points[:-1], closed=True)
