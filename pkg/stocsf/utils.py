import json
from functools import lru_cache
from pathlib import Path

import numpy as np
from scipy.linalg import solve_banded

MANIFEST_PATH = Path(__file__).with_name("manifest.json")


def grid_coordinates(n: int) -> np.ndarray:
    """Uniform grid r_j = j/N on [0, 1), not periodized."""
    return np.arange(n, dtype=float) / n


def periodic_first_derivative(values: np.ndarray, spacing: float) -> np.ndarray:
    """Second-order central difference on a periodic grid."""
    return (np.roll(values, -1) - np.roll(values, 1)) / (2.0 * spacing)


def periodic_second_derivative(values: np.ndarray, spacing: float) -> np.ndarray:
    """Three-point Laplacian on a periodic grid."""
    return (np.roll(values, -1) - 2.0 * values + np.roll(values, 1)) / (spacing * spacing)


def periodic_mean(values: np.ndarray) -> float:
    """Rectangle rule over one period of a uniform grid."""
    return float(np.mean(values))


def periodic_cumulative_integral(values: np.ndarray) -> np.ndarray:
    """
    Cumulative trapezoid integral over [0, r_j] of a 1-periodic grid function.

    Returns N+1 values; the last equals the rectangle-rule integral over a full period.
    """
    n = len(values)
    closed = np.append(values, values[0])
    cumulative = np.zeros(n + 1)
    cumulative[1:] = np.cumsum(0.5 * (closed[:-1] + closed[1:])) / n
    return cumulative


def solve_cyclic_tridiagonal(sub: np.ndarray, diag: np.ndarray, sup: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """
    Solve a periodic tridiagonal system.

    Row j reads sub[j]*x[j-1] + diag[j]*x[j] + sup[j]*x[j+1] = rhs[j] with indices taken
    modulo N, so sub[0] and sup[N-1] are the corner entries. The corners are removed by a
    Sherman-Morrison update and the remaining band is solved with scipy.
    """
    n = len(diag)
    gamma = -diag[0]
    alpha = sup[n - 1]
    beta = sub[0]

    band_diag = np.array(diag, dtype=float)
    band_diag[0] -= gamma
    band_diag[n - 1] -= alpha * beta / gamma

    banded = np.zeros((3, n))
    banded[0, 1:] = sup[:-1]
    banded[1] = band_diag
    banded[2, :-1] = sub[1:]

    u = np.zeros(n)
    u[0] = gamma
    u[n - 1] = alpha

    y = solve_banded((1, 1), banded, rhs)
    z = solve_banded((1, 1), banded, u)
    factor = (y[0] + beta * y[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma)
    return y - factor * z


@lru_cache(maxsize=1)
def load_manifest() -> dict:
    """Read the package manifest (name, version, noise algorithm)."""
    with open(MANIFEST_PATH, encoding="utf-8") as handle:
        return json.load(handle)


def package_version() -> str:
    return load_manifest()["version"]


def noise_algorithm() -> str:
    return load_manifest()["noise_algorithm"]
