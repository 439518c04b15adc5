"""
Coefficient fields of the rescaled curvature/length system.

With s = r L(t) and f(r, t) = k(r L, t) the flow dgamma = -(k dt + sigma L o dW) n becomes,
in Stratonovich form,

    df = (f_rr / L^2 + f^3 - r f_r int f^2) dt + sigma (f^2 L - 2 pi r f_r) o dW
    dL = -L int f^2 dt - 2 sigma pi L o dW

and the Itô form adds the quadratic-covariation terms returned by ito_correction.
"""
import logging

import numpy as np

from .classes.coefficient_fields import CoefficientFields
from .classes.curvature_state import CurvatureState
from .classes.data_validator import ensure_finite
from .const import TRANSPORT_ARCLENGTH, TRANSPORT_LITERAL
from .exceptions import InvalidInputError, NumericalStateError
from .utils import (
    grid_coordinates,
    periodic_cumulative_integral,
    periodic_first_derivative,
    periodic_mean,
    periodic_second_derivative,
)

_LOGGER = logging.getLogger(__name__)

FORM_ITO = "ito"
FORM_STRATONOVICH = "stratonovich"


def _derivatives(state: CurvatureState):
    ensure_finite(state.f, state.L, "coefficient evaluation")
    f = state.f
    dr = state.dr
    return f, grid_coordinates(state.N), periodic_first_derivative(f, dr), periodic_second_derivative(f, dr)


def _arclength_transport(f: np.ndarray, r: np.ndarray, L: float):
    """
    Transport coefficients that keep r an arclength fraction from a material base point.

    Returns the drift and diffusion multipliers of f_r; both vanish at r = 0 and r = 1.
    """
    sq_cumulative = periodic_cumulative_integral(f * f)
    k_cumulative = periodic_cumulative_integral(f)
    drift = sq_cumulative[:-1] - r * sq_cumulative[-1]
    diffusion = L * (k_cumulative[:-1] - r * k_cumulative[-1])
    return drift, diffusion


def stratonovich_coefficients(state: CurvatureState, sigma: float, transport: str = TRANSPORT_LITERAL) -> CoefficientFields:
    """Chain-rule form of the system; the diffusion equals the Itô diffusion."""
    f, r, f_r, f_rr = _derivatives(state)
    L = state.L
    f_sq = periodic_mean(f * f)

    if transport == TRANSPORT_ARCLENGTH:
        transport_drift, transport_diff = _arclength_transport(f, r, L)
    elif transport == TRANSPORT_LITERAL:
        transport_drift, transport_diff = -r * f_sq, -2.0 * np.pi * r
    else:
        raise InvalidInputError(f"Unknown transport {transport!r}")

    drift_f = f_rr / (L * L) + f ** 3 + transport_drift * f_r
    diff_f = sigma * (f * f * L + transport_diff * f_r)
    return CoefficientFields(
        drift_f=drift_f,
        drift_L=-L * f_sq,
        diff_f=diff_f,
        diff_L=-2.0 * sigma * np.pi * L,
    )


def ito_coefficients(state: CurvatureState, sigma: float, transport: str = TRANSPORT_LITERAL) -> CoefficientFields:
    """
    Itô form of the system.

        drift_f = (2 s^2 pi^2 r^2 + 1/L^2) f_rr - 4 s^2 pi r L f f_r + 2 s^2 pi^2 r f_r
                  - r f_r int f^2 + f^3 + s^2 f^3 L^2 - s^2 pi f^2 L
        drift_L = L (2 s^2 pi^2 - int f^2)
        diff_f  = s (f^2 L - 2 pi r f_r)
        diff_L  = -2 s pi L

    with s = sigma. r is the grid coordinate in [0, 1), not periodized.
    """
    if transport != TRANSPORT_LITERAL:
        if sigma > 0:
            raise InvalidInputError("The arclength transport is only available in Stratonovich form when sigma > 0")
        return stratonovich_coefficients(state, 0.0, transport)

    f, r, f_r, f_rr = _derivatives(state)
    L = state.L
    f_sq = periodic_mean(f * f)
    s2 = sigma * sigma
    pi = np.pi

    second_order = (2.0 * s2 * pi * pi * r * r + 1.0 / (L * L)) * f_rr
    first_order = (-4.0 * s2 * pi * r * L * f + 2.0 * s2 * pi * pi * r - r * f_sq) * f_r
    reaction = f ** 3 + s2 * f ** 3 * L * L - s2 * pi * f * f * L
    return CoefficientFields(
        drift_f=second_order + first_order + reaction,
        drift_L=L * (2.0 * s2 * pi * pi - f_sq),
        diff_f=sigma * (f * f * L - 2.0 * pi * r * f_r),
        diff_L=-2.0 * sigma * pi * L,
    )


def ito_correction(state: CurvatureState, sigma: float) -> CoefficientFields:
    """
    Drift to add to the Stratonovich drift to obtain the Itô drift (diffusion parts zero).

    Half the derivative of the diffusion along itself:
    sigma^2 (2 pi^2 r^2 f_rr - 4 pi r L f f_r + 2 pi^2 r f_r + f^3 L^2 - pi f^2 L) for f and
    2 sigma^2 pi^2 L for L.
    """
    f, r, f_r, f_rr = _derivatives(state)
    L = state.L
    s2 = sigma * sigma
    pi = np.pi
    drift_f = s2 * (
        2.0 * pi * pi * r * r * f_rr
        - 4.0 * pi * r * L * f * f_r
        + 2.0 * pi * pi * r * f_r
        + f ** 3 * L * L
        - pi * f * f * L
    )
    zeros = np.zeros_like(f)
    return CoefficientFields(drift_f=drift_f, drift_L=2.0 * s2 * pi * pi * L, diff_f=zeros, diff_L=0.0)


def coefficient_fields(state: CurvatureState, sigma: float, form: str, transport: str = TRANSPORT_LITERAL) -> CoefficientFields:
    if form == FORM_ITO:
        return ito_coefficients(state, sigma, transport)
    if form == FORM_STRATONOVICH:
        return stratonovich_coefficients(state, sigma, transport)
    raise InvalidInputError(f"Unknown stochastic form {form!r}")


def general_stefan_rhs(state: CurvatureState, speed) -> tuple[np.ndarray, float]:
    """
    Right-hand side of the moving-boundary system for a normal speed V(k, s, t).

    state.f holds k at s_j = j L / N. Returns (dk/dt, dL/dt) with
    dk/dt = V_ss + k^2 V and dL/dt = -int_0^L k V ds.
    """
    k = state.f
    L = state.L
    s = grid_coordinates(state.N) * L
    V = np.broadcast_to(np.asarray(speed(k, s, state.t), dtype=float), k.shape)
    if not np.all(np.isfinite(V)):
        raise NumericalStateError(f"Speed function returned nonfinite values at t={state.t}")
    dk = periodic_second_derivative(V, L / state.N) + k * k * V
    dL = -L * periodic_mean(k * V)
    return dk, float(dL)


def curve_shortening_speed(k, s, t):
    """V = k."""
    return k
