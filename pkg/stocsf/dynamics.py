"""Time steppers for the rescaled (f, L) system."""
import logging

import numpy as np
from scipy.linalg import LinAlgError

from .classes.coefficient_fields import CoefficientFields
from .classes.curvature_state import CurvatureState
from .classes.data_validator import ensure_finite
from .classes.flow_config import FlowConfig
from .coefficients import FORM_ITO, FORM_STRATONOVICH, coefficient_fields, general_stefan_rhs
from .const import (
    CFL_SAFETY,
    SCHEME_DETERMINISTIC,
    SCHEME_EULER_MARUYAMA,
    SCHEME_HEUN_STRATONOVICH,
    SCHEME_IMEX,
)
from .constants.scheme_types import is_explicit
from .constants.stop_reasons import REASON_LENGTH_COLLAPSE
from .exceptions import BlowUpSignal, InvalidInputError, NumericalStateError
from .truncation import cutoff, truncated_coefficients
from .utils import grid_coordinates, periodic_first_derivative, periodic_second_derivative, solve_cyclic_tridiagonal

_LOGGER = logging.getLogger(__name__)


def _fields(state: CurvatureState, config: FlowConfig, form: str, sigma: float | None = None) -> CoefficientFields:
    sigma = config.sigma if sigma is None else sigma
    if config.trunc_n is not None:
        return truncated_coefficients(state, sigma, config.trunc_n, form, config.transport)
    return coefficient_fields(state, sigma, form, config.transport)


def _advance(state: CurvatureState, fields: CoefficientFields, dt: float, dW: float, context: str) -> CurvatureState:
    f = state.f + dt * fields.drift_f + dW * fields.diff_f
    L = state.L + dt * fields.drift_L + dW * fields.diff_L
    return _accept(state, f, L, dt, context)


def _accept(state: CurvatureState, f: np.ndarray, L: float, dt: float, context: str) -> CurvatureState:
    ensure_finite(f, L, context)
    t = state.t + dt
    if L <= 0:
        raise BlowUpSignal(REASON_LENGTH_COLLAPSE, t)
    return CurvatureState(f, L, t)


def step_euler_maruyama(state: CurvatureState, config: FlowConfig, dW: float) -> CurvatureState:
    """One Euler-Maruyama step of the Itô system."""
    return _advance(state, _fields(state, config, FORM_ITO), config.dt, dW, "Euler-Maruyama step")


def _heun(state: CurvatureState, config: FlowConfig, dW: float, sigma: float, context: str) -> CurvatureState:
    first = _fields(state, config, FORM_STRATONOVICH, sigma)
    predicted = _advance(state, first, config.dt, dW, f"{context} predictor")
    second = _fields(predicted, config, FORM_STRATONOVICH, sigma)
    return _advance(state, first.average(second), config.dt, dW, context)


def step_heun_stratonovich(state: CurvatureState, config: FlowConfig, dW: float) -> CurvatureState:
    """Heun predictor-corrector on the Stratonovich system, both stages using the same (dt, dW)."""
    return _heun(state, config, dW, config.sigma, "Heun step")


def step_deterministic(state: CurvatureState, config: FlowConfig, dW: float = 0.0) -> CurvatureState:
    # noise-free system, dW is ignored
    return _heun(state, config, 0.0, 0.0, "deterministic step")


def implicit_coefficient(state: CurvatureState, config: FlowConfig) -> np.ndarray:
    """a(r) = 2 sigma^2 pi^2 r^2 + 1/L^2, the coefficient of f_rr."""
    L = cutoff(config.trunc_n, state.L) if config.trunc_n is not None else state.L
    r = grid_coordinates(state.N)
    return 2.0 * config.sigma ** 2 * np.pi ** 2 * r * r + 1.0 / (L * L)


def step_imex(state: CurvatureState, config: FlowConfig, dW: float) -> CurvatureState:
    """
    Backward Euler for a(r) f_rr with a frozen at the current state, forward Euler with dW
    for the rest of the Itô system. The implicit part is a cyclic tridiagonal solve.
    """
    dt = config.dt
    fields = _fields(state, config, FORM_ITO)
    a = implicit_coefficient(state, config)
    f_rr = periodic_second_derivative(state.f, state.dr)
    rhs = state.f + dt * (fields.drift_f - a * f_rr) + dW * fields.diff_f

    weight = dt * a * state.N * state.N
    try:
        f = solve_cyclic_tridiagonal(-weight, 1.0 + 2.0 * weight, -weight, rhs)
    except (LinAlgError, ValueError, ZeroDivisionError) as err:
        raise NumericalStateError(f"IMEX linear solve failed at t={state.t:.6g}: {err}") from err
    L = state.L + dt * fields.drift_L + dW * fields.diff_L
    return _accept(state, f, L, dt, "IMEX step")


STEPPERS = {
    SCHEME_EULER_MARUYAMA: step_euler_maruyama,
    SCHEME_HEUN_STRATONOVICH: step_heun_stratonovich,
    SCHEME_IMEX: step_imex,
    SCHEME_DETERMINISTIC: step_deterministic,
}


def step(state: CurvatureState, config: FlowConfig, dW: float) -> CurvatureState:
    return STEPPERS[config.scheme](state, config, dW)


def explicit_step_limit(config: FlowConfig, L: float) -> float:
    """Step size above which explicit schemes are warned about."""
    return CFL_SAFETY * (L / config.N) ** 2 / (1.0 + 2.0 * config.sigma ** 2 * np.pi ** 2 * L * L)


def check_step_size(config: FlowConfig, L: float) -> bool:
    """Warn and return False when an explicit scheme runs above the parabolic step limit."""
    if not is_explicit(config.scheme):
        return True
    limit = explicit_step_limit(config, L)
    if config.dt > limit:
        _LOGGER.warning(
            "dt=%s exceeds the explicit step limit %.3g for N=%s, L=%.4g; consider the imex scheme",
            config.dt, limit, config.N, L,
        )
        return False
    return True


def step_general_stefan(state: CurvatureState, speed, dt: float) -> CurvatureState:
    """
    Forward Euler step of dk/dt = V_ss + k^2 V, dL/dt = -int k V ds in the rescaled
    variable f(r) = k(r L), which picks up the transport r f_r L'/L.
    """
    dk, dL = general_stefan_rhs(state, speed)
    r = grid_coordinates(state.N)
    f_r = periodic_first_derivative(state.f, state.dr)
    f = state.f + dt * (dk + r * f_r * dL / state.L)
    L = state.L + dt * dL
    return _accept(state, f, L, dt, "general Stefan step")


def integrate_general_stefan(initial: CurvatureState, speed, dt: float, t_end: float) -> list[CurvatureState]:
    """Run step_general_stefan from initial to t_end; returns every intermediate state."""
    if not dt > 0 or not t_end > 0:
        raise InvalidInputError(f"dt and t_end must be positive, got dt={dt}, t_end={t_end}")
    n_steps = int(np.floor(t_end / dt * (1.0 + 1e-12)))
    states = [initial]
    for _ in range(n_steps):
        states.append(step_general_stefan(states[-1], speed, dt))
    _LOGGER.debug("General Stefan run finished at t=%s, L=%s", states[-1].t, states[-1].L)
    return states
